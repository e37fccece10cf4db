#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levelcross/error.hpp"

namespace levelcross {

struct PriceObservation {
  std::chrono::year_month_day date;
  double price = 0.0;
};

// Dated, strictly positive prices with strictly increasing dates.
struct PriceSeries {
  std::string name;
  std::vector<PriceObservation> observations;
  // Rows rejected by the "drop" policy during ingestion.
  std::size_t dropped_rows = 0;

  std::size_t size() const noexcept { return observations.size(); }
};

// Mean-centred log returns. Every level alpha downstream is measured
// relative to the raw mean, i.e. alpha = 0 is the mean return.
struct ReturnSeries {
  std::string name;
  std::vector<double> values;
  double raw_mean = 0.0;
  std::string step = "trading-day";

  std::size_t size() const noexcept { return values.size(); }
  std::span<const double> view() const noexcept { return values; }
};

namespace stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Population standard deviation (divides by n). Used everywhere a series is
// rescaled to a target std, so "same std" always means the same estimator.
inline double stddev(std::span<const double> x) {
  if (x.empty()) return 0.0;
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

inline double excess_kurtosis(std::span<const double> x) {
  const double m = mean(x);
  double m2 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = (v - m) * (v - m);
    m2 += d;
    m4 += d * d;
  }
  const auto n = static_cast<double>(x.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

inline double autocorrelation(std::span<const double> x, std::size_t lag) {
  if (lag >= x.size()) return 0.0;
  const double m = mean(x);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - m) * (x[i] - m);
    if (i + lag < x.size()) num += (x[i] - m) * (x[i + lag] - m);
  }
  return den > 0.0 ? num / den : 0.0;
}

// Shift to mean 0 and scale to the requested population std.
inline void standardize(std::vector<double>& x, double target_std) {
  const double m = mean(x);
  for (double& v : x) v -= m;
  const double s = stddev(x);
  if (!(s > 0.0)) throw Error(ErrorCode::DegenerateSeries, "series has zero variance");
  const double f = target_std / s;
  for (double& v : x) v *= f;
}

}  // namespace stats

}  // namespace levelcross
