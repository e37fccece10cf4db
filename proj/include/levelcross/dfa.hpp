#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "levelcross/error.hpp"
#include "levelcross/series.hpp"

namespace levelcross {

struct HurstEstimate {
  double h = 0.0;
  double std_error = 0.0;
  std::vector<std::size_t> window_sizes;
  std::vector<double> fluctuations;
};

struct DfaOptions {
  std::size_t min_window = 10;
  std::size_t max_window = 0;  // 0 means n / 4
  std::size_t n_windows = 20;
};

namespace detail {

// Mean squared residual of the least-squares line through profile[begin, begin+s).
inline double detrended_variance(std::span<const double> seg) {
  const auto s = static_cast<double>(seg.size());
  const double tm = 0.5 * (s - 1.0);
  double ym = 0.0;
  for (double v : seg) ym += v;
  ym /= s;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const double dt = static_cast<double>(i) - tm;
    stt += dt * dt;
    sty += dt * (seg[i] - ym);
  }
  const double slope = sty / stt;
  double ss = 0.0;
  for (std::size_t i = 0; i < seg.size(); ++i) {
    const double r = seg[i] - ym - slope * (static_cast<double>(i) - tm);
    ss += r * r;
  }
  return ss / s;
}

}  // namespace detail

// Rounded log-spaced integer window sizes; duplicates after rounding are dropped.
inline std::vector<std::size_t> log_spaced_windows(std::size_t lo, std::size_t hi,
                                                   std::size_t count) {
  std::vector<std::size_t> out;
  if (count == 1 || lo == hi) return {lo};
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    const auto s = static_cast<std::size_t>(std::lround(std::exp(t)));
    if (out.empty() || s > out.back()) out.push_back(s);
  }
  return out;
}

// First-order DFA. Each window size s splits the profile into floor(n/s)
// segments from the start and again from the end, so the tail remainder is
// covered; F(s) is the RMS linear-detrended residual over all 2 floor(n/s)
// segments and h the OLS slope of log F against log s.
inline HurstEstimate dfa_hurst(std::span<const double> y, const DfaOptions& opt = {}) {
  const std::size_t n = y.size();
  if (opt.min_window < 4) throw Error(ErrorCode::InvalidSpec, "min_window must be >= 4");
  if (n < 4 * opt.min_window)
    throw Error(ErrorCode::TooShort, "DFA needs length >= 4 * min_window");
  const std::size_t max_w = opt.max_window == 0 ? n / 4 : std::min(opt.max_window, n / 4);
  if (max_w < opt.min_window) throw Error(ErrorCode::TooShort, "max_window below min_window");
  if (!(stats::stddev(y) > 0.0))
    throw Error(ErrorCode::DegenerateSeries, "DFA on zero-variance series");

  std::vector<double> profile(n);
  const double m = stats::mean(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) profile[i] = (acc += y[i] - m);

  HurstEstimate est;
  est.window_sizes = log_spaced_windows(opt.min_window, max_w, opt.n_windows);
  if (est.window_sizes.size() < 2)
    throw Error(ErrorCode::TooShort, "DFA needs at least 2 distinct window sizes");

  const std::span<const double> prof(profile);
  for (std::size_t s : est.window_sizes) {
    const std::size_t segments = n / s;
    double total = 0.0;
    for (std::size_t j = 0; j < segments; ++j) {
      total += detail::detrended_variance(prof.subspan(j * s, s));
      total += detail::detrended_variance(prof.subspan(n - (j + 1) * s, s));
    }
    const double f = std::sqrt(total / static_cast<double>(2 * segments));
    if (!(f > 0.0)) throw Error(ErrorCode::DegenerateSeries, "zero DFA fluctuation");
    est.fluctuations.push_back(f);
  }

  const std::size_t k = est.window_sizes.size();
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    xs[i] = std::log(static_cast<double>(est.window_sizes[i]));
    ys[i] = std::log(est.fluctuations[i]);
  }
  const double xm = stats::mean(xs), ym = stats::mean(ys);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
  }
  est.h = sxy / sxx;
  if (k > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double r = ys[i] - ym - est.h * (xs[i] - xm);
      rss += r * r;
    }
    est.std_error = std::sqrt(rss / static_cast<double>(k - 2) / sxx);
  }
  return est;
}

}  // namespace levelcross
