#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "levelcross/error.hpp"
#include "levelcross/series.hpp"

namespace levelcross {

// Uniform level grid, symmetric about 0 with 0 on-grid. Level k is stored
// as an integer multiple of the spacing so that levels[c - j] == -levels[c + j]
// exactly.
class LevelGrid {
 public:
  static LevelGrid symmetric(double half_span, std::size_t count) {
    if (count < 3 || count % 2 == 0)
      throw Error(ErrorCode::InvalidSpec, "level count must be odd and >= 3");
    if (!(half_span > 0.0) || !std::isfinite(half_span))
      throw Error(ErrorCode::DegenerateSeries, "level span must be positive");
    LevelGrid g;
    const auto half = static_cast<long>(count / 2);
    g.spacing_ = half_span / static_cast<double>(half);
    g.levels_.reserve(count);
    for (long k = -half; k <= half; ++k) g.levels_.push_back(static_cast<double>(k) * g.spacing_);
    return g;
  }

  // 201 levels over +-max|y|, the default analysis grid.
  static LevelGrid for_series(std::span<const double> y, std::size_t count = 201) {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    if (!(m > 0.0)) throw Error(ErrorCode::DegenerateSeries, "series is identically zero");
    return symmetric(m, count);
  }

  std::span<const double> levels() const noexcept { return levels_; }
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return levels_.size(); }
  double operator[](std::size_t k) const { return levels_[k]; }
  double min() const { return levels_.front(); }
  double max() const { return levels_.back(); }

  std::size_t nearest(double alpha) const {
    const double pos = (alpha - levels_.front()) / spacing_;
    const auto k = static_cast<long>(std::lround(pos));
    return static_cast<std::size_t>(std::clamp(k, 0L, static_cast<long>(levels_.size()) - 1));
  }

  // Central sub-grid with |alpha| <= half_span.
  LevelGrid restricted(double half_span) const {
    LevelGrid g;
    g.spacing_ = spacing_;
    for (double a : levels_)
      if (std::abs(a) <= half_span) g.levels_.push_back(a);
    return g;
  }

 private:
  std::vector<double> levels_;
  double spacing_ = 0.0;
};

// Per-step probability of an upward crossing at each grid level.
struct CrossingCurve {
  LevelGrid grid;
  std::vector<double> nu;
  std::size_t n_steps = 0;

  // Same curve on a central sub-grid (see LevelGrid::restricted).
  CrossingCurve restricted(double half_span) const {
    CrossingCurve c;
    c.grid = grid.restricted(half_span);
    c.n_steps = n_steps;
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (std::abs(grid[k]) <= half_span) c.nu.push_back(nu[k]);
    return c;
  }
};

struct QMomentCurve {
  std::vector<double> q_values;
  std::vector<double> n_tot;
};

struct WaitingTime {
  double alpha = 0.0;       // requested level
  double grid_alpha = 0.0;  // nearest grid level actually used
  double nu = 0.0;
  double tau = std::numeric_limits<double>::infinity();  // steps; +inf when nu == 0

  bool finite() const noexcept { return std::isfinite(tau); }
};

struct WaitingTimeTable {
  std::vector<WaitingTime> rows;
};

// |{ i in [1, n-1] : y[i-1] < alpha < y[i] }|. Ties are not crossings.
inline std::size_t upward_crossings(std::span<const double> y, double alpha) {
  std::size_t count = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i - 1] < alpha && y[i] > alpha) ++count;
  return count;
}

// Raw upward-crossing counts on every grid level. Each rising step
// (a, b) contributes +1 to the levels in the open interval (a, b), located
// by binary search against the stored levels, so the result is identical
// to evaluating upward_crossings level by level.
inline std::vector<std::size_t> crossing_counts(std::span<const double> y, const LevelGrid& grid) {
  const auto levels = grid.levels();
  std::vector<long> diff(levels.size() + 1, 0);
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double a = y[i - 1], b = y[i];
    if (!(a < b)) continue;
    const auto lo = std::upper_bound(levels.begin(), levels.end(), a) - levels.begin();
    const auto hi = std::lower_bound(levels.begin(), levels.end(), b) - levels.begin();
    if (lo < hi) {
      ++diff[static_cast<std::size_t>(lo)];
      --diff[static_cast<std::size_t>(hi)];
    }
  }
  std::vector<std::size_t> counts(levels.size());
  long running = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    running += diff[k];
    counts[k] = static_cast<std::size_t>(running);
  }
  return counts;
}

inline CrossingCurve crossing_curve(std::span<const double> y, const LevelGrid& grid) {
  if (y.size() < 2) throw Error(ErrorCode::TooShort, "crossing curve needs at least 2 samples");
  CrossingCurve curve;
  curve.grid = grid;
  curve.n_steps = y.size() - 1;
  const auto counts = crossing_counts(y, grid);
  curve.nu.resize(counts.size());
  const auto steps = static_cast<double>(curve.n_steps);
  for (std::size_t k = 0; k < counts.size(); ++k)
    curve.nu[k] = static_cast<double>(counts[k]) / steps;
  return curve;
}

inline CrossingCurve crossing_curve(const ReturnSeries& y, const LevelGrid& grid) {
  return crossing_curve(y.view(), grid);
}

enum class OutOfRange {
  Throw,
  // Levels beyond a grid spanning the series support have no crossings.
  Infinite,
};

inline WaitingTimeTable waiting_times(const CrossingCurve& curve, std::span<const double> levels,
                                      OutOfRange policy = OutOfRange::Throw) {
  WaitingTimeTable table;
  const double slack = 1e-9 * curve.grid.spacing();
  for (double alpha : levels) {
    WaitingTime row;
    row.alpha = alpha;
    if (alpha < curve.grid.min() - slack || alpha > curve.grid.max() + slack) {
      if (policy == OutOfRange::Throw)
        throw Error(ErrorCode::LevelOutOfRange,
                    "level " + std::to_string(alpha) + " outside grid [" +
                        std::to_string(curve.grid.min()) + ", " +
                        std::to_string(curve.grid.max()) + "]");
      row.grid_alpha = alpha;
      table.rows.push_back(row);
      continue;
    }
    const auto k = curve.grid.nearest(alpha);
    row.grid_alpha = curve.grid[k];
    row.nu = curve.nu[k];
    if (row.nu > 0.0) row.tau = 1.0 / row.nu;
    table.rows.push_back(row);
  }
  return table;
}

// Trapezoidal integral over the grid of nu(alpha) |alpha - alpha_bar|^q.
// q = 0 uses weight 1 everywhere, including at alpha == alpha_bar.
inline QMomentCurve q_moments(const CrossingCurve& curve, std::span<const double> q_values,
                              double alpha_bar = 0.0) {
  QMomentCurve out;
  out.q_values.assign(q_values.begin(), q_values.end());
  out.n_tot.reserve(q_values.size());
  const auto levels = curve.grid.levels();
  const double h = curve.grid.spacing();
  for (double q : q_values) {
    if (q < 0.0) throw Error(ErrorCode::InvalidSpec, "q must be >= 0");
    double sum = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const double w = q == 0.0 ? 1.0 : std::pow(std::abs(levels[k] - alpha_bar), q);
      const double f = curve.nu[k] * w;
      sum += (k == 0 || k + 1 == levels.size()) ? 0.5 * f : f;
    }
    out.n_tot.push_back(levels.size() > 1 ? sum * h : 0.0);
  }
  return out;
}

inline double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(y_{i-1} < alpha, y_i > alpha) for iid N(0, sigma^2) samples.
inline double gaussian_iid_crossing_prob(double alpha, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::NonPositiveSigma, "sigma must be > 0");
  const double p = standard_normal_cdf(alpha / sigma);
  return p * (1.0 - p);
}

inline std::vector<double> q_grid(double q_max = 10.0, double q_step = 0.5) {
  if (!(q_step > 0.0) || q_max < 0.0)
    throw Error(ErrorCode::InvalidSpec, "q grid needs q_step > 0 and q_max >= 0");
  std::vector<double> q;
  const auto n = static_cast<std::size_t>(std::floor(q_max / q_step + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) q.push_back(static_cast<double>(i) * q_step);
  return q;
}

}  // namespace levelcross
