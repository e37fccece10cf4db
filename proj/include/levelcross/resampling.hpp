#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "levelcross/crossing.hpp"
#include "levelcross/error.hpp"
#include "levelcross/fft.hpp"
#include "levelcross/random.hpp"
#include "levelcross/series.hpp"

namespace levelcross {

enum class ResampleMethod { Shuffle, Surrogate };

constexpr std::string_view to_string(ResampleMethod m) noexcept {
  return m == ResampleMethod::Shuffle ? "shuffle" : "surrogate";
}

struct QComparison {
  double q = 0.0;
  double original = 0.0;
  double null_mean = 0.0;

  friend bool operator==(const QComparison&, const QComparison&) = default;
};

struct ResamplingResult {
  ResampleMethod method = ResampleMethod::Shuffle;
  std::size_t realizations = 0;
  double n_tot_original = 0.0;
  double n_tot_null_mean = 0.0;
  double n_tot_null_std = 0.0;
  double signed_rel_diff = 0.0;  // (null_mean - original) / original
  double abs_rel_diff = 0.0;
  std::vector<QComparison> per_q;
  std::vector<double> null_mean_nu;  // ensemble-mean crossing curve on the input grid

  friend bool operator==(const ResamplingResult&, const ResamplingResult&) = default;
};

// Uniform random permutation (Fisher-Yates, i.e. n-1 random transpositions).
inline std::vector<double> shuffle(std::span<const double> y, Seed seed) {
  if (y.size() < 2) throw Error(ErrorCode::TooShort, "shuffle needs at least 2 samples");
  std::vector<double> out(y.begin(), y.end());
  auto rng = make_engine(seed);
  for (std::size_t i = out.size() - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(out[i], out[pick(rng)]);
  }
  return out;
}

// Phase-randomised copy before the final std rescale: every DFT bin keeps
// its modulus, bins 1..ceil(n/2)-1 get iid U(-pi, pi) phases mirrored onto
// bin n-k by conjugation, DC and (even n) Nyquist are left untouched.
inline std::vector<double> surrogate_unscaled(std::span<const double> y, Seed seed) {
  if (y.size() < 4) throw Error(ErrorCode::TooShort, "surrogate needs at least 4 samples");
  const std::size_t n = y.size();
  auto spec = fft::forward(y);
  auto rng = make_engine(seed);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  for (std::size_t k = 1; 2 * k < n; ++k) {
    const auto z = std::polar(std::abs(spec[k]), phase(rng));
    spec[k] = z;
    spec[n - k] = std::conj(z);
  }
  const auto back = fft::backward(spec);
  std::vector<double> out(n);
  const auto inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = back[i].real() * inv_n;
  return out;
}

// Phase-randomised surrogate, re-centred to mean 0 and rescaled to the
// input's population std.
inline std::vector<double> surrogate(std::span<const double> y, Seed seed) {
  auto out = surrogate_unscaled(y, seed);
  stats::standardize(out, stats::stddev(y));
  return out;
}

inline std::vector<double> resample(std::span<const double> y, ResampleMethod method, Seed seed) {
  return method == ResampleMethod::Shuffle ? shuffle(y, seed) : surrogate(y, seed);
}

inline Stream stream_for(ResampleMethod method) {
  return method == ResampleMethod::Shuffle ? Stream::Shuffle : Stream::Surrogate;
}

struct ResamplingOptions {
  std::size_t realizations = 20;
  std::vector<double> q_values;  // optional per-q comparison
  double alpha_bar = 0.0;
  Seed seed{};
};

// N+_tot(q = 0) of the original against M resamples on the same grid.
inline ResamplingResult resampling_test(std::span<const double> y, ResampleMethod method,
                                        const LevelGrid& grid, const ResamplingOptions& opt) {
  if (opt.realizations < 1) throw Error(ErrorCode::InvalidSpec, "need at least 1 realization");
  const double q0[] = {0.0};

  ResamplingResult r;
  r.method = method;
  r.realizations = opt.realizations;

  const auto original = crossing_curve(y, grid);
  r.n_tot_original = q_moments(original, q0, opt.alpha_bar).n_tot[0];
  const auto orig_q = q_moments(original, opt.q_values, opt.alpha_bar);

  std::vector<double> totals;
  std::vector<double> q_sum(opt.q_values.size(), 0.0);
  r.null_mean_nu.assign(grid.size(), 0.0);
  for (std::size_t m = 0; m < opt.realizations; ++m) {
    const auto sample = resample(y, method, derive_seed(opt.seed, stream_for(method), m));
    const auto curve = crossing_curve(sample, grid);
    totals.push_back(q_moments(curve, q0, opt.alpha_bar).n_tot[0]);
    const auto qm = q_moments(curve, opt.q_values, opt.alpha_bar);
    for (std::size_t j = 0; j < q_sum.size(); ++j) q_sum[j] += qm.n_tot[j];
    for (std::size_t k = 0; k < grid.size(); ++k) r.null_mean_nu[k] += curve.nu[k];
  }
  const auto M = static_cast<double>(opt.realizations);
  for (double& v : r.null_mean_nu) v /= M;

  r.n_tot_null_mean = stats::mean(totals);
  r.n_tot_null_std = stats::stddev(totals);
  if (!(r.n_tot_original > 0.0))
    throw Error(ErrorCode::DegenerateSeries, "original series has no crossings");
  r.signed_rel_diff = (r.n_tot_null_mean - r.n_tot_original) / r.n_tot_original;
  r.abs_rel_diff = std::abs(r.signed_rel_diff);
  for (std::size_t j = 0; j < q_sum.size(); ++j)
    r.per_q.push_back({opt.q_values[j], orig_q.n_tot[j], q_sum[j] / M});
  return r;
}

}  // namespace levelcross
