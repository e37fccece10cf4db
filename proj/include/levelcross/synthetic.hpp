#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "levelcross/error.hpp"
#include "levelcross/fft.hpp"
#include "levelcross/random.hpp"
#include "levelcross/series.hpp"

namespace levelcross {

enum class NoiseKind { White, Fgn, StudentT };

constexpr std::string_view to_string(NoiseKind k) noexcept {
  switch (k) {
    case NoiseKind::White: return "white";
    case NoiseKind::Fgn: return "fgn";
    case NoiseKind::StudentT: return "student_t";
  }
  return "?";
}

inline NoiseKind parse_noise_kind(std::string_view s) {
  if (s == "white") return NoiseKind::White;
  if (s == "fgn") return NoiseKind::Fgn;
  if (s == "student_t") return NoiseKind::StudentT;
  throw Error(ErrorCode::InvalidSpec, "unknown generator kind '" + std::string(s) + "'");
}

struct GeneratorSpec {
  NoiseKind kind = NoiseKind::White;
  std::size_t n = 1000;
  double sigma = 1.0;
  double h = 0.5;   // fgn only
  double df = 5.0;  // student_t only
  Seed seed{};

  void validate() const {
    if (n < 2) throw Error(ErrorCode::InvalidSpec, "n must be >= 2");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw Error(ErrorCode::InvalidSpec, "sigma must be > 0");
    if (kind == NoiseKind::Fgn && !(h > 0.0 && h < 1.0))
      throw Error(ErrorCode::InvalidSpec, "fgn requires 0 < h < 1");
    if (kind == NoiseKind::StudentT && !(df > 2.0) )
      throw Error(ErrorCode::InvalidSpec, "student_t requires df > 2 (finite variance)");
  }
};

// Autocovariance of unit-variance fractional Gaussian noise at lag k.
inline double fgn_autocovariance(double h, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double e = 2.0 * h;
  return 0.5 * (std::pow(k + 1.0, e) - 2.0 * std::pow(k, e) + std::pow(std::abs(k - 1.0), e));
}

namespace detail {

// Davies-Harte circulant embedding: the 2n-periodic extension of the
// autocovariance has a non-negative spectrum for 0 < H < 1, so the first n
// samples of a spectrally-coloured complex Gaussian field have exactly the
// target covariance.
inline std::vector<double> fgn_circulant(std::size_t n, double h, std::mt19937_64& rng) {
  const std::size_t m = 2 * n;
  std::vector<std::complex<double>> row(m);
  for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(h, k);
  for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
  const auto eig = fft::forward(row);

  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<std::complex<double>> w(m);
  const auto md = static_cast<double>(m);
  auto lam = [&](std::size_t k) { return std::max(eig[k].real(), 0.0); };
  w[0] = std::sqrt(lam(0) / md) * z(rng);
  w[n] = std::sqrt(lam(n) / md) * z(rng);
  for (std::size_t k = 1; k < n; ++k) {
    const double a = z(rng), b = z(rng);
    w[k] = std::sqrt(lam(k) / (2.0 * md)) * std::complex<double>(a, b);
    w[m - k] = std::conj(w[k]);
  }
  const auto x = fft::forward(w);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i].real();
  return out;
}

}  // namespace detail

// Mean-centred series with population std exactly spec.sigma.
inline ReturnSeries generate(const GeneratorSpec& spec) {
  spec.validate();
  auto rng = make_engine(derive_seed(spec.seed, Stream::Generator));
  ReturnSeries out;
  out.name = std::string(to_string(spec.kind));
  out.step = "step";
  switch (spec.kind) {
    case NoiseKind::White: {
      std::normal_distribution<double> z(0.0, 1.0);
      out.values.resize(spec.n);
      for (double& v : out.values) v = z(rng);
      break;
    }
    case NoiseKind::Fgn:
      out.values = detail::fgn_circulant(spec.n, spec.h, rng);
      break;
    case NoiseKind::StudentT: {
      std::student_t_distribution<double> t(spec.df);
      out.values.resize(spec.n);
      for (double& v : out.values) v = t(rng);
      break;
    }
  }
  stats::standardize(out.values, spec.sigma);
  return out;
}

}  // namespace levelcross
