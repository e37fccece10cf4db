#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <mutex>
#include <span>
#include <vector>

namespace levelcross::fft {

namespace detail {
// FFTW's planner is not thread-safe; execution on distinct plans is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

enum class Direction { Forward, Backward };

// Unnormalised complex DFT: X_k = sum_j x_j exp(-+2 pi i j k / n).
// FFTW_ESTIMATE keeps the plan (and so the rounding) deterministic.
inline std::vector<std::complex<double>> transform(std::span<const std::complex<double>> input,
                                                   Direction dir) {
  const int n = static_cast<int>(input.size());
  std::vector<std::complex<double>> out(input.size());
  if (n == 0) return out;
  std::vector<std::complex<double>> in(input.begin(), input.end());
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(detail::planner_mutex());
    plan = fftw_plan_dft_1d(n, pin, pout, dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(detail::planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

inline std::vector<std::complex<double>> forward(std::span<const double> x) {
  std::vector<std::complex<double>> c(x.begin(), x.end());
  return transform(c, Direction::Forward);
}

inline std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x) {
  return transform(x, Direction::Forward);
}

inline std::vector<std::complex<double>> backward(std::span<const std::complex<double>> x) {
  return transform(x, Direction::Backward);
}

}  // namespace levelcross::fft
