#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <vector>

namespace mrw {

/// moments[i][tau - 1] = (weighted) mean of |r_{t,tau}|^{qs[i]} over the
/// N - tau + 1 overlapping aggregated returns, tau = 1..tau_max.
struct MomentTable {
  std::vector<double> qs;
  int tau_max = 0;
  std::vector<std::vector<double>> moments;
};

/// Hot loops. The `kernels` versions are OpenMP-parallel; `reference`
/// holds serial implementations with identical per-element arithmetic so
/// the two agree bit-for-bit.
namespace kernels {

/// `theta_days` empty means uniform weights; otherwise the weight of the
/// aggregated return ending k steps before the last one is exp(-k / theta).
MomentTable structure_moments(std::span<const double> returns, std::span<const double> qs,
                              int tau_max, std::optional<double> theta_days = std::nullopt);

/// out[h - 1] = sum_t x[t + h] x[t] / (n - h) for h = 1..h_max; `x` must already be centred.
std::vector<double> lagged_autocov(std::span<const double> centred, std::size_t h_max);

/// out[i] = f(i) for i in [0, count), evaluated concurrently. If any call
/// throws, the exception of the lowest failing index is rethrown.
template <class F>
std::vector<double> ensemble_map(std::size_t count, F&& f) {
  std::vector<double> out(count);
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = f(idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace kernels

namespace reference {

MomentTable structure_moments(std::span<const double> returns, std::span<const double> qs,
                              int tau_max, std::optional<double> theta_days = std::nullopt);

std::vector<double> lagged_autocov(std::span<const double> centred, std::size_t h_max);

template <class F>
std::vector<double> ensemble_map(std::size_t count, F&& f) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
  return out;
}

}  // namespace reference

namespace detail {

double abs_pow(double x, double q);
double moment_at(std::span<const double> prefix, std::size_t tau, double q,
                 std::span<const double> decay);
double autocov_at(std::span<const double> centred, std::size_t h);
std::vector<double> prefix_sums(std::span<const double> returns);
std::vector<double> decay_weights(std::size_t n, std::optional<double> theta_days);
void check_moment_args(std::size_t n, std::span<const double> qs, int tau_max,
                       std::optional<double> theta_days);

}  // namespace detail
}  // namespace mrw
