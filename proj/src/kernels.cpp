#include "mrw/kernels.hpp"

#include <cmath>
#include <string>

#include "mrw/error.hpp"

namespace mrw {
namespace detail {

double abs_pow(double x, double q) {
  const double a = std::abs(x);
  if (q == 1.0) return a;
  if (q == 2.0) return a * a;
  return std::pow(a, q);
}

std::vector<double> prefix_sums(std::span<const double> returns) {
  std::vector<double> prefix(returns.size() + 1, 0.0);
  for (std::size_t t = 0; t < returns.size(); ++t) prefix[t + 1] = prefix[t] + returns[t];
  return prefix;
}

std::vector<double> decay_weights(std::size_t n, std::optional<double> theta_days) {
  if (!theta_days) return {};
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = std::exp(-static_cast<double>(k) / *theta_days);
  return w;
}

double moment_at(std::span<const double> prefix, std::size_t tau, double q,
                 std::span<const double> decay) {
  const std::size_t count = prefix.size() - tau;  // N - tau + 1 aggregated returns
  double acc = 0.0;
  if (decay.empty()) {
    for (std::size_t t = 0; t < count; ++t) acc += abs_pow(prefix[t + tau] - prefix[t], q);
    return acc / static_cast<double>(count);
  }
  double norm = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    const double w = decay[count - 1 - t];
    acc += w * abs_pow(prefix[t + tau] - prefix[t], q);
    norm += w;
  }
  return acc / norm;
}

double autocov_at(std::span<const double> centred, std::size_t h) {
  const std::size_t n = centred.size();
  double acc = 0.0;
  for (std::size_t t = 0; t + h < n; ++t) acc += centred[t + h] * centred[t];
  return acc / static_cast<double>(n - h);
}

void check_moment_args(std::size_t n, std::span<const double> qs, int tau_max,
                       std::optional<double> theta_days) {
  if (tau_max < 1) throw InvalidParams("tau_max must be >= 1");
  if (static_cast<std::size_t>(tau_max) >= n)
    throw DataError("scale tau = " + std::to_string(tau_max) + " not below series length " +
                    std::to_string(n));
  for (double q : qs)
    if (!(q > 0.0)) throw InvalidParams("moment order q must be > 0");
  if (theta_days && !(*theta_days > 0.0)) throw InvalidParams("theta_days must be > 0");
}

}  // namespace detail

namespace kernels {

MomentTable structure_moments(std::span<const double> returns, std::span<const double> qs,
                              int tau_max, std::optional<double> theta_days) {
  detail::check_moment_args(returns.size(), qs, tau_max, theta_days);
  const auto prefix = detail::prefix_sums(returns);
  const auto decay = detail::decay_weights(returns.size(), theta_days);

  MomentTable table{std::vector<double>(qs.begin(), qs.end()), tau_max,
                    std::vector<std::vector<double>>(qs.size(), std::vector<double>(tau_max))};
  const long long cells = static_cast<long long>(qs.size()) * tau_max;
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < cells; ++c) {
    const auto i = static_cast<std::size_t>(c / tau_max);
    const auto tau = static_cast<std::size_t>(c % tau_max) + 1;
    table.moments[i][tau - 1] = detail::moment_at(prefix, tau, qs[i], decay);
  }
  return table;
}

std::vector<double> lagged_autocov(std::span<const double> centred, std::size_t h_max) {
  if (h_max >= centred.size()) throw DataError("lag exceeds series length");
  std::vector<double> out(h_max);
  const auto lags = static_cast<long long>(h_max);
#pragma omp parallel for schedule(static)
  for (long long h = 1; h <= lags; ++h)
    out[static_cast<std::size_t>(h - 1)] = detail::autocov_at(centred, static_cast<std::size_t>(h));
  return out;
}

}  // namespace kernels

namespace reference {

MomentTable structure_moments(std::span<const double> returns, std::span<const double> qs,
                              int tau_max, std::optional<double> theta_days) {
  detail::check_moment_args(returns.size(), qs, tau_max, theta_days);
  const auto prefix = detail::prefix_sums(returns);
  const auto decay = detail::decay_weights(returns.size(), theta_days);
  MomentTable table{std::vector<double>(qs.begin(), qs.end()), tau_max, {}};
  for (double q : qs) {
    std::vector<double> row;
    for (int tau = 1; tau <= tau_max; ++tau)
      row.push_back(detail::moment_at(prefix, static_cast<std::size_t>(tau), q, decay));
    table.moments.push_back(std::move(row));
  }
  return table;
}

std::vector<double> lagged_autocov(std::span<const double> centred, std::size_t h_max) {
  if (h_max >= centred.size()) throw DataError("lag exceeds series length");
  std::vector<double> out;
  for (std::size_t h = 1; h <= h_max; ++h) out.push_back(detail::autocov_at(centred, h));
  return out;
}

}  // namespace reference
}  // namespace mrw
