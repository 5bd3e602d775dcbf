#include "mrw/scaling.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mrw/diagnostics.hpp"
#include "mrw/error.hpp"
#include "mrw/kernels.hpp"

namespace mrw {
namespace {

// OLS slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

GheEstimate fit_row(double q, std::span<const double> moments, const GheConfig& config) {
  std::vector<double> log_tau(moments.size()), log_m(moments.size());
  for (std::size_t i = 0; i < moments.size(); ++i) {
    if (!(moments[i] > 0.0) || !std::isfinite(moments[i]))
      throw EstimationError("degenerate structure function at q = " + std::to_string(q) +
                            ", tau = " + std::to_string(i + 1) + " (moment " +
                            std::to_string(moments[i]) + ")");
    log_tau[i] = std::log(static_cast<double>(i + 1));
    log_m[i] = std::log(moments[i]);
  }

  std::vector<double> candidates;
  for (int tau_max = config.tau_max_lo; tau_max <= config.tau_max_hi; ++tau_max) {
    const auto len = static_cast<std::size_t>(tau_max);
    candidates.push_back(ols_slope(std::span(log_tau).first(len), std::span(log_m).first(len)) / q);
  }

  double mean = 0.0;
  for (double c : candidates) mean += c;
  mean /= static_cast<double>(candidates.size());
  double var = 0.0;
  for (double c : candidates) var += (c - mean) * (c - mean);
  const double sd =
      candidates.size() > 1 ? std::sqrt(var / static_cast<double>(candidates.size() - 1)) : 0.0;

  return {q, mean, sd, config.weighted, config.weighted ? config.theta_days : 0.0};
}

}  // namespace

void GheConfig::validate() const {
  if (tau_max_lo < 2) throw InvalidParams("tau_max range must start at >= 2 for a slope fit");
  if (tau_max_hi < tau_max_lo) throw InvalidParams("tau_max range is empty");
  if (weighted && !(theta_days > 0.0)) throw InvalidParams("theta_days must be > 0");
}

double structure_function(std::span<const double> returns, double q, int tau) {
  const double qs[] = {q};
  return reference::structure_moments(returns, qs, tau).moments[0][static_cast<std::size_t>(tau - 1)];
}

double weighted_structure_function(std::span<const double> returns, double q, int tau,
                                   double theta_days) {
  const double qs[] = {q};
  return reference::structure_moments(returns, qs, tau, theta_days)
      .moments[0][static_cast<std::size_t>(tau - 1)];
}

StructureFunctionCurve structure_curve(std::span<const double> returns, double q, int tau_max,
                                       std::optional<double> theta_days) {
  const double qs[] = {q};
  auto table = kernels::structure_moments(returns, qs, tau_max, theta_days);
  StructureFunctionCurve curve{q, {}, std::move(table.moments[0])};
  for (int tau = 1; tau <= tau_max; ++tau) curve.taus.push_back(tau);
  return curve;
}

std::vector<GheEstimate> ghe(std::span<const double> returns, std::span<const double> qs,
                             const GheConfig& config) {
  config.validate();
  if (returns.size() < 10 * static_cast<std::size_t>(config.tau_max_hi))
    warn("series of " + std::to_string(returns.size()) + " returns is short for tau_max = " +
         std::to_string(config.tau_max_hi));
  const auto theta = config.weighted ? std::optional<double>(config.theta_days) : std::nullopt;
  const auto table = kernels::structure_moments(returns, qs, config.tau_max_hi, theta);
  std::vector<GheEstimate> out;
  for (std::size_t i = 0; i < qs.size(); ++i) out.push_back(fit_row(qs[i], table.moments[i], config));
  return out;
}

GheEstimate ghe(std::span<const double> returns, double q, const GheConfig& config) {
  const double qs[] = {q};
  return ghe(returns, std::span<const double>(qs), config).front();
}

DeltaH delta_h(std::span<const double> returns, double q, double q_prime, const GheConfig& config) {
  if (q == q_prime) throw InvalidParams("delta_h needs q != q'");
  const double qs[] = {q, q_prime};
  const auto est = ghe(returns, std::span<const double>(qs), config);
  return {est[0].h - est[1].h, std::hypot(est[0].h_std, est[1].h_std), est[0], est[1]};
}

std::vector<double> default_q_grid() { return {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}; }

ScalingFunction empirical_zeta(std::span<const double> returns, std::span<const double> qs,
                               const GheConfig& config, std::optional<double> lambda) {
  std::vector<double> positive;
  for (double q : qs) {
    if (q < 0.0) throw InvalidParams("q grid must be non-negative");
    if (q > 0.0) positive.push_back(q);
    if (lambda && q > moment_order_bound(*lambda))
      warn("q = " + std::to_string(q) + " exceeds the moment bound sqrt(2)/lambda = " +
           std::to_string(moment_order_bound(*lambda)));
  }
  const auto est = positive.empty() ? std::vector<GheEstimate>{} : ghe(returns, positive, config);

  ScalingFunction out;
  std::size_t next = 0;
  for (double q : qs) {
    out.qs.push_back(q);
    if (q == 0.0) {
      out.zetas.push_back(0.0);
      out.errors.push_back(0.0);
    } else {
      out.zetas.push_back(q * est[next].h);
      out.errors.push_back(q * est[next].h_std);
      ++next;
    }
  }
  return out;
}

double theoretical_zeta(double q, double lambda) {
  return (q - q * (q - 2.0) * lambda * lambda) / 2.0;
}

double moment_order_bound(double lambda) {
  return lambda > 0.0 ? std::numbers::sqrt2 / lambda : std::numeric_limits<double>::infinity();
}

double theoretical_h(double q, double lambda) {
  if (q == 0.0) throw InvalidParams("H(q) is undefined at q = 0");
  if (q > moment_order_bound(lambda))
    warn("q = " + std::to_string(q) + " exceeds the moment bound sqrt(2)/lambda");
  return theoretical_zeta(q, lambda) / q;
}

}  // namespace mrw
