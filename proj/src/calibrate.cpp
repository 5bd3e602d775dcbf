#include "mrw/calibrate.hpp"

#include <cmath>
#include <limits>

#include "mrw/diagnostics.hpp"
#include "mrw/error.hpp"
#include "mrw/kernels.hpp"

namespace mrw {

double estimate_sigma(std::span<const double> returns) {
  if (returns.size() < 2) throw DataError("sigma needs at least 2 returns");
  // Shifted by the first value so a constant series gives exactly zero.
  const double origin = returns[0];
  double mean = 0.0;
  for (double r : returns) mean += r - origin;
  mean /= static_cast<double>(returns.size());
  double ss = 0.0;
  for (double r : returns) ss += (r - origin - mean) * (r - origin - mean);
  return std::sqrt(ss / static_cast<double>(returns.size() - 1));
}

LogVolAutocov log_vol_autocov(std::span<const double> returns, int h_max) {
  if (h_max < 1) throw InvalidParams("h_max must be >= 1");
  if (static_cast<std::size_t>(h_max) * 4 >= returns.size())
    throw InvalidParams("h_max = " + std::to_string(h_max) + " must be below n/4 = " +
                        std::to_string(returns.size() / 4));

  bool any_nonzero = false;
  for (double r : returns) any_nonzero = any_nonzero || r != 0.0;
  if (!any_nonzero) throw DataError("all-zero return series has no log-volatility");

  const double floor = std::numeric_limits<double>::epsilon() * estimate_sigma(returns);
  LogVolAutocov out;
  std::vector<double> logs(returns.size());
  for (std::size_t t = 0; t < returns.size(); ++t) {
    double a = std::abs(returns[t]);
    if (a < floor || a == 0.0) {
      a = floor > 0.0 ? floor : std::numeric_limits<double>::min();
      ++out.floored;
    }
    logs[t] = std::log(a);
  }
  if (out.floored > 0)
    warn(std::to_string(out.floored) + " near-zero returns floored before taking log|r|");

  // Mean taken relative to the first element: a constant series centres to exact zeros.
  const double origin = logs[0];
  double mean = 0.0;
  for (double v : logs) mean += v - origin;
  mean /= static_cast<double>(logs.size());
  for (double& v : logs) v = v - origin - mean;

  out.values = kernels::lagged_autocov(logs, static_cast<std::size_t>(h_max));
  for (int h = 1; h <= h_max; ++h) {
    out.lags.push_back(h);
    out.n_effective.push_back(returns.size() - static_cast<std::size_t>(h));
  }
  return out;
}

CalibrationResult fit_mrw_params(const LogVolAutocov& curve, FitRange range, double dt) {
  if (!(dt > 0.0)) throw InvalidParams("dt must be > 0");
  if (range.lo < 1 || range.hi < range.lo) throw InvalidParams("invalid fit range");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    if (curve.lags[i] < range.lo || curve.lags[i] > range.hi) continue;
    x.push_back(std::log1p(static_cast<double>(curve.lags[i])));
    y.push_back(curve.values[i]);
  }
  if (static_cast<int>(x.size()) != range.hi - range.lo + 1)
    throw InvalidParams("fit range [" + std::to_string(range.lo) + ", " +
                        std::to_string(range.hi) + "] not covered by the autocovariance curve");
  if (x.size() < 5) throw InvalidParams("fit needs at least 5 lags");

  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }

  CalibrationResult result;
  result.fit_range = range;
  result.slope = sxy / sxx;
  result.intercept = my - result.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (result.intercept + result.slope * x[i]);
    result.residuals.push_back(r);
    ss_res += r * r;
  }
  result.fit_r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;

  auto& p = result.params;
  p.dt = dt;
  const double lambda2 = -result.slope;
  if (!(lambda2 > 0.0)) {
    result.multifractal = false;
    result.diagnostic = "non-negative slope " + std::to_string(result.slope) +
                        ": no log-volatility memory, lambda set to 0";
    p.lambda = 0.0;
    p.integral_scale = dt * (range.hi + 1);
    warn(result.diagnostic);
    return result;
  }
  p.lambda = std::sqrt(lambda2);
  p.integral_scale = dt * std::exp(result.intercept / lambda2);
  if (!(p.integral_scale > 2.0 * dt) || !(p.integral_scale <= kMaxIntegralScale * dt)) {
    result.diagnostic = "integral scale estimate " + std::to_string(p.integral_scale) +
                        " clamped to [2, " + std::to_string(kMaxIntegralScale) + "] steps";
    p.integral_scale = p.integral_scale > 2.0 * dt ? kMaxIntegralScale * dt : 2.0 * dt;
    warn(result.diagnostic);
  }
  return result;
}

CalibrationResult calibrate(std::span<const double> returns, FitRange range, Variant variant) {
  const auto curve = log_vol_autocov(returns, range.hi);
  auto result = fit_mrw_params(curve, range, 1.0);
  result.params.sigma = estimate_sigma(returns);
  if (!(result.params.sigma > 0.0)) throw DataError("constant return series: sigma is zero");
  result.params.variant = variant;
  return result;
}

}  // namespace mrw
