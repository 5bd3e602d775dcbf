#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mrw/synth.hpp"

namespace mrw {

/// Sample autocovariance of log|r_t| at lags 1..h_max.
struct LogVolAutocov {
  std::vector<int> lags;
  std::vector<double> values;
  std::vector<std::size_t> n_effective;
  std::size_t floored = 0;  // returns lifted to the zero-return floor
};

/// Upper clamp for fitted integral scales, in units of dt. The omega
/// embedding grows linearly with T.
inline constexpr double kMaxIntegralScale = 1e5;

struct FitRange {
  int lo = 1;
  int hi = 100;
};

struct CalibrationResult {
  MrwParams params;
  double fit_r2 = 0.0;
  FitRange fit_range;
  std::vector<double> residuals;
  double slope = 0.0;
  double intercept = 0.0;
  /// False when the fitted slope was non-negative and lambda fell back to 0.
  bool multifractal = true;
  std::string diagnostic;
};

/// Returns with |r| < epsilon * sd(r) are replaced by that floor before the log.
/// Throws DataError for an all-zero series and InvalidParams unless h_max < n/4.
LogVolAutocov log_vol_autocov(std::span<const double> returns, int h_max);

/// Least squares of C(h) on log(1 + h) over the fit range: slope = -lambda^2,
/// intercept = lambda^2 log(T/dt).
CalibrationResult fit_mrw_params(const LogVolAutocov& curve, FitRange range = {}, double dt = 1.0);

/// Sample standard deviation of the 1-day returns.
double estimate_sigma(std::span<const double> returns);

/// log_vol_autocov + fit_mrw_params + estimate_sigma.
CalibrationResult calibrate(std::span<const double> returns, FitRange range = {},
                            Variant variant = {});

}  // namespace mrw
