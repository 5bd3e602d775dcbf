#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mrw/calibrate.hpp"
#include "mrw/error.hpp"
#include "mrw/random.hpp"
#include "mrw/scaling.hpp"
#include "mrw/synth.hpp"
#include "mrw/timeseries.hpp"

namespace mrw {

enum class Execution { Parallel, Serial };

/// Settings of the constant-multifractality test. Defaults follow the
/// published procedure: 1250-day windows shifted by 100 days, 1000 null
/// paths of 1250 steps, weighted GHE with a 415-day damping time,
/// tau_max in [10, 30] and the (1, 2) moment pair.
struct TestConfig {
  std::size_t window = 1250;
  std::size_t shift = 100;
  std::size_t n_sims = 1000;
  std::size_t sim_length = 1250;
  double q = 1.0;
  double q_prime = 2.0;
  GheConfig ghe{10, 30, true, kDefaultThetaDays};
  FitRange fit{1, 100};
  Variant variant;
  Seed seed = 0;

  void validate() const;
};

struct QuantileBand {
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  std::size_t n_sims = 0;
  std::size_t sim_length = 0;
  MrwParams params;
};

struct DynamicalTrace {
  std::vector<std::size_t> window_end_indices;  // index of each window's last return
  std::vector<double> delta_h_values;
  std::vector<double> delta_h_errors;

  std::size_t size() const noexcept { return delta_h_values.size(); }
};

struct ExceedanceReport {
  CalibrationResult calibration;
  QuantileBand band;
  DynamicalTrace trace;
  double exceedance_pct = 0.0;

  const MrwParams& params() const noexcept { return band.params; }
};

/// Error raised by run_test, tagged with the pipeline stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Sample quantile with linear interpolation between order statistics
/// (h = (n - 1) p). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Delta H values of `n_sims` independent paths, in simulation order.
/// Path i uses ensemble_seed(seed, i).
std::vector<double> null_distribution(const MrwParams& params, std::size_t n_sims,
                                      std::size_t sim_length, Seed seed,
                                      const TestConfig& config = {},
                                      Execution exec = Execution::Parallel);

/// {2.5, 50, 97.5}% quantiles of the null Delta H distribution.
QuantileBand mc_band(const MrwParams& params, std::size_t n_sims, std::size_t sim_length, Seed seed,
                     const TestConfig& config = {}, Execution exec = Execution::Parallel);

/// Delta H(q, q') on each rolling window; values stamped at window end.
DynamicalTrace dynamical_trace(const ReturnSeries& returns, std::size_t window_length,
                               std::size_t shift, const TestConfig& config = {},
                               Execution exec = Execution::Parallel);

/// Percentage of trace values strictly outside [q025, q975].
double exceedance(const DynamicalTrace& trace, const QuantileBand& band);

/// Calibrate on the full sample, build the null band once, trace the
/// rolling Delta H and count exceedances.
ExceedanceReport run_test(const ReturnSeries& returns, const TestConfig& config = {});
ExceedanceReport run_test(const PriceSeries& prices, const TestConfig& config = {});

}  // namespace mrw
