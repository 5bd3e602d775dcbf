#include "mrw/mctest.hpp"

#include <algorithm>
#include <cmath>

#include "mrw/kernels.hpp"

namespace mrw {

void TestConfig::validate() const {
  if (n_sims < 100) throw InvalidParams("n_sims must be >= 100");
  if (sim_length < kMinWindowLength)
    throw InvalidParams("simulated path length must be >= " + std::to_string(kMinWindowLength));
  if (shift < 1) throw InvalidParams("window shift must be >= 1");
  if (window < kMinWindowLength)
    throw InvalidParams("window must be >= " + std::to_string(kMinWindowLength));
  if (q == q_prime) throw InvalidParams("q and q' must differ");
  ghe.validate();
}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::vector<double> null_distribution(const MrwParams& params, std::size_t n_sims,
                                      std::size_t sim_length, Seed seed, const TestConfig& config,
                                      Execution exec) {
  const MrwSimulator simulator(params, sim_length);
  const auto one = [&](std::size_t i) {
    const Seed s = ensemble_seed(seed, i);
    try {
      const auto path = simulator.increments(s);
      return delta_h(path, config.q, config.q_prime, config.ghe).value;
    } catch (const Error& e) {
      throw Error(e.kind(), "simulation " + std::to_string(i) + " (seed " + std::to_string(s) +
                                "): " + e.what());
    }
  };
  return exec == Execution::Parallel ? kernels::ensemble_map(n_sims, one)
                                     : reference::ensemble_map(n_sims, one);
}

QuantileBand mc_band(const MrwParams& params, std::size_t n_sims, std::size_t sim_length, Seed seed,
                     const TestConfig& config, Execution exec) {
  if (n_sims < 100) throw InvalidParams("n_sims must be >= 100");
  if (sim_length < kMinWindowLength)
    throw InvalidParams("simulated path length must be >= " + std::to_string(kMinWindowLength));
  auto values = null_distribution(params, n_sims, sim_length, seed, config, exec);
  std::sort(values.begin(), values.end());
  return {quantile_sorted(values, 0.025), quantile_sorted(values, 0.5),
          quantile_sorted(values, 0.975), n_sims, sim_length, params};
}

DynamicalTrace dynamical_trace(const ReturnSeries& returns, std::size_t window_length,
                               std::size_t shift, const TestConfig& config, Execution exec) {
  const auto windows = rolling_windows(returns, window_length, shift);
  std::vector<double> errors(windows.size());
  const auto one = [&](std::size_t i) {
    const auto dh = delta_h(windows[i].view(returns), config.q, config.q_prime, config.ghe);
    errors[i] = dh.error;
    return dh.value;
  };
  DynamicalTrace trace;
  trace.delta_h_values = exec == Execution::Parallel ? kernels::ensemble_map(windows.size(), one)
                                                     : reference::ensemble_map(windows.size(), one);
  trace.delta_h_errors = std::move(errors);
  for (const auto& w : windows) trace.window_end_indices.push_back(w.last());
  return trace;
}

double exceedance(const DynamicalTrace& trace, const QuantileBand& band) {
  if (trace.size() == 0) throw DataError("exceedance of an empty trace");
  std::size_t outside = 0;
  for (double v : trace.delta_h_values)
    if (v > band.q975 || v < band.q025) ++outside;
  return 100.0 * static_cast<double>(outside) / static_cast<double>(trace.size());
}

namespace {

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

ExceedanceReport run_test(const ReturnSeries& returns, const TestConfig& config) {
  stage("config", [&] {
    config.validate();
    return 0;
  });
  if (returns.size() < config.window)
    throw StageError("windows", DataError("series of " + std::to_string(returns.size()) +
                                          " returns is shorter than one window of " +
                                          std::to_string(config.window)));
  ExceedanceReport report;
  report.calibration =
      stage("calibrate", [&] { return calibrate(returns.values, config.fit, config.variant); });
  report.band = stage("mc_band", [&] {
    return mc_band(report.calibration.params, config.n_sims, config.sim_length, config.seed,
                   config);
  });
  report.trace =
      stage("trace", [&] { return dynamical_trace(returns, config.window, config.shift, config); });
  report.exceedance_pct = stage("exceedance", [&] { return exceedance(report.trace, report.band); });
  return report;
}

ExceedanceReport run_test(const PriceSeries& prices, const TestConfig& config) {
  const auto returns = stage("returns", [&] { return log_returns(prices, 1); });
  return run_test(returns, config);
}

}  // namespace mrw
