#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mrw/kernels.hpp"
#include "mrw/mctest.hpp"
#include "oracles.hpp"

using namespace mrw;

namespace {

MrwParams mrw_params(double lambda, double T, double sigma = 1.0) {
  MrwParams p;
  p.lambda = lambda;
  p.integral_scale = T;
  p.sigma = sigma;
  return p;
}

DynamicalTrace trace_of(std::vector<double> values) {
  DynamicalTrace t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.window_end_indices.push_back(i);
    t.delta_h_errors.push_back(0.0);
  }
  t.delta_h_values = std::move(values);
  return t;
}

}  // namespace

TEST_CASE("quantiles interpolate linearly") {
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(quantile_sorted(x, 0.5) == 2.5);
  CHECK(quantile_sorted(x, 0.0) == 1.0);
  CHECK(quantile_sorted(x, 1.0) == 4.0);
  CHECK(quantile_sorted(x, 0.025) == doctest::Approx(1.075));
  CHECK_THROWS_AS(quantile_sorted(std::vector<double>{}, 0.5), DataError);
  CHECK_THROWS_AS(quantile_sorted(x, 1.5), InvalidParams);
}

TEST_CASE("exceedance examples") {
  QuantileBand band{-0.02, 0.0, 0.02};
  CHECK(exceedance(trace_of({0.01, 0.03, -0.05, 0.0}), band) == 50.0);
  CHECK(exceedance(trace_of({0.01, -0.01, 0.0}), band) == 0.0);
  CHECK(exceedance(trace_of({0.02, -0.02}), band) == 0.0);
  CHECK_THROWS_AS(exceedance(trace_of({}), band), DataError);

  const std::vector<double> v{0.3, -0.1, 0.05, 0.2};
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  CHECK(exceedance(trace_of(v), QuantileBand{*lo, 0.0, *hi}) == 0.0);
}

TEST_CASE("band is reproducible and ordered") {
  const auto a = mc_band(mrw_params(0.2, 1250), 200, 1250, 3);
  const auto b = mc_band(mrw_params(0.2, 1250), 200, 1250, 3);
  CHECK(a.q025 == b.q025);
  CHECK(a.q50 == b.q50);
  CHECK(a.q975 == b.q975);
  CHECK(a.q025 <= a.q50);
  CHECK(a.q50 <= a.q975);
  CHECK_THROWS_AS(mc_band(mrw_params(0.2, 1250), 99, 1250, 3), InvalidParams);
  CHECK_THROWS_AS(mc_band(mrw_params(0.2, 1250), 100, 200, 3), InvalidParams);
}

TEST_CASE("parallel and serial bands are bit-identical") {
  const auto p = mrw_params(0.25, 900);
  TestConfig cfg;
  const auto a = null_distribution(p, 128, 1250, 11, cfg, Execution::Parallel);
  const auto b = null_distribution(p, 128, 1250, 11, cfg, Execution::Serial);
  CHECK(a == b);
  const auto path = simulate_mrw(p, 2000, 1).increments;
  const ReturnSeries r{path};
  const auto ta = dynamical_trace(r, 1250, 50, cfg, Execution::Parallel);
  const auto tb = dynamical_trace(r, 1250, 50, cfg, Execution::Serial);
  CHECK(ta.delta_h_values == tb.delta_h_values);
  CHECK(ta.delta_h_errors == tb.delta_h_errors);
}

TEST_CASE("monofractal null band is centred on zero") {
  const auto band = mc_band(mrw_params(0.0, 1250), 1000, 1250, 21);
  CHECK(std::abs(band.q50) <= 0.005);
}

TEST_CASE("calibrated single-stock band") {
  const auto band = mc_band(mrw_params(0.1228, 1260, 1.0651), 1000, 1250, 0);
  INFO(band.q025 << " " << band.q50 << " " << band.q975);
  CHECK(std::abs(band.q025 - -0.0205) <= 0.005);
  CHECK(std::abs(band.q50 - 0.0039) <= 0.005);
  CHECK(std::abs(band.q975 - 0.0265) <= 0.005);
}

TEST_CASE("band width grows with intermittency") {
  double previous = 0.0;
  for (double lambda : {0.1, 0.2, 0.3}) {
    const auto band = mc_band(mrw_params(lambda, 1250), 1000, 1250, 7);
    const double width = band.q975 - band.q025;
    INFO("lambda " << lambda << " width " << width);
    CHECK(width >= previous);
    previous = width;
  }
}

TEST_CASE("heavy-tailed residuals shift the median upward") {
  auto p = mrw_params(0.2, 1250);
  const auto ln = mc_band(p, 1000, 1250, 5);
  p.variant = Variant::student_t(4.0);
  const auto t = mc_band(p, 1000, 1250, 5);
  CHECK(t.q50 > ln.q50);
}

TEST_CASE("trace geometry and tiled determinism") {
  std::mt19937_64 engine(4);
  std::normal_distribution<double> normal(0.0, 0.01);
  std::vector<double> base(100);
  for (auto& v : base) v = normal(engine);
  ReturnSeries r;
  for (int k = 0; k < 15; ++k) r.values.insert(r.values.end(), base.begin(), base.end());
  r.values.resize(1450);
  const auto t = dynamical_trace(r, 1250, 100);
  REQUIRE(t.size() == 3);
  CHECK(t.window_end_indices == std::vector<std::size_t>{1249, 1349, 1449});
  CHECK(t.delta_h_values[0] == t.delta_h_values[1]);
  CHECK(t.delta_h_values[1] == t.delta_h_values[2]);
}

TEST_CASE("fractional Brownian motion trace fluctuates around zero") {
  const ReturnSeries r{simulate_fbm(0.6, 6000, 2).increments};
  const auto t = dynamical_trace(r, 1250, 100);
  double mean = 0.0;
  for (double v : t.delta_h_values) mean += v;
  mean /= static_cast<double>(t.size());
  CHECK(std::abs(mean) <= 0.01);
}

TEST_CASE("null model against itself exceeds its band about 5% of the time") {
  const auto p = mrw_params(0.2, 1250);
  TestConfig cfg;
  const auto band = mc_band(p, 1000, 1250, 100, cfg);
  const MrwSimulator sim(p, 1250);
  const auto values = kernels::ensemble_map(600, [&](std::size_t i) {
    return delta_h(sim.increments(ensemble_seed(200, i)), 1.0, 2.0, cfg.ghe).value;
  });
  const auto pct = exceedance(trace_of(values), band);
  const double se = 100.0 * std::sqrt(0.05 * 0.95 / 600.0);
  INFO("exceedance " << pct);
  CHECK(std::abs(pct - 5.0) <= 3.0 * se);
}

TEST_CASE("full test stages and failures") {
  const auto path = simulate_mrw(mrw_params(0.2, 1250), 2000, 9).increments;
  TestConfig cfg;
  cfg.n_sims = 100;
  cfg.seed = 4;
  const auto a = run_test(ReturnSeries{path}, cfg);
  const auto b = run_test(ReturnSeries{path}, cfg);
  CHECK(a.exceedance_pct == b.exceedance_pct);
  CHECK(a.band.q50 == b.band.q50);
  CHECK(a.trace.size() == 8);
  CHECK(a.params().lambda == a.calibration.params.lambda);

  try {
    run_test(ReturnSeries{std::vector<double>(1000, 0.01)}, cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "windows");
    CHECK(e.kind() == ErrorKind::Data);
  }
  try {
    run_test(ReturnSeries{std::vector<double>(1500, 0.0)}, cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "calibrate");
  }
  cfg.q_prime = cfg.q;
  CHECK_THROWS_AS(run_test(ReturnSeries{path}, cfg), StageError);
}
