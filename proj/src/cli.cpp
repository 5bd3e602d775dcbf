#include "mrw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "mrw/calibrate.hpp"
#include "mrw/circulant.hpp"
#include "mrw/csv.hpp"
#include "mrw/error.hpp"
#include "mrw/mctest.hpp"
#include "mrw/scaling.hpp"
#include "mrw/synth.hpp"
#include "mrw/timeseries.hpp"

#ifndef MRW_VERSION
#define MRW_VERSION "unknown"
#endif

namespace mrw::cli {

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RunConfig, subcommand, input, input_dir, out_dir,
                                                lambda, integral_scale, sigma, dt, variant, nu,
                                                gamma_shape, gamma_scale, n, hurst, seed, ensemble,
                                                qs, q_grid, tau_max_range, weighted, theta,
                                                fit_range, dump_curve, window, shift, sims,
                                                sim_length, q_pair)

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string> kSubcommands = {"simulate",  "fbm",  "ghe",       "zeta",
                                               "calibrate", "test", "batch-test"};

Variant variant_of(const RunConfig& c) {
  auto v = Variant::parse(c.variant);
  v.nu = c.nu;
  v.gamma_shape = c.gamma_shape;
  v.gamma_scale = c.gamma_scale;
  return v;
}

MrwParams params_of(const RunConfig& c) {
  MrwParams p;
  p.lambda = c.lambda;
  p.integral_scale = c.integral_scale;
  p.sigma = c.sigma;
  p.dt = c.dt;
  p.variant = variant_of(c);
  p.validate();
  return p;
}

GheConfig ghe_of(const RunConfig& c, bool weighted) {
  GheConfig g{c.tau_max_range.at(0), c.tau_max_range.at(1), weighted, c.theta};
  g.validate();
  return g;
}

TestConfig test_of(const RunConfig& c) {
  TestConfig t;
  t.window = c.window;
  t.shift = c.shift;
  t.n_sims = c.sims;
  t.sim_length = c.sim_length;
  t.q = c.q_pair.at(0);
  t.q_prime = c.q_pair.at(1);
  t.ghe = ghe_of(c, true);
  t.fit = {c.fit_range.at(0), c.fit_range.at(1)};
  t.variant = variant_of(c);
  t.seed = c.seed;
  t.validate();
  return t;
}

class Outputs {
 public:
  explicit Outputs(const RunConfig& config) : config_(config), dir_(config.out_dir) {}

  std::ostream& open(const std::string& name) {
    files_.emplace_back(name, AtomicFile(dir_ / name));
    return files_.back().second.stream();
  }

  void commit() {
    json manifest;
    manifest["tool"] = "mrw";
    manifest["version"] = MRW_VERSION;
    manifest["subcommand"] = config_.subcommand;
    manifest["config"] = config_;
    manifest["build"] = {{"compiler", __VERSION__}, {"fft", fft_backend_version()}};
    auto& names = manifest["outputs"] = json::array();
    for (auto& [name, file] : files_) {
      file.commit();
      names.push_back(name);
    }
    AtomicFile m(dir_ / (config_.subcommand + ".manifest.json"));
    m.stream() << manifest.dump(2) << '\n';
    m.commit();
  }

 private:
  const RunConfig& config_;
  fs::path dir_;
  std::vector<std::pair<std::string, AtomicFile>> files_;
};

LoadedSeries load_input(const RunConfig& c) {
  if (c.input.empty()) throw InvalidParams(c.subcommand + " needs --input <csv>");
  return read_series_csv(c.input);
}

void write_path(std::ostream& out, const SyntheticPath& path, bool with_seed) {
  for (std::size_t k = 0; k < path.increments.size(); ++k) {
    if (with_seed) out << path.seed << ',';
    out << k << ',' << format_double(path.increments[k]) << ','
        << format_double(path.cumulative[k]) << '\n';
  }
}

void run_simulate(const RunConfig& c, Outputs& outputs) {
  const MrwSimulator simulator(params_of(c), c.n);
  if (c.ensemble <= 1) {
    auto& out = outputs.open("simulate.csv");
    out << "index,increment,cumulative\n";
    write_path(out, simulator.path(c.seed), false);
    return;
  }
  auto& out = outputs.open("simulate_ensemble.csv");
  out << "seed,index,increment,cumulative\n";
  for (std::size_t i = 0; i < c.ensemble; ++i)
    write_path(out, simulator.path(ensemble_seed(c.seed, i)), true);
}

void run_fbm(const RunConfig& c, Outputs& outputs) {
  auto& out = outputs.open("fbm.csv");
  out << "index,increment,cumulative\n";
  write_path(out, simulate_fbm(c.hurst, c.n, c.seed), false);
}

void run_ghe(const RunConfig& c, Outputs& outputs) {
  const auto returns = load_input(c).returns();
  const auto estimates = ghe(returns.values, c.qs, ghe_of(c, c.weighted));
  auto& out = outputs.open("ghe.csv");
  out << "q,h,h_std\n";
  for (const auto& e : estimates)
    out << format_double(e.q) << ',' << format_double(e.h) << ',' << format_double(e.h_std) << '\n';
}

void run_zeta(const RunConfig& c, Outputs& outputs) {
  const auto returns = load_input(c).returns();
  const auto zeta = empirical_zeta(returns.values, c.q_grid, ghe_of(c, c.weighted));
  auto& out = outputs.open("zeta.csv");
  out << "q,zeta,err\n";
  for (std::size_t i = 0; i < zeta.qs.size(); ++i)
    out << format_double(zeta.qs[i]) << ',' << format_double(zeta.zetas[i]) << ','
        << format_double(zeta.errors[i]) << '\n';
}

void run_calibrate(const RunConfig& c, Outputs& outputs) {
  const auto returns = load_input(c).returns();
  const FitRange range{c.fit_range.at(0), c.fit_range.at(1)};
  const auto curve = log_vol_autocov(returns.values, range.hi);
  auto result = fit_mrw_params(curve, range, c.dt);
  result.params.sigma = estimate_sigma(returns.values);

  auto& out = outputs.open("calibrate.csv");
  out << "lambda,T,sigma,fit_r2,fit_lo,fit_hi\n"
      << format_double(result.params.lambda) << ',' << format_double(result.params.integral_scale)
      << ',' << format_double(result.params.sigma) << ',' << format_double(result.fit_r2) << ','
      << range.lo << ',' << range.hi << '\n';
  if (!c.dump_curve) return;
  auto& dump = outputs.open("logvol_autocov.csv");
  dump << "lag,c,fitted,n_effective\n";
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    const double fitted = result.intercept + result.slope * std::log1p(curve.lags[i]);
    dump << curve.lags[i] << ',' << format_double(curve.values[i]) << ','
         << format_double(fitted) << ',' << curve.n_effective[i] << '\n';
  }
}

const char* kReportHeader =
    "name,variant,lambda,T,sigma,fit_r2,q025,q50,q975,exceedance_pct,n_windows,n_sims,seed\n";

void write_report_row(std::ostream& out, const std::string& name, const ExceedanceReport& r,
                      const RunConfig& c) {
  const auto& p = r.params();
  out << name << ',' << p.variant.name() << ',' << format_double(p.lambda) << ','
      << format_double(p.integral_scale) << ',' << format_double(p.sigma) << ','
      << format_double(r.calibration.fit_r2) << ',' << format_double(r.band.q025) << ','
      << format_double(r.band.q50) << ',' << format_double(r.band.q975) << ','
      << format_double(r.exceedance_pct) << ',' << r.trace.size() << ',' << r.band.n_sims << ','
      << c.seed << '\n';
}

void run_test_cmd(const RunConfig& c, Outputs& outputs) {
  const auto config = test_of(c);
  const auto loaded = load_input(c);
  const auto report = run_test(loaded.returns(), config);

  auto& out = outputs.open("report.csv");
  out << kReportHeader;
  write_report_row(out, fs::path(c.input).stem().string(), report, c);

  auto& trace = outputs.open("trace.csv");
  trace << "window_end,delta_h,err,q025,q50,q975\n";
  for (std::size_t i = 0; i < report.trace.size(); ++i)
    trace << loaded.return_label(report.trace.window_end_indices[i]) << ','
          << format_double(report.trace.delta_h_values[i]) << ','
          << format_double(report.trace.delta_h_errors[i]) << ','
          << format_double(report.band.q025) << ',' << format_double(report.band.q50) << ','
          << format_double(report.band.q975) << '\n';
}

void run_batch(const RunConfig& c, Outputs& outputs) {
  if (c.input_dir.empty()) throw InvalidParams("batch-test needs --input-dir <directory>");
  if (!fs::is_directory(c.input_dir)) throw DataError("not a directory: " + c.input_dir);
  const auto config = test_of(c);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(c.input_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .csv files in " + c.input_dir);

  auto& out = outputs.open("batch_report.csv");
  out << "status," << kReportHeader;
  std::vector<double> exceedances;
  for (const auto& file : files) {
    try {
      const auto report = run_test(read_series_csv(file).returns(), config);
      out << "ok,";
      write_report_row(out, file.stem().string(), report, c);
      exceedances.push_back(report.exceedance_pct);
    } catch (const Error& e) {
      std::cerr << file.string() << ": " << e.what() << '\n';
      out << "error," << file.stem().string() << ",,,,,,,,,,,,\n";
    }
  }
  if (exceedances.empty()) throw DataError("every input in " + c.input_dir + " failed");

  auto& hist = outputs.open("exceedance_histogram.csv");
  hist << "bin_lo,bin_hi,count\n";
  constexpr int kBins = 20;
  std::vector<int> counts(kBins, 0);
  for (double e : exceedances) ++counts[std::min(kBins - 1, static_cast<int>(e / (100.0 / kBins)))];
  for (int b = 0; b < kBins; ++b) hist << b * 5 << ',' << (b + 1) * 5 << ',' << counts[b] << '\n';
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return kUsage;
    case ErrorKind::Data: return kData;
    case ErrorKind::Numerical: return kNumerical;
  }
  return kNumerical;
}

// CLI11 options write into a scratch RunConfig; only options that were
// actually given are copied over the config-file/default layer.
class FlagLayer {
 public:
  template <class T>
  CLI::Option* option(CLI::App& app, const std::string& name, T RunConfig::*member,
                      const std::string& help) {
    auto* opt = app.add_option(name, flags_.*member, help)->capture_default_str();
    overlays_.emplace_back(opt, [this, member](RunConfig& c) { c.*member = flags_.*member; });
    return opt;
  }

  CLI::Option* flag(CLI::App& app, const std::string& name, bool RunConfig::*member,
                    const std::string& help) {
    auto* opt = app.add_flag(name, flags_.*member, help);
    overlays_.emplace_back(opt, [this, member](RunConfig& c) { c.*member = flags_.*member; });
    return opt;
  }

  void apply(RunConfig& config) const {
    for (const auto& [opt, copy] : overlays_)
      if (opt->count() > 0) copy(config);
  }

 private:
  RunConfig flags_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overlays_;
};

void add_model_options(CLI::App& sub, FlagLayer& f) {
  f.option(sub, "--lambda", &RunConfig::lambda, "Intermittency coefficient");
  f.option(sub, "--T", &RunConfig::integral_scale, "Integral scale (days)");
  f.option(sub, "--sigma", &RunConfig::sigma, "Residual scale per sqrt(day)");
  f.option(sub, "--dt", &RunConfig::dt, "Increment scale (days)");
}

void add_variant_options(CLI::App& sub, FlagLayer& f) {
  f.option(sub, "--variant", &RunConfig::variant, "lognormal | student-t | log-gamma")
      ->check(CLI::IsMember({"lognormal", "student-t", "log-gamma"}));
  f.option(sub, "--nu", &RunConfig::nu, "Student-t degrees of freedom");
  f.option(sub, "--gamma-shape", &RunConfig::gamma_shape, "Log-gamma shape k");
  f.option(sub, "--gamma-scale", &RunConfig::gamma_scale, "Log-gamma scale theta");
}

void add_ghe_options(CLI::App& sub, FlagLayer& f) {
  f.option(sub, "--tau-max-range", &RunConfig::tau_max_range, "Smallest and largest tau_max")
      ->expected(2);
  f.option(sub, "--theta", &RunConfig::theta, "Weighting damping time (days)");
}

void add_test_options(CLI::App& sub, FlagLayer& f) {
  add_variant_options(sub, f);
  add_ghe_options(sub, f);
  f.option(sub, "--window", &RunConfig::window, "Rolling window length (returns)");
  f.option(sub, "--shift", &RunConfig::shift, "Rolling window shift");
  f.option(sub, "--sims", &RunConfig::sims, "Null ensemble size");
  f.option(sub, "--sim-length", &RunConfig::sim_length, "Length of each null path");
  f.option(sub, "--seed", &RunConfig::seed, "Master seed");
  f.option(sub, "--q-pair", &RunConfig::q_pair, "Moment orders q q' of Delta H")->expected(2);
  f.option(sub, "--fit-range", &RunConfig::fit_range, "Lag range of the calibration fit")
      ->expected(2);
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
    throw InvalidParams("unknown subcommand '" + subcommand + "'");
  if (tau_max_range.size() != 2) throw InvalidParams("--tau-max-range takes two integers");
  if (fit_range.size() != 2) throw InvalidParams("--fit-range takes two integers");
  if (q_pair.size() != 2) throw InvalidParams("--q-pair takes two numbers");
  if (n < 2) throw InvalidParams("--n must be >= 2");
  if (qs.empty()) throw InvalidParams("--q needs at least one moment order");
  for (double q : qs)
    if (!(q > 0.0)) throw InvalidParams("--q values must be > 0");
  Variant::parse(variant);
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("MRW_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

int dispatch(const RunConfig& config) {
  try {
    config.validate();
    Outputs outputs(config);
    const auto& s = config.subcommand;
    if (s == "simulate") run_simulate(config, outputs);
    else if (s == "fbm") run_fbm(config, outputs);
    else if (s == "ghe") run_ghe(config, outputs);
    else if (s == "zeta") run_zeta(config, outputs);
    else if (s == "calibrate") run_calibrate(config, outputs);
    else if (s == "test") run_test_cmd(config, outputs);
    else run_batch(config, outputs);
    outputs.commit();
    return kOk;
  } catch (const Error& e) {
    std::cerr << "mrw " << config.subcommand << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "mrw " << config.subcommand << ": " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "mrw " << config.subcommand << ": " << e.what() << '\n';
    return kNumerical;
  }
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Multifractal random walk simulation, generalized Hurst exponents and the "
               "constant-multifractality Monte Carlo test"};
  app.require_subcommand(1);
  FlagLayer f;
  std::string config_path;
  std::map<std::string, CLI::App*> subs;

  const auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path,
                    "JSON config or manifest; explicit flags take precedence");
    f.option(*sub, "--out-dir", &RunConfig::out_dir,
             "Output directory (default: $MRW_OUTPUT_DIR or .)");
    subs[name] = sub;
    return sub;
  };

  auto* simulate = add("simulate", "Simulate an MRW path: index,increment,cumulative");
  add_model_options(*simulate, f);
  add_variant_options(*simulate, f);
  f.option(*simulate, "--n", &RunConfig::n, "Path length");
  f.option(*simulate, "--seed", &RunConfig::seed, "Seed");
  f.option(*simulate, "--ensemble", &RunConfig::ensemble,
           "Number of paths; >1 writes one long-format file with a seed column");

  auto* fbm = add("fbm", "Simulate fractional Brownian motion");
  f.option(*fbm, "--hurst", &RunConfig::hurst, "Hurst exponent in (0,1)");
  f.option(*fbm, "--n", &RunConfig::n, "Path length");
  f.option(*fbm, "--seed", &RunConfig::seed, "Seed");

  auto* ghe_cmd = add("ghe", "Generalized Hurst exponents: q,h,h_std");
  f.option(*ghe_cmd, "--input", &RunConfig::input, "Price CSV (date,price | price) or simulate output");
  f.option(*ghe_cmd, "--q", &RunConfig::qs, "Moment orders")->delimiter(',');
  f.flag(*ghe_cmd, "--weighted", &RunConfig::weighted, "Use exponentially weighted moments");
  add_ghe_options(*ghe_cmd, f);

  auto* zeta = add("zeta", "Empirical scaling function: q,zeta,err");
  f.option(*zeta, "--input", &RunConfig::input, "Price CSV or simulate output");
  f.option(*zeta, "--q-grid", &RunConfig::q_grid, "Moment orders")->delimiter(',');
  f.flag(*zeta, "--weighted", &RunConfig::weighted, "Use exponentially weighted moments");
  add_ghe_options(*zeta, f);

  auto* calibrate_cmd = add("calibrate", "Fit lambda, T, sigma from the log-volatility autocovariance");
  f.option(*calibrate_cmd, "--input", &RunConfig::input, "Price CSV or simulate output");
  f.option(*calibrate_cmd, "--fit-range", &RunConfig::fit_range, "Lag range of the fit")->expected(2);
  f.option(*calibrate_cmd, "--dt", &RunConfig::dt, "Increment scale (days)");
  f.flag(*calibrate_cmd, "--dump-curve", &RunConfig::dump_curve, "Also write logvol_autocov.csv");

  auto* test = add("test", "Quantile-exceedance test of constant multifractality");
  f.option(*test, "--input", &RunConfig::input, "Price CSV or simulate output");
  add_test_options(*test, f);

  auto* batch = add("batch-test", "Run the test on every CSV in a directory");
  f.option(*batch, "--input-dir", &RunConfig::input_dir, "Directory of price CSVs");
  add_test_options(*batch, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  RunConfig config;
  if (!config_path.empty()) {
    try {
      std::ifstream in(config_path);
      if (!in) throw InvalidParams("cannot open config " + config_path);
      const auto j = json::parse(in);
      config = (j.contains("config") ? j.at("config") : j).get<RunConfig>();
    } catch (const json::exception& e) {
      std::cerr << "mrw: bad config " << config_path << ": " << e.what() << '\n';
      return kUsage;
    } catch (const Error& e) {
      std::cerr << "mrw: " << e.what() << '\n';
      return kUsage;
    }
  }
  f.apply(config);
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) config.subcommand = name;
  if (config.out_dir.empty()) config.out_dir = default_out_dir().string();
  return dispatch(config);
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"mrw"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace mrw::cli
