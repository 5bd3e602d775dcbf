#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mrw::cli {

/// Fully resolved settings of one CLI run. Precedence when building it:
/// command-line flags > --config file > these defaults.
struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string input_dir;
  std::string out_dir;

  // model
  double lambda = 0.2;
  double integral_scale = 1250.0;
  double sigma = 1.0;
  double dt = 1.0;
  std::string variant = "lognormal";
  double nu = 4.0;
  double gamma_shape = 1.0;
  double gamma_scale = 1.0;

  // simulation
  std::size_t n = 1250;
  double hurst = 0.75;
  std::uint64_t seed = 0;
  std::size_t ensemble = 1;

  // estimation
  std::vector<double> qs{1.0, 2.0, 3.0};
  std::vector<double> q_grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<int> tau_max_range{10, 30};
  bool weighted = false;
  double theta = 415.0;
  std::vector<int> fit_range{1, 100};
  bool dump_curve = false;

  // test
  std::size_t window = 1250;
  std::size_t shift = 100;
  std::size_t sims = 1000;
  std::size_t sim_length = 1250;
  std::vector<double> q_pair{1.0, 2.0};

  /// Throws InvalidParams with an actionable message.
  void validate() const;
};

/// Process exit codes.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

/// Runs one subcommand; writes its CSV outputs and `<subcommand>.manifest.json`
/// into config.out_dir. Returns the exit code, reporting errors on stderr.
int dispatch(const RunConfig& config);

/// Full command line entry point (argv[0] is the program name).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

/// Output directory when neither a flag nor a config file sets one.
std::filesystem::path default_out_dir();

}  // namespace mrw::cli
