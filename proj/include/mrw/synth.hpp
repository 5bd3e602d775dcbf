#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mrw/circulant.hpp"
#include "mrw/random.hpp"

namespace mrw {

enum class VariantKind { LogNormal, StudentT, LogGamma };

/// Distributional flavour of the MRW: Gaussian residuals with log-normal
/// volatility, Student-t residuals, or log-gamma volatility.
struct Variant {
  VariantKind kind = VariantKind::LogNormal;
  double nu = 4.0;           // Student-t degrees of freedom
  double gamma_shape = 1.0;  // k
  double gamma_scale = 1.0;  // theta

  static Variant log_normal() { return {}; }
  static Variant student_t(double nu = 4.0) { return {VariantKind::StudentT, nu, 1.0, 1.0}; }
  static Variant log_gamma(double k = 1.0, double theta = 1.0) {
    return {VariantKind::LogGamma, 4.0, k, theta};
  }

  std::string name() const;
  static Variant parse(const std::string& name);
};

struct MrwParams {
  double lambda = 0.2;           // intermittency coefficient
  double integral_scale = 1250;  // T, days
  double sigma = 1.0;            // residual scale per sqrt(day)
  double dt = 1.0;
  Variant variant;

  /// Throws InvalidParams on lambda < 0, T <= dt, dt <= 0, sigma <= 0,
  /// nu <= 2 or non-positive gamma parameters.
  void validate() const;

  /// Mean of omega for the log-normal construction, -lambda^2 ln(T/dt).
  double omega_mean() const;
  /// Variance of omega, lambda^2 ln(T/dt).
  double omega_variance() const;
};

/// Autocovariance of omega at lag h: lambda^2 log(T / ((1+h) dt)) for
/// h <= T/dt - 1, zero beyond.
double omega_autocovariance(const MrwParams& params, std::size_t h);

/// Autocovariance of unit-variance fractional Gaussian noise at lag h.
double fgn_autocovariance(double hurst, std::size_t h);

/// Circulant embedding size used for omega: next power of two >= 2(n + T/dt).
std::size_t omega_embedding_size(const MrwParams& params, std::size_t n);

struct OmegaPath {
  std::vector<double> values;
  MrwParams params;
};

struct SyntheticPath {
  std::vector<double> increments;
  std::vector<double> cumulative;
  Seed seed = 0;
  MrwParams params;
};

/// Precomputes the omega spectrum for (params, n); each call to path() is
/// then a pure function of the seed. const member functions are thread safe.
class MrwSimulator {
 public:
  MrwSimulator(const MrwParams& params, std::size_t n);

  const MrwParams& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return n_; }

  OmegaPath omega(Seed seed) const;
  SyntheticPath path(Seed seed) const;
  /// Increments only; skips building the cumulative sum.
  std::vector<double> increments(Seed seed) const;

 private:
  MrwParams params_;
  std::size_t n_;
  std::unique_ptr<CirculantGaussian> sampler_;  // null when lambda == 0
};

OmegaPath simulate_omega(const MrwParams& params, std::size_t n, Seed seed);
SyntheticPath simulate_mrw(const MrwParams& params, std::size_t n, Seed seed);

/// Exact fractional Gaussian noise (increments) and fBm (cumulative), unit
/// variance per step.
class FbmSimulator {
 public:
  FbmSimulator(double hurst, std::size_t n);
  double hurst() const noexcept { return hurst_; }
  SyntheticPath path(Seed seed) const;

 private:
  double hurst_;
  std::size_t n_;
  CirculantGaussian sampler_;
};

SyntheticPath simulate_fbm(double hurst, std::size_t n, Seed seed);

/// cumulative[k] = increments[0] + ... + increments[k].
std::vector<double> cumulative_sum(const std::vector<double>& increments);

}  // namespace mrw
