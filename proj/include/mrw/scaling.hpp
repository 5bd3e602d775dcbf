#pragma once

#include <optional>
#include <span>
#include <vector>

namespace mrw {

inline constexpr double kDefaultThetaDays = 415.0;

/// Fit settings shared by every GHE-based estimate. Each tau_max in
/// [tau_max_lo, tau_max_hi] gives one log-log least-squares fit over tau = 1..tau_max.
struct GheConfig {
  int tau_max_lo = 10;
  int tau_max_hi = 30;
  bool weighted = false;
  double theta_days = kDefaultThetaDays;

  void validate() const;
};

struct StructureFunctionCurve {
  double q = 0.0;
  std::vector<int> taus;
  std::vector<double> moments;
};

struct GheEstimate {
  double q = 0.0;
  double h = 0.0;
  double h_std = 0.0;  // dispersion across tau_max choices
  bool weighted = false;
  double theta_days = 0.0;
};

struct DeltaH {
  double value = 0.0;
  double error = 0.0;  // root-sum-square of the two h_std
  GheEstimate first;
  GheEstimate second;
};

struct ScalingFunction {
  std::vector<double> qs;
  std::vector<double> zetas;
  std::vector<double> errors;
};

/// Mean of |r_{t,tau}|^q over the N - tau + 1 overlapping sums of `returns`.
double structure_function(std::span<const double> returns, double q, int tau);

/// As structure_function with normalised weights exp(-(t_last - t) / theta_days).
double weighted_structure_function(std::span<const double> returns, double q, int tau,
                                   double theta_days);

StructureFunctionCurve structure_curve(std::span<const double> returns, double q, int tau_max,
                                       std::optional<double> theta_days = std::nullopt);

GheEstimate ghe(std::span<const double> returns, double q, const GheConfig& config = {});

/// One estimate per q, sharing a single pass over the moments.
std::vector<GheEstimate> ghe(std::span<const double> returns, std::span<const double> qs,
                             const GheConfig& config = {});

/// H(q) - H(q_prime).
DeltaH delta_h(std::span<const double> returns, double q, double q_prime,
               const GheConfig& config = {});

/// Default grid 0.5, 1.0, ..., 3.0.
std::vector<double> default_q_grid();

/// zeta*(q) = q H(q). A q of exactly 0 maps to zeta = 0. When `lambda` is
/// given, grid points above sqrt(2)/lambda trigger a warning.
ScalingFunction empirical_zeta(std::span<const double> returns, std::span<const double> qs,
                               const GheConfig& config = {},
                               std::optional<double> lambda = std::nullopt);

/// (q - q(q - 2) lambda^2) / 2.
double theoretical_zeta(double q, double lambda);

/// theoretical_zeta(q, lambda) / q; warns above the moment bound.
double theoretical_h(double q, double lambda);

/// Largest moment order with finite log-normal MRW moments, sqrt(2)/lambda.
double moment_order_bound(double lambda);

}  // namespace mrw
