#include "mrw/synth.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "mrw/diagnostics.hpp"
#include "mrw/error.hpp"

namespace mrw {

std::string Variant::name() const {
  switch (kind) {
    case VariantKind::LogNormal: return "lognormal";
    case VariantKind::StudentT: return "student-t";
    case VariantKind::LogGamma: return "log-gamma";
  }
  return "unknown";
}

Variant Variant::parse(const std::string& name) {
  if (name == "lognormal" || name == "log-normal") return log_normal();
  if (name == "student-t" || name == "studentt" || name == "t") return student_t();
  if (name == "log-gamma" || name == "loggamma") return log_gamma();
  throw InvalidParams("unknown variant '" + name + "' (lognormal|student-t|log-gamma)");
}

void MrwParams::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidParams("lambda must be >= 0");
  if (!(dt > 0.0)) throw InvalidParams("dt must be > 0");
  if (!(integral_scale > dt) || !std::isfinite(integral_scale))
    throw InvalidParams("integral scale T must exceed dt");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParams("sigma must be > 0");
  if (variant.kind == VariantKind::StudentT && !(variant.nu > 2.0))
    throw InvalidParams("Student-t residuals need nu > 2 for finite variance");
  if (variant.kind == VariantKind::LogGamma &&
      !(variant.gamma_shape > 0.0 && variant.gamma_scale > 0.0))
    throw InvalidParams("log-gamma shape and scale must be > 0");
}

double MrwParams::omega_variance() const {
  return lambda * lambda * std::log(integral_scale / dt);
}

double MrwParams::omega_mean() const { return -omega_variance(); }

double omega_autocovariance(const MrwParams& params, std::size_t h) {
  const double lag = static_cast<double>(h);
  if (lag > params.integral_scale / params.dt - 1.0) return 0.0;
  return params.lambda * params.lambda *
         std::log(params.integral_scale / ((1.0 + lag) * params.dt));
}

double fgn_autocovariance(double hurst, std::size_t h) {
  const double k = static_cast<double>(h);
  const double two_h = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) +
                std::pow(std::abs(k - 1.0), two_h));
}

std::size_t omega_embedding_size(const MrwParams& params, std::size_t n) {
  const auto span = static_cast<std::size_t>(std::ceil(params.integral_scale / params.dt));
  return next_pow2(2 * (n + span));
}

std::vector<double> cumulative_sum(const std::vector<double>& increments) {
  std::vector<double> out(increments.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < increments.size(); ++k) out[k] = acc += increments[k];
  return out;
}

namespace {

// Maps a N(mean, var) sample onto a Gamma(k, theta) marginal through the
// Gaussian copula, then rescales to the same mean and variance.
void to_log_gamma(std::vector<double>& omega, double mean, double var, const Variant& v) {
  if (var <= 0.0) return;
  const double sd = std::sqrt(var);
  const double k = v.gamma_shape;
  const double theta = v.gamma_scale;
  const double gamma_sd = std::sqrt(k) * theta;
  for (double& w : omega) {
    const double z = (w - mean) / sd;
    // Upper and lower tail probabilities computed separately to keep accuracy at both ends.
    double g = 0.0;
    if (z > 0.0) {
      const double upper = std::max(0.5 * std::erfc(z / std::numbers::sqrt2), DBL_MIN);
      g = theta * boost::math::gamma_q_inv(k, upper);
    } else {
      const double lower = std::max(0.5 * std::erfc(-z / std::numbers::sqrt2), DBL_MIN);
      g = theta * boost::math::gamma_p_inv(k, lower);
    }
    w = mean + sd * (g - k * theta) / gamma_sd;
  }
}

std::vector<double> draw_residuals(const MrwParams& p, std::size_t n, Seed seed) {
  auto engine = make_engine(seed, Stream::Epsilon);
  std::vector<double> eps(n);
  const double scale = p.sigma * std::sqrt(p.dt);
  if (p.variant.kind == VariantKind::StudentT) {
    // Density scale a obeys sigma^2 = a^2 / (nu - 2); the standard t has scale a / sqrt(nu).
    const double nu = p.variant.nu;
    std::student_t_distribution<double> t(nu);
    const double s = scale * std::sqrt((nu - 2.0) / nu);
    for (double& e : eps) e = s * t(engine);
  } else {
    std::normal_distribution<double> normal(0.0, scale);
    for (double& e : eps) e = normal(engine);
  }
  return eps;
}

}  // namespace

MrwSimulator::MrwSimulator(const MrwParams& params, std::size_t n) : params_(params), n_(n) {
  params_.validate();
  if (n < 2) throw InvalidParams("path length must be >= 2");
  if (3.0 * params_.lambda > std::numbers::sqrt2)
    warn("lambda = " + std::to_string(params_.lambda) +
         " violates the moment bound q <= sqrt(2)/lambda for q = 3");
  if (params_.lambda > 0.0) {
    const std::size_t m = omega_embedding_size(params_, n);
    std::vector<double> cov(m / 2 + 1);
    for (std::size_t h = 0; h < cov.size(); ++h) cov[h] = omega_autocovariance(params_, h);
    sampler_ = std::make_unique<CirculantGaussian>(cov, n, m);
  }
}

OmegaPath MrwSimulator::omega(Seed seed) const {
  OmegaPath out{std::vector<double>(n_, params_.omega_mean()), params_};
  if (!sampler_) return out;
  auto engine = make_engine(seed, Stream::Omega);
  const auto z = sampler_->sample(engine);
  const double mean = params_.omega_mean();
  for (std::size_t k = 0; k < n_; ++k) out.values[k] = mean + z[k];
  if (params_.variant.kind == VariantKind::LogGamma)
    to_log_gamma(out.values, mean, params_.omega_variance(), params_.variant);
  return out;
}

std::vector<double> MrwSimulator::increments(Seed seed) const {
  const auto w = omega(seed).values;
  auto eps = draw_residuals(params_, n_, seed);
  for (std::size_t k = 0; k < n_; ++k) eps[k] *= std::exp(w[k]);
  return eps;
}

SyntheticPath MrwSimulator::path(Seed seed) const {
  SyntheticPath out;
  out.increments = increments(seed);
  out.cumulative = cumulative_sum(out.increments);
  out.seed = seed;
  out.params = params_;
  return out;
}

OmegaPath simulate_omega(const MrwParams& params, std::size_t n, Seed seed) {
  return MrwSimulator(params, n).omega(seed);
}

SyntheticPath simulate_mrw(const MrwParams& params, std::size_t n, Seed seed) {
  return MrwSimulator(params, n).path(seed);
}

namespace {

CirculantGaussian make_fgn_sampler(double hurst, std::size_t n) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw InvalidParams("Hurst exponent must lie in (0, 1)");
  if (n < 2) throw InvalidParams("path length must be >= 2");
  const std::size_t m = next_pow2(2 * n);
  std::vector<double> cov(m / 2 + 1);
  for (std::size_t h = 0; h < cov.size(); ++h) cov[h] = fgn_autocovariance(hurst, h);
  return CirculantGaussian(cov, n, m);
}

}  // namespace

FbmSimulator::FbmSimulator(double hurst, std::size_t n)
    : hurst_(hurst), n_(n), sampler_(make_fgn_sampler(hurst, n)) {}

SyntheticPath FbmSimulator::path(Seed seed) const {
  auto engine = make_engine(seed, Stream::Omega);
  SyntheticPath out;
  out.increments = sampler_.sample(engine);
  out.cumulative = cumulative_sum(out.increments);
  out.seed = seed;
  out.params.lambda = 0.0;
  return out;
}

SyntheticPath simulate_fbm(double hurst, std::size_t n, Seed seed) {
  return FbmSimulator(hurst, n).path(seed);
}

}  // namespace mrw
