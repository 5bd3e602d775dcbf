#pragma once

// Independent reference computations used only by tests. None of these
// share code paths with the library routines they check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace mrw::oracle {

/// Direct Cholesky factor of the n x n Toeplitz covariance built from `autocov(h)`.
inline Eigen::MatrixXd cholesky_factor(std::size_t n, const std::function<double(std::size_t)>& autocov) {
  Eigen::MatrixXd cov(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cov(i, j) = autocov(i > j ? i - j : j - i);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  return llt.matrixL();
}

/// Zero-mean Gaussian vector with covariance L L^T.
inline std::vector<double> cholesky_sample(const Eigen::MatrixXd& lower, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(lower.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(engine);
  const Eigen::VectorXd x = lower * z;
  return {x.data(), x.data() + x.size()};
}

/// Brute-force structure function: explicit window sums, no prefix sums.
inline double structure_function(std::span<const double> r, double q, std::size_t tau,
                                 double theta = 0.0) {
  const std::size_t count = r.size() - tau + 1;
  double acc = 0.0, norm = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < tau; ++k) s += r[t + k];
    const double w = theta > 0.0 ? std::exp(-static_cast<double>(count - 1 - t) / theta) : 1.0;
    acc += w * std::pow(std::abs(s), q);
    norm += w;
  }
  return acc / norm;
}

/// Generalized Hurst exponent via Eigen least squares on the brute-force moments.
inline double ghe(std::span<const double> r, double q, int lo, int hi, double theta = 0.0) {
  std::vector<double> logm;
  for (int tau = 1; tau <= hi; ++tau)
    logm.push_back(std::log(structure_function(r, q, static_cast<std::size_t>(tau), theta)));
  double total = 0.0;
  for (int tmax = lo; tmax <= hi; ++tmax) {
    Eigen::MatrixXd a(tmax, 2);
    Eigen::VectorXd b(tmax);
    for (int i = 0; i < tmax; ++i) {
      a(i, 0) = 1.0;
      a(i, 1) = std::log(static_cast<double>(i + 1));
      b(i) = logm[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
    total += coef(1) / q;
  }
  return total / (hi - lo + 1);
}

/// Closed-form lag-1 autocorrelation of fractional Gaussian noise.
inline double fgn_lag1_correlation(double hurst) { return std::pow(2.0, 2.0 * hurst - 1.0) - 1.0; }

/// Mean and standard error of the mean.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> x) {
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

}  // namespace mrw::oracle
