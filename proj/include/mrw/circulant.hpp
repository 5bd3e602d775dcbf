#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mrw/random.hpp"

namespace mrw {

/// Smallest power of two >= n.
std::size_t next_pow2(std::size_t n);

/// FFT library identification, recorded in run manifests.
std::string fft_backend_version();

/// In-place forward complex DFT of length data.size(), backed by FFTW.
/// Plans are cached per length; safe to call concurrently.
void fft_forward(std::span<std::complex<double>> data);

/// Exact sampler for a stationary Gaussian sequence of length n with a given
/// autocovariance, by embedding the covariance into a circulant matrix of
/// size `embedding` and drawing from its spectral factorisation.
///
/// Negative circulant eigenvalues are clamped to zero and the remaining
/// spectrum rescaled so that the lag-0 variance is preserved; the clamped
/// fraction is reported through warn() and clamped_mass().
class CirculantGaussian {
 public:
  /// `autocov[h]` for h = 0..; lags beyond the supplied head are taken as zero.
  /// `embedding` must be a power of two >= 2 * (n - 1).
  CirculantGaussian(std::span<const double> autocov, std::size_t n, std::size_t embedding);

  std::size_t size() const noexcept { return n_; }
  std::size_t embedding() const noexcept { return embedding_; }
  /// Fraction of total spectral mass that was negative before clamping.
  double clamped_mass() const noexcept { return clamped_mass_; }
  std::span<const double> eigenvalues() const noexcept { return eigen_; }

  /// Zero-mean draw; consumes 2 * embedding() standard normals from `engine`.
  std::vector<double> sample(Engine& engine) const;

 private:
  std::size_t n_;
  std::size_t embedding_;
  double clamped_mass_ = 0.0;
  std::vector<double> eigen_;
  std::vector<double> amplitude_;  // sqrt(eigen / embedding)
};

}  // namespace mrw
