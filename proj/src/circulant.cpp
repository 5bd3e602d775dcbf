#include "mrw/circulant.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "mrw/diagnostics.hpp"
#include "mrw/error.hpp"

namespace mrw {
namespace {

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer allocate(std::size_t n) {
  auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer(p);
}

// fftw_plan_* is not thread safe; fftw_execute_dft on a cached plan is, as
// long as the arrays share the planning alignment (fftw_malloc guarantees it).
fftw_plan plan_for(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto& plan = plans[n];
  if (!plan) {
    auto scratch = allocate(n);
    plan = fftw_plan_dft_1d(static_cast<int>(n), scratch.get(), scratch.get(), FFTW_FORWARD,
                            FFTW_ESTIMATE);
    if (!plan) throw EstimationError("FFTW failed to plan length " + std::to_string(n));
  }
  return plan;
}

}  // namespace

std::string fft_backend_version() { return fftw_version; }

std::size_t next_pow2(std::size_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

void fft_forward(std::span<std::complex<double>> data) {
  if (data.empty()) return;
  auto buffer = allocate(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    buffer[i][0] = data[i].real();
    buffer[i][1] = data[i].imag();
  }
  fftw_execute_dft(plan_for(data.size()), buffer.get(), buffer.get());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = {buffer[i][0], buffer[i][1]};
}

CirculantGaussian::CirculantGaussian(std::span<const double> autocov, std::size_t n,
                                     std::size_t embedding)
    : n_(n), embedding_(embedding) {
  if (n < 1) throw InvalidParams("sample length must be >= 1");
  if (autocov.empty()) throw InvalidParams("autocovariance must contain lag 0");
  if (!std::has_single_bit(embedding) || embedding < 2 * (n - 1) || embedding < 2)
    throw InvalidParams("circulant embedding " + std::to_string(embedding) +
                        " must be a power of two >= 2(n-1)");

  const std::size_t m = embedding;
  const auto cov = [&](std::size_t h) { return h < autocov.size() ? autocov[h] : 0.0; };

  // First row of the circulant: c(0), c(1), ..., c(m/2), c(m/2 - 1), ..., c(1).
  std::vector<std::complex<double>> row(m);
  for (std::size_t j = 0; j < m; ++j) row[j] = cov(j <= m / 2 ? j : m - j);
  fft_forward(row);

  eigen_.resize(m);
  double total = 0.0;
  double negative = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double ev = row[k].real();
    total += std::abs(ev);
    if (ev < 0.0) {
      negative += -ev;
      eigen_[k] = 0.0;
    } else {
      eigen_[k] = ev;
    }
  }
  if (negative > 0.0) {
    clamped_mass_ = total > 0.0 ? negative / total : 0.0;
    // The eigenvalue sum is m * c(0); rescale so the marginal variance survives clamping.
    double kept = 0.0;
    for (double ev : eigen_) kept += ev;
    if (kept > 0.0) {
      const double scale = static_cast<double>(m) * cov(0) / kept;
      for (double& ev : eigen_) ev *= scale;
    }
    warn("circulant embedding of size " + std::to_string(m) +
         ": clamped negative eigenvalues, mass fraction " + std::to_string(clamped_mass_));
  }

  amplitude_.resize(m);
  for (std::size_t k = 0; k < m; ++k)
    amplitude_[k] = std::sqrt(eigen_[k] / static_cast<double>(m));
}

std::vector<double> CirculantGaussian::sample(Engine& engine) const {
  const std::size_t m = embedding_;
  std::normal_distribution<double> normal;
  std::vector<std::complex<double>> spectrum(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double re = normal(engine);
    const double im = normal(engine);
    spectrum[k] = amplitude_[k] * std::complex<double>(re, im);
  }
  fft_forward(spectrum);
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = spectrum[j].real();
  return out;
}

}  // namespace mrw
