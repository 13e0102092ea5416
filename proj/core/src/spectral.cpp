#include "spectral.hpp"

#include <mutex>
#include <new>

namespace fiberpol::detail {

namespace {
// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralBuffer::SpectralBuffer(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  buf_ = fftw_alloc_complex(n);
  if (buf_ == nullptr) throw std::bad_alloc();
  const int len = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(len, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(len, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

SpectralBuffer::~SpectralBuffer() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(buf_);
}

void SpectralBuffer::forward() { fftw_execute(fwd_); }

void SpectralBuffer::backward() {
  fftw_execute(bwd_);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& z : data()) z *= scale;
}

}  // namespace fiberpol::detail
