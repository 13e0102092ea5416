#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace fiberpol::detail {

/// In-place complex FFT on an owned, SIMD-aligned buffer. backward() is
/// normalised so that backward(forward(x)) == x.
class SpectralBuffer {
 public:
  explicit SpectralBuffer(std::size_t n);
  ~SpectralBuffer();
  SpectralBuffer(const SpectralBuffer&) = delete;
  SpectralBuffer& operator=(const SpectralBuffer&) = delete;

  std::span<std::complex<double>> data() noexcept { return {reinterpret_cast<std::complex<double>*>(buf_), n_}; }
  std::size_t size() const noexcept { return n_; }

  void forward();
  void backward();

 private:
  std::size_t n_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan bwd_;
};

}  // namespace fiberpol::detail
