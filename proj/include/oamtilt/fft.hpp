#pragma once

#include <cstddef>
#include <span>

#include "oamtilt/field.hpp"

namespace oamtilt {

/// In-place 2-D complex FFT of a row-major ny x nx array (FFTW, estimate
/// plans). The inverse is normalized by 1/(nx ny).
class Fft2D {
 public:
  Fft2D(std::size_t nx, std::size_t ny);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  void forward(std::span<cdouble> data);
  void inverse(std::span<cdouble> data);

 private:
  void run(void* plan, std::span<cdouble> data);

  std::size_t nx_, ny_;
  cdouble* buffer_ = nullptr;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

}  // namespace oamtilt
