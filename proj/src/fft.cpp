#include "oamtilt/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "oamtilt/errors.hpp"

namespace oamtilt {

namespace {
// FFTW's planner is not reentrant.
std::mutex g_planner_mutex;
}  // namespace

Fft2D::Fft2D(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
  std::lock_guard lock(g_planner_mutex);
  buffer_ = reinterpret_cast<cdouble*>(fftw_malloc(sizeof(fftw_complex) * nx * ny));
  if (!buffer_) throw Error("FFT buffer allocation failed");
  auto* buf = reinterpret_cast<fftw_complex*>(buffer_);
  const int n0 = static_cast<int>(ny);
  const int n1 = static_cast<int>(nx);
  forward_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!forward_ || !inverse_) throw Error("FFTW planning failed");
}

Fft2D::~Fft2D() {
  std::lock_guard lock(g_planner_mutex);
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (inverse_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  fftw_free(buffer_);
}

void Fft2D::run(void* plan, std::span<cdouble> data) {
  if (data.size() != nx_ * ny_) throw StructuralError("FFT size mismatch");
  std::copy(data.begin(), data.end(), buffer_);
  fftw_execute(static_cast<fftw_plan>(plan));
  std::copy(buffer_, buffer_ + data.size(), data.begin());
}

void Fft2D::forward(std::span<cdouble> data) { run(forward_, data); }

void Fft2D::inverse(std::span<cdouble> data) {
  run(inverse_, data);
  const double scale = 1.0 / static_cast<double>(nx_ * ny_);
  for (auto& v : data) v *= scale;
}

}  // namespace oamtilt
