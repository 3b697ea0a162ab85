#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <new>
#include <numbers>

namespace backflow::detail {

namespace {

// FFTW's planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n), buffer_(nullptr), forward_plan_(nullptr), backward_plan_(nullptr) {
  std::lock_guard lock(planner_mutex());
  auto* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw std::bad_alloc();
  buffer_ = buf;
  const int len = static_cast<int>(n);
  forward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  fftw_free(buffer_);
}

void Fft::run(void* plan, std::vector<std::complex<double>>& data) {
  std::memcpy(buffer_, data.data(), n_ * sizeof(fftw_complex));
  fftw_execute(static_cast<fftw_plan>(plan));
  std::memcpy(data.data(), buffer_, n_ * sizeof(fftw_complex));
}

void Fft::forward(std::vector<std::complex<double>>& data) { run(forward_plan_, data); }
void Fft::backward(std::vector<std::complex<double>>& data) { run(backward_plan_, data); }

double fft_wavenumber(std::size_t j, std::size_t n, double spacing) {
  const auto signed_j = j <= (n - 1) / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * signed_j / (static_cast<double>(n) * spacing);
}

std::size_t next_odd_smooth(std::size_t n) {
  for (std::size_t m = n | 1u;; m += 2) {
    std::size_t r = m;
    for (std::size_t p : {3u, 5u, 7u}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

}  // namespace backflow::detail
