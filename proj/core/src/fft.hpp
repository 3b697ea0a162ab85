#pragma once

// Thin RAII layer over FFTW's complex 1-D transforms.

#include <complex>
#include <cstddef>
#include <vector>

namespace backflow::detail {

class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  /// In place, sum_j a_j e^{-2 pi i jk/n}, unnormalised.
  void forward(std::vector<std::complex<double>>& data);
  /// In place, sum_k a_k e^{+2 pi i jk/n}, unnormalised.
  void backward(std::vector<std::complex<double>>& data);

 private:
  void run(void* plan, std::vector<std::complex<double>>& data);

  std::size_t n_;
  void* buffer_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Wavenumber of FFT bin j for n samples spaced h apart, negative frequencies wrapped.
double fft_wavenumber(std::size_t j, std::size_t n, double spacing);

/// Smallest odd m >= n of the form 3^a 5^b 7^c.
std::size_t next_odd_smooth(std::size_t n);

}  // namespace backflow::detail
