#pragma once

#include <complex>
#include <cstddef>

namespace vnm::detail {

/// Real-to-complex transform pair of length n (unnormalized, FFTW sign
/// conventions). Plans are made once; execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  void forward(const double* in, std::complex<double>* out) const;
  /// Overwrites `in`.
  void inverse(std::complex<double>* in, double* out) const;

 private:
  std::size_t n_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace vnm::detail
