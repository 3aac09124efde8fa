#pragma once

#include <complex>
#include <cstddef>

namespace seld::detail {

// Real-to-complex FFT of fixed size backed by an FFTW plan. Plans are
// created with FFTW_ESTIMATE, so the selected algorithm (and therefore every
// output bit) is independent of timing. Execution is thread-safe.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return size_; }
  std::size_t num_bins() const { return size_ / 2 + 1; }

  // in: size() reals, out: num_bins() complex values. Unnormalized.
  void forward(const double* in, std::complex<double>* out) const;
  // in: num_bins() complex values (left untouched), out: size() reals.
  // Unnormalized: forward followed by inverse scales by size().
  void inverse(const std::complex<double>* in, double* out) const;

 private:
  std::size_t size_;
  void* forward_plan_;
  void* inverse_plan_;
};

}  // namespace seld::detail
