#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "seld/stft.hpp"

namespace seld {

inline constexpr int kMelBands = 128;

// mel(f) = 2595 log10(1 + f / 700)
double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters with centres equally spaced on the mel scale. Each
// weight is the mean of the triangle over the FFT bin's frequency interval
// [f_k - df/2, f_k + df/2], so narrow low-frequency filters that fall between
// two bin centres still receive weight, and the rows sum to one wherever
// neighbouring triangles overlap.
class MelFilterbank {
 public:
  MelFilterbank(int num_bands, int num_fft_bins, double f_min, double f_max, int sample_rate);

  int num_bands() const { return num_bands_; }
  int num_fft_bins() const { return num_fft_bins_; }
  double f_min() const { return f_min_; }
  double f_max() const { return f_max_; }

  double weight(int band, int bin) const {
    return weights_[static_cast<std::size_t>(band) * num_fft_bins_ + bin];
  }
  std::span<const double> row(int band) const {
    return {weights_.data() + static_cast<std::size_t>(band) * num_fft_bins_,
            static_cast<std::size_t>(num_fft_bins_)};
  }
  // Half-open range of bins with non-zero weight.
  int first_bin(int band) const { return first_[band]; }
  int last_bin(int band) const { return last_[band]; }
  double center_hz(int band) const { return centers_[band]; }
  double band_weight_sum(int band) const;

  // out[m] = sum_k w[m][k] in[k]
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  int num_bands_;
  int num_fft_bins_;
  double f_min_;
  double f_max_;
  std::vector<double> weights_;
  std::vector<double> centers_;
  std::vector<int> first_;
  std::vector<int> last_;
};

// 0 <= f_min < f_max <= sample_rate / 2.
MelFilterbank mel_filterbank(double f_min, double f_max, const StftConfig& stft = {},
                             int num_bands = kMelBands);

}  // namespace seld
