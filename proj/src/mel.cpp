#include "seld/mel.hpp"

#include <cmath>

#include "seld/error.hpp"

namespace seld {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

namespace {

// Integral of the unit-peak triangle (lo, peak, hi) from -inf to x.
double triangle_cdf(double x, double lo, double peak, double hi) {
  if (x <= lo) return 0.0;
  if (x <= peak) return (x - lo) * (x - lo) / (2.0 * (peak - lo));
  if (x < hi) return 0.5 * (hi - lo) - (hi - x) * (hi - x) / (2.0 * (hi - peak));
  return 0.5 * (hi - lo);
}

}  // namespace

MelFilterbank::MelFilterbank(int num_bands, int num_fft_bins, double f_min, double f_max, int sample_rate)
    : num_bands_(num_bands), num_fft_bins_(num_fft_bins), f_min_(f_min), f_max_(f_max) {
  if (num_bands < 1 || num_fft_bins < 2) throw Error("mel filterbank needs >= 1 band and >= 2 bins");
  if (!(f_min >= 0.0 && f_min < f_max && f_max <= sample_rate / 2.0)) {
    throw Error("invalid mel band edges: need 0 <= f_min < f_max <= sample_rate / 2");
  }
  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  std::vector<double> edges(static_cast<std::size_t>(num_bands) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (num_bands + 1));
  }
  edges.front() = f_min;
  edges.back() = f_max;

  const double bin_hz = static_cast<double>(sample_rate) / (2.0 * (num_fft_bins - 1));
  weights_.assign(static_cast<std::size_t>(num_bands) * num_fft_bins, 0.0);
  centers_.resize(num_bands);
  first_.assign(num_bands, num_fft_bins);
  last_.assign(num_bands, 0);
  for (int m = 0; m < num_bands; ++m) {
    const double lo = edges[m], peak = edges[m + 1], hi = edges[m + 2];
    centers_[m] = peak;
    for (int k = 0; k < num_fft_bins; ++k) {
      const double f = k * bin_hz;
      const double a = f - 0.5 * bin_hz, b = f + 0.5 * bin_hz;
      if (b <= lo || a >= hi) continue;
      const double w = (triangle_cdf(b, lo, peak, hi) - triangle_cdf(a, lo, peak, hi)) / bin_hz;
      if (w <= 0.0) continue;
      weights_[static_cast<std::size_t>(m) * num_fft_bins + k] = w;
      first_[m] = std::min(first_[m], k);
      last_[m] = std::max(last_[m], k + 1);
    }
  }
}

double MelFilterbank::band_weight_sum(int band) const {
  double s = 0.0;
  for (int k = first_[band]; k < last_[band]; ++k) s += weight(band, k);
  return s;
}

void MelFilterbank::apply(std::span<const double> in, std::span<double> out) const {
  for (int m = 0; m < num_bands_; ++m) {
    const double* w = weights_.data() + static_cast<std::size_t>(m) * num_fft_bins_;
    double acc = 0.0;
    for (int k = first_[m]; k < last_[m]; ++k) acc += w[k] * in[k];
    out[m] = acc;
  }
}

MelFilterbank mel_filterbank(double f_min, double f_max, const StftConfig& stft, int num_bands) {
  stft.validate();
  return MelFilterbank(num_bands, stft.num_bins(), f_min, f_max, stft.sample_rate);
}

}  // namespace seld
