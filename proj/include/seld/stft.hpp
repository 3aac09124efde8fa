#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "seld/foa_io.hpp"
#include "seld/tensor.hpp"

namespace seld {

struct StftConfig {
  int win_len = 512;
  int hop = 150;
  int sample_rate = kPipelineSampleRate;

  int num_bins() const { return win_len / 2 + 1; }
  // Frames produced for a signal of n samples under centre padding.
  std::size_t num_frames(std::size_t num_samples) const { return num_samples / static_cast<std::size_t>(hop); }
  void validate() const;
};

// Complex spectrogram, (channel, frame, bin). Frame t is centred on sample
// t * hop of the input; the signal is reflect-padded by win_len / 2 on both
// sides.
struct StftTensor {
  StftConfig config;
  Tensor3<std::complex<double>> bins;

  std::size_t channels() const { return bins.channels(); }
  std::size_t frames() const { return bins.frames(); }
  std::size_t num_bins() const { return bins.bins(); }
};

// Periodic Hann window: 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann_window(int length);

StftTensor stft(const FoaClip& clip, const StftConfig& config = {});
StftTensor stft(std::span<const double> signal, const StftConfig& config = {});
StftTensor stft(std::span<const std::span<const double>> channels, const StftConfig& config = {});

// Weighted overlap-add inverse of one channel, normalised by the summed
// squared synthesis window. Requires frames == floor(num_samples / hop) and
// every output sample to be covered by at least one window.
std::vector<double> istft(const StftTensor& spectrum, std::size_t num_samples, std::size_t channel = 0);

}  // namespace seld
