#include "seld/stft.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "seld/error.hpp"

namespace seld {

void StftConfig::validate() const {
  if (win_len < 4 || win_len % 2 != 0) throw Error("STFT window length must be even and >= 4");
  if (hop <= 0 || hop > win_len) throw Error("STFT hop must be in (0, win_len]");
  if (sample_rate <= 0) throw Error("STFT sample rate must be positive");
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

namespace {

// Index into the reflect-padded signal (numpy "reflect": edge not repeated).
std::size_t reflect_index(long i, long n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
  }
  return static_cast<std::size_t>(i);
}

}  // namespace

StftTensor stft(std::span<const std::span<const double>> channels, const StftConfig& config) {
  config.validate();
  if (channels.empty()) throw Error("stft: no channels");
  const std::size_t n = channels[0].size();
  for (const auto& ch : channels) {
    if (ch.size() != n) throw Error("stft: channels have different lengths");
  }
  const auto win = static_cast<std::size_t>(config.win_len);
  if (n < win) {
    throw Error("stft: clip too short (" + std::to_string(n) + " samples, need at least " +
                std::to_string(win) + ")");
  }
  const std::size_t frames = config.num_frames(n);
  const std::size_t bins = static_cast<std::size_t>(config.num_bins());
  const long half = config.win_len / 2;

  StftTensor out{config, Tensor3<std::complex<double>>(channels.size(), frames, bins)};
  const detail::RealFft fft(win);
  const auto window = hann_window(config.win_len);
  const long total = static_cast<long>(channels.size() * frames);

#pragma omp parallel
  {
    std::vector<double> frame(win);
#pragma omp for schedule(static)
    for (long job = 0; job < total; ++job) {
      const std::size_t c = static_cast<std::size_t>(job) / frames;
      const std::size_t t = static_cast<std::size_t>(job) % frames;
      const long start = static_cast<long>(t) * config.hop - half;
      const auto& signal = channels[c];
      for (std::size_t k = 0; k < win; ++k) {
        frame[k] = signal[reflect_index(start + static_cast<long>(k), static_cast<long>(n))] * window[k];
      }
      fft.forward(frame.data(), out.bins.row(c, t).data());
    }
  }
  return out;
}

StftTensor stft(std::span<const double> signal, const StftConfig& config) {
  const std::span<const double> one[] = {signal};
  return stft(std::span<const std::span<const double>>(one), config);
}

StftTensor stft(const FoaClip& clip, const StftConfig& config) {
  std::array<std::vector<double>, 4> wide;
  std::array<std::span<const double>, 4> views;
  for (std::size_t c = 0; c < 4; ++c) {
    wide[c].assign(clip.channels[c].begin(), clip.channels[c].end());
    views[c] = wide[c];
  }
  return stft(std::span<const std::span<const double>>(views), config);
}

std::vector<double> istft(const StftTensor& spectrum, std::size_t num_samples, std::size_t channel) {
  const auto& cfg = spectrum.config;
  cfg.validate();
  if (channel >= spectrum.channels()) throw Error("istft: channel out of range");
  if (spectrum.num_bins() != static_cast<std::size_t>(cfg.num_bins())) throw Error("istft: bin count mismatch");
  const std::size_t frames = spectrum.frames();
  if (frames != cfg.num_frames(num_samples)) {
    throw Error("istft: length mismatch (" + std::to_string(frames) + " frames cannot produce " +
                std::to_string(num_samples) + " samples)");
  }
  const auto win = static_cast<std::size_t>(cfg.win_len);
  const std::size_t half = win / 2;
  const auto window = hann_window(cfg.win_len);
  const detail::RealFft fft(win);

  // Inverse transforms are independent; the overlap-add below runs in frame
  // order so the summation order is fixed.
  std::vector<double> frames_td(frames * win);
#pragma omp parallel for schedule(static)
  for (long t = 0; t < static_cast<long>(frames); ++t) {
    double* dst = frames_td.data() + static_cast<std::size_t>(t) * win;
    fft.inverse(spectrum.bins.row(channel, static_cast<std::size_t>(t)).data(), dst);
    for (std::size_t k = 0; k < win; ++k) dst[k] *= window[k] / static_cast<double>(win);
  }

  const std::size_t padded = num_samples + win;
  std::vector<double> acc(padded, 0.0);
  std::vector<double> envelope(padded, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(cfg.hop);
    const double* src = frames_td.data() + t * win;
    for (std::size_t k = 0; k < win; ++k) {
      acc[start + k] += src[k];
      envelope[start + k] += window[k] * window[k];
    }
  }
  std::vector<double> out(num_samples);
  for (std::size_t i = 0; i < num_samples; ++i) {
    const double env = envelope[i + half];
    if (env < 1e-10) {
      throw Error("istft: length mismatch (sample " + std::to_string(i) + " not covered by any frame)");
    }
    out[i] = acc[i + half] / env;
  }
  return out;
}

}  // namespace seld
