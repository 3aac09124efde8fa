#include "seld/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "seld/augment.hpp"
#include "seld/error.hpp"

namespace seld {

namespace {

std::size_t num_samples_for(double duration_s, int sample_rate) {
  if (!(duration_s > 0.0) || sample_rate <= 0) throw Error("synth duration and sample rate must be positive");
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(n);
  for (double& v : out) v = dist(rng);
  return out;
}

// Linear convolution truncated to the length of x.
std::vector<double> convolve(const std::vector<double>& x, const std::vector<double>& h) {
  const std::size_t full = x.size() + h.size() - 1;
  std::size_t size = 1;
  while (size < full) size <<= 1;
  const detail::RealFft fft(size);
  std::vector<double> a(size, 0.0), b(size, 0.0);
  std::copy(x.begin(), x.end(), a.begin());
  std::copy(h.begin(), h.end(), b.begin());
  std::vector<std::complex<double>> fa(fft.num_bins()), fb(fft.num_bins());
  fft.forward(a.data(), fa.data());
  fft.forward(b.data(), fb.data());
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  fft.inverse(fa.data(), a.data());
  std::vector<double> out(x.size());
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * scale;
  return out;
}

double energy(const std::vector<double>& x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

FoaClip to_clip(const std::array<std::vector<double>, 4>& channels, int sample_rate) {
  FoaClip clip;
  clip.sample_rate = sample_rate;
  for (std::size_t c = 0; c < 4; ++c) clip.channels[c].assign(channels[c].begin(), channels[c].end());
  return clip;
}

}  // namespace

void SourceSpec::validate() const {
  if (!(distance > 0.0)) throw Error("source distance must be > 0");
  if (!(direction.elevation >= -90.0 && direction.elevation <= 90.0)) throw Error("source elevation out of range");
  if (reverb) {
    if (!(reverb->t60 > 0.0)) throw Error("reverb t60 must be > 0");
    if (!(reverb->onset_s >= 0.0 && reverb->onset_s < reverb->t60)) throw Error("reverb onset must be in [0, t60)");
    if (!std::isfinite(reverb->drr_db)) throw Error("reverb DRR must be finite");
  }
}

std::vector<double> synth_signal(const SignalSpec& spec, std::size_t num_samples, int sample_rate) {
  std::vector<double> out;
  switch (spec.kind) {
    case SignalKind::white_noise:
    case SignalKind::speech_like:
      out = gaussian(num_samples, spec.seed);
      for (double& v : out) v *= spec.amplitude;
      if (spec.kind == SignalKind::speech_like) {
        for (std::size_t i = 0; i < num_samples; ++i) {
          const double s = std::sin(2.0 * std::numbers::pi * 2.0 * static_cast<double>(i) / sample_rate);
          out[i] *= s * s;
        }
      }
      break;
    case SignalKind::tone:
      out.resize(num_samples);
      for (std::size_t i = 0; i < num_samples; ++i) {
        out[i] = spec.amplitude * std::sin(2.0 * std::numbers::pi * spec.frequency * static_cast<double>(i) / sample_rate);
      }
      break;
    case SignalKind::impulse: {
      out.assign(num_samples, 0.0);
      const auto at = std::llround(spec.impulse_time_s * sample_rate);
      if (at < 0 || static_cast<std::size_t>(at) >= num_samples) throw Error("impulse time outside the signal");
      out[static_cast<std::size_t>(at)] = spec.amplitude;
      break;
    }
  }
  return out;
}

std::array<double, 4> plane_wave_gains(Direction d) {
  const double ce = cos_deg(d.elevation);
  return {1.0, sin_deg(d.azimuth) * ce, sin_deg(d.elevation), cos_deg(d.azimuth) * ce};
}

SynthesizedSource synthesize_source(const SourceSpec& spec, double duration_s, int sample_rate) {
  spec.validate();
  const std::size_t n = num_samples_for(duration_s, sample_rate);
  const std::vector<double> s = synth_signal(spec.signal, n, sample_rate);
  const auto gains = plane_wave_gains(spec.direction);

  std::array<std::vector<double>, 4> direct, reverb;
  for (std::size_t c = 0; c < 4; ++c) {
    direct[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) direct[c][i] = gains[c] * s[i];
    reverb[c].assign(n, 0.0);
  }

  if (spec.reverb) {
    const ReverbSpec& rv = *spec.reverb;
    const auto tail_len = static_cast<std::size_t>(std::llround(rv.t60 * sample_rate));
    const auto onset = static_cast<std::size_t>(std::llround(rv.onset_s * sample_rate));
    const double decay = 3.0 * std::log(10.0) / (rv.t60 * sample_rate);  // 60 dB over t60
    for (std::size_t c = 0; c < 4; ++c) {
      std::vector<double> h = gaussian(tail_len, rv.seed + c);
      for (std::size_t i = 0; i < tail_len; ++i) h[i] = i < onset ? 0.0 : h[i] * std::exp(-decay * static_cast<double>(i));
      reverb[c] = convolve(s, h);
      if (c != 0) {
        for (double& v : reverb[c]) v /= std::sqrt(3.0);
      }
    }
    const double ew = energy(reverb[0]);
    if (ew > 0.0) {
      const double g = std::sqrt(energy(direct[0]) / ew / std::pow(10.0, rv.drr_db / 10.0));
      for (auto& ch : reverb) {
        for (double& v : ch) v *= g;
      }
    }
  }

  std::array<std::vector<double>, 4> mixture;
  for (std::size_t c = 0; c < 4; ++c) {
    mixture[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) mixture[c][i] = direct[c][i] + reverb[c][i];
  }
  return {to_clip(mixture, sample_rate), to_clip(direct, sample_rate), to_clip(reverb, sample_rate)};
}

FoaClip plane_wave_foa(const SourceSpec& spec, double duration_s, int sample_rate) {
  return synthesize_source(spec, duration_s, sample_rate).mixture;
}

FoaClip mix_clips(const std::vector<FoaClip>& clips) {
  if (clips.empty()) throw Error("nothing to mix");
  FoaClip out = clips[0];
  for (std::size_t k = 1; k < clips.size(); ++k) {
    if (clips[k].num_samples() != out.num_samples() || clips[k].sample_rate != out.sample_rate) {
      throw Error("mixed clips must share length and sample rate");
    }
    for (std::size_t c = 0; c < 4; ++c) {
      for (std::size_t i = 0; i < out.num_samples(); ++i) out.channels[c][i] += clips[k].channels[c][i];
    }
  }
  return out;
}

Image marker_image(int width, int height, Direction d, int channels) {
  if (width <= 0 || width != 2 * height) {
    throw Error("marker image must be 2:1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
  Image img(width, height, channels, 0);
  const Pixel p = equirect_pixel(d, width, height);
  for (int k = 0; k < channels; ++k) img.at(p.col, p.row, k) = 255;
  return img;
}

}  // namespace seld
