#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "seld/angles.hpp"
#include "seld/foa_io.hpp"
#include "seld/image.hpp"

namespace seld {

enum class SignalKind {
  white_noise,  // Gaussian, amplitude = standard deviation
  speech_like,  // white noise gated by sin^2(2 pi 2 t): 4 bursts per second
  tone,         // amplitude * sin(2 pi f t)
  impulse,      // single sample of height amplitude at impulse_time_s
};

struct SignalSpec {
  SignalKind kind = SignalKind::white_noise;
  std::uint64_t seed = 1;
  double frequency = 1000.0;  // Hz, tone only
  double amplitude = 0.1;
  double impulse_time_s = 0.0;
};

// Exponentially decaying noise tail reaching -60 dB after t60 seconds. The
// tail is silent before onset_s. W gets one tail, X, Y and Z get independent
// tails scaled by 1/sqrt(3), and all four are scaled together so that the
// W direct-to-reverberant energy ratio equals drr_db.
struct ReverbSpec {
  double t60 = 0.5;
  double drr_db = 0.0;
  std::uint64_t seed = 2;
  double onset_s = 0.05;
};

struct SourceSpec {
  Direction direction;
  double distance = 1.0;  // meters; labels only, no propagation loss
  SignalSpec signal;
  std::optional<ReverbSpec> reverb;

  void validate() const;
};

std::vector<double> synth_signal(const SignalSpec& spec, std::size_t num_samples, int sample_rate);

// Plane-wave gains (W, Y, Z, X) = (1, sin az cos el, sin el, cos az cos el).
std::array<double, 4> plane_wave_gains(Direction d);

struct SynthesizedSource {
  FoaClip mixture;
  FoaClip direct;
  FoaClip reverb;  // zeros when the spec has no reverb
};

SynthesizedSource synthesize_source(const SourceSpec& spec, double duration_s,
                                    int sample_rate = kPipelineSampleRate);
FoaClip plane_wave_foa(const SourceSpec& spec, double duration_s, int sample_rate = kPipelineSampleRate);

// Sample-wise sum of equally long clips.
FoaClip mix_clips(const std::vector<FoaClip>& clips);

// Black image with one white pixel at equirect_pixel(d).
Image marker_image(int width, int height, Direction d, int channels = 3);

}  // namespace seld
