#pragma once

#include "seld/foa_io.hpp"
#include "seld/mel.hpp"
#include "seld/stft.hpp"
#include "seld/tensor.hpp"
#include "seld/wpe.hpp"

namespace seld {

inline constexpr double kLogMelFloor = 1e-10;
inline constexpr double kIntensityEpsilon = 1e-8;

// 10 log10(max(fb |X|^2, 1e-10)) for every channel: (channels, frames, bands).
Tensor3d logmel(const StftTensor& spectrum, const MelFilterbank& fb);

// Mel-aggregated active intensity Re{conj(W) (X, Y, Z)}, unit-normalised per
// (frame, band) as v / (|v| + 1e-8). Output channels ordered (Ix, Iy, Iz).
Tensor3d intensity_vectors(const StftTensor& foa_spectrum, const MelFilterbank& fb);

enum class FeatureKind { base7, with_dr9 };

// Channel layout: logmel W, Y, Z, X, then IVx, IVy, IVz, then (with_dr9)
// logmel of the WPE direct and reverberant omni signals.
struct FeatureStack {
  FeatureKind kind = FeatureKind::base7;
  Tensor3f data;
};

struct FeatureConfig {
  StftConfig stft;
  double f_min = 0.0;
  double f_max = 12000.0;
  int mel_bands = kMelBands;
  WpeConfig wpe;
};

FeatureStack build_feature_stack(const FoaClip& clip, bool with_dr, const FeatureConfig& config = {});

}  // namespace seld
