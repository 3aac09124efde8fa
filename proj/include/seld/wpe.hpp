#pragma once

#include <complex>
#include <span>
#include <vector>

#include "seld/stft.hpp"

namespace seld {

struct WpeConfig {
  int taps = 60;
  int delay = 5;        // frames
  int iterations = 5;
  double epsilon = 1e-10;  // floor on the per-bin variance estimate
  // Diagonal loading relative to the mean diagonal of the weighted
  // correlation matrix. Keeps silent or rank-deficient bins solvable.
  double regularization = 1e-10;

  void validate() const;
};

// Per-iteration trace of one frequency bin, used to check convergence.
struct WpeBinTrace {
  // objective[k] = sum_t |d_k(t)|^2 / lambda_k(t) + log lambda_k(t) with
  // lambda_k = max(|d_k|^2, eps), where d_0 is the observation.
  std::vector<double> objective;
};

// Single-channel weighted prediction error on one frequency bin:
//   d = X; repeat: lambda = max(|d|^2, eps);
//   solve (sum x~ x~^H / lambda + delta I) g = sum x~ conj(X) / lambda;
//   d = X - g^H x~
// with x~(t) = [X(t - delay), ..., X(t - delay - taps + 1)] (zero before t = 0).
std::vector<std::complex<double>> wpe_bin(std::span<const std::complex<double>> observation,
                                          const WpeConfig& config, WpeBinTrace* trace = nullptr);

// Applies wpe_bin to every frequency bin of channel 0, in parallel over bins.
StftTensor wpe_spectrum(const StftTensor& observation, const WpeConfig& config);

struct DirectReverbSplit {
  // Dereverberated omni signal, rounded to float precision.
  std::vector<double> direct;
  // omni - direct, computed exactly so that reverb + direct == omni holds
  // bit for bit in double precision.
  std::vector<double> reverb;
};

// WPE on the omni channel followed by the inverse STFT. Requires at least
// (taps + delay + 1) * hop finite samples. Signals whose length
// is not a hop multiple are zero-padded internally and trimmed afterwards.
DirectReverbSplit wpe_direct(std::span<const float> omni, const WpeConfig& config,
                             const StftConfig& stft_config = {});

}  // namespace seld
