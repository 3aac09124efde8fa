#pragma once

// Serial, library-free versions of the parallel kernels. Slow on purpose:
// they exist to cross-check the optimized code and as benchmark baselines.

#include <complex>
#include <span>
#include <vector>

#include "seld/features.hpp"
#include "seld/image.hpp"
#include "seld/mel.hpp"
#include "seld/stft.hpp"
#include "seld/wpe.hpp"

namespace seld::reference {

// Direct DFT of every windowed frame.
StftTensor stft(std::span<const std::span<const double>> channels, const StftConfig& config = {});
StftTensor stft(const FoaClip& clip, const StftConfig& config = {});

Tensor3d logmel(const StftTensor& spectrum, const MelFilterbank& fb);
Tensor3d intensity_vectors(const StftTensor& foa_spectrum, const MelFilterbank& fb);

// Normal equations accumulated with plain loops, solved by a hand-written
// complex Cholesky factorisation.
std::vector<std::complex<double>> wpe_bin(std::span<const std::complex<double>> observation,
                                          const WpeConfig& config, WpeBinTrace* trace = nullptr);
StftTensor wpe_spectrum(const StftTensor& observation, const WpeConfig& config);

Image equirect_to_cubemap(const Image& equirect, int face_size);

}  // namespace seld::reference
