#include "seld/features.hpp"

#include <cmath>
#include <vector>

#include "seld/error.hpp"

namespace seld {

namespace {

void check_filterbank(const StftTensor& spectrum, const MelFilterbank& fb) {
  if (spectrum.num_bins() != static_cast<std::size_t>(fb.num_fft_bins())) {
    throw Error("filterbank expects " + std::to_string(fb.num_fft_bins()) + " FFT bins, spectrum has " +
                std::to_string(spectrum.num_bins()));
  }
}

}  // namespace

Tensor3d logmel(const StftTensor& spectrum, const MelFilterbank& fb) {
  check_filterbank(spectrum, fb);
  const std::size_t channels = spectrum.channels(), frames = spectrum.frames();
  const std::size_t bins = spectrum.num_bins();
  Tensor3d out(channels, frames, static_cast<std::size_t>(fb.num_bands()));
  const long total = static_cast<long>(channels * frames);

#pragma omp parallel
  {
    std::vector<double> power(bins);
#pragma omp for schedule(static)
    for (long job = 0; job < total; ++job) {
      const std::size_t c = static_cast<std::size_t>(job) / frames;
      const std::size_t t = static_cast<std::size_t>(job) % frames;
      const auto row = spectrum.bins.row(c, t);
      for (std::size_t k = 0; k < bins; ++k) power[k] = std::norm(row[k]);
      auto dst = out.row(c, t);
      fb.apply(power, dst);
      for (double& v : dst) v = 10.0 * std::log10(std::max(v, kLogMelFloor));
    }
  }
  return out;
}

Tensor3d intensity_vectors(const StftTensor& foa_spectrum, const MelFilterbank& fb) {
  if (foa_spectrum.channels() != 4) {
    throw Error("intensity vectors need a 4-channel FOA spectrum, got " +
                std::to_string(foa_spectrum.channels()) + " channels");
  }
  check_filterbank(foa_spectrum, fb);
  constexpr auto W = static_cast<std::size_t>(FoaChannel::W);
  constexpr auto Y = static_cast<std::size_t>(FoaChannel::Y);
  constexpr auto Z = static_cast<std::size_t>(FoaChannel::Z);
  constexpr auto X = static_cast<std::size_t>(FoaChannel::X);
  const std::size_t frames = foa_spectrum.frames(), bins = foa_spectrum.num_bins();
  const auto bands = static_cast<std::size_t>(fb.num_bands());
  Tensor3d out(3, frames, bands);

#pragma omp parallel
  {
    std::vector<double> ix(bins), iy(bins), iz(bins), mx(bands), my(bands), mz(bands);
#pragma omp for schedule(static)
    for (long tl = 0; tl < static_cast<long>(frames); ++tl) {
      const auto t = static_cast<std::size_t>(tl);
      const auto w = foa_spectrum.bins.row(W, t);
      const auto x = foa_spectrum.bins.row(X, t);
      const auto y = foa_spectrum.bins.row(Y, t);
      const auto z = foa_spectrum.bins.row(Z, t);
      for (std::size_t k = 0; k < bins; ++k) {
        const auto cw = std::conj(w[k]);
        ix[k] = (cw * x[k]).real();
        iy[k] = (cw * y[k]).real();
        iz[k] = (cw * z[k]).real();
      }
      fb.apply(ix, mx);
      fb.apply(iy, my);
      fb.apply(iz, mz);
      for (std::size_t m = 0; m < bands; ++m) {
        const double scale = 1.0 / (std::sqrt(mx[m] * mx[m] + my[m] * my[m] + mz[m] * mz[m]) + kIntensityEpsilon);
        out(0, t, m) = mx[m] * scale;
        out(1, t, m) = my[m] * scale;
        out(2, t, m) = mz[m] * scale;
      }
    }
  }
  return out;
}

FeatureStack build_feature_stack(const FoaClip& clip, bool with_dr, const FeatureConfig& config) {
  clip.validate();
  if (config.stft.sample_rate != clip.sample_rate) throw Error("feature config sample rate differs from clip");
  const StftTensor spectrum = stft(clip, config.stft);
  const MelFilterbank fb = mel_filterbank(config.f_min, config.f_max, config.stft, config.mel_bands);
  const Tensor3d mels = logmel(spectrum, fb);
  const Tensor3d iv = intensity_vectors(spectrum, fb);

  Tensor3d dr;
  if (with_dr) {
    const DirectReverbSplit split = wpe_direct(clip.channel(FoaChannel::W), config.wpe, config.stft);
    const std::span<const double> parts[] = {split.direct, split.reverb};
    dr = logmel(stft(std::span<const std::span<const double>>(parts), config.stft), fb);
  }

  const std::size_t frames = spectrum.frames();
  const auto bands = static_cast<std::size_t>(fb.num_bands());
  FeatureStack stack;
  stack.kind = with_dr ? FeatureKind::with_dr9 : FeatureKind::base7;
  stack.data = Tensor3f(with_dr ? 9 : 7, frames, bands);
  auto copy_channels = [&](const Tensor3d& src, std::size_t offset) {
    for (std::size_t c = 0; c < src.channels(); ++c) {
      for (std::size_t t = 0; t < frames; ++t) {
        for (std::size_t m = 0; m < bands; ++m) stack.data(offset + c, t, m) = static_cast<float>(src(c, t, m));
      }
    }
  };
  copy_channels(mels, 0);
  copy_channels(iv, 4);
  if (with_dr) copy_channels(dr, 7);
  return stack;
}

}  // namespace seld
