#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "seld/error.hpp"
#include "seld/features.hpp"
#include "seld/parallel.hpp"
#include "seld/reference.hpp"
#include "seld/synth.hpp"
#include "support.hpp"

using namespace seld;
using cd = std::complex<double>;

namespace {

// One windowed frame of the centre-padded signal, transformed by the
// textbook DFT sum.
std::vector<cd> dft_oracle(const std::vector<double>& x, std::size_t frame, int win, int hop) {
  const long n = static_cast<long>(x.size());
  std::vector<cd> out(static_cast<std::size_t>(win / 2 + 1));
  for (std::size_t f = 0; f < out.size(); ++f) {
    cd acc = 0.0;
    for (int k = 0; k < win; ++k) {
      long i = static_cast<long>(frame) * hop - win / 2 + k;
      if (i < 0) i = -i;
      if (i >= n) i = 2 * (n - 1) - i;
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / win);
      acc += x[static_cast<std::size_t>(i)] * w * std::polar(1.0, -2.0 * std::numbers::pi * f * k / win);
    }
    out[f] = acc;
  }
  return out;
}

FoaClip noise_plane_wave(Direction d, double seconds, std::uint64_t seed = 7) {
  SourceSpec spec;
  spec.direction = d;
  spec.signal.seed = seed;
  return plane_wave_foa(spec, seconds);
}

}  // namespace

TEST_CASE("stft frame and bin counts") {
  const std::vector<double> x(72000, 0.0);
  const StftTensor s = stft(std::span<const double>(x));
  CHECK(s.frames() == 480);
  CHECK(s.num_bins() == 257);
  for (const cd& v : s.bins.data()) CHECK(v == cd(0.0));
  const std::vector<double> short_signal(511, 0.0);
  CHECK_THROWS_AS(stft(std::span<const double>(short_signal)), Error);
}

TEST_CASE("stft of a 1 kHz sine peaks at bin 21 and matches a direct DFT") {
  std::vector<double> x(24000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * 1000.0 * i / 24000.0);
  const StftTensor s = stft(std::span<const double>(x));
  for (std::size_t t = 4; t + 4 < s.frames(); ++t) {
    const auto row = s.bins.row(0, t);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (std::abs(row[k]) > std::abs(row[peak])) peak = k;
    }
    CHECK(peak == 21);
  }
  const auto oracle = dft_oracle(x, 80, 512, 150);
  for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(std::abs(s.bins(0, 80, k) - oracle[k]) < 1e-9);
  const auto edge = dft_oracle(x, 0, 512, 150);
  for (std::size_t k = 0; k < edge.size(); ++k) CHECK(std::abs(s.bins(0, 0, k) - edge[k]) < 1e-9);
}

TEST_CASE("istft reconstructs random signals") {
  const auto x = test::random_signal(72000, 42);
  const StftTensor s = stft(std::span<const double>(x));
  const auto y = istft(s, x.size());
  CHECK(test::max_abs_diff(x, y) < 1e-6);
}

TEST_CASE("istft keeps impulse position and silence") {
  std::vector<double> x(72000, 0.0);
  x[36000] = 1.0;
  const auto y = istft(stft(std::span<const double>(x)), x.size());
  std::size_t peak = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (std::abs(y[i]) > std::abs(y[peak])) peak = i;
  }
  CHECK(peak == 36000);
  CHECK(test::max_abs_diff(x, y) < 1e-6);

  const std::vector<double> zeros(3000, 0.0);
  for (double v : istft(stft(std::span<const double>(zeros)), zeros.size())) CHECK(v == 0.0);
  CHECK_THROWS_WITH_AS(istft(stft(std::span<const double>(zeros)), 3300), doctest::Contains("length mismatch"), Error);
}

TEST_CASE("mel scale and filterbank shape") {
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)));
  CHECK(hz_to_mel(700.0) == doctest::Approx(781.17).epsilon(1e-4));
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5));
  const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  CHECK(fb.num_bands() == 128);
  CHECK(fb.num_fft_bins() == 257);
  for (int m = 0; m < fb.num_bands(); ++m) {
    double row = 0.0;
    for (int k = 0; k < fb.num_fft_bins(); ++k) {
      CHECK(fb.weight(m, k) >= 0.0);
      row += fb.weight(m, k);
    }
    CHECK(row > 0.0);
    if (m > 0) CHECK(fb.center_hz(m) > fb.center_hz(m - 1));
  }
  for (int k = 1; k < 256; ++k) {
    double column = 0.0;
    for (int m = 0; m < fb.num_bands(); ++m) column += fb.weight(m, k);
    CHECK(column > 0.0);
  }
  CHECK_THROWS_AS(mel_filterbank(5000.0, 4000.0), Error);
  CHECK_THROWS_AS(mel_filterbank(0.0, 13000.0), Error);
  CHECK_THROWS_AS(mel_filterbank(-1.0, 4000.0), Error);
}

TEST_CASE("logmel floor and amplitude shift") {
  const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  const std::vector<double> zeros(24000, 0.0);
  const Tensor3d silent = logmel(stft(std::span<const double>(zeros)), fb);
  for (double v : silent.data()) CHECK(v == doctest::Approx(-100.0));

  auto x = test::random_signal(24000, 9, 0.1);
  const Tensor3d a = logmel(stft(std::span<const double>(x)), fb);
  for (double s : {2.0, 0.25}) {
    std::vector<double> y(x);
    for (double& v : y) v *= s;
    const Tensor3d b = logmel(stft(std::span<const double>(y)), fb);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a.data()[i] > -90.0) CHECK(b.data()[i] - a.data()[i] == doctest::Approx(20.0 * std::log10(s)).epsilon(1e-9));
    }
  }
}

TEST_CASE("white noise is flat after band-weight normalisation") {
  std::mt19937 rng(123);
  std::normal_distribution<double> dist(0.0, 0.1);
  std::vector<double> x(72000);
  for (double& v : x) v = dist(rng);
  const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  const Tensor3d lm = logmel(stft(std::span<const double>(x)), fb);
  // E|X_k|^2 = sigma^2 sum_n w_n^2 for every bin of real white noise.
  const auto w = hann_window(512);
  double w2 = 0.0;
  for (double v : w) w2 += v * v;
  const double expected = 10.0 * std::log10(0.01 * w2);
  for (int m = 0; m < 128; ++m) {
    double mean_power = 0.0;
    for (std::size_t t = 0; t < lm.frames(); ++t) mean_power += std::pow(10.0, lm(0, t, m) / 10.0);
    mean_power /= static_cast<double>(lm.frames());
    const double flat = 10.0 * std::log10(mean_power / fb.band_weight_sum(m));
    CHECK(std::abs(flat - expected) < 3.0);
  }
}

TEST_CASE("intensity vectors of axis plane waves") {
  const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  struct Case {
    Direction d;
    double ix, iy, iz;
  };
  for (const Case& c : {Case{{0, 0}, 1, 0, 0}, Case{{90, 0}, 0, 1, 0}, Case{{0, 90}, 0, 0, 1}}) {
    const Tensor3d iv = intensity_vectors(stft(noise_plane_wave(c.d, 0.5)), fb);
    for (std::size_t t = 0; t < iv.frames(); ++t) {
      for (std::size_t m = 0; m < iv.bins(); ++m) {
        CHECK(std::abs(iv(0, t, m) - c.ix) < 1e-3);
        CHECK(std::abs(iv(1, t, m) - c.iy) < 1e-3);
        CHECK(std::abs(iv(2, t, m) - c.iz) < 1e-3);
      }
    }
  }
  FoaClip omni = noise_plane_wave({0, 0}, 0.5);
  for (auto ch : {FoaChannel::X, FoaChannel::Y, FoaChannel::Z}) {
    for (float& v : omni.channel(ch)) v = 0.0f;
  }
  const Tensor3d omni_iv = intensity_vectors(stft(omni), fb);
  for (double v : omni_iv.data()) CHECK(v == 0.0);
  const std::vector<double> mono(2400, 0.0);
  CHECK_THROWS_AS(intensity_vectors(stft(std::span<const double>(mono)), fb), Error);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const FoaClip clip = noise_plane_wave({40, -20}, 0.3, 17);
  const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  const StftTensor fast = stft(clip);
  const StftTensor slow = reference::stft(clip);
  REQUIRE(fast.bins.size() == slow.bins.size());
  for (std::size_t i = 0; i < fast.bins.size(); ++i) {
    CHECK(std::abs(fast.bins.data()[i] - slow.bins.data()[i]) < 1e-9);
  }
  const Tensor3d lm = logmel(fast, fb), lm_ref = reference::logmel(fast, fb);
  CHECK(test::max_abs_diff(lm.data(), lm_ref.data()) < 1e-9);
  const Tensor3d iv = intensity_vectors(fast, fb), iv_ref = reference::intensity_vectors(fast, fb);
  CHECK(test::max_abs_diff(iv.data(), iv_ref.data()) < 1e-12);
}

TEST_CASE("feature stack layout and zero clip") {
  const FeatureStack base = build_feature_stack(FoaClip::zeros(72000), false);
  CHECK(base.kind == FeatureKind::base7);
  CHECK(base.data.channels() == 7);
  CHECK(base.data.frames() == 480);
  CHECK(base.data.bins() == 128);
  for (std::size_t c = 0; c < 7; ++c) {
    for (float v : base.data.channel(c)) CHECK(v == (c < 4 ? -100.0f : 0.0f));
  }
  const FoaClip clip = noise_plane_wave({-30, 15}, 3.0);
  const FeatureStack plain = build_feature_stack(clip, false);
  const FeatureStack dr = build_feature_stack(clip, true);
  CHECK(dr.kind == FeatureKind::with_dr9);
  CHECK(dr.data.channels() == 9);
  for (std::size_t c = 0; c < 7; ++c) {
    CHECK(std::equal(plain.data.channel(c).begin(), plain.data.channel(c).end(), dr.data.channel(c).begin()));
  }
  for (float v : dr.data.data()) CHECK(std::isfinite(v));
}

TEST_CASE("feature stack is bit-identical across thread counts") {
  const FoaClip clip = noise_plane_wave({100, 5}, 3.0, 99);
  const int previous = max_threads();
  set_max_threads(1);
  const FeatureStack a = build_feature_stack(clip, true);
  set_max_threads(4);
  const FeatureStack b = build_feature_stack(clip, true);
  set_max_threads(previous);
  CHECK(a.data == b.data);
}
