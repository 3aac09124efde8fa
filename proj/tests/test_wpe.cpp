#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <utility>

#include "seld/error.hpp"
#include "seld/parallel.hpp"
#include "seld/reference.hpp"
#include "seld/synth.hpp"
#include "seld/wpe.hpp"
#include "support.hpp"

using namespace seld;
using cd = std::complex<double>;

namespace {

std::vector<cd> random_bin(std::size_t n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<cd> x(n);
  // AR(1) so that the delayed regressors carry information.
  cd prev = 0.0;
  for (cd& v : x) {
    prev = 0.8 * prev + cd(dist(rng), dist(rng));
    v = prev;
  }
  return x;
}

double energy(std::span<const float> x) {
  double e = 0.0;
  for (float v : x) e += static_cast<double>(v) * v;
  return e;
}

}  // namespace

TEST_CASE("zero iterations leave the signal unchanged") {
  const auto sig = test::random_signal(24000, 3, 0.5);
  const std::vector<float> omni(sig.begin(), sig.end());
  WpeConfig cfg;
  cfg.iterations = 0;
  const DirectReverbSplit split = wpe_direct(omni, cfg);
  CHECK(test::max_abs_diff(split.direct, omni) < 1e-6);
  for (double r : split.reverb) CHECK(std::abs(r) < 1e-6);
}

TEST_CASE("reverb plus direct reproduces the input bit for bit") {
  SourceSpec spec;
  spec.signal.kind = SignalKind::speech_like;
  spec.reverb = ReverbSpec{};
  const FoaClip clip = plane_wave_foa(spec, 2.0);
  const auto omni = clip.channel(FoaChannel::W);
  const DirectReverbSplit split = wpe_direct(omni, {});
  REQUIRE(split.direct.size() == omni.size());
  for (std::size_t i = 0; i < omni.size(); ++i) {
    CHECK(split.reverb[i] + split.direct[i] == static_cast<double>(omni[i]));
    CHECK(static_cast<double>(static_cast<float>(split.direct[i])) == split.direct[i]);
  }
}

TEST_CASE("signals that are not a hop multiple are padded and trimmed") {
  const auto sig = test::random_signal(10007, 8, 0.1);
  const std::vector<float> omni(sig.begin(), sig.end());
  WpeConfig cfg;
  cfg.iterations = 0;
  const DirectReverbSplit split = wpe_direct(omni, cfg);
  CHECK(split.direct.size() == omni.size());
  CHECK(test::max_abs_diff(split.direct, omni) < 1e-6);
}

TEST_CASE("anechoic speech-like bursts keep most energy in the direct part") {
  SourceSpec spec;
  spec.signal.kind = SignalKind::speech_like;
  const FoaClip clip = plane_wave_foa(spec, 3.0);
  const auto omni = clip.channel(FoaChannel::W);
  const DirectReverbSplit split = wpe_direct(omni, {});
  double reverb = 0.0;
  for (double r : split.reverb) reverb += r * r;
  CHECK(reverb < 0.05 * energy(omni));
}

TEST_CASE("wpe objective does not increase across iterations") {
  WpeConfig cfg;
  cfg.taps = 6;
  cfg.delay = 2;
  cfg.iterations = 8;
  cfg.regularization = 0.0;
  for (std::uint32_t seed = 1; seed <= 10; ++seed) {
    WpeBinTrace trace;
    wpe_bin(random_bin(200, seed), cfg, &trace);
    REQUIRE(trace.objective.size() == 9);
    for (std::size_t k = 1; k < trace.objective.size(); ++k) {
      CHECK(trace.objective[k] <= trace.objective[k - 1] + 1e-9 * std::abs(trace.objective[k - 1]));
    }
  }
}

TEST_CASE("wpe agrees with the serial reference") {
  WpeConfig cfg;
  cfg.taps = 12;
  cfg.delay = 3;
  // The 1/|d|^2 reweighting amplifies rounding differences with each pass.
  for (const auto& [iterations, tolerance] : {std::pair{1, 1e-12}, std::pair{2, 1e-11}, std::pair{5, 1e-5}}) {
    cfg.iterations = iterations;
    double worst = 0.0;
    for (std::uint32_t seed = 1; seed <= 5; ++seed) {
      const auto x = random_bin(160, seed);
      WpeBinTrace fast_trace, slow_trace;
      const auto fast = wpe_bin(x, cfg, &fast_trace);
      const auto slow = reference::wpe_bin(x, cfg, &slow_trace);
      double scale = 0.0, diff = 0.0;
      for (std::size_t t = 0; t < x.size(); ++t) {
        scale = std::max(scale, std::abs(slow[t]));
        diff = std::max(diff, std::abs(fast[t] - slow[t]));
      }
      worst = std::max(worst, diff / scale);
      REQUIRE(fast_trace.objective.size() == slow_trace.objective.size());
      for (std::size_t k = 0; k < fast_trace.objective.size(); ++k) {
        CHECK(fast_trace.objective[k] == doctest::Approx(slow_trace.objective[k]).epsilon(tolerance));
      }
    }
    CHECK(worst < tolerance);
  }
}

TEST_CASE("wpe_spectrum does not depend on the thread count") {
  SourceSpec spec;
  spec.reverb = ReverbSpec{};
  const FoaClip clip = plane_wave_foa(spec, 1.5);
  const StftTensor s = stft(clip);
  const int previous = max_threads();
  set_max_threads(1);
  const StftTensor a = wpe_spectrum(s, {});
  set_max_threads(3);
  const StftTensor b = wpe_spectrum(s, {});
  set_max_threads(previous);
  CHECK(a.bins == b.bins);
}

TEST_CASE("wpe input validation") {
  const std::vector<float> short_signal(9000, 0.1f);
  CHECK_THROWS_WITH_AS(wpe_direct(short_signal, {}), doctest::Contains("too short"), Error);
  std::vector<float> bad(24000, 0.1f);
  bad[100] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_WITH_AS(wpe_direct(bad, {}), doctest::Contains("non-finite"), Error);
  WpeConfig cfg;
  cfg.taps = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("silent input stays silent") {
  const std::vector<float> zeros(24000, 0.0f);
  const DirectReverbSplit split = wpe_direct(zeros, {});
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    CHECK(split.direct[i] == 0.0);
    CHECK(split.reverb[i] == 0.0);
  }
}
