#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "seld/augment.hpp"
#include "seld/error.hpp"
#include "seld/synth.hpp"

using namespace seld;

namespace {

double energy(std::span<const float> x) {
  double e = 0.0;
  for (float v : x) e += static_cast<double>(v) * v;
  return e;
}

}  // namespace

TEST_CASE("plane-wave gains on the axes") {
  auto g = plane_wave_gains({0.0, 0.0});
  CHECK(g == std::array<double, 4>{1.0, 0.0, 0.0, 1.0});
  g = plane_wave_gains({90.0, 0.0});
  CHECK(g == std::array<double, 4>{1.0, 1.0, 0.0, 0.0});
  g = plane_wave_gains({0.0, 90.0});
  CHECK(g == std::array<double, 4>{1.0, 0.0, 1.0, 0.0});
  g = plane_wave_gains({-90.0, 0.0});
  CHECK(g[1] == -1.0);
}

TEST_CASE("directional energy equals omni energy") {
  for (double az = -180.0; az < 180.0; az += 37.0) {
    for (double el = -80.0; el <= 80.0; el += 40.0) {
      const auto g = plane_wave_gains({az, el});
      CHECK(g[1] * g[1] + g[2] * g[2] + g[3] * g[3] == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("signals are reproducible from the seed") {
  SignalSpec spec;
  const auto a = synth_signal(spec, 1000, 24000);
  const auto b = synth_signal(spec, 1000, 24000);
  CHECK(a == b);
  spec.seed = 2;
  CHECK(synth_signal(spec, 1000, 24000) != a);
  spec.kind = SignalKind::impulse;
  spec.impulse_time_s = 0.01;
  const auto imp = synth_signal(spec, 1000, 24000);
  CHECK(imp[240] == 0.1);
  CHECK(std::count(imp.begin(), imp.end(), 0.0) == 999);
  spec.kind = SignalKind::tone;
  spec.frequency = 6000.0;
  const auto tone = synth_signal(spec, 8, 24000);
  CHECK(tone[1] == doctest::Approx(0.1));
  CHECK(tone[2] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("speech-like bursts are gated") {
  SignalSpec spec;
  spec.kind = SignalKind::speech_like;
  const auto x = synth_signal(spec, 24000, 24000);
  CHECK(x[0] == 0.0);
  CHECK(std::abs(x[3000]) == doctest::Approx(std::abs(synth_signal({}, 24000, 24000)[3000])));
}

TEST_CASE("source synthesis splits direct and reverberant parts") {
  SourceSpec spec;
  spec.direction = {30.0, 10.0};
  spec.reverb = ReverbSpec{};
  spec.reverb->drr_db = 6.0;
  const SynthesizedSource s = synthesize_source(spec, 1.0);
  CHECK(s.mixture.num_samples() == 24000);
  const double drr = 10.0 * std::log10(energy(s.direct.channel(FoaChannel::W)) / energy(s.reverb.channel(FoaChannel::W)));
  CHECK(drr == doctest::Approx(6.0).epsilon(1e-4));
  for (std::size_t i = 0; i < 1200; ++i) CHECK(std::abs(s.reverb.channels[0][i]) < 1e-12);
  const auto g = plane_wave_gains(spec.direction);
  for (std::size_t i = 0; i < 24000; i += 997) {
    CHECK(s.direct.channels[3][i] == doctest::Approx(g[3] * s.direct.channels[0][i]).epsilon(1e-6));
  }
  SourceSpec dry;
  const SynthesizedSource d = synthesize_source(dry, 0.5);
  CHECK(energy(d.reverb.channel(FoaChannel::W)) == 0.0);
  CHECK(d.mixture.channels == d.direct.channels);
}

TEST_CASE("source validation and mixing") {
  SourceSpec spec;
  spec.distance = 0.0;
  CHECK_THROWS_AS(synthesize_source(spec, 1.0), Error);
  spec = {};
  spec.reverb = ReverbSpec{};
  spec.reverb->onset_s = 1.0;
  CHECK_THROWS_AS(synthesize_source(spec, 1.0), Error);
  const FoaClip a = plane_wave_foa({}, 0.1);
  const FoaClip sum = mix_clips({a, a});
  CHECK(sum.channels[0][5] == 2.0f * a.channels[0][5]);
  CHECK_THROWS_AS(mix_clips({a, plane_wave_foa({}, 0.2)}), Error);
}

TEST_CASE("marker image has one lit pixel") {
  const Image img = marker_image(360, 180, {30.0, 10.0});
  const Pixel p = equirect_pixel({30.0, 10.0}, 360, 180);
  long lit = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) lit += img.at(x, y) != 0;
  }
  CHECK(lit == 1);
  CHECK(img.at(p.col, p.row, 0) == 255);
  CHECK(img.at(p.col, p.row, 2) == 255);
  CHECK_THROWS_AS(marker_image(300, 100, {}), Error);
}
