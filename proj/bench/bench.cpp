// Serial reference kernels against the OpenMP kernels. The argument of the
// parallel variants is the thread count.

#include <benchmark/benchmark.h>

#include <vector>

#include "seld/features.hpp"
#include "seld/parallel.hpp"
#include "seld/projection.hpp"
#include "seld/reference.hpp"
#include "seld/synth.hpp"
#include "seld/wpe.hpp"

using namespace seld;

namespace {

const FoaClip& clip() {
  static const FoaClip c = [] {
    SourceSpec spec;
    spec.direction = {30.0, 10.0};
    spec.reverb = ReverbSpec{};
    return synthesize_source(spec, 1.0).mixture;
  }();
  return c;
}

const MelFilterbank& filterbank() {
  static const MelFilterbank fb = mel_filterbank(0.0, 12000.0);
  return fb;
}

const StftTensor& omni_spectrum() {
  static const StftTensor s = [] {
    SourceSpec spec;
    spec.signal.kind = SignalKind::speech_like;
    spec.reverb = ReverbSpec{};
    const SynthesizedSource source = synthesize_source(spec, 3.0);
    const auto omni = source.mixture.channel(FoaChannel::W);
    const std::vector<double> x(omni.begin(), omni.end());
    return stft(std::span<const double>(x));
  }();
  return s;
}

const Image& panorama() {
  static const Image img = [] {
    Image p(896, 448, 3);
    for (int y = 0; y < p.height; ++y) {
      for (int x = 0; x < p.width; ++x) {
        for (int k = 0; k < 3; ++k) p.at(x, y, k) = static_cast<std::uint8_t>((x * 7 + y * 3 + k * 50) % 256);
      }
    }
    return p;
  }();
  return img;
}

void with_threads(benchmark::State& state) { set_max_threads(static_cast<int>(state.range(0))); }

void BM_StftReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::stft(clip()));
}

void BM_Stft(benchmark::State& state) {
  with_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(stft(clip()));
}

void BM_LogmelReference(benchmark::State& state) {
  const StftTensor s = stft(clip());
  for (auto _ : state) benchmark::DoNotOptimize(reference::logmel(s, filterbank()));
}

void BM_Logmel(benchmark::State& state) {
  with_threads(state);
  const StftTensor s = stft(clip());
  for (auto _ : state) benchmark::DoNotOptimize(logmel(s, filterbank()));
}

void BM_WpeReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::wpe_spectrum(omni_spectrum(), {}));
}

void BM_Wpe(benchmark::State& state) {
  with_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(wpe_spectrum(omni_spectrum(), {}));
}

void BM_CubemapReference(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::equirect_to_cubemap(panorama(), kDefaultFaceSize));
}

void BM_Cubemap(benchmark::State& state) {
  with_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(equirect_to_cubemap(panorama(), kDefaultFaceSize));
}

}  // namespace

BENCHMARK(BM_StftReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Stft)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogmelReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Logmel)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WpeReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Wpe)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CubemapReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Cubemap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
