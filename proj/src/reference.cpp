#include "seld/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seld/error.hpp"
#include "seld/projection.hpp"

namespace seld::reference {

using cd = std::complex<double>;

StftTensor stft(std::span<const std::span<const double>> channels, const StftConfig& config) {
  config.validate();
  const std::size_t n = channels[0].size();
  const auto win = static_cast<std::size_t>(config.win_len);
  if (n < win) throw Error("stft: clip too short");
  const std::size_t frames = config.num_frames(n);
  const auto bins = static_cast<std::size_t>(config.num_bins());
  const auto window = hann_window(config.win_len);
  const long half = config.win_len / 2;
  const long len = static_cast<long>(n);
  StftTensor out{config, Tensor3<cd>(channels.size(), frames, bins)};
  std::vector<double> frame(win);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    for (std::size_t t = 0; t < frames; ++t) {
      for (std::size_t k = 0; k < win; ++k) {
        long i = static_cast<long>(t) * config.hop - half + static_cast<long>(k);
        if (i < 0) i = -i;
        if (i >= len) i = 2 * (len - 1) - i;
        frame[k] = channels[c][static_cast<std::size_t>(i)] * window[k];
      }
      for (std::size_t f = 0; f < bins; ++f) {
        cd acc = 0.0;
        for (std::size_t k = 0; k < win; ++k) {
          // Reduce the phase index first so the angle stays small and exact.
          const std::size_t idx = (f * k) % win;
          const double angle = -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(win);
          acc += frame[k] * cd(std::cos(angle), std::sin(angle));
        }
        out.bins(c, t, f) = acc;
      }
    }
  }
  return out;
}

StftTensor stft(const FoaClip& clip, const StftConfig& config) {
  std::vector<std::vector<double>> data;
  for (const auto& ch : clip.channels) data.emplace_back(ch.begin(), ch.end());
  std::vector<std::span<const double>> spans(data.begin(), data.end());
  return reference::stft(std::span<const std::span<const double>>(spans), config);
}

Tensor3d logmel(const StftTensor& spectrum, const MelFilterbank& fb) {
  const auto bands = static_cast<std::size_t>(fb.num_bands());
  Tensor3d out(spectrum.channels(), spectrum.frames(), bands);
  for (std::size_t c = 0; c < spectrum.channels(); ++c) {
    for (std::size_t t = 0; t < spectrum.frames(); ++t) {
      for (std::size_t m = 0; m < bands; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < spectrum.num_bins(); ++k) {
          acc += fb.weight(static_cast<int>(m), static_cast<int>(k)) * std::norm(spectrum.bins(c, t, k));
        }
        out(c, t, m) = 10.0 * std::log10(std::max(acc, kLogMelFloor));
      }
    }
  }
  return out;
}

Tensor3d intensity_vectors(const StftTensor& s, const MelFilterbank& fb) {
  if (s.channels() != 4) throw Error("intensity vectors need a 4-channel FOA spectrum");
  const auto bands = static_cast<std::size_t>(fb.num_bands());
  Tensor3d out(3, s.frames(), bands);
  const std::size_t w = 0, y = 1, z = 2, x = 3;
  for (std::size_t t = 0; t < s.frames(); ++t) {
    for (std::size_t m = 0; m < bands; ++m) {
      double v[3] = {0.0, 0.0, 0.0};
      for (std::size_t k = 0; k < s.num_bins(); ++k) {
        const double g = fb.weight(static_cast<int>(m), static_cast<int>(k));
        const cd cw = std::conj(s.bins(w, t, k));
        v[0] += g * (cw * s.bins(x, t, k)).real();
        v[1] += g * (cw * s.bins(y, t, k)).real();
        v[2] += g * (cw * s.bins(z, t, k)).real();
      }
      const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) + kIntensityEpsilon;
      for (std::size_t i = 0; i < 3; ++i) out(i, t, m) = v[i] / len;
    }
  }
  return out;
}

namespace {

// In-place lower Cholesky of a Hermitian positive definite matrix (row-major
// n x n). Returns false when a pivot is not positive.
bool cholesky(std::vector<cd>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j].real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(a[j * n + k]);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cd s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * std::conj(a[j * n + k]);
      a[i * n + j] = s / ljj;
    }
  }
  return true;
}

// Solves L L^H x = b.
std::vector<cd> cholesky_solve(const std::vector<cd>& l, std::size_t n, std::vector<cd> b) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l[i * n + k] * b[k];
    b[i] /= l[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= std::conj(l[k * n + i]) * b[k];
    b[i] /= std::conj(l[i * n + i]);
  }
  return b;
}

double objective(const std::vector<cd>& d, double eps) {
  double sum = 0.0;
  for (const cd& v : d) {
    const double lambda = std::max(std::norm(v), eps);
    sum += std::norm(v) / lambda + std::log(lambda);
  }
  return sum;
}

}  // namespace

std::vector<cd> wpe_bin(std::span<const cd> x, const WpeConfig& config, WpeBinTrace* trace) {
  config.validate();
  const std::size_t T = x.size();
  const auto K = static_cast<std::size_t>(config.taps);
  const auto D = static_cast<std::size_t>(config.delay);
  auto tilde = [&](std::size_t i, std::size_t t) -> cd {
    return t >= D + i ? x[t - D - i] : cd(0.0);
  };
  std::vector<cd> d(x.begin(), x.end());
  if (trace) trace->objective = {objective(d, config.epsilon)};
  for (int iter = 0; iter < config.iterations; ++iter) {
    std::vector<double> inv_lambda(T);
    for (std::size_t t = 0; t < T; ++t) inv_lambda[t] = 1.0 / std::max(std::norm(d[t]), config.epsilon);
    std::vector<cd> r(K * K, 0.0), p(K, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < K; ++i) {
        const cd xi = tilde(i, t);
        p[i] += xi * std::conj(x[t]) * inv_lambda[t];
        for (std::size_t j = 0; j <= i; ++j) r[i * K + j] += xi * std::conj(tilde(j, t)) * inv_lambda[t];
      }
    }
    double trace_r = 0.0;
    for (std::size_t i = 0; i < K; ++i) trace_r += r[i * K + i].real();
    const double delta = config.regularization * trace_r / static_cast<double>(K);
    for (std::size_t i = 0; i < K; ++i) r[i * K + i] += delta;
    if (!cholesky(r, K)) break;
    const std::vector<cd> g = cholesky_solve(r, K, p);
    for (std::size_t t = 0; t < T; ++t) {
      cd pred = 0.0;
      for (std::size_t i = 0; i < K; ++i) pred += std::conj(g[i]) * tilde(i, t);
      d[t] = x[t] - pred;
    }
    if (trace) trace->objective.push_back(objective(d, config.epsilon));
  }
  return d;
}

StftTensor wpe_spectrum(const StftTensor& observation, const WpeConfig& config) {
  const std::size_t frames = observation.frames(), bins = observation.num_bins();
  StftTensor out{observation.config, Tensor3<cd>(1, frames, bins)};
  std::vector<cd> column(frames);
  for (std::size_t f = 0; f < bins; ++f) {
    for (std::size_t t = 0; t < frames; ++t) column[t] = observation.bins(0, t, f);
    const auto d = reference::wpe_bin(column, config);
    for (std::size_t t = 0; t < frames; ++t) out.bins(0, t, f) = d[t];
  }
  return out;
}

Image equirect_to_cubemap(const Image& src, int face_size) {
  if (src.width != 2 * src.height) throw Error("equirectangular frame must be 2:1");
  const int w = src.width, h = src.height;
  Image out(kNumHorizontalFaces * face_size, face_size, src.channels);
  for (int f = 0; f < kNumHorizontalFaces; ++f) {
    for (int j = 0; j < face_size; ++j) {
      for (int i = 0; i < face_size; ++i) {
        const Direction d = cubemap_to_dir(static_cast<CubeFace>(f), (i + 0.5) / face_size, (j + 0.5) / face_size);
        const double x = (180.0 - d.azimuth) * w / 360.0 - 0.5;
        const double y = (90.0 - d.elevation) * h / 180.0 - 0.5;
        const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
        const double ax = x - x0, ay = y - y0;
        const int xa = ((x0 % w) + w) % w, xb = ((x0 + 1) % w + w) % w;
        const int ya = std::clamp(y0, 0, h - 1), yb = std::clamp(y0 + 1, 0, h - 1);
        for (int k = 0; k < src.channels; ++k) {
          const double v = (1 - ay) * ((1 - ax) * src.at(xa, ya, k) + ax * src.at(xb, ya, k)) +
                           ay * ((1 - ax) * src.at(xa, yb, k) + ax * src.at(xb, yb, k));
          out.at(f * face_size + i, j, k) = static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
        }
      }
    }
  }
  return out;
}

}  // namespace seld::reference
