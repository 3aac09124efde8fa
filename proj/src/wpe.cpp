#include "seld/wpe.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>

#include "seld/error.hpp"

namespace seld {

using cd = std::complex<double>;

void WpeConfig::validate() const {
  if (taps < 1) throw Error("wpe.taps must be >= 1");
  if (delay < 1) throw Error("wpe.delay must be >= 1");
  if (iterations < 0) throw Error("wpe.iterations must be >= 0");
  if (!(epsilon > 0.0)) throw Error("wpe.epsilon must be > 0");
  if (!(regularization >= 0.0)) throw Error("wpe.regularization must be >= 0");
}

namespace {

double objective(std::span<const cd> d, double eps) {
  double sum = 0.0;
  for (const cd& v : d) {
    const double p = std::norm(v);
    const double lambda = std::max(p, eps);
    sum += p / lambda + std::log(lambda);
  }
  return sum;
}

}  // namespace

std::vector<cd> wpe_bin(std::span<const cd> observation, const WpeConfig& config, WpeBinTrace* trace) {
  config.validate();
  const Eigen::Index T = static_cast<Eigen::Index>(observation.size());
  const Eigen::Index K = config.taps;
  const Eigen::Index D = config.delay;

  // Column t holds the delayed observation window x~(t).
  Eigen::MatrixXcd tilde = Eigen::MatrixXcd::Zero(K, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < K; ++i) {
      const Eigen::Index s = t - D - i;
      if (s >= 0) tilde(i, t) = observation[static_cast<std::size_t>(s)];
    }
  }
  const Eigen::Map<const Eigen::VectorXcd> x(observation.data(), T);

  std::vector<cd> d(observation.begin(), observation.end());
  if (trace) {
    trace->objective.clear();
    trace->objective.push_back(objective(d, config.epsilon));
  }

  Eigen::MatrixXcd weighted(K, T);
  Eigen::MatrixXcd R(K, K);
  Eigen::VectorXcd p(K);
  for (int iter = 0; iter < config.iterations; ++iter) {
    Eigen::VectorXd inv_lambda(T);
    for (Eigen::Index t = 0; t < T; ++t) {
      inv_lambda(t) = 1.0 / std::max(std::norm(d[static_cast<std::size_t>(t)]), config.epsilon);
    }
    weighted = tilde * inv_lambda.asDiagonal();
    R.setZero();
    R.selfadjointView<Eigen::Lower>().rankUpdate(tilde * inv_lambda.cwiseSqrt().asDiagonal());
    p = weighted * x.conjugate();

    const double delta = config.regularization * R.diagonal().real().sum() / static_cast<double>(K);
    R.diagonal().array() += delta;
    Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> llt(R);
    if (llt.info() != Eigen::Success) {
      // Silent bin: no prediction is possible, leave the observation unchanged.
      break;
    }
    const Eigen::VectorXcd g = llt.solve(p);
    const Eigen::VectorXcd prediction = tilde.transpose() * g.conjugate();
    for (Eigen::Index t = 0; t < T; ++t) d[static_cast<std::size_t>(t)] = x(t) - prediction(t);
    if (trace) trace->objective.push_back(objective(d, config.epsilon));
  }
  return d;
}

StftTensor wpe_spectrum(const StftTensor& observation, const WpeConfig& config) {
  config.validate();
  if (observation.channels() < 1) throw Error("wpe needs at least one channel");
  const std::size_t frames = observation.frames(), bins = observation.num_bins();
  StftTensor out{observation.config, Tensor3<cd>(1, frames, bins)};

#pragma omp parallel
  {
    std::vector<cd> column(frames);
#pragma omp for schedule(dynamic)
    for (long fl = 0; fl < static_cast<long>(bins); ++fl) {
      const auto f = static_cast<std::size_t>(fl);
      for (std::size_t t = 0; t < frames; ++t) column[t] = observation.bins(0, t, f);
      const std::vector<cd> d = wpe_bin(column, config);
      for (std::size_t t = 0; t < frames; ++t) out.bins(0, t, f) = d[t];
    }
  }
  return out;
}

DirectReverbSplit wpe_direct(std::span<const float> omni, const WpeConfig& config, const StftConfig& stft_config) {
  config.validate();
  stft_config.validate();
  const std::size_t n = omni.size();
  const std::size_t min_len = static_cast<std::size_t>(config.taps + config.delay + 1) *
                              static_cast<std::size_t>(stft_config.hop);
  if (n < min_len) {
    throw Error("wpe input too short: " + std::to_string(n) + " samples, need at least " + std::to_string(min_len));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(omni[i])) throw Error("wpe input has a non-finite sample at index " + std::to_string(i));
  }
  const auto hop = static_cast<std::size_t>(stft_config.hop);
  const std::size_t padded_len = std::max<std::size_t>((n + hop - 1) / hop, 1) * hop;
  std::vector<double> padded(padded_len, 0.0);
  std::copy(omni.begin(), omni.end(), padded.begin());

  const StftTensor spectrum = stft(std::span<const double>(padded), stft_config);
  const std::vector<double> dereverb = istft(wpe_spectrum(spectrum, config), padded_len);

  DirectReverbSplit split;
  split.direct.resize(n);
  split.reverb.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = omni[i];
    double d = static_cast<float>(dereverb[i]);
    double r = a - d;
    if (r + d != a) {
      d = 0.0;
      r = a;
    }
    split.direct[i] = d;
    split.reverb[i] = r;
  }
  return split;
}

}  // namespace seld
