#include "fsmppi/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace fsmppi {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kGaussian: return "gaussian";
    case SamplerKind::kColored: return "colored";
    case SamplerKind::kNln: return "nln";
    case SamplerKind::kSmooth: return "smooth";
    case SamplerKind::kSmoothStar: return "smooth_star";
  }
  throw std::logic_error("unknown sampler kind");
}

SamplerKind sampler_kind_from_string(const std::string& name) {
  if (name == "gaussian") return SamplerKind::kGaussian;
  if (name == "colored") return SamplerKind::kColored;
  if (name == "nln") return SamplerKind::kNln;
  if (name == "smooth") return SamplerKind::kSmooth;
  if (name == "smooth_star") return SamplerKind::kSmoothStar;
  throw std::invalid_argument("unknown sampler kind: " + name);
}

void SamplerConfig::validate() const {
  if (sigma.empty()) {
    throw std::invalid_argument("SamplerConfig: sigma must have one entry per control dim");
  }
  for (double s : sigma) {
    if (!(s >= 0.0)) {
      throw std::invalid_argument("SamplerConfig: sigma must be nonnegative");
    }
  }
  const bool is_colored = kind == SamplerKind::kColored;
  const bool is_smooth = kind == SamplerKind::kSmooth || kind == SamplerKind::kSmoothStar;
  if (is_colored) {
    if (gamma.size() != sigma.size()) {
      throw std::invalid_argument("SamplerConfig: colored sampler needs gamma per control dim");
    }
    for (double g : gamma) {
      if (!(g >= 0.0)) {
        throw std::invalid_argument("SamplerConfig: gamma must be nonnegative");
      }
    }
  } else if (!gamma.empty()) {
    throw std::invalid_argument("SamplerConfig: gamma only applies to the colored sampler");
  }
  if (is_smooth) {
    if (!(dt > 0.0)) {
      throw std::invalid_argument("SamplerConfig: smooth samplers need dt > 0");
    }
  } else if (dt != 0.0) {
    throw std::invalid_argument("SamplerConfig: dt only applies to smooth samplers");
  }
  if (!nln_log_sigma.empty()) {
    if (kind != SamplerKind::kNln) {
      throw std::invalid_argument("SamplerConfig: nln_log_sigma only applies to the nln sampler");
    }
    if (nln_log_sigma.size() != sigma.size()) {
      throw std::invalid_argument("SamplerConfig: nln_log_sigma needs one entry per control dim");
    }
  }
}

Sampler::Sampler(SamplerConfig config) : config_(std::move(config)) {
  config_.validate();
}

void Sampler::reset(int horizon) {
  state_.carry = Eigen::MatrixXd::Zero(horizon, config_.control_dims());
}

NoiseBatch Sampler::draw(int num_samples, int horizon, std::uint64_t seed,
                         int num_threads) const {
  if (num_samples < 1) {
    throw std::invalid_argument("Sampler::draw: num_samples must be >= 1");
  }
  if (horizon < 2) {
    throw std::invalid_argument("Sampler::draw: horizon must be >= 2");
  }
  const int n_u = config_.control_dims();

  if (config_.kind == SamplerKind::kColored) {
    std::vector<ColoredSpec> specs(n_u);
    for (int d = 0; d < n_u; ++d) {
      specs[d] = {horizon, config_.gamma[d], config_.sigma[d], config_.f_min};
    }
    return sample_noise_batch(specs, num_samples, seed, num_threads);
  }

  NoiseBatch batch;
  batch.num_samples = num_samples;
  batch.horizon = horizon;
  batch.control_dims = n_u;
  batch.seed = seed;
  batch.values.resize(static_cast<std::size_t>(num_samples) * horizon * n_u);

  for (int d = 0; d < n_u; ++d) {
    const double sigma = config_.sigma[d];
    for (int m = 0; m < num_samples; ++m) {
      NormalStream rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(m)),
                                static_cast<std::uint64_t>(d)));
      switch (config_.kind) {
        case SamplerKind::kGaussian:
          for (int t = 0; t < horizon; ++t) {
            batch.at(m, t, d) = sigma * rng.next();
          }
          break;
        case SamplerKind::kNln: {
          // value = nu * n * exp(l), n ~ N(0,1), l ~ N(0, s^2);
          // nu = sigma * exp(-s^2) makes the total variance sigma^2.
          const double s =
              config_.nln_log_sigma.empty() ? 1.0 : config_.nln_log_sigma[d];
          const double nu = sigma * std::exp(-s * s);
          for (int t = 0; t < horizon; ++t) {
            const double n = rng.next();
            const double l = s * rng.next();
            batch.at(m, t, d) = nu * n * std::exp(l);
          }
          break;
        }
        case SamplerKind::kSmooth:
        case SamplerKind::kSmoothStar: {
          // Derivative-space noise emitted as du*dt increments; the nominal
          // integrates the chosen increment each solver iteration, which is
          // what limits exploration to sigma*dt per iteration for small dt.
          const double eff =
              config_.kind == SamplerKind::kSmoothStar ? sigma / config_.dt : sigma;
          for (int t = 0; t < horizon; ++t) {
            batch.at(m, t, d) = eff * rng.next() * config_.dt;
          }
          break;
        }
        case SamplerKind::kColored:
          break;  // handled above
      }
    }
  }
  return batch;
}

void Sampler::absorb(const NoiseBatch& batch, const std::vector<double>& weights,
                     double alpha) {
  if (config_.kind != SamplerKind::kSmooth && config_.kind != SamplerKind::kSmoothStar) {
    return;
  }
  if (static_cast<int>(weights.size()) != batch.num_samples) {
    throw std::invalid_argument("Sampler::absorb: weight count mismatch");
  }
  if (state_.carry.rows() != batch.horizon ||
      state_.carry.cols() != batch.control_dims) {
    state_.carry = Eigen::MatrixXd::Zero(batch.horizon, batch.control_dims);
  }
  // carry accumulates the derivative-space increments the nominal has
  // absorbed, iteration over iteration: carry += alpha * (weighted mean) / dt.
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(batch.horizon, batch.control_dims);
  for (int m = 0; m < batch.num_samples; ++m) {
    if (weights[m] == 0.0) continue;
    for (int t = 0; t < batch.horizon; ++t) {
      for (int d = 0; d < batch.control_dims; ++d) {
        mean(t, d) += weights[m] * batch.at(m, t, d);
      }
    }
  }
  state_.carry += (alpha / config_.dt) * mean;
}

void Sampler::shift() {
  const auto rows = state_.carry.rows();
  if (rows < 2) return;
  state_.carry.topRows(rows - 1) = state_.carry.bottomRows(rows - 1).eval();
}

}  // namespace fsmppi
