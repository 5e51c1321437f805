#include "fsmppi/controller.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsmppi {

ControlSequence ControlSequence::zeros(int horizon, int control_dims) {
  ControlSequence seq;
  seq.values = Eigen::MatrixXd::Zero(horizon, control_dims);
  return seq;
}

void ControlSequence::clamp() {
  if (!has_bounds()) return;
  for (int t = 0; t < values.rows(); ++t) {
    for (int d = 0; d < values.cols(); ++d) {
      values(t, d) = clamp_entry(values(t, d), d);
    }
  }
}

void MppiConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("MppiConfig: num_samples must be >= 1");
  if (num_iterations < 1) throw std::invalid_argument("MppiConfig: num_iterations must be >= 1");
  if (horizon < 2) throw std::invalid_argument("MppiConfig: horizon must be >= 2");
  if (!(dt > 0.0)) throw std::invalid_argument("MppiConfig: dt must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("MppiConfig: lambda must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("MppiConfig: alpha must be in (0, 1]");
  }
  if (u_min.size() != u_max.size()) {
    throw std::invalid_argument("MppiConfig: bound vectors must match in size");
  }
  sampler.validate();
}

std::vector<double> rollout(const System& system, const Eigen::VectorXd& x0,
                            const ControlSequence& nominal, const NoiseBatch& noise,
                            double dt) {
  const int M = noise.num_samples;
  const int T = noise.horizon;
  const int n_u = noise.control_dims;
  if (nominal.values.rows() != T || nominal.values.cols() != n_u ||
      n_u != system.control_dim() || x0.size() != system.state_dim()) {
    throw std::invalid_argument("rollout: shape mismatch");
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> costs(M, 0.0);
  Eigen::VectorXd x(x0.size());
  Eigen::VectorXd v(n_u);
  for (int m = 0; m < M; ++m) {
    x = x0;
    double total = 0.0;
    bool ok = true;
    for (int t = 0; t < T; ++t) {
      for (int d = 0; d < n_u; ++d) {
        v[d] = nominal.clamp_entry(nominal.values(t, d) + noise.at(m, t, d), d);
      }
      system.step(x, v, dt);
      const double q = system.running_cost(x);
      if (!std::isfinite(q) || !x.allFinite()) {
        ok = false;
        break;
      }
      total += q;
    }
    if (ok) {
      total += system.terminal_cost(x);
      ok = std::isfinite(total);
    }
    costs[m] = ok ? total : inf;
  }
  return costs;
}

std::vector<Eigen::MatrixXd> rollout_trajectories(const System& system,
                                                  const Eigen::VectorXd& x0,
                                                  const ControlSequence& nominal,
                                                  const NoiseBatch& noise, double dt) {
  const int M = noise.num_samples;
  const int T = noise.horizon;
  const int n_u = noise.control_dims;
  std::vector<Eigen::MatrixXd> out(M);
  Eigen::VectorXd x(x0.size());
  Eigen::VectorXd v(n_u);
  for (int m = 0; m < M; ++m) {
    x = x0;
    out[m].resize(T, x0.size());
    for (int t = 0; t < T; ++t) {
      for (int d = 0; d < n_u; ++d) {
        v[d] = nominal.clamp_entry(nominal.values(t, d) + noise.at(m, t, d), d);
      }
      system.step(x, v, dt);
      out[m].row(t) = x;
    }
  }
  return out;
}

RolloutCosts compute_weights(const std::vector<double>& costs, double lambda) {
  if (costs.empty()) throw std::invalid_argument("compute_weights: empty cost vector");
  if (!(lambda > 0.0)) throw std::invalid_argument("compute_weights: lambda must be positive");
  RolloutCosts out;
  out.costs = costs;
  double rho = std::numeric_limits<double>::infinity();
  for (double c : costs) rho = std::min(rho, c);
  if (!std::isfinite(rho)) {
    throw std::runtime_error("compute_weights: no finite rollout cost");
  }
  out.rho = rho;
  out.weights.resize(costs.size());
  double eta = 0.0;
  for (std::size_t m = 0; m < costs.size(); ++m) {
    const double w = std::exp(-(costs[m] - rho) / lambda);  // 0 for +inf costs
    out.weights[m] = w;
    eta += w;
  }
  out.eta = eta;
  for (double& w : out.weights) w /= eta;
  return out;
}

ControlSequence update_mean(const ControlSequence& nominal,
                            const std::vector<double>& weights,
                            const NoiseBatch& noise, double alpha) {
  if (static_cast<int>(weights.size()) != noise.num_samples) {
    throw std::invalid_argument("update_mean: weight count mismatch");
  }
  ControlSequence out = nominal;
  for (int m = 0; m < noise.num_samples; ++m) {
    const double w = alpha * weights[m];
    if (w == 0.0) continue;
    for (int t = 0; t < noise.horizon; ++t) {
      for (int d = 0; d < noise.control_dims; ++d) {
        out.values(t, d) += w * noise.at(m, t, d);
      }
    }
  }
  out.clamp();
  return out;
}

MppiController::MppiController(MppiConfig config, std::shared_ptr<const System> system)
    : config_(std::move(config)), system_(std::move(system)), sampler_(config_.sampler) {
  config_.validate();
  if (config_.sampler.control_dims() != system_->control_dim()) {
    throw std::invalid_argument("MppiController: sampler/system control dim mismatch");
  }
  if (config_.u_min.size() > 0 &&
      config_.u_min.size() != system_->control_dim()) {
    throw std::invalid_argument("MppiController: bound size mismatch");
  }
  reset();
}

void MppiController::set_nominal(const ControlSequence& nominal) {
  if (nominal.values.rows() != config_.horizon ||
      nominal.values.cols() != system_->control_dim()) {
    throw std::invalid_argument("MppiController: nominal shape mismatch");
  }
  nominal_ = nominal;
  nominal_.u_min = config_.u_min;
  nominal_.u_max = config_.u_max;
  nominal_.clamp();
}

void MppiController::reset() {
  nominal_ = ControlSequence::zeros(config_.horizon, system_->control_dim());
  nominal_.u_min = config_.u_min;
  nominal_.u_max = config_.u_max;
  sampler_.reset(config_.horizon);
}

const ControlSequence& MppiController::solve(const Eigen::VectorXd& x0,
                                             std::uint64_t seed, int num_threads) {
  for (int i = 0; i < config_.num_iterations; ++i) {
    const std::uint64_t iter_seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    const NoiseBatch batch =
        sampler_.draw(config_.num_samples, config_.horizon, iter_seed, num_threads);
    const std::vector<double> costs =
        rollout(*system_, x0, nominal_, batch, config_.dt);
    const RolloutCosts rc = compute_weights(costs, config_.lambda);
    nominal_ = update_mean(nominal_, rc.weights, batch, config_.alpha);
    sampler_.absorb(batch, rc.weights, config_.alpha);
  }
  return nominal_;
}

void MppiController::advance() {
  const int T = config_.horizon;
  nominal_.values.topRows(T - 1) = nominal_.values.bottomRows(T - 1).eval();
  sampler_.shift();
}

RunLog receding_horizon_run(const MppiConfig& config, std::shared_ptr<const System> system,
                            const Eigen::VectorXd& x0, double duration,
                            std::uint64_t seed, int num_threads) {
  config.validate();
  const double steps_real = duration / config.dt;
  const long long steps = std::llround(steps_real);
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-6) {
    throw std::invalid_argument("receding_horizon_run: duration must be a positive multiple of dt");
  }
  MppiController controller(config, system);
  RunLog log;
  log.dt = config.dt;
  log.seed = seed;
  log.states.reserve(steps);
  log.controls.reserve(steps);
  log.step_costs.reserve(steps);
  log.solve_seconds.reserve(steps);

  Eigen::VectorXd x = x0;
  for (long long k = 0; k < steps; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const ControlSequence& plan =
        controller.solve(x, mix_seed(seed, static_cast<std::uint64_t>(k)), num_threads);
    const auto t1 = std::chrono::steady_clock::now();
    const Eigen::VectorXd u = plan.values.row(0);
    system->step(x, u, config.dt);
    log.states.push_back(x);
    log.controls.push_back(u);
    log.step_costs.push_back(system->running_cost(x));
    log.solve_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
    controller.advance();
  }
  return log;
}

}  // namespace fsmppi
