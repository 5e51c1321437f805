#ifndef FSMPPI_CONTROLLER_HPP_
#define FSMPPI_CONTROLLER_HPP_

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "fsmppi/samplers.hpp"
#include "fsmppi/systems.hpp"

namespace fsmppi {

/// T x n_u control trajectory with optional per-dimension box bounds.
struct ControlSequence {
  Eigen::MatrixXd values;  // T x n_u
  Eigen::VectorXd u_min;   // size 0 = unbounded
  Eigen::VectorXd u_max;

  static ControlSequence zeros(int horizon, int control_dims);

  bool has_bounds() const { return u_min.size() > 0; }
  double clamp_entry(double v, int dim) const {
    if (!has_bounds()) return v;
    return std::min(std::max(v, u_min[dim]), u_max[dim]);
  }
  void clamp();
};

/// Per-batch cost statistics: raw costs, baseline rho = min cost, normalizer
/// eta, and the normalized exponential weights.
struct RolloutCosts {
  std::vector<double> costs;
  double rho = 0.0;
  double eta = 0.0;
  std::vector<double> weights;
};

struct MppiConfig {
  int num_samples = 4096;
  int num_iterations = 1;
  int horizon = 65;
  double dt = 0.015;
  double lambda = 1.0;
  double alpha = 1.0;
  SamplerConfig sampler;
  Eigen::VectorXd u_min;  // size 0 = unbounded
  Eigen::VectorXd u_max;

  void validate() const;  // throws std::invalid_argument
};

/// Closed-loop record of one receding-horizon run. States are post-step, one
/// entry per applied plant step. `solve_seconds` is wall-clock diagnostics and
/// is excluded from determinism guarantees.
struct RunLog {
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> controls;
  std::vector<double> step_costs;
  std::vector<double> solve_seconds;
};

/// Cost of each sampled trajectory: Euler-integrates v_t = clamp(u_t + z^m(t))
/// through the system, accumulating running costs plus the terminal cost. A
/// sample that goes non-finite gets cost +infinity; an all-infinite batch is a
/// hard error at weighting time.
std::vector<double> rollout(const System& system, const Eigen::VectorXd& x0,
                            const ControlSequence& nominal, const NoiseBatch& noise,
                            double dt);

/// State trajectories of each sample (post-step, T x state_dim per sample).
std::vector<Eigen::MatrixXd> rollout_trajectories(const System& system,
                                                  const Eigen::VectorXd& x0,
                                                  const ControlSequence& nominal,
                                                  const NoiseBatch& noise, double dt);

/// Exponential weights with baseline subtraction:
/// w_m = exp(-(J^m - rho) / lambda) / eta, rho = min J.
RolloutCosts compute_weights(const std::vector<double>& costs, double lambda);

/// U_t = u_t + alpha * sum_m w_m z^m(t), clamped to bounds if set.
ControlSequence update_mean(const ControlSequence& nominal,
                            const std::vector<double>& weights,
                            const NoiseBatch& noise, double alpha);

/// MPPI solver: repeated {draw, rollout, weight, mean update} iterations with
/// a warm-started nominal sequence.
class MppiController {
 public:
  MppiController(MppiConfig config, std::shared_ptr<const System> system);

  const MppiConfig& config() const { return config_; }
  const ControlSequence& nominal() const { return nominal_; }
  void set_nominal(const ControlSequence& nominal);

  /// Fresh episode: zero nominal, reset sampler state.
  void reset();

  /// One MPC solve: config().num_iterations optimization iterations from x0,
  /// re-sampling noise about the updated mean each iteration. Returns the
  /// final mean sequence (also retained as the nominal).
  const ControlSequence& solve(const Eigen::VectorXd& x0, std::uint64_t seed,
                               int num_threads = 1);

  /// Warm start for the next MPC step: shift nominal (and sampler carry) left
  /// one step, repeating the last entry.
  void advance();

 private:
  MppiConfig config_;
  std::shared_ptr<const System> system_;
  Sampler sampler_;
  ControlSequence nominal_;
};

/// Closed-loop receding-horizon run: at each plant step, solve, apply the
/// first control through the same Euler model (no disturbance), log, shift.
RunLog receding_horizon_run(const MppiConfig& config, std::shared_ptr<const System> system,
                            const Eigen::VectorXd& x0, double duration,
                            std::uint64_t seed, int num_threads = 1);

}  // namespace fsmppi

#endif  // FSMPPI_CONTROLLER_HPP_
