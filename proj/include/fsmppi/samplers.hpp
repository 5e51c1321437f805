#ifndef FSMPPI_SAMPLERS_HPP_
#define FSMPPI_SAMPLERS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsmppi/noise.hpp"

namespace fsmppi {

enum class SamplerKind { kGaussian, kColored, kNln, kSmooth, kSmoothStar };

std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& name);

/// Configuration of one sampling distribution. All samplers emit zero-mean
/// batches already scaled to control units, so the controller forms
/// v_t = u_t + z^m(t) directly.
struct SamplerConfig {
  SamplerKind kind = SamplerKind::kGaussian;
  std::vector<double> sigma;       // one per control dimension
  std::vector<double> gamma;       // colored only, one per control dimension
  double f_min = 0.0;              // colored only; <= 0 selects 1/N
  std::vector<double> nln_log_sigma;  // nln only; defaults to 1.0 per dim
  double dt = 0.0;                 // smooth variants only

  int control_dims() const { return static_cast<int>(sigma.size()); }
  void validate() const;  // throws std::invalid_argument
};

/// State persisted across solver iterations. Only the smooth variants use it:
/// `carry` records the derivative-space increments the nominal has absorbed
/// so far. Zero-initialized at episode start.
struct SamplerState {
  Eigen::MatrixXd carry;  // T x n_u
};

/// Zero-mean noise source with interchangeable strategies:
///   gaussian    - i.i.d. N(0, sigma^2) per (m, t, dim)
///   colored     - frequency-domain sampling via the noise module
///   nln         - normal times log-normal, variance matched to sigma^2
///   smooth      - derivative-space Gaussian noise integrated by dt, carried
///                 across solver iterations
///   smooth_star - smooth with effective deviation sigma / dt
class Sampler {
 public:
  explicit Sampler(SamplerConfig config);

  const SamplerConfig& config() const { return config_; }
  const SamplerState& state() const { return state_; }

  /// Resets carried state for a fresh episode.
  void reset(int horizon);

  /// Draws an M x T x n_u batch. Pure given (config, state, seed); the thread
  /// count never changes the result.
  NoiseBatch draw(int num_samples, int horizon, std::uint64_t seed,
                  int num_threads = 1) const;

  /// Folds the weighted batch back into the carried derivative mean (smooth
  /// variants; no-op otherwise). Call once per solver iteration, after the
  /// controller's mean update with the same step size alpha.
  void absorb(const NoiseBatch& batch, const std::vector<double>& weights,
              double alpha);

  /// Receding-horizon warm start: shift carried state left one step,
  /// repeating the last entry.
  void shift();

 private:
  SamplerConfig config_;
  SamplerState state_;
};

}  // namespace fsmppi

#endif  // FSMPPI_SAMPLERS_HPP_
