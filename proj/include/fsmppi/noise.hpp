#ifndef FSMPPI_NOISE_HPP_
#define FSMPPI_NOISE_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fsmppi/rng.hpp"

namespace fsmppi {

/// Parameters of one colored-noise control dimension.
///
/// A trajectory of T steps is generated by drawing N = floor(T/2) + 1 complex
/// frequency coefficients and applying the inverse DFT. `gamma` sets the
/// spectral slope (PSD ~ 1/f^gamma, gamma = 0 is white), `sigma` the target
/// time-domain standard deviation, and `f_min` the cutoff that keeps the DC
/// variance finite (default 1/N).
struct ColoredSpec {
  int horizon_T = 0;
  double gamma = 0.0;
  double sigma = 1.0;
  double f_min = 0.0;  // <= 0 selects the default 1/N

  int num_freq() const { return horizon_T / 2 + 1; }
  double effective_f_min() const {
    return f_min > 0.0 ? f_min : 1.0 / static_cast<double>(num_freq());
  }
  void validate() const;  // throws std::invalid_argument
};

/// One sampled Hermitian half-spectrum: N complex coefficients Z[0..N-1].
/// Z[0] is purely real; for even T so is the Nyquist coefficient Z[N-1].
struct FrequencySample {
  std::vector<std::complex<double>> coefficients;
};

/// M x T x n_u tensor of time-domain noise trajectories, plus the master seed
/// it was generated from. Layout is sample-major, then time, then dimension.
struct NoiseBatch {
  int num_samples = 0;
  int horizon = 0;
  int control_dims = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  double& at(int m, int t, int d) {
    return values[(static_cast<std::size_t>(m) * horizon + t) * control_dims + d];
  }
  double at(int m, int t, int d) const {
    return values[(static_cast<std::size_t>(m) * horizon + t) * control_dims + d];
  }
};

/// Normalization constant zeta = T^-2 N^gamma (1 + 4 sum_{n=1}^{N-1} n^-gamma)
/// that makes the time-domain variance of the colored samples equal sigma^2.
double zeta(int T, double gamma);

/// Per-coefficient standard deviation: sqrt((max{n/N, f_min})^-gamma
/// sigma^2 / zeta). Exposed for tests.
double frequency_stddev(const ColoredSpec& spec, int n);

/// Draws Z_real[n], Z_imag[n] ~ N(mean_freq[n], var_n) for n = 0..N-1 and
/// enforces the Hermitian constraints (DC and even-T Nyquist imaginary parts
/// forced to zero). `mean_freq` may be empty for a zero mean.
FrequencySample sample_frequency(const ColoredSpec& spec,
                                 const std::vector<std::complex<double>>& mean_freq,
                                 NormalStream& rng);

/// z(t) = (1/T) sum_{n=0}^{T-1} Z'[n] e^{i 2 pi n t / T}, where Z' mirrors the
/// conjugated half-spectrum. Evaluated as a direct complex sum; throws if the
/// residual imaginary magnitude exceeds 1e-9.
std::vector<double> inverse_transform(const FrequencySample& sample, int T);

/// The real T x T matrix mapping stacked [Z_real[n], Z_imag[n]] coefficients
/// to [z(t)]: entries (2/T) cos(2 pi n t / T) and -(2/T) sin(2 pi n t / T),
/// with the DC column (and, for even T, the Nyquist column) scaled by 1/T.
/// Verification oracle for inverse_transform; not used for generation.
Eigen::MatrixXd build_ifft_matrix(int T);

/// Stacks a FrequencySample into the column layout of build_ifft_matrix:
/// [Z_real[0], Z_real[1], Z_imag[1], ..., Z_real[N-1](, Z_imag[N-1] odd T)].
Eigen::VectorXd stack_coefficients(const FrequencySample& sample, int T);

/// Generates M zero-mean colored trajectories per control dimension. One
/// ColoredSpec per dimension; all specs must share horizon_T. Each (sample,
/// dimension) pair draws from its own seed-derived stream, so the result is
/// identical for any `num_threads`.
NoiseBatch sample_noise_batch(const std::vector<ColoredSpec>& specs, int M,
                              std::uint64_t seed, int num_threads = 1);

}  // namespace fsmppi

#endif  // FSMPPI_NOISE_HPP_
