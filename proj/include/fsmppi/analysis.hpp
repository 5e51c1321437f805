#ifndef FSMPPI_ANALYSIS_HPP_
#define FSMPPI_ANALYSIS_HPP_

#include <vector>

#include "fsmppi/controller.hpp"

namespace fsmppi {

/// One-sided unwindowed periodogram of a real signal.
struct Periodogram {
  std::vector<double> frequencies;  // Hz, 0 .. Nyquist 1/(2 dt)
  std::vector<double> power;        // |DFT|^2 / K per bin
  double segment_seconds = 0.0;
};

struct EnsembleStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
  std::vector<double> values;
};

/// power[n] = |DFT(signal)[n]|^2 / K at frequency n / (K dt), n = 0..K/2.
/// Requires K >= 4.
Periodogram periodogram(const std::vector<double>& signal, double dt);

/// Least-squares slope of log(mean power) vs log(frequency) over
/// [f_lo, f_hi]; returns -slope as the spectral exponent estimate.
/// Requires a nonempty ensemble with identical binning and a band containing
/// at least two bins (DC excluded by f_lo > 0).
double fit_psd_exponent(const std::vector<Periodogram>& ensemble, double f_lo,
                        double f_hi);

/// Sum of running costs over all plant steps of the run (the comparison
/// metric of the closed-loop experiments).
double accumulated_cost(const RunLog& log);

/// Unbiased per-timestep sample variance of one state coordinate across
/// rollouts. `rollouts` holds one coordinate series per rollout, all of equal
/// length; at least two rollouts required.
std::vector<double> exploration_variance(const std::vector<std::vector<double>>& rollouts);

/// Mean and (unbiased) standard deviation, retaining the raw values.
EnsembleStats ensemble_stats(std::vector<double> values);

}  // namespace fsmppi

#endif  // FSMPPI_ANALYSIS_HPP_
