#include "fsmppi/analysis.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace fsmppi {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Periodogram periodogram(const std::vector<double>& signal, double dt) {
  const int K = static_cast<int>(signal.size());
  if (K < 4) {
    throw std::invalid_argument("periodogram: need at least 4 samples");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("periodogram: dt must be positive");
  }
  const int bins = K / 2 + 1;
  std::vector<double> in(signal);
  std::vector<fftw_complex> out(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(K, in.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  Periodogram p;
  p.segment_seconds = K * dt;
  p.frequencies.resize(bins);
  p.power.resize(bins);
  for (int n = 0; n < bins; ++n) {
    p.frequencies[n] = static_cast<double>(n) / (K * dt);
    p.power[n] = (out[n][0] * out[n][0] + out[n][1] * out[n][1]) / K;
  }
  return p;
}

double fit_psd_exponent(const std::vector<Periodogram>& ensemble, double f_lo,
                        double f_hi) {
  if (ensemble.empty()) {
    throw std::invalid_argument("fit_psd_exponent: empty ensemble");
  }
  const std::size_t bins = ensemble.front().power.size();
  for (const auto& p : ensemble) {
    if (p.power.size() != bins) {
      throw std::invalid_argument("fit_psd_exponent: inconsistent binning");
    }
  }
  // Log-log least squares on the ensemble-mean power per bin.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t n = 0; n < bins; ++n) {
    const double f = ensemble.front().frequencies[n];
    if (f < f_lo || f > f_hi || f <= 0.0) continue;
    double mean = 0.0;
    for (const auto& p : ensemble) mean += p.power[n];
    mean /= static_cast<double>(ensemble.size());
    if (!(mean > 0.0)) continue;
    const double x = std::log(f);
    const double y = std::log(mean);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) {
    throw std::invalid_argument("fit_psd_exponent: band contains fewer than two bins");
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return -slope;
}

double accumulated_cost(const RunLog& log) {
  if (log.step_costs.empty()) {
    throw std::invalid_argument("accumulated_cost: empty run log");
  }
  double total = 0.0;
  for (double c : log.step_costs) total += c;
  return total;
}

std::vector<double> exploration_variance(
    const std::vector<std::vector<double>>& rollouts) {
  if (rollouts.size() < 2) {
    throw std::invalid_argument("exploration_variance: need at least two rollouts");
  }
  const std::size_t len = rollouts.front().size();
  for (const auto& r : rollouts) {
    if (r.size() != len) {
      throw std::invalid_argument("exploration_variance: unequal rollout lengths");
    }
  }
  const double inv_n = 1.0 / static_cast<double>(rollouts.size());
  const double inv_nm1 = 1.0 / static_cast<double>(rollouts.size() - 1);
  std::vector<double> var(len, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    double mean = 0.0;
    for (const auto& r : rollouts) mean += r[t];
    mean *= inv_n;
    double acc = 0.0;
    for (const auto& r : rollouts) {
      const double d = r[t] - mean;
      acc += d * d;
    }
    var[t] = acc * inv_nm1;
  }
  return var;
}

EnsembleStats ensemble_stats(std::vector<double> values) {
  EnsembleStats s;
  s.count = values.size();
  s.values = std::move(values);
  if (s.count == 0) return s;
  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= static_cast<double>(s.count);
  s.mean = mean;
  if (s.count > 1) {
    double acc = 0.0;
    for (double v : s.values) {
      const double d = v - mean;
      acc += d * d;
    }
    s.stddev = std::sqrt(acc / static_cast<double>(s.count - 1));
  }
  return s;
}

}  // namespace fsmppi
