#include "fsmppi/noise.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fftw3.h>

namespace fsmppi {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void ColoredSpec::validate() const {
  if (horizon_T < 2) {
    throw std::invalid_argument("ColoredSpec: horizon_T must be >= 2");
  }
  if (gamma < 0.0) {
    throw std::invalid_argument("ColoredSpec: gamma must be nonnegative");
  }
  if (sigma < 0.0) {
    throw std::invalid_argument("ColoredSpec: sigma must be nonnegative");
  }
  if (effective_f_min() <= 0.0) {
    throw std::invalid_argument("ColoredSpec: f_min must be positive");
  }
}

double zeta(int T, double gamma) {
  if (T < 2) {
    throw std::invalid_argument("zeta: T must be >= 2");
  }
  const int N = T / 2 + 1;
  double sum = 0.0;
  for (int n = 1; n < N; ++n) {
    sum += std::pow(static_cast<double>(n), -gamma);
  }
  const double T2 = static_cast<double>(T) * static_cast<double>(T);
  return std::pow(static_cast<double>(N), gamma) * (1.0 + 4.0 * sum) / T2;
}

double frequency_stddev(const ColoredSpec& spec, int n) {
  const int N = spec.num_freq();
  const double f = std::max(static_cast<double>(n) / N, spec.effective_f_min());
  const double var =
      std::pow(f, -spec.gamma) * spec.sigma * spec.sigma / zeta(spec.horizon_T, spec.gamma);
  return std::sqrt(var);
}

FrequencySample sample_frequency(const ColoredSpec& spec,
                                 const std::vector<std::complex<double>>& mean_freq,
                                 NormalStream& rng) {
  spec.validate();
  const int N = spec.num_freq();
  if (!mean_freq.empty() && static_cast<int>(mean_freq.size()) != N) {
    throw std::invalid_argument("sample_frequency: mean_freq length must be N");
  }
  FrequencySample out;
  out.coefficients.resize(N);
  for (int n = 0; n < N; ++n) {
    const double sd = frequency_stddev(spec, n);
    const std::complex<double> mu = mean_freq.empty() ? 0.0 : mean_freq[n];
    // Always draw both parts so the stream position does not depend on n.
    const double re = mu.real() + sd * rng.next();
    const double im = mu.imag() + sd * rng.next();
    out.coefficients[n] = {re, im};
  }
  out.coefficients[0].imag(0.0);
  if (spec.horizon_T % 2 == 0) {
    out.coefficients[N - 1].imag(0.0);  // Nyquist term purely real
  }
  return out;
}

std::vector<double> inverse_transform(const FrequencySample& sample, int T) {
  const int N = T / 2 + 1;
  if (T < 2 || static_cast<int>(sample.coefficients.size()) != N) {
    throw std::invalid_argument("inverse_transform: sample length does not match T");
  }
  // Mirror the half-spectrum into the full conjugate-symmetric sequence.
  std::vector<std::complex<double>> full(T);
  for (int t = 0; t < T; ++t) {
    full[t] = t <= N - 1 ? sample.coefficients[t] : std::conj(sample.coefficients[T - t]);
  }
  std::vector<std::complex<double>> twiddle(T);
  for (int k = 0; k < T; ++k) {
    const double ang = 2.0 * M_PI * k / T;
    twiddle[k] = {std::cos(ang), std::sin(ang)};
  }
  std::vector<double> z(T);
  double max_imag = 0.0;
  double max_mag = 0.0;
  for (int t = 0; t < T; ++t) {
    std::complex<double> acc = 0.0;
    for (int n = 0; n < T; ++n) {
      acc += full[n] * twiddle[(static_cast<long long>(n) * t) % T];
    }
    acc /= static_cast<double>(T);
    z[t] = acc.real();
    max_imag = std::max(max_imag, std::abs(acc.imag()));
    max_mag = std::max(max_mag, std::abs(acc.real()));
  }
  if (max_imag > 1e-9 * std::max(1.0, max_mag)) {
    throw std::logic_error("inverse_transform: non-real result");
  }
  return z;
}

Eigen::MatrixXd build_ifft_matrix(int T) {
  if (T < 2) {
    throw std::invalid_argument("build_ifft_matrix: T must be >= 2");
  }
  const int N = T / 2 + 1;
  const bool even = T % 2 == 0;
  // DC contributes one column; each interior frequency two; the even-T
  // Nyquist term one (real only, unit weight since it is its own mirror).
  const int cols = even ? 2 * N - 2 : 2 * N - 1;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(T, cols);
  for (int t = 0; t < T; ++t) {
    int c = 0;
    M(t, c++) = 1.0 / T;
    for (int n = 1; n < N; ++n) {
      const double ang = 2.0 * M_PI * n * t / T;
      const bool nyquist = even && n == N - 1;
      const double w = nyquist ? 1.0 : 2.0;
      M(t, c++) = w * std::cos(ang) / T;
      if (!nyquist) {
        M(t, c++) = -2.0 * std::sin(ang) / T;
      }
    }
  }
  return M;
}

Eigen::VectorXd stack_coefficients(const FrequencySample& sample, int T) {
  const int N = T / 2 + 1;
  if (static_cast<int>(sample.coefficients.size()) != N) {
    throw std::invalid_argument("stack_coefficients: sample length does not match T");
  }
  const bool even = T % 2 == 0;
  Eigen::VectorXd v(even ? 2 * N - 2 : 2 * N - 1);
  int c = 0;
  v[c++] = sample.coefficients[0].real();
  for (int n = 1; n < N; ++n) {
    v[c++] = sample.coefficients[n].real();
    if (!(even && n == N - 1)) {
      v[c++] = sample.coefficients[n].imag();
    }
  }
  return v;
}

NoiseBatch sample_noise_batch(const std::vector<ColoredSpec>& specs, int M,
                              std::uint64_t seed, int num_threads) {
  if (M < 1) {
    throw std::invalid_argument("sample_noise_batch: M must be >= 1");
  }
  if (specs.empty()) {
    throw std::invalid_argument("sample_noise_batch: need at least one spec");
  }
  const int T = specs.front().horizon_T;
  for (const auto& s : specs) {
    s.validate();
    if (s.horizon_T != T) {
      throw std::invalid_argument("sample_noise_batch: specs must share horizon_T");
    }
  }
  const int n_u = static_cast<int>(specs.size());
  const int N = T / 2 + 1;

  NoiseBatch batch;
  batch.num_samples = M;
  batch.horizon = T;
  batch.control_dims = n_u;
  batch.seed = seed;
  batch.values.resize(static_cast<std::size_t>(M) * T * n_u);

  // Precompute per-spec coefficient deviations.
  std::vector<std::vector<double>> stddev(n_u, std::vector<double>(N));
  for (int d = 0; d < n_u; ++d) {
    for (int n = 0; n < N; ++n) {
      stddev[d][n] = frequency_stddev(specs[d], n);
    }
  }

  // Each worker owns a contiguous sample range; every (m, d) pair has its own
  // seed-derived stream, so the output is invariant to the thread count.
  auto worker = [&](int m_begin, int m_end) {
    const int count = m_end - m_begin;
    if (count <= 0) return;
    fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(count) * N);
    double* out = fftw_alloc_real(static_cast<std::size_t>(count) * T);
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      int n_dims[1] = {T};
      plan = fftw_plan_many_dft_c2r(1, n_dims, count, in, nullptr, 1, N, out,
                                    nullptr, 1, T, FFTW_ESTIMATE);
    }
    for (int d = 0; d < n_u; ++d) {
      for (int m = m_begin; m < m_end; ++m) {
        NormalStream rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(m)),
                                  static_cast<std::uint64_t>(d)));
        fftw_complex* row = in + static_cast<std::size_t>(m - m_begin) * N;
        for (int n = 0; n < N; ++n) {
          row[n][0] = stddev[d][n] * rng.next();
          row[n][1] = stddev[d][n] * rng.next();
        }
        row[0][1] = 0.0;
        if (T % 2 == 0) {
          row[N - 1][1] = 0.0;
        }
      }
      fftw_execute(plan);
      const double scale = 1.0 / T;
      for (int m = m_begin; m < m_end; ++m) {
        const double* z = out + static_cast<std::size_t>(m - m_begin) * T;
        for (int t = 0; t < T; ++t) {
          batch.at(m, t, d) = z[t] * scale;
        }
      }
    }
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
  };

  const int workers = std::max(1, std::min(num_threads, M));
  if (workers == 1) {
    worker(0, M);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (M + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int a = w * chunk;
      const int b = std::min(M, a + chunk);
      if (a < b) pool.emplace_back(worker, a, b);
    }
    for (auto& th : pool) th.join();
  }
  return batch;
}

}  // namespace fsmppi
