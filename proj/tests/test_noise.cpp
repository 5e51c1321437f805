#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "fsmppi/analysis.hpp"
#include "fsmppi/noise.hpp"

using namespace fsmppi;

namespace {

// Independent scalar evaluation of the normalization constant, written as a
// literal transcription rather than sharing code with zeta().
double zeta_oracle(int T, double gamma) {
  const int N = T / 2 + 1;
  double s = 0.0;
  for (int n = 1; n <= N - 1; ++n) s += 1.0 / std::pow(static_cast<double>(n), gamma);
  return (1.0 / (static_cast<double>(T) * T)) * std::pow(static_cast<double>(N), gamma) *
         (1.0 + 4.0 * s);
}

FrequencySample random_sample(int T, std::uint64_t seed) {
  ColoredSpec spec{T, 1.0, 1.0, 0.0};
  NormalStream rng(seed);
  return sample_frequency(spec, {}, rng);
}

}  // namespace

TEST_CASE("zeta matches direct evaluations") {
  CHECK(zeta(8, 0.0) == doctest::Approx(0.265625).epsilon(1e-14));
  CHECK(zeta(8, 2.0) == doctest::Approx(zeta_oracle(8, 2.0)).epsilon(1e-14));
  CHECK(zeta(8, 2.0) == doctest::Approx(2.61502).epsilon(1e-5));
  CHECK(zeta(2, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(zeta(2, 1.0) == doctest::Approx(zeta_oracle(2, 1.0)).epsilon(1e-14));
  for (int T : {3, 16, 65, 250}) {
    for (double g : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      CAPTURE(T);
      CAPTURE(g);
      CHECK(zeta(T, g) == doctest::Approx(zeta_oracle(T, g)).epsilon(1e-13));
      CHECK(zeta(T, g) > 0.0);
    }
  }
  CHECK_THROWS(zeta(1, 0.0));
}

TEST_CASE("sample_frequency with zero sigma returns the mean exactly") {
  ColoredSpec spec{8, 2.0, 0.0, 0.0};
  std::vector<std::complex<double>> mean(spec.num_freq());
  for (int n = 0; n < spec.num_freq(); ++n) mean[n] = {1.0 + n, 0.5 * n};
  NormalStream rng(7);
  const FrequencySample s = sample_frequency(spec, mean, rng);
  for (int n = 0; n < spec.num_freq(); ++n) {
    CHECK(s.coefficients[n].real() == mean[n].real());
    if (n == 0 || n == spec.num_freq() - 1) {
      CHECK(s.coefficients[n].imag() == 0.0);  // hermitian constraints win
    } else {
      CHECK(s.coefficients[n].imag() == mean[n].imag());
    }
  }
}

TEST_CASE("sample_frequency enforces hermitian structure") {
  for (int T : {4, 5, 8, 65, 250}) {
    const FrequencySample s = random_sample(T, 99 + T);
    CHECK(static_cast<int>(s.coefficients.size()) == T / 2 + 1);
    CHECK(s.coefficients[0].imag() == 0.0);
    if (T % 2 == 0) CHECK(s.coefficients.back().imag() == 0.0);
  }
}

TEST_CASE("frequency variance follows the power law") {
  // var(Z[1]) / var(Z[16]) should approach 16^gamma.
  ColoredSpec spec{64, 2.0, 1.0, 0.0};
  const int draws = 100000;
  double v1 = 0.0, v16 = 0.0;
  NormalStream rng(123);
  for (int i = 0; i < draws; ++i) {
    const FrequencySample s = sample_frequency(spec, {}, rng);
    v1 += std::norm(s.coefficients[1]);
    v16 += std::norm(s.coefficients[16]);
  }
  CHECK(v1 / v16 == doctest::Approx(256.0).epsilon(0.05));
}

TEST_CASE("flat spectrum at gamma zero") {
  ColoredSpec spec{16, 0.0, 2.0, 0.0};
  const double expected = spec.sigma * spec.sigma / zeta(spec.horizon_T, 0.0);
  for (int n = 0; n < spec.num_freq(); ++n) {
    CHECK(frequency_stddev(spec, n) == doctest::Approx(std::sqrt(expected)).epsilon(1e-12));
  }
}

TEST_CASE("inverse_transform closed forms") {
  SUBCASE("all zero") {
    FrequencySample s;
    s.coefficients.assign(5, 0.0);
    for (double z : inverse_transform(s, 8)) CHECK(z == 0.0);
  }
  SUBCASE("DC only gives constant c/T") {
    FrequencySample s;
    s.coefficients.assign(5, 0.0);
    s.coefficients[0] = 3.2;
    for (double z : inverse_transform(s, 8)) {
      CHECK(z == doctest::Approx(0.4).epsilon(1e-13));
    }
  }
  SUBCASE("single cosine bin, T=4") {
    FrequencySample s;
    s.coefficients.assign(3, 0.0);
    s.coefficients[1] = {1.0, 0.0};
    const std::vector<double> z = inverse_transform(s, 4);
    const std::vector<double> expected{0.5, 0.0, -0.5, 0.0};
    for (int t = 0; t < 4; ++t) {
      CHECK(z[t] == doctest::Approx(expected[t]).epsilon(1e-13));
    }
  }
  SUBCASE("length mismatch rejected") {
    FrequencySample s;
    s.coefficients.assign(4, 0.0);
    CHECK_THROWS(inverse_transform(s, 4));
  }
}

TEST_CASE("ifft matrix for T=2") {
  const Eigen::MatrixXd M = build_ifft_matrix(2);
  REQUIRE(M.rows() == 2);
  REQUIRE(M.cols() == 2);
  CHECK(M(0, 0) == doctest::Approx(0.5));
  CHECK(M(0, 1) == doctest::Approx(0.5));
  CHECK(M(1, 0) == doctest::Approx(0.5));
  CHECK(M(1, 1) == doctest::Approx(-0.5));
}

TEST_CASE("ifft matrix is linear through zero") {
  const Eigen::MatrixXd M = build_ifft_matrix(7);
  CHECK((M * Eigen::VectorXd::Zero(M.cols())).isZero(0.0));
}

TEST_CASE("inverse_transform agrees with the matrix oracle") {
  for (int T : {2, 3, 4, 5, 8, 65}) {
    const Eigen::MatrixXd M = build_ifft_matrix(T);
    for (int trial = 0; trial < 100; ++trial) {
      const FrequencySample s = random_sample(T, 1000 * T + trial);
      const std::vector<double> z = inverse_transform(s, T);
      const Eigen::VectorXd via_matrix = M * stack_coefficients(s, T);
      for (int t = 0; t < T; ++t) {
        CAPTURE(T);
        CHECK(std::abs(z[t] - via_matrix[t]) < 1e-12);
      }
    }
  }
}

TEST_CASE("batch generation matches the per-sample transform") {
  const int T = 65;
  std::vector<ColoredSpec> specs{{T, 2.0, 1.5, 0.0}, {T, 0.5, 0.7, 0.0}};
  const NoiseBatch batch = sample_noise_batch(specs, 16, 42);
  for (int m = 0; m < batch.num_samples; ++m) {
    for (int d = 0; d < batch.control_dims; ++d) {
      NormalStream rng(mix_seed(mix_seed(42, m), d));
      const FrequencySample s = sample_frequency(specs[d], {}, rng);
      const std::vector<double> z = inverse_transform(s, T);
      for (int t = 0; t < T; ++t) {
        CHECK(std::abs(batch.at(m, t, d) - z[t]) < 1e-9);
      }
    }
  }
}

TEST_CASE("zero sigma batch is identically zero") {
  std::vector<ColoredSpec> specs{{65, 1.0, 0.0, 0.0}};
  const NoiseBatch batch = sample_noise_batch(specs, 8, 5);
  for (double v : batch.values) CHECK(v == 0.0);
}

TEST_CASE("time-domain variance is normalized to sigma^2") {
  // Monte-Carlo check of the zeta normalization.
  struct Case {
    int T;
    double gamma;
    double tol;
  };
  for (const Case c : {Case{65, 0.0, 0.02}, Case{65, 2.0, 0.05}}) {
    std::vector<ColoredSpec> specs{{c.T, c.gamma, 1.0, 0.0}};
    const NoiseBatch batch = sample_noise_batch(specs, 100000, 77);
    double acc = 0.0;
    for (double v : batch.values) acc += v * v;
    const double var = acc / static_cast<double>(batch.values.size());
    CAPTURE(c.gamma);
    CHECK(var == doctest::Approx(1.0).epsilon(c.tol));
  }
}

TEST_CASE("batch is thread-count invariant") {
  std::vector<ColoredSpec> specs{{65, 2.0, 1.0, 0.0}, {65, 0.0, 0.5, 0.0}};
  const NoiseBatch one = sample_noise_batch(specs, 257, 31, 1);
  const NoiseBatch four = sample_noise_batch(specs, 257, 31, 4);
  const NoiseBatch sixteen = sample_noise_batch(specs, 257, 31, 16);
  CHECK(one.values == four.values);
  CHECK(one.values == sixteen.values);
}

TEST_CASE("invalid inputs are rejected") {
  std::vector<ColoredSpec> specs{{65, 1.0, 1.0, 0.0}};
  CHECK_THROWS(sample_noise_batch(specs, 0, 1));
  CHECK_THROWS(sample_noise_batch({}, 4, 1));
  ColoredSpec bad{1, 0.0, 1.0, 0.0};
  CHECK_THROWS(bad.validate());
  ColoredSpec bad_fmin{8, 0.0, 1.0, -1.0};
  CHECK(bad_fmin.effective_f_min() > 0.0);  // non-positive input falls back to 1/N
}

TEST_CASE("white-noise degeneracy at gamma zero") {
  std::vector<ColoredSpec> specs{{65, 0.0, 1.0, 0.0}};
  const NoiseBatch batch = sample_noise_batch(specs, 100000, 2024);
  const int T = batch.horizon;
  double lag0 = 0.0, lag1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  std::size_t count = 0;
  for (int m = 0; m < batch.num_samples; ++m) {
    for (int t = 0; t < T; ++t) {
      const double v = batch.at(m, t, 0);
      m2 += v * v;
      m3 += v * v * v;
      m4 += v * v * v * v;
      ++count;
      if (t + 1 < T) {
        lag0 += v * v;
        lag1 += v * batch.at(m, t + 1, 0);
      }
    }
  }
  const double autocorr = lag1 / lag0;
  CHECK(std::abs(autocorr) < 0.01);
  const double var = m2 / count;
  const double skew = (m3 / count) / std::pow(var, 1.5);
  const double kurt = (m4 / count) / (var * var) - 3.0;
  CHECK(std::abs(skew) < 0.05);
  CHECK(std::abs(kurt) < 0.05);
}

TEST_CASE("spectral slope recovers gamma") {
  const int T = 256;
  for (double gamma : {1.0, 2.0}) {
    std::vector<ColoredSpec> specs{{T, gamma, 1.0, 0.0}};
    const NoiseBatch batch = sample_noise_batch(specs, 10000, 555);
    std::vector<Periodogram> ensemble;
    ensemble.reserve(batch.num_samples);
    std::vector<double> signal(T);
    for (int m = 0; m < batch.num_samples; ++m) {
      for (int t = 0; t < T; ++t) signal[t] = batch.at(m, t, 0);
      ensemble.push_back(periodogram(signal, 1.0));
    }
    const double f_lo = 2.0 / (T / 2 + 1);
    const double estimate = fit_psd_exponent(ensemble, f_lo, 0.5);
    CAPTURE(gamma);
    CHECK(std::abs(estimate - gamma) < 0.15);
  }
}
