#ifndef FSMPPI_RNG_HPP_
#define FSMPPI_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace fsmppi {

// splitmix64 step (Vigna). Used both as a stream generator and as a seed mixer.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives a child seed from (parent, index). Chainable, order-sensitive.
inline std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t index) {
  std::uint64_t s = parent ^ (0xD1B54A32D192ED03ULL * (index + 1));
  return splitmix64(s);
}

// Deterministic standard-normal stream (Box-Muller over splitmix64).
// One stream per (sample, dimension) keeps batch generation independent of
// thread scheduling.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : state_(seed) {}

  // Uniform on (0, 1].
  double uniform() {
    return static_cast<double>((splitmix64(state_) >> 11) + 1) * 0x1.0p-53;
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fsmppi

#endif  // FSMPPI_RNG_HPP_
