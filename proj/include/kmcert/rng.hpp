#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace kmcert {

/** One step of the splitmix64 generator; used to mix seeds for stream derivation. */
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/**
 * Deterministic random stream with hand-rolled distributions.
 *
 * All draws are functions of the seed alone (no global state, no
 * library-version-dependent distribution objects), so results are
 * bit-for-bit reproducible across platforms. Independent child streams
 * for concurrent work come from spawn(), which derives seeds with
 * splitmix64 so outcomes do not depend on execution order.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t st = seed;
    gen_.seed(splitmix64(st));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /** Uniform double in [0, 1) with 53 random bits. */
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /** Uniform integer in [0, bound); unbiased via rejection. */
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % bound;
    }
  }

  /** Standard normal draw (Box-Muller, with the spare value cached). */
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /** Derive n independent child streams; consumes one draw from this stream. */
  std::vector<Rng> spawn(std::size_t n) {
    const std::uint64_t salt = next_u64();
    std::vector<Rng> children;
    children.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t st = salt ^ (0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(i + 1));
      children.emplace_back(splitmix64(st));
    }
    return children;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace kmcert
