#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace drmel {

// splitmix64 step; advances state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic seed for a substream addressed by (seed, key0, key1, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

// xoshiro256** with portable samplers. All draws depend only on the seed, so
// results are identical across platforms and standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed);
  static RngStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    return RngStream(derive_seed(seed, keys));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next(); }

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1).
  double uniform_open();
  // Uniform integer in [0, n), unbiased.
  std::size_t index(std::size_t n);
  // Standard normal (Marsaglia polar method).
  double normal();
  // Gamma with the given shape and scale (Marsaglia-Tsang).
  double gamma(double shape, double scale);

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace drmel
