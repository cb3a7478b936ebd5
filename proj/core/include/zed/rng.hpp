#pragma once

#include <cstdint>
#include <string_view>

namespace zed {

/// xoshiro256** generator. Bit-exact across platforms; all derived draws
/// below are defined in terms of operator() so streams are reproducible by
/// any implementation that follows the same recipe.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  /// One draw, always consumed, true with probability p.
  bool bernoulli(double p);
  /// Knuth multiplication method; suited to the small means used here.
  std::uint32_t poisson(double mean);
  /// Box-Muller, cached second variate.
  double normal(double mean = 0.0, double stddev = 1.0);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// Independent stream for (master seed, device, label):
/// key = splitmix64(seed) ^ splitmix64(device + 0x632be59bd9b4e019) ^ fnv1a64(label),
/// and xoshiro word i = splitmix64(key + i * 0x9e3779b97f4a7c15).
Rng rng_stream(std::uint64_t master_seed, std::uint64_t device_index, std::string_view label);

}  // namespace zed
