#include "zed/rng.hpp"

#include <cmath>
#include <numbers>

#include "zed/error.hpp"

namespace zed {

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) {
  for (int i = 0; i < 4; ++i) s_[i] = splitmix64(seed + static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL);
}

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

bool Rng::bernoulli(double p) { return uniform() < p; }

std::uint32_t Rng::poisson(double mean) {
  require(mean >= 0.0 && mean < 30.0, "poisson: mean must be in [0, 30)");
  const double limit = std::exp(-mean);
  std::uint32_t k = 0;
  double prod = uniform();
  while (prod >= limit && mean > 0.0) {
    ++k;
    prod *= uniform();
  }
  return k;
}

double Rng::normal(double mean, double stddev) {
  if (has_cached_) {
    has_cached_ = false;
    return mean + stddev * cached_normal_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_ = true;
  return mean + stddev * r * std::cos(a);
}

std::uint64_t Rng::below(std::uint64_t n) {
  require(n > 0, "below: n must be positive");
  return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

Rng rng_stream(std::uint64_t master_seed, std::uint64_t device_index, std::string_view label) {
  const std::uint64_t key =
      splitmix64(master_seed) ^ splitmix64(device_index + 0x632be59bd9b4e019ULL) ^ fnv1a64(label);
  return Rng(key);
}

}  // namespace zed
