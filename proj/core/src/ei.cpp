#include "zed/ei.hpp"

#include <algorithm>
#include <cmath>

#include "zed/error.hpp"

namespace zed::ei {

double comparator_scaling(const ComparatorSpec& spec, std::size_t levels) {
  if (levels == 0) return 0.0;
  if (spec.scaling.empty()) return static_cast<double>(levels);
  require(levels <= spec.scaling.size(), "comparator: scaling table shorter than level count");
  require(spec.scaling.front() == 1.0, "comparator: scaling table must have g(1) = 1");
  return spec.scaling[levels - 1];
}

double comparator_power(const ComparatorSpec& spec) {
  return comparator_scaling(spec, spec.thresholds.size()) * spec.i_standby * spec.v_dd;
}

ComparatorObservation comparator_observe(double level, const ComparatorSpec& spec,
                                         double elapsed) {
  require(elapsed >= 0.0, "comparator_observe: elapsed must be non-negative");
  ComparatorObservation obs;
  obs.flags.reserve(spec.thresholds.size());
  for (double th : spec.thresholds) obs.flags.push_back(level >= th);
  obs.cost = comparator_power(spec) * elapsed;
  return obs;
}

double sampling_capacitance(const SamplerSpec& spec) {
  if (spec.c_sample > 0.0 || spec.c_unit <= 0.0) return spec.c_sample;
  const double levels = std::ldexp(1.0, static_cast<int>(spec.bits));
  return spec.architecture == AdcArchitecture::sar ? spec.c_unit * levels
                                                   : spec.c_unit * (levels - 1.0);
}

double sample_cost(const SamplerSpec& spec) {
  return spec.p_analog * spec.t_measure + sampling_capacitance(spec) * spec.v_dd * spec.v_dd;
}

double quantization_lsb(double v_ref, unsigned bits) {
  return v_ref / std::ldexp(1.0, static_cast<int>(bits));
}

double quantization_variance(double v_ref, unsigned bits) {
  return v_ref * v_ref / (3.0 * std::ldexp(1.0, static_cast<int>(2 * bits + 2)));
}

std::pair<double, bool> quantize(double x, double v_ref, unsigned bits) {
  require(bits >= 1 && bits <= 52, "quantize: bits must be in [1, 52]");
  const double lsb = quantization_lsb(v_ref, bits);
  const double top = std::ldexp(1.0, static_cast<int>(bits)) - 1.0;
  const bool saturated = x < 0.0 || x > v_ref;
  const double code = std::clamp(std::floor(x / lsb), 0.0, top);
  return {(code + 0.5) * lsb, saturated};
}

double offset_at(const SamplerSpec& spec, double t, double temp) {
  return spec.offset + spec.offset_temp_coeff * (temp - spec.temp_ref) +
         spec.offset_drift * (t - spec.time_ref);
}

SampleReading sample_read(double true_value, const SamplerSpec& spec, double t, double temp,
                          Rng& rng) {
  double noise = 0.0;
  if (spec.noise_a > 0.0) {
    require(spec.t_measure > 0.0, "sample_read: thermal noise needs a positive measurement time");
    noise = rng.normal(0.0, std::sqrt(spec.noise_a / spec.t_measure));
  }
  const auto [value, saturated] =
      quantize(true_value + noise + offset_at(spec, t, temp), spec.v_ref, spec.bits);
  return {value, sample_cost(spec), saturated};
}

CoulombCounter::CoulombCounter(CoulombSpec spec) : spec_(spec) {
  require(spec_.quantum > 0.0, "coulomb counter: quantum must be positive");
  require(spec_.miss_probability >= 0.0 && spec_.miss_probability <= 1.0,
          "coulomb counter: miss probability must be in [0, 1]");
}

CoulombStep CoulombCounter::step(double flow, double t0, double t, Rng* rng) {
  require(t >= t0, "coulomb counter: t must not precede t0");
  require(spec_.placement == CounterPlacement::post_storage || flow >= 0.0,
          "coulomb counter: pre-storage flow must be non-negative");
  residual_ += flow;
  const double q = std::floor(residual_ / spec_.quantum);
  residual_ -= q * spec_.quantum;
  const auto crossed = static_cast<std::int64_t>(q);

  std::int64_t counted = crossed;
  if (spec_.miss_probability > 0.0) {
    require(rng != nullptr, "coulomb counter: miss probability needs an rng");
    const std::int64_t sign = crossed < 0 ? -1 : 1;
    counted = 0;
    for (std::int64_t i = 0; i < crossed * sign; ++i)
      if (!rng->bernoulli(spec_.miss_probability)) counted += sign;
  }
  count_ += counted;

  CoulombStep s;
  s.events = counted;
  s.estimate = estimate();
  s.cost = (t - t0) * spec_.idle_power +
           static_cast<double>(counted < 0 ? -counted : counted) * spec_.event_energy;
  return s;
}

std::optional<double> time_to_event_estimate(const std::vector<double>& crossing_times,
                                             double energy_gap) {
  if (crossing_times.size() < 2) return std::nullopt;
  const double span = crossing_times.back() - crossing_times.front();
  if (!(span > 0.0)) return std::nullopt;
  const double mean_interval = span / static_cast<double>(crossing_times.size() - 1);
  return energy_gap / mean_interval;
}

double map_ambient(const IndirectSpec& spec, double ambient) {
  const auto& m = spec.mapping;
  require(!m.empty(), "indirect: empty mapping table");
  for (std::size_t i = 1; i < m.size(); ++i)
    require(m[i].first > m[i - 1].first && m[i].second >= m[i - 1].second,
            "indirect: mapping must be monotone");
  if (ambient <= m.front().first) return m.front().second;
  if (ambient >= m.back().first) return m.back().second;
  auto hi = std::upper_bound(m.begin(), m.end(), ambient,
                             [](double x, const auto& p) { return x < p.first; });
  auto lo = hi - 1;
  const double w = (ambient - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

IndirectReading indirect_estimate(double ambient, const IndirectSpec& spec, double t,
                                  double temp, Rng& rng) {
  const SampleReading r = sample_read(ambient, spec.sensor, t, temp, rng);
  double scale = 1.0 + spec.mapping_bias;
  if (spec.mapping_stddev > 0.0) scale += rng.normal(0.0, spec.mapping_stddev);
  return {std::max(0.0, map_ambient(spec, r.value) * scale), r.cost, r.saturated};
}

}  // namespace zed::ei
