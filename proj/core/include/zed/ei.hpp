#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zed/rng.hpp"

namespace zed::ei {

/// Threshold comparator bank. `scaling[L-1]` holds g(L); an empty table
/// means the worst case g(L) = L.
struct ComparatorSpec {
  std::vector<double> thresholds;
  double i_standby = 0.0;  // A, per comparator
  double v_dd = 0.0;       // V
  std::vector<double> scaling;

  bool operator==(const ComparatorSpec&) const = default;
};

double comparator_scaling(const ComparatorSpec& spec, std::size_t levels);
double comparator_power(const ComparatorSpec& spec);

struct ComparatorObservation {
  std::vector<bool> flags;  // flags[i] = level >= thresholds[i]
  double cost = 0.0;        // J over the elapsed interval
};

ComparatorObservation comparator_observe(double level, const ComparatorSpec& spec,
                                         double elapsed);

enum class AdcArchitecture { sar, flash };

struct SamplerSpec {
  double p_analog = 0.0;        // W, front-end power while measuring
  double t_measure = 0.0;       // s
  double c_sample = 0.0;        // F, explicit sampling capacitance (0 = derive from bits)
  double c_unit = 0.0;          // F, unit capacitance used when deriving
  AdcArchitecture architecture = AdcArchitecture::sar;
  unsigned bits = 12;
  double v_ref = 1.0;           // full-scale range V_r
  double v_dd = 3.3;
  double noise_a = 0.0;         // thermal noise variance is noise_a / t_measure
  double offset = 0.0;          // eps_0 at the reference point
  double offset_temp_coeff = 0.0;   // alpha, V/K
  double offset_drift = 0.0;        // beta, V/s
  double temp_ref = 300.0;          // T_0, K
  double time_ref = 0.0;            // t_0, s

  bool operator==(const SamplerSpec&) const = default;
};

/// Sampling capacitance. SAR arrays scale as c_unit 2^N; a flash converter
/// is charged per comparator, c_unit (2^N - 1).
double sampling_capacitance(const SamplerSpec& spec);
double sample_cost(const SamplerSpec& spec);
double quantization_lsb(double v_ref, unsigned bits);
double quantization_variance(double v_ref, unsigned bits);
/// Mid-rise quantizer over [0, v_ref]; returns (level, saturated).
std::pair<double, bool> quantize(double x, double v_ref, unsigned bits);
double offset_at(const SamplerSpec& spec, double t, double temp);

struct SampleReading {
  double value = 0.0;
  double cost = 0.0;
  bool saturated = false;
};

SampleReading sample_read(double true_value, const SamplerSpec& spec, double t, double temp,
                          Rng& rng);

enum class CounterPlacement { pre_storage, post_storage };

struct CoulombSpec {
  double quantum = 0.0;       // Delta E, J
  double event_energy = 0.0;  // E_v, J per counted event
  double idle_power = 0.0;    // P_id, W
  CounterPlacement placement = CounterPlacement::post_storage;
  double miss_probability = 0.0;

  bool operator==(const CoulombSpec&) const = default;
};

struct CoulombStep {
  std::int64_t events = 0;  // signed, this call
  double estimate = 0.0;    // cumulative counted flow
  double cost = 0.0;        // this call
};

/// Energy-flow counter. Flow not yet worth a full quantum is carried to
/// the next call, so estimate <= true flow < estimate + quantum without misses.
class CoulombCounter {
 public:
  explicit CoulombCounter(CoulombSpec spec);

  CoulombStep step(double flow, double t0, double t, Rng* rng = nullptr);

  double estimate() const { return static_cast<double>(count_) * spec_.quantum; }
  double residual() const { return residual_; }
  std::int64_t count() const { return count_; }

 private:
  CoulombSpec spec_;
  std::int64_t count_ = 0;
  double residual_ = 0.0;
};

/// gap / mean inter-crossing interval. Needs at least two crossings.
std::optional<double> time_to_event_estimate(const std::vector<double>& crossing_times,
                                             double energy_gap);

/// Ambient-to-harvest mapping for indirect estimation: a monotone
/// piecewise-linear table plus multiplicative bias and Gaussian spread.
struct IndirectSpec {
  std::vector<std::pair<double, double>> mapping;  // (ambient reading, harvest power W)
  SamplerSpec sensor;
  double mapping_bias = 0.0;      // relative
  double mapping_stddev = 0.0;    // relative

  bool operator==(const IndirectSpec&) const = default;
};

double map_ambient(const IndirectSpec& spec, double ambient);

struct IndirectReading {
  double harvest_power = 0.0;
  double cost = 0.0;
  bool saturated = false;
};

IndirectReading indirect_estimate(double ambient, const IndirectSpec& spec, double t,
                                  double temp, Rng& rng);

}  // namespace zed::ei
