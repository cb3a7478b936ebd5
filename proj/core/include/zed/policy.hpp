#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "zed/rng.hpp"

namespace zed::policy {

/// What a device knows at decision time. exact_energy is present only in
/// slots where the policy paid for a sample.
struct Observation {
  std::size_t slot = 0;
  std::optional<double> exact_energy;
  std::optional<std::vector<bool>> flags;
  std::optional<std::vector<double>> forecast;
  std::size_t buffer_occupancy = 0;
  bool device_on = true;
  std::optional<double> voltage;
  std::optional<double> harvest_current;
};

struct Sleep {};
struct Measure {};
struct Execute { std::string task_id; };
struct Transmit { double energy = 0.0; };
struct Defer {};
struct SelectModel { std::string model_id; };
struct SetPhaseConfig { std::size_t index = 0; };
struct PowerGate { bool on = false; };

using PolicyDecision =
    std::variant<Sleep, Measure, Execute, Transmit, Defer, SelectModel, SetPhaseConfig, PowerGate>;

/// EI the engine must acquire (and charge for) before calling decide().
struct AcquisitionPlan {
  bool sample = false;
  bool comparator = false;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  virtual AcquisitionPlan plan(std::size_t slot, std::size_t buffer_occupancy) const;
  virtual PolicyDecision decide(const Observation& obs, Rng& rng) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
};

/// Monotone map from stored energy to a probability.
struct EnergyCurve {
  enum class Kind { ramp, exponential, table, constant };
  Kind kind = Kind::ramp;
  double scale = 1.0;                             // ramp: E at which 1 is reached; exponential: E_f
  std::vector<std::pair<double, double>> points;  // table breakpoints, linear in between
  double value = 0.0;                             // constant

  double operator()(double energy) const;
  bool non_decreasing() const;
  bool non_increasing() const;

  static EnergyCurve ramp(double full_scale) { return {Kind::ramp, full_scale, {}, 0.0}; }
  static EnergyCurve exponential(double e_f) { return {Kind::exponential, e_f, {}, 0.0}; }
  static EnergyCurve table(std::vector<std::pair<double, double>> pts) {
    return {Kind::table, 1.0, std::move(pts), 0.0};
  }
  static EnergyCurve constant(double v) { return {Kind::constant, 1.0, {}, v}; }

  bool operator==(const EnergyCurve&) const = default;
};

enum class Target { task, packet };

class EnergyBlind final : public Policy {
 public:
  EnergyBlind(std::size_t interval, double spend, Target target);
  std::string_view name() const override { return "energy_blind"; }
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<EnergyBlind>(*this); }

 private:
  std::size_t interval_;
  double spend_;
  Target target_;
};

/// Samples storage every Q slots and keeps a lower-bound estimate: the last
/// reading minus spends made since.
class PeriodicMeasure final : public Policy {
 public:
  PeriodicMeasure(std::size_t interval, double measure_cost, double task_cost);
  std::string_view name() const override { return "periodic_measure"; }
  AcquisitionPlan plan(std::size_t slot, std::size_t buffer_occupancy) const override;
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<PeriodicMeasure>(*this); }

  double estimate() const { return estimate_; }
  double measure_cost() const { return measure_cost_; }

 private:
  std::size_t interval_;
  double measure_cost_;
  double task_cost_;
  double estimate_ = 0.0;
};

class AoiFullyAware final : public Policy {
 public:
  explicit AoiFullyAware(EnergyCurve transmit_probability);
  std::string_view name() const override { return "aoi_fully_aware"; }
  AcquisitionPlan plan(std::size_t slot, std::size_t buffer_occupancy) const override;
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<AoiFullyAware>(*this); }

 private:
  EnergyCurve f_prime_;
};

/// Single-comparator policy; flags[0] must report E >= threshold.
class AoiThreshold final : public Policy {
 public:
  explicit AoiThreshold(double threshold);
  std::string_view name() const override { return "aoi_threshold"; }
  AcquisitionPlan plan(std::size_t slot, std::size_t buffer_occupancy) const override;
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<AoiThreshold>(*this); }

  double threshold() const { return threshold_; }

 private:
  double threshold_;
};

struct InferenceModel {
  std::string id;
  int accuracy_rank = 0;      // higher is more accurate
  double duration = 0.0;      // T_L, s
  double resistance = 0.0;    // R_L, ohm

  bool operator==(const InferenceModel&) const = default;
};

/// Equivalent load resistance of a model that spends `energy` over
/// `duration` at `v_nominal`: R = V^2 T / E.
InferenceModel inference_model(std::string id, int accuracy_rank, double energy, double duration,
                               double v_nominal);

class TinyMlSelect final : public Policy {
 public:
  TinyMlSelect(std::vector<InferenceModel> models, double v_min, double capacitance);
  std::string_view name() const override { return "tinyml_select"; }
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<TinyMlSelect>(*this); }

  /// Index into models() of the most accurate feasible model.
  std::optional<std::size_t> choose(double v, double current) const;
  double post_voltage(std::size_t model, double v, double current) const;
  const std::vector<InferenceModel>& models() const { return models_; }

 private:
  std::vector<InferenceModel> models_;  // sorted, most accurate first
  double v_min_;
  double capacitance_;
};

enum class GateTransition { power_on, power_off };

/// Hysteresis gate: ON when V >= V_on, OFF when V < V_off. Every power
/// loss counts as a restart; the engine charges the rejoin on the next ON.
class DualThresholdGate final : public Policy {
 public:
  DualThresholdGate(double v_on, double v_off, bool start_on = false);
  std::string_view name() const override { return "dual_threshold_gate"; }
  PolicyDecision decide(const Observation& obs, Rng& rng) override;
  std::unique_ptr<Policy> clone() const override { return std::make_unique<DualThresholdGate>(*this); }

  std::optional<GateTransition> update(double v);
  bool is_on() const { return on_; }
  std::uint64_t restarts() const { return restarts_; }

 private:
  double v_on_;
  double v_off_;
  bool on_;
  std::uint64_t restarts_ = 0;
};

}  // namespace zed::policy
