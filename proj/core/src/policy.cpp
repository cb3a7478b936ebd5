#include "zed/policy.hpp"

#include <algorithm>
#include <cmath>

#include "zed/energy.hpp"
#include "zed/error.hpp"

namespace zed::policy {

AcquisitionPlan Policy::plan(std::size_t, std::size_t) const { return {}; }

double EnergyCurve::operator()(double energy) const {
  switch (kind) {
    case Kind::ramp:
      return std::clamp(energy / scale, 0.0, 1.0);
    case Kind::exponential:
      return std::exp(-energy / scale);
    case Kind::constant:
      return value;
    case Kind::table: {
      require(!points.empty(), "energy curve: empty table");
      if (energy <= points.front().first) return points.front().second;
      if (energy >= points.back().first) return points.back().second;
      auto hi = std::upper_bound(points.begin(), points.end(), energy,
                                 [](double x, const auto& p) { return x < p.first; });
      auto lo = hi - 1;
      const double w = (energy - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  return 0.0;
}

bool EnergyCurve::non_decreasing() const {
  switch (kind) {
    case Kind::ramp: return scale > 0.0;
    case Kind::exponential: return false;
    case Kind::constant: return true;
    case Kind::table:
      for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first || points[i].second < points[i - 1].second) return false;
      return true;
  }
  return false;
}

bool EnergyCurve::non_increasing() const {
  switch (kind) {
    case Kind::ramp: return false;
    case Kind::exponential: return scale > 0.0;
    case Kind::constant: return true;
    case Kind::table:
      for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first || points[i].second > points[i - 1].second) return false;
      return true;
  }
  return false;
}

EnergyBlind::EnergyBlind(std::size_t interval, double spend, Target target)
    : interval_(interval), spend_(spend), target_(target) {
  require(interval_ >= 1, "energy_blind: F must be >= 1");
  require(spend_ > 0.0, "energy_blind: spend must be positive");
}

PolicyDecision EnergyBlind::decide(const Observation& obs, Rng&) {
  if (obs.buffer_occupancy == 0 || (obs.slot + 1) % interval_ != 0) return Sleep{};
  if (target_ == Target::packet) return Transmit{spend_};
  return Execute{"task"};
}

PeriodicMeasure::PeriodicMeasure(std::size_t interval, double measure_cost, double task_cost)
    : interval_(interval), measure_cost_(measure_cost), task_cost_(task_cost) {
  require(interval_ >= 1, "periodic_measure: Q must be >= 1");
  require(measure_cost_ >= 0.0, "periodic_measure: E_c must be >= 0");
  require(task_cost_ > 0.0, "periodic_measure: task cost must be positive");
}

AcquisitionPlan PeriodicMeasure::plan(std::size_t slot, std::size_t) const {
  return {(slot + 1) % interval_ == 0, false};
}

PolicyDecision PeriodicMeasure::decide(const Observation& obs, Rng&) {
  if (obs.exact_energy) estimate_ = *obs.exact_energy;
  if (obs.buffer_occupancy > 0 && estimate_ >= task_cost_) {
    estimate_ -= task_cost_;
    return Execute{"task"};
  }
  return obs.buffer_occupancy > 0 ? PolicyDecision{Defer{}} : PolicyDecision{Sleep{}};
}

AoiFullyAware::AoiFullyAware(EnergyCurve transmit_probability) : f_prime_(std::move(transmit_probability)) {
  require(f_prime_.non_decreasing(), "aoi_fully_aware: f' must be non-decreasing");
}

AcquisitionPlan AoiFullyAware::plan(std::size_t, std::size_t buffer_occupancy) const {
  return {buffer_occupancy > 0, false};
}

PolicyDecision AoiFullyAware::decide(const Observation& obs, Rng& rng) {
  if (obs.buffer_occupancy == 0 || !obs.exact_energy) return Sleep{};
  const double e = *obs.exact_energy;
  if (e <= 0.0) return Sleep{};
  if (rng.bernoulli(f_prime_(e))) return Transmit{e};
  return Defer{};
}

AoiThreshold::AoiThreshold(double threshold) : threshold_(threshold) {
  require(threshold_ > 0.0, "aoi_threshold: delta must be positive");
}

AcquisitionPlan AoiThreshold::plan(std::size_t, std::size_t) const { return {false, true}; }

PolicyDecision AoiThreshold::decide(const Observation& obs, Rng&) {
  if (obs.buffer_occupancy == 0) return Sleep{};
  require(obs.flags.has_value() && !obs.flags->empty(), "aoi_threshold: comparator flag missing");
  if ((*obs.flags)[0]) return Transmit{threshold_};
  return Defer{};
}

InferenceModel inference_model(std::string id, int accuracy_rank, double energy, double duration,
                               double v_nominal) {
  require(energy > 0.0 && duration > 0.0 && v_nominal > 0.0,
          "inference_model: energy, duration and voltage must be positive");
  return {std::move(id), accuracy_rank, duration, v_nominal * v_nominal * duration / energy};
}

TinyMlSelect::TinyMlSelect(std::vector<InferenceModel> models, double v_min, double capacitance)
    : models_(std::move(models)), v_min_(v_min), capacitance_(capacitance) {
  require(!models_.empty(), "tinyml_select: at least one model required");
  require(capacitance_ > 0.0, "tinyml_select: capacitance must be positive");
  std::stable_sort(models_.begin(), models_.end(),
                   [](const auto& a, const auto& b) { return a.accuracy_rank > b.accuracy_rank; });
}

double TinyMlSelect::post_voltage(std::size_t model, double v, double current) const {
  const InferenceModel& m = models_.at(model);
  return energy::rc_transition(v, current, m.resistance, capacitance_, m.duration);
}

std::optional<std::size_t> TinyMlSelect::choose(double v, double current) const {
  for (std::size_t i = 0; i < models_.size(); ++i)
    if (post_voltage(i, v, current) >= v_min_) return i;
  return std::nullopt;
}

PolicyDecision TinyMlSelect::decide(const Observation& obs, Rng&) {
  require(obs.voltage.has_value(), "tinyml_select: voltage observation missing");
  const auto pick = choose(*obs.voltage, obs.harvest_current.value_or(0.0));
  if (!pick) return Defer{};
  return SelectModel{models_[*pick].id};
}

DualThresholdGate::DualThresholdGate(double v_on, double v_off, bool start_on)
    : v_on_(v_on), v_off_(v_off), on_(start_on) {
  require(v_off_ < v_on_, "dual_threshold_gate: V_off must be below V_on");
}

std::optional<GateTransition> DualThresholdGate::update(double v) {
  if (!on_ && v >= v_on_) {
    on_ = true;
    return GateTransition::power_on;
  }
  if (on_ && v < v_off_) {
    on_ = false;
    ++restarts_;
    return GateTransition::power_off;
  }
  return std::nullopt;
}

PolicyDecision DualThresholdGate::decide(const Observation& obs, Rng&) {
  require(obs.voltage.has_value(), "dual_threshold_gate: voltage observation missing");
  update(*obs.voltage);
  return PowerGate{on_};
}

}  // namespace zed::policy
