#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zed/energy.hpp"
#include "zed/forecast.hpp"
#include "zed/policy.hpp"
#include "zed/rf.hpp"
#include "zed/tasks.hpp"

namespace zed::sim {

enum class Regime { abstract, physical };

/// abstract: tasks (single-device task deferring), packets (shared-channel
/// status updates). physical: gate, tinyml, solar, rf.
enum class Engine { tasks, packets, gate, tinyml, solar, rf };

struct ArrivalProcess {
  enum class Kind { bernoulli, poisson, fixed };
  Kind kind = Kind::bernoulli;
  double rate = 0.0;              // bernoulli probability or poisson mean
  double unit = 1.0;              // energy units per bernoulli success
  std::vector<double> sequence;   // fixed: value per slot, zero past the end

  bool operator==(const ArrivalProcess&) const = default;
};

struct AbstractPolicy {
  enum class Kind { energy_blind, periodic_measure, aoi_fully_aware, aoi_threshold };
  Kind kind = Kind::periodic_measure;
  std::size_t interval = 1;        // F or Q, slots
  double spend = 1.0;              // E_t for energy_blind packets
  double measure_cost = 0.0;       // E_c per sample
  double threshold = 1.0;          // delta
  double comparator_cost = 0.0;    // per slot, aoi_threshold
  policy::EnergyCurve transmit_probability = policy::EnergyCurve::ramp(10.0);  // f'

  bool operator==(const AbstractPolicy&) const = default;
};

struct AbstractConfig {
  double capacity = 10.0;          // E_M, units
  double initial = 0.0;
  ArrivalProcess energy{ArrivalProcess::Kind::poisson, 0.75, 1.0, {}};
  ArrivalProcess events{ArrivalProcess::Kind::bernoulli, 0.35, 1.0, {}};
  double task_cost = 2.0;
  std::size_t buffer = 1;          // task buffer B (packets always hold one)
  policy::EnergyCurve erasure = policy::EnergyCurve::exponential(2.5);  // f
  AbstractPolicy policy;

  bool operator==(const AbstractConfig&) const = default;
};

struct GateConfig {
  double capacitance = 2.5;
  double v_on = 4.0;
  double v_off = 3.6;
  double v_max = 5.0;
  double v_init = 3.6;
  double harvest_power = 6e-3;
  double dt = 0.01;
  double duration = 6.0 * 3600.0;
  double interval = 60.0;          // TI
  std::string radio = "nbiot-like";
  tasks::Transaction transaction = tasks::Transaction::tx_only;

  bool operator==(const GateConfig&) const = default;
};

struct ModelConfig {
  std::string id;
  int accuracy_rank = 0;
  double energy = 0.0;     // J per inference
  double duration = 0.0;   // s

  bool operator==(const ModelConfig&) const = default;
};

struct TinyMlConfig {
  double capacitance = 0.5;
  double v_min = 2.0;
  double v_max = 5.0;
  double v_init = 2.0;
  double v_nominal = 3.0;          // voltage at which model energies were measured
  double harvest_current = 1e-3;
  double quiescent_current = 50e-6;
  double period = 1.0;
  double duration = 3600.0;
  std::vector<ModelConfig> models{{"STML", 0, 0.12e-3, 0.02}, {"LTML", 1, 1.46e-3, 0.15}};

  bool operator==(const TinyMlConfig&) const = default;
};

struct SolarConfig {
  enum class Policy { forecast_wait, fixed_rate };
  std::size_t days = 3;
  std::size_t train_days = 2;
  forecast::PanelSpec panel{0.081 * 0.137, 0.17, 0.85, 30.0};
  forecast::SyntheticSky sky;
  unsigned ar_order = 5;
  unsigned diff_order = 1;
  double capacity = 50.0;          // J
  double initial = 25.0;
  double reserve = 10.0;           // J kept untouched by forecast_wait
  double task_energy = 2.0;        // J per transmission
  double wake_cost = 5e-3;         // J per forecast_wait wake-up (sensor read + forecast)
  std::size_t horizon = 120;       // forecast slots
  Policy policy = Policy::forecast_wait;
  std::size_t fixed_interval = 20; // slots between fixed_rate attempts

  bool operator==(const SolarConfig&) const = default;
};

struct RfConfig {
  std::size_t scenes = 1000;
  double disk_radius = 100.0;
  rf::RfScene scene{4, 10.0, 0.0, 10.0, 2.7, 40.0, 0.5, 0.0, 0.0, 0.5, 1.0};
  rf::RfSchedule schedule;

  bool operator==(const RfConfig&) const = default;
};

struct ScenarioConfig {
  int schema = 1;
  std::string name = "scenario";
  Regime regime = Regime::abstract;
  Engine engine = Engine::tasks;
  std::uint64_t seed = 1;
  std::size_t slots = 100000;
  std::size_t n_devices = 1;
  bool trace = false;
  AbstractConfig abstract;
  GateConfig gate;
  TinyMlConfig tinyml;
  SolarConfig solar;
  RfConfig rf;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Every violated constraint, each prefixed by its JSON field path.
std::vector<std::string> validate(const ScenarioConfig& config);

/// A failed attempt wastes the stored energy but keeps the task queued, so
/// arrivals == completed + dropped + buffered; failed_attempts counts
/// attempts, not tasks.
struct TaskCounts {
  std::uint64_t arrivals = 0;
  std::uint64_t completed = 0;
  std::uint64_t failed_attempts = 0;
  std::uint64_t dropped = 0;  // arrived to a full buffer
  std::uint64_t buffered = 0;

  bool operator==(const TaskCounts&) const = default;
};

struct TraceRow {
  std::uint64_t slot = 0;
  std::uint64_t device = 0;
  double stored = 0.0;
  std::string event;
  double value = 0.0;  // aoi, voltage or decision detail, per engine

  bool operator==(const TraceRow&) const = default;
};

struct Metrics {
  std::optional<double> task_completion_rate;
  std::optional<double> avg_aoi;
  std::optional<double> net_harvested_power;  // W
  std::optional<double> throughput;           // packets/hour
  std::optional<std::uint64_t> restart_count;
  energy::Ledger ledger;
  std::optional<TaskCounts> tasks;
  std::vector<std::pair<std::string, double>> extras;  // engine-specific, fixed order
  std::vector<TraceRow> trace;

  std::optional<double> extra(std::string_view key) const;
  bool operator==(const Metrics&) const = default;
};

/// Validates, then simulates. Pure in (config); throws ConfigError.
Metrics run(const ScenarioConfig& config);

std::uint64_t aoi_update(std::uint64_t aoi, std::uint64_t generated_at, bool received, std::uint64_t now);

enum class ChannelResult { success, erased, collided };

struct ChannelOutcome {
  std::vector<std::size_t> transmitters;
  std::vector<ChannelResult> results;  // parallel to transmitters

  std::size_t successes() const;
};

/// Erased transmissions are lost before the receiver and do not collide;
/// a success needs exactly one surviving transmitter.
ChannelOutcome resolve_channel(const std::vector<std::size_t>& transmitters,
                               const std::vector<double>& spent, const policy::EnergyCurve& erasure,
                               Rng& rng);

}  // namespace zed::sim
