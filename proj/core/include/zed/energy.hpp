#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zed::energy {

/// Self-discharge. fraction_per_hour is applied as continuous exponential
/// decay; constant_power drains a fixed wattage.
struct Leakage {
  enum class Kind { none, fraction_per_hour, constant_power };
  Kind kind = Kind::none;
  double value = 0.0;

  static Leakage none() { return {}; }
  static Leakage fraction_per_hour(double f) { return {Kind::fraction_per_hour, f}; }
  static Leakage constant_power(double watts) { return {Kind::constant_power, watts}; }

  bool operator==(const Leakage&) const = default;
};

enum class StorageKind { ideal_buffer, capacitor };

struct StorageSpec {
  StorageKind kind = StorageKind::ideal_buffer;
  double capacity = 0.0;  // E_M; joules, or units in the abstract regime
  double eta_in = 1.0;    // eta_1
  double eta_out = 1.0;   // eta_2
  Leakage leak;
  double capacitance = 0.0;  // F, capacitor only
  double v_max = 0.0;        // V, capacitor only; capacity = C v_max^2 / 2
  double v_cutoff = 0.0;     // V_0
  std::string preset;        // technology preset name, empty if custom

  static StorageSpec ideal(double capacity, double eta_in = 1.0, double eta_out = 1.0,
                           Leakage leak = {});
  static StorageSpec capacitor(double capacitance, double v_max, double v_cutoff = 0.0,
                               double eta_in = 1.0, double eta_out = 1.0, Leakage leak = {});

  std::vector<std::string> violations() const;
  void validate() const;

  bool operator==(const StorageSpec&) const = default;
};

/// Technology presets use the midpoint of each published efficiency and
/// leakage range. The capacity is supplied by the caller.
StorageSpec storage_preset(std::string_view name, double capacity);
const std::vector<std::string>& storage_preset_names();

struct Ledger {
  double harvested = 0.0;  // raw input before eta_1
  double delivered = 0.0;  // load-side energy, before dividing by eta_2
  double leaked = 0.0;
  double spilled = 0.0;
  double acquisition_overhead = 0.0;  // subset of delivered spent on EI

  Ledger& operator+=(const Ledger& o);
  bool operator==(const Ledger&) const = default;
};

struct EnergyState {
  double stored = 0.0;
  Ledger ledger;

  /// Terminal voltage for capacitor storage, sqrt(2E/C).
  double voltage(const StorageSpec& spec) const;

  static EnergyState with_energy(double stored) { return {stored, {}}; }
  static EnergyState at_voltage(const StorageSpec& spec, double volts);
};

/// Residual of stored(after) - stored(before) against the ledger identity
/// eta_1 H - D / eta_2 - leaked - spilled, using ledger deltas.
double conservation_residual(const EnergyState& before, const EnergyState& after,
                             const StorageSpec& spec);

enum class StepStatus { ok, insufficient_energy };

struct StepResult {
  EnergyState state;
  StepStatus status = StepStatus::ok;
  double shortfall = 0.0;  // storage-side energy missing for the load
  double spilled = 0.0;    // excess above capacity in this step

  bool ok() const { return status == StepStatus::ok; }
};

double leak_energy(const StorageSpec& spec, double stored, double dt);

/// One storage update. `overhead` is the part of `load` spent acquiring
/// energy information. A load that cannot be served is not drawn at all;
/// harvest and leakage still apply.
StepResult step_energy(const EnergyState& state, const StorageSpec& spec, double harvest,
                       double load, double dt, double overhead = 0.0);

double capacitor_energy(double capacitance, double volts);

struct UsableEnergy {
  double energy = 0.0;
  bool below_cutoff = false;
};

UsableEnergy capacitor_usable_energy(double capacitance, double volts, double v_cutoff);

/// Closed-form RC response to a constant current source and resistive load.
double rc_transition(double v, double current, double resistance, double capacitance,
                     double duration);

// Harvester source models.
struct TraceSample {
  double t = 0.0;
  double v_source = 0.0;
  double i_source = 0.0;
  bool operator==(const TraceSample&) const = default;
};
struct VariableOutput {
  std::vector<TraceSample> trace;
  bool operator==(const VariableOutput&) const = default;
};
struct ConstantVoltage {
  double v_source = 0.0;
  double r_series = 1.0;
  bool operator==(const ConstantVoltage&) const = default;
};
struct ConstantCurrent {
  double current = 0.0;
  bool operator==(const ConstantCurrent&) const = default;
};
struct ConstantPower {
  double power = 0.0;
  double i_max = 0.0;  // cold-start cap
  bool operator==(const ConstantPower&) const = default;
};

using SourceModel = std::variant<VariableOutput, ConstantVoltage, ConstantCurrent, ConstantPower>;

/// Constant-power source with the default current cap, 10x the current
/// drawn at the cutoff voltage.
ConstantPower constant_power_source(double power, double v_cutoff);

double source_current(const SourceModel& source, double v, double t = 0.0);

// Load models.
struct ConstantResistance {
  double resistance = 0.0;
  bool operator==(const ConstantResistance&) const = default;
};
struct ConstantCurrentLoad {
  double current = 0.0;
  bool operator==(const ConstantCurrentLoad&) const = default;
};
struct ConstantPowerLoad {
  double power = 0.0;
  double v_brownout = 0.0;
  bool operator==(const ConstantPowerLoad&) const = default;
};

using PrimitiveLoad = std::variant<ConstantResistance, ConstantCurrentLoad, ConstantPowerLoad>;

struct WeightedLoad {
  double weight = 1.0;
  PrimitiveLoad load;
  bool operator==(const WeightedLoad&) const = default;
};
struct CompositeLoad {
  std::vector<WeightedLoad> parts;
  bool operator==(const CompositeLoad&) const = default;
};

using LoadModel =
    std::variant<ConstantResistance, ConstantCurrentLoad, ConstantPowerLoad, CompositeLoad>;

struct LoadDraw {
  double power = 0.0;
  bool brownout = false;
};

LoadDraw load_power(const LoadModel& load, double v);
double load_current(const LoadModel& load, double v);

struct CircuitResult {
  EnergyState state;
  bool brownout = false;
  double unserved = 0.0;  // storage-side energy the load could not draw
};

/// Forward-Euler integration of C dV/dt = I_src(V) - I_load(V) over dt.
/// Ledger increments use the trapezoidal voltage of each substep, which
/// keeps the conservation identity exact for the discrete trajectory.
CircuitResult integrate_circuit(const EnergyState& state, const SourceModel& source,
                                const LoadModel& load, const StorageSpec& spec, double dt,
                                int substeps, double t0 = 0.0);

// Harvest-use modes.
struct StoreHarvestConsume {};
struct ConcurrentHarvestConsume {};
struct HybridHarvestConsume {
  StorageSpec small;
  StorageSpec large;
};
using HarvestUseMode =
    std::variant<StoreHarvestConsume, ConcurrentHarvestConsume, HybridHarvestConsume>;

enum class ShcPhase { harvest, consume };

/// Store-then-consume: only the side matching the phase is connected.
StepResult shc_step(const EnergyState& state, const StorageSpec& spec, ShcPhase phase,
                    double harvest, double load, double dt);

struct HhcResult {
  StepResult small;
  StepResult large;
  double excess = 0.0;  // E_ex routed from the small buffer
};

/// Hybrid mode: the small buffer charges first; its overflow is routed into
/// the large buffer through the large buffer's eta_1. Immediate loads draw
/// from the small buffer, deferred loads from the large one.
HhcResult hhc_step(const EnergyState& small, const EnergyState& large,
                   const HybridHarvestConsume& mode, double harvest, double load_immediate,
                   double load_deferred, double dt);

}  // namespace zed::energy
