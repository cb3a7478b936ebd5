#include "zed/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "zed/error.hpp"

namespace zed::energy {

namespace {

struct PresetRow {
  const char* name;
  double capacity_min;
  double capacity_max;
  double eta_in;
  double eta_out;
  double leak_per_hour;
};

// Midpoints of the published ranges; "<= x" leakage bounds use x/2.
constexpr std::array<PresetRow, 5> kPresets{{
    {"capacitor", 1e-6, 1e-2, 1.0, 1.0, 0.0275},
    {"supercapacitor", 0.1, 100.0, 0.90, 0.90, 0.0275},
    {"li-ion", 0.5, 1e4, 0.85, 0.90, 0.000025},
    {"solid-state", 1.0, 1e4, 0.825, 0.85, 0.000005},
    {"hybrid", 0.5, 1e3, 0.90, 0.90, 0.00105},
}};

constexpr double kSecondsPerHour = 3600.0;
constexpr double kUnderflowTolerance = 1e-12;

}  // namespace

StorageSpec StorageSpec::ideal(double capacity, double eta_in, double eta_out, Leakage leak) {
  StorageSpec s;
  s.kind = StorageKind::ideal_buffer;
  s.capacity = capacity;
  s.eta_in = eta_in;
  s.eta_out = eta_out;
  s.leak = leak;
  return s;
}

StorageSpec StorageSpec::capacitor(double capacitance, double v_max, double v_cutoff,
                                   double eta_in, double eta_out, Leakage leak) {
  StorageSpec s;
  s.kind = StorageKind::capacitor;
  s.capacitance = capacitance;
  s.v_max = v_max;
  s.v_cutoff = v_cutoff;
  s.capacity = capacitor_energy(capacitance, v_max);
  s.eta_in = eta_in;
  s.eta_out = eta_out;
  s.leak = leak;
  return s;
}

std::vector<std::string> StorageSpec::violations() const {
  std::vector<std::string> out;
  auto bad = [&](const std::string& field, const std::string& why, double v) {
    std::ostringstream os;
    os << field << ": " << why << ", got " << v;
    out.push_back(os.str());
  };
  if (!(eta_in > 0.0 && eta_in <= 1.0)) bad("eta_in", "must be in (0, 1]", eta_in);
  if (!(eta_out > 0.0 && eta_out <= 1.0)) bad("eta_out", "must be in (0, 1]", eta_out);
  if (kind == StorageKind::capacitor) {
    if (!(capacitance > 0.0)) bad("capacitance_F", "must be positive", capacitance);
    if (!(v_max > 0.0)) bad("v_max_V", "must be positive", v_max);
    if (!(v_cutoff >= 0.0 && v_cutoff <= v_max)) bad("v_cutoff_V", "must be in [0, v_max]", v_cutoff);
  } else if (!(capacity > 0.0)) {
    bad("capacity", "must be positive", capacity);
  }
  switch (leak.kind) {
    case Leakage::Kind::none:
      break;
    case Leakage::Kind::fraction_per_hour:
      if (!(leak.value >= 0.0 && leak.value < 1.0)) bad("leak.value", "fraction must be in [0, 1)", leak.value);
      break;
    case Leakage::Kind::constant_power:
      if (!(leak.value >= 0.0)) bad("leak.value", "power must be non-negative", leak.value);
      break;
  }
  return out;
}

void StorageSpec::validate() const {
  const auto v = violations();
  if (!v.empty()) throw ContractViolation("storage spec: " + v.front());
}

StorageSpec storage_preset(std::string_view name, double capacity) {
  for (const auto& row : kPresets) {
    if (name != row.name) continue;
    require(capacity >= row.capacity_min && capacity <= row.capacity_max,
            std::string("storage preset ") + row.name + ": capacity outside the technology range");
    StorageSpec s = StorageSpec::ideal(capacity, row.eta_in, row.eta_out,
                                       Leakage::fraction_per_hour(row.leak_per_hour));
    s.preset = row.name;
    return s;
  }
  throw ContractViolation("unknown storage preset: " + std::string(name));
}

const std::vector<std::string>& storage_preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& row : kPresets) n.emplace_back(row.name);
    return n;
  }();
  return names;
}

Ledger& Ledger::operator+=(const Ledger& o) {
  harvested += o.harvested;
  delivered += o.delivered;
  leaked += o.leaked;
  spilled += o.spilled;
  acquisition_overhead += o.acquisition_overhead;
  return *this;
}

double EnergyState::voltage(const StorageSpec& spec) const {
  require(spec.kind == StorageKind::capacitor, "voltage: storage is not a capacitor");
  return std::sqrt(2.0 * std::max(stored, 0.0) / spec.capacitance);
}

EnergyState EnergyState::at_voltage(const StorageSpec& spec, double volts) {
  require(spec.kind == StorageKind::capacitor, "at_voltage: storage is not a capacitor");
  require(volts >= 0.0, "at_voltage: negative voltage");
  return with_energy(capacitor_energy(spec.capacitance, volts));
}

double conservation_residual(const EnergyState& before, const EnergyState& after,
                             const StorageSpec& spec) {
  const double dh = after.ledger.harvested - before.ledger.harvested;
  const double dd = after.ledger.delivered - before.ledger.delivered;
  const double dl = after.ledger.leaked - before.ledger.leaked;
  const double ds = after.ledger.spilled - before.ledger.spilled;
  const double expected = spec.eta_in * dh - dd / spec.eta_out - dl - ds;
  return (after.stored - before.stored) - expected;
}

double leak_energy(const StorageSpec& spec, double stored, double dt) {
  if (stored <= 0.0 || dt <= 0.0) return 0.0;
  switch (spec.leak.kind) {
    case Leakage::Kind::none:
      return 0.0;
    case Leakage::Kind::fraction_per_hour: {
      const double rate = -std::log1p(-spec.leak.value) / kSecondsPerHour;
      return stored * -std::expm1(-rate * dt);
    }
    case Leakage::Kind::constant_power:
      return std::min(stored, spec.leak.value * dt);
  }
  return 0.0;
}

StepResult step_energy(const EnergyState& state, const StorageSpec& spec, double harvest,
                       double load, double dt, double overhead) {
  require(harvest >= 0.0 && load >= 0.0, "step_energy: harvest and load must be non-negative");
  require(overhead >= 0.0 && overhead <= load, "step_energy: overhead must lie in [0, load]");
  require(dt >= 0.0, "step_energy: dt must be non-negative");

  StepResult r;
  r.state = state;
  Ledger& led = r.state.ledger;

  const double leaked = leak_energy(spec, state.stored, dt);
  const double available = state.stored + spec.eta_in * harvest - leaked;
  const double need = load / spec.eta_out;

  double next = available;
  if (need > 0.0) {
    const double gap = need - available;
    if (gap > kUnderflowTolerance * std::max(1.0, need)) {
      r.status = StepStatus::insufficient_energy;
      r.shortfall = gap;
    } else {
      next = std::max(available - need, 0.0);
      led.delivered += load;
      led.acquisition_overhead += overhead;
    }
  }
  if (next > spec.capacity) {
    r.spilled = next - spec.capacity;
    next = spec.capacity;
  }
  led.harvested += harvest;
  led.leaked += leaked;
  led.spilled += r.spilled;
  r.state.stored = next;
  return r;
}

double capacitor_energy(double capacitance, double volts) {
  return 0.5 * capacitance * volts * volts;
}

UsableEnergy capacitor_usable_energy(double capacitance, double volts, double v_cutoff) {
  if (volts < v_cutoff) return {0.0, true};
  return {0.5 * capacitance * (volts * volts - v_cutoff * v_cutoff), false};
}

double rc_transition(double v, double current, double resistance, double capacitance,
                     double duration) {
  require(resistance > 0.0 && capacitance > 0.0, "rc_transition: R and C must be positive");
  require(duration >= 0.0, "rc_transition: duration must be non-negative");
  const double decay = std::exp(-duration / (resistance * capacitance));
  return current * resistance * (1.0 - decay) + v * decay;
}

ConstantPower constant_power_source(double power, double v_cutoff) {
  require(power >= 0.0 && v_cutoff > 0.0, "constant_power_source: need power >= 0 and V0 > 0");
  return {power, 10.0 * power / v_cutoff};
}

namespace {

TraceSample interpolate(const std::vector<TraceSample>& trace, double t) {
  require(!trace.empty(), "variable-output source: empty trace");
  if (t <= trace.front().t) return trace.front();
  if (t >= trace.back().t) return trace.back();
  auto hi = std::upper_bound(trace.begin(), trace.end(), t,
                             [](double x, const TraceSample& s) { return x < s.t; });
  auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return {t, lo->v_source + w * (hi->v_source - lo->v_source),
          lo->i_source + w * (hi->i_source - lo->i_source)};
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double primitive_power(const PrimitiveLoad& load, double v, bool& brownout) {
  return std::visit(
      overloaded{
          [&](const ConstantResistance& l) { return v * v / l.resistance; },
          [&](const ConstantCurrentLoad& l) { return v * l.current; },
          [&](const ConstantPowerLoad& l) {
            if (v < l.v_brownout || v <= 0.0) {
              brownout = true;
              return 0.0;
            }
            return l.power;
          },
      },
      load);
}

}  // namespace

double source_current(const SourceModel& source, double v, double t) {
  return std::visit(
      overloaded{
          [&](const VariableOutput& s) {
            const TraceSample p = interpolate(s.trace, t);
            return p.v_source > v ? std::max(p.i_source, 0.0) : 0.0;
          },
          [&](const ConstantVoltage& s) {
            if (v >= s.v_source) return 0.0;
            return (s.v_source - v) / s.r_series;
          },
          [&](const ConstantCurrent& s) { return s.current; },
          [&](const ConstantPower& s) {
            if (v <= 0.0) return s.i_max;
            return std::min(s.power / v, s.i_max);
          },
      },
      source);
}

LoadDraw load_power(const LoadModel& load, double v) {
  LoadDraw d;
  d.power = std::visit(
      overloaded{
          [&](const CompositeLoad& c) {
            double p = 0.0;
            for (const auto& part : c.parts) p += part.weight * primitive_power(part.load, v, d.brownout);
            return p;
          },
          [&](const auto& prim) { return primitive_power(PrimitiveLoad{prim}, v, d.brownout); },
      },
      load);
  return d;
}

double load_current(const LoadModel& load, double v) {
  if (v <= 0.0) return 0.0;
  return load_power(load, v).power / v;
}

CircuitResult integrate_circuit(const EnergyState& state, const SourceModel& source,
                                const LoadModel& load, const StorageSpec& spec, double dt,
                                int substeps, double t0) {
  require(spec.kind == StorageKind::capacitor, "integrate_circuit: storage must be a capacitor");
  require(substeps > 0, "integrate_circuit: substeps must be positive");
  require(dt >= 0.0, "integrate_circuit: dt must be non-negative");

  CircuitResult out;
  out.state = state;
  Ledger& led = out.state.ledger;
  const double c = spec.capacitance;
  const double h = dt / substeps;
  double v = state.voltage(spec);

  for (int i = 0; i < substeps; ++i) {
    const double t = t0 + i * h;
    const double e0 = capacitor_energy(c, v);
    const double i_src = source_current(source, v, t);
    const LoadDraw draw = load_power(load, v);
    if (draw.brownout) out.brownout = true;
    const double i_load = v > 0.0 ? draw.power / v : 0.0;

    double v1 = v + (i_src - i_load) * h / c;
    double stored_in = 0.0;
    double drawn = 0.0;
    double spill = 0.0;
    if (v1 >= 0.0) {
      const double v_avg = 0.5 * (v + v1);
      stored_in = i_src * h * v_avg;
      drawn = i_load * h * v_avg;
      if (v1 > spec.v_max) {
        spill = e0 + stored_in - drawn - spec.capacity;
        v1 = spec.v_max;
      }
    } else {
      // Load outran the source: drain to zero and book the rest as unserved.
      stored_in = i_src * h * 0.5 * v;
      drawn = e0 + stored_in;
      out.unserved += std::max(0.0, i_load * h * v - drawn);
      v1 = 0.0;
    }
    double e1 = capacitor_energy(c, v1);
    const double leaked = leak_energy(spec, e1, h);
    e1 -= leaked;

    led.harvested += stored_in / spec.eta_in;
    led.delivered += drawn * spec.eta_out;
    led.spilled += spill;
    led.leaked += leaked;
    out.state.stored = e1;
    v = std::sqrt(2.0 * e1 / c);
  }
  return out;
}

StepResult shc_step(const EnergyState& state, const StorageSpec& spec, ShcPhase phase,
                    double harvest, double load, double dt) {
  if (phase == ShcPhase::harvest) return step_energy(state, spec, harvest, 0.0, dt);
  return step_energy(state, spec, 0.0, load, dt);
}

HhcResult hhc_step(const EnergyState& small, const EnergyState& large,
                   const HybridHarvestConsume& mode, double harvest, double load_immediate,
                   double load_deferred, double dt) {
  require(mode.small.capacity < mode.large.capacity, "hhc_step: small buffer must be smaller than the large one");
  HhcResult r;
  r.small = step_energy(small, mode.small, harvest, load_immediate, dt);
  r.excess = r.small.spilled;
  r.large = step_energy(large, mode.large, r.excess, load_deferred, dt);
  return r;
}

}  // namespace zed::energy
