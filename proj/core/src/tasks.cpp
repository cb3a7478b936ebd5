#include "zed/tasks.hpp"

#include <array>
#include <cmath>

#include "zed/error.hpp"

namespace zed::tasks {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double state_energy(const SensorState& s, double v_dd) { return v_dd * s.current * s.duration; }

struct KindRow {
  ComputeKind kind;
  const char* name;
  Scaling scaling;
};

constexpr std::array<KindRow, 18> kKinds{{
    {ComputeKind::threshold_check, "threshold-check", Scaling::constant},
    {ComputeKind::timer_interrupt, "timer-interrupt", Scaling::constant},
    {ComputeKind::scheduler_tick, "scheduler-tick", Scaling::constant},
    {ComputeKind::crc8_update, "crc8", Scaling::linear},
    {ComputeKind::delta_encoding, "delta-encoding", Scaling::linear},
    {ComputeKind::run_length_encoding, "run-length-encoding", Scaling::linear},
    {ComputeKind::minmax_search, "minmax-search", Scaling::linear},
    {ComputeKind::moving_average, "moving-average", Scaling::linear_k},
    {ComputeKind::histogram, "histogram", Scaling::n_plus_k_log_k},
    {ComputeKind::fir_filter, "fir", Scaling::linear_k},
    {ComputeKind::fft_radix2, "fft", Scaling::n_log_n},
    {ComputeKind::autocorrelation, "autocorrelation", Scaling::quadratic},
    {ComputeKind::kmeans_update, "kmeans", Scaling::linear_k},
    {ComputeKind::cnn_inference, "cnn", Scaling::linear_k},
    {ComputeKind::binary_classifier, "binary-classifier", Scaling::quadratic},
    {ComputeKind::hmac, "hmac", Scaling::linear},
    {ComputeKind::ecc_scalar_mult, "ecc-scalar-mult", Scaling::quadratic},
    {ComputeKind::rsa_encryption, "rsa", Scaling::cubic},
}};

const KindRow& row_of(ComputeKind kind) {
  for (const auto& r : kKinds)
    if (r.kind == kind) return r;
  throw ContractViolation("unknown compute kind");
}

}  // namespace

Cost sensing_energy(const SensingProfile& p) {
  for (const SensorState* s : {&p.sleep, &p.wake, &p.measure, &p.convert})
    require(s->current >= 0.0 && s->duration >= 0.0, "sensing: currents and durations must be >= 0");
  Cost c;
  c.energy = state_energy(p.wake, p.v_dd) + state_energy(p.measure, p.v_dd) +
             state_energy(p.convert, p.v_dd);
  c.duration = p.wake.duration + p.measure.duration + p.convert.duration;
  if (p.periodic) {
    c.energy += state_energy(p.sleep, p.v_dd);
    c.duration += p.sleep.duration;
  }
  return c;
}

Scaling scaling_of(ComputeKind kind) { return row_of(kind).scaling; }

std::string_view compute_kind_name(ComputeKind kind) { return row_of(kind).name; }

std::optional<ComputeKind> compute_kind_from_name(std::string_view name) {
  for (const auto& r : kKinds)
    if (name == r.name) return r.kind;
  return std::nullopt;
}

const std::vector<ComputeKind>& all_compute_kinds() {
  static const std::vector<ComputeKind> kinds = [] {
    std::vector<ComputeKind> v;
    for (const auto& r : kKinds) v.push_back(r.kind);
    return v;
  }();
  return kinds;
}

std::uint64_t ceil_log2(std::uint64_t n) {
  if (n < 2) return 0;
  std::uint64_t bits = 0;
  std::uint64_t v = n - 1;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

double compute_cycles(Scaling scaling, std::uint64_t n, std::uint64_t k, double c) {
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  switch (scaling) {
    case Scaling::constant: return c;
    case Scaling::linear: return c * dn;
    case Scaling::linear_k: return c * dn * dk;
    case Scaling::n_log_n: return c * dn * static_cast<double>(ceil_log2(n));
    case Scaling::n_plus_k_log_k: return c * (dn + dk * static_cast<double>(ceil_log2(k)));
    case Scaling::quadratic: return c * dn * dn;
    case Scaling::cubic: return c * dn * dn * dn;
  }
  throw ContractViolation("unknown scaling");
}

double compute_cycles(ComputeKind kind, std::uint64_t n, std::uint64_t k, double c) {
  return compute_cycles(scaling_of(kind), n, k, c);
}

Cost compute_energy(const ComputeProfile& profile, double cycles) {
  require(cycles >= 0.0, "compute_energy: cycle count must be non-negative");
  return std::visit(
      overloaded{
          [&](const FixedVoltageMode& m) {
            require(m.activity > 0.0 && m.activity <= 1.0, "compute_energy: activity must be in (0, 1]");
            require(m.frequency > 0.0, "compute_energy: frequency must be positive");
            const double dynamic = m.activity * m.capacitance * m.v_dd * m.v_dd * cycles;
            const double leakage = m.i_leak * m.v_dd * cycles / m.frequency;
            return Cost{dynamic + leakage, cycles / m.frequency};
          },
          [&](const DvfsMode& m) {
            require(m.frequency > 0.0, "compute_energy: frequency must be positive");
            return Cost{m.coefficient * m.frequency * m.frequency * cycles, cycles / m.frequency};
          },
      },
      profile);
}

StateCost CommProfile::at(RadioState s) const {
  auto it = states.find(s);
  return it == states.end() ? StateCost{} : it->second;
}

std::vector<RadioState> transaction_states(Transaction t) {
  using R = RadioState;
  switch (t) {
    case Transaction::tx_only: return {R::deep_sleep, R::idle, R::prepare_tx, R::tx, R::deep_sleep};
    case Transaction::tx_ack:
      return {R::deep_sleep, R::idle, R::prepare_tx, R::tx, R::prepare_rx, R::rx, R::deep_sleep};
    case Transaction::rx_poll: return {R::deep_sleep, R::idle, R::prepare_rx, R::rx, R::deep_sleep};
  }
  throw ContractViolation("unknown transaction template");
}

Cost comm_transaction(const CommProfile& profile, Transaction t) {
  const auto seq = transaction_states(t);
  Cost c;
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    const StateCost s = profile.at(seq[i]);
    require(s.power >= 0.0 && s.duration >= 0.0, "comm_transaction: negative state cost");
    c.energy += s.power * s.duration;
    c.duration += s.duration;
  }
  return c;
}

RadioPreset radio_preset(std::string_view name) {
  using R = RadioState;
  RadioPreset p;
  if (name == "lorawan-like") {
    const double v = 3.3;
    p.profile.states = {
        {R::deep_sleep, {v * 0.4e-6, 0.0}},
        {R::idle, {v * 17e-3, 8e-3}},
        {R::prepare_tx, {0.0, 0.0}},
        {R::tx, {v * 50e-3, 50e-3}},
        {R::prepare_rx, {0.0, 0.0}},
        {R::rx, {v * 22.5e-3, 100e-3}},
    };
    p.rejoin = {v * 13e-3, 13.0};
    p.sleep_power = v * 0.4e-6;
    return p;
  }
  if (name == "nbiot-like") {
    const double v = 3.3;
    p.profile.states = {
        {R::deep_sleep, {v * 3e-6, 0.0}},
        {R::idle, {v * 6e-3, 50e-3}},
        {R::prepare_tx, {v * 20e-3, 10e-3}},
        {R::tx, {v * 200e-3, 50e-3}},
        {R::prepare_rx, {v * 6e-3, 20e-3}},
        {R::rx, {v * 40e-3, 100e-3}},
    };
    p.rejoin = {v * 30e-3, 5.0};
    p.sleep_power = v * 3e-6;
    return p;
  }
  throw ContractViolation("unknown radio preset: " + std::string(name));
}

ServoBreakdown servo_breakdown(const ServoActuator& s) {
  require(s.k_torque > 0.0 && s.i_stall > 0.0 && s.omega_no_load > 0.0,
          "servo: K_t, I_s and omega_0 must be positive");
  ServoBreakdown b{};
  b.lambda = s.tau_load / (s.k_torque * s.i_stall);
  if (b.lambda >= 1.0) throw ContractViolation("servo: load torque stalls the motor (lambda >= 1)");
  b.i_avg = s.i_no_load + s.tau_load / s.k_torque;
  b.t_move = s.theta / (s.omega_no_load * (1.0 - b.lambda));
  b.e_move = s.v_supply * b.i_avg * b.t_move;
  b.e_hold = s.v_supply * s.i_hold * s.t_hold;
  return b;
}

double sma_heating_time(const SmaActuator& s) {
  require(s.i_rated > 0.0 && s.r_wire > 0.0, "sma: current and resistance must be positive");
  return s.thermal_mass * s.delta_t / (s.i_rated * s.i_rated * s.r_wire);
}

Cost actuator_energy(const ActuatorProfile& profile) {
  return std::visit(
      overloaded{
          [](const MemsActuator& a) {
            return Cost{a.c_m * (a.v_pull_in * a.v_pull_in - a.v_release * a.v_release) / 2.0,
                        a.switch_time};
          },
          [](const LedActuator& a) { return Cost{a.v_forward * a.i_forward * a.on_time, a.on_time}; },
          [](const PiezoActuator& a) { return Cost{a.c_p * a.v_drive * a.v_drive / 2.0, a.pulse_time}; },
          [](const SolenoidActuator& a) {
            require(a.r_coil > 0.0, "solenoid: coil resistance must be positive");
            return Cost{a.v_operate * a.v_operate * a.pulse_time / a.r_coil, a.pulse_time};
          },
          [](const EinkActuator& a) {
            if (a.t_update > 0.0) return Cost{a.v_drive * a.i_update * a.t_update, a.t_update};
            return Cost{a.area * a.energy_per_area, 0.0};
          },
          [](const SmaActuator& a) {
            const double t = sma_heating_time(a);
            return Cost{a.i_rated * a.i_rated * a.r_wire * t, t};
          },
          [](const ServoActuator& a) {
            const ServoBreakdown b = servo_breakdown(a);
            return Cost{b.e_move + b.e_hold, b.t_move + a.t_hold};
          },
      },
      profile);
}

ActuatorProfile actuator_preset(std::string_view name) {
  if (name == "mems") return MemsActuator{100e-12, 70.0, 0.0, 100e-6};
  if (name == "led") return LedActuator{2.0, 10e-3, 20e-3};
  if (name == "piezo") return PiezoActuator{0.5e-6, 60.0, 1e-3};
  if (name == "solenoid") return SolenoidActuator{160.0, 5.0, 20e-3};
  if (name == "eink") return EinkActuator{3.3, 18e-3, 0.5, 0.0, 0.0};
  if (name == "sma") return SmaActuator{6.2, 0.25, 50.0, 1.62e-3};
  if (name == "servo") {
    // tau_L and theta are not listed with the example; they are chosen so
    // that I_avg = I_0 + tau_L/K_t = 0.21 A and t_mv = 0.25 s.
    ServoActuator s{};
    s.v_supply = 5.0;
    s.i_no_load = 0.04;
    s.i_stall = 0.6;
    s.k_torque = 0.29;
    s.omega_no_load = 8.7;
    s.i_hold = 0.15;
    s.t_hold = 1.0;
    s.tau_load = (0.21 - s.i_no_load) * s.k_torque;
    const double lambda = s.tau_load / (s.k_torque * s.i_stall);
    s.theta = 0.25 * s.omega_no_load * (1.0 - lambda);
    return s;
  }
  throw ContractViolation("unknown actuator preset: " + std::string(name));
}

const std::vector<std::string>& actuator_preset_names() {
  static const std::vector<std::string> names{"mems", "led", "piezo", "solenoid", "eink", "sma", "servo"};
  return names;
}

std::vector<WorkUnit> split_task(const TaskSpec& task) {
  require(task.cost >= 0.0, "split_task: negative cost");
  const bool finer = task.granularity == Granularity::per_phase ||
                     task.granularity == Granularity::per_instruction;
  if (task.atomic) {
    if (finer) throw ContractViolation("split_task: atomic task '" + task.id + "' cannot be split");
    return {{task.cost, false}};
  }
  switch (task.granularity) {
    case Granularity::per_cycle:
    case Granularity::per_task:
      return {{task.cost, false}};
    case Granularity::per_phase: {
      require(!task.phases.empty(), "split_task: per-phase split needs phases");
      double sum = 0.0;
      std::vector<WorkUnit> units;
      for (const auto& p : task.phases) {
        sum += p.cost;
        units.push_back({p.cost, false});
      }
      require(std::abs(sum - task.cost) <= 1e-12 * std::max(1.0, task.cost),
              "split_task: phase costs must sum to the task cost");
      return units;
    }
    case Granularity::per_instruction: {
      require(task.quantum > 0.0, "split_task: per-instruction split needs a positive quantum");
      std::vector<WorkUnit> units;
      double left = task.cost;
      while (left > 0.0) {
        if (!units.empty()) units.push_back({task.checkpoint_cost, true});
        const double chunk = std::min(task.quantum, left);
        units.push_back({chunk, false});
        left -= chunk;
      }
      if (units.empty()) units.push_back({0.0, false});
      return units;
    }
  }
  throw ContractViolation("split_task: unknown granularity");
}

double total_charge(const std::vector<WorkUnit>& units) {
  double s = 0.0;
  for (const auto& u : units) s += u.cost;
  return s;
}

double base_cost(const std::vector<WorkUnit>& units) {
  double s = 0.0;
  for (const auto& u : units)
    if (!u.checkpoint) s += u.cost;
  return s;
}

namespace {

struct SecurityRow {
  const char* name;
  double cost;          // J, from the energy class
  bool atomic;          // low interrupt tolerance
  double deadline;      // s, from timing flexibility; 0 = none
};

// Energy classes: low 10 uJ, low-medium 50 uJ, medium 0.5 mJ,
// medium-high 5 mJ, high 20 mJ.
constexpr std::array<SecurityRow, 7> kSecurity{{
    {"authentication", 5e-3, true, 0.1},
    {"encryption", 0.5e-3, false, 10.0},
    {"key-generation", 20e-3, true, 1.0},
    {"key-exchange", 20e-3, true, 1.0},
    {"integrity-check", 50e-6, false, 0.0},
    {"access-control", 50e-6, false, 60.0},
    {"secure-boot", 5e-3, true, 1.0},
}};

}  // namespace

TaskSpec security_task(std::string_view name) {
  for (const auto& r : kSecurity) {
    if (name != r.name) continue;
    TaskSpec t;
    t.id = r.name;
    t.cost = r.cost;
    t.atomic = r.atomic;
    if (r.deadline > 0.0) t.deadline = r.deadline;
    if (r.atomic)
      t.task_class = r.deadline > 0.0 && r.deadline <= 1.0 ? TaskClass::temporally_constrained
                                                           : TaskClass::capacity_constrained;
    else
      t.task_class = TaskClass::intermittent;
    return t;
  }
  throw ContractViolation("unknown security task: " + std::string(name));
}

const std::vector<std::string>& security_task_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& r : kSecurity) n.emplace_back(r.name);
    return n;
  }();
  return names;
}

}  // namespace zed::tasks
