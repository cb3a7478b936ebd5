#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zed::tasks {

/// Energy and time of one task execution.
struct Cost {
  double energy = 0.0;    // J
  double duration = 0.0;  // s
};

// ---- sensing ---------------------------------------------------------------

struct SensorState {
  double current = 0.0;   // A
  double duration = 0.0;  // s
};

struct SensingProfile {
  SensorState sleep;
  SensorState wake;
  SensorState measure;
  SensorState convert;
  double v_dd = 3.3;
  bool periodic = false;  // periodic triggering charges the sleep state to the task
};

Cost sensing_energy(const SensingProfile& profile);

// ---- computation -----------------------------------------------------------

enum class Scaling { constant, linear, linear_k, n_log_n, n_plus_k_log_k, quadratic, cubic };

enum class ComputeKind {
  threshold_check,
  timer_interrupt,
  scheduler_tick,
  crc8_update,
  delta_encoding,
  run_length_encoding,
  minmax_search,
  moving_average,
  histogram,
  fir_filter,
  fft_radix2,
  autocorrelation,
  kmeans_update,
  cnn_inference,
  binary_classifier,
  hmac,
  ecc_scalar_mult,
  rsa_encryption,
};

Scaling scaling_of(ComputeKind kind);
std::optional<ComputeKind> compute_kind_from_name(std::string_view name);
std::string_view compute_kind_name(ComputeKind kind);
const std::vector<ComputeKind>& all_compute_kinds();

/// ceil(log2 n) for n >= 2, else 0.
std::uint64_t ceil_log2(std::uint64_t n);
double compute_cycles(Scaling scaling, std::uint64_t n, std::uint64_t k = 0, double c = 1.0);
double compute_cycles(ComputeKind kind, std::uint64_t n, std::uint64_t k = 0, double c = 1.0);

struct FixedVoltageMode {
  double activity = 1.0;       // gamma
  double capacitance = 0.0;    // C_s, F
  double v_dd = 0.0;           // V
  double frequency = 1e6;      // Hz
  double i_leak = 0.0;         // A
};
struct DvfsMode {
  double coefficient = 0.0;    // gamma', J/Hz^2
  double frequency = 1e6;      // Hz
};
using ComputeProfile = std::variant<FixedVoltageMode, DvfsMode>;

Cost compute_energy(const ComputeProfile& profile, double cycles);

// ---- communication ---------------------------------------------------------

enum class RadioState { deep_sleep, idle, prepare_tx, tx, prepare_rx, rx };

struct StateCost {
  double power = 0.0;     // W
  double duration = 0.0;  // s
};

enum class Transaction { tx_only, tx_ack, rx_poll };

struct CommProfile {
  std::map<RadioState, StateCost> states;

  StateCost at(RadioState s) const;
};

/// Ordered state sequence of a transaction template; always begins and
/// ends in deep sleep.
std::vector<RadioState> transaction_states(Transaction t);

/// Sums the states between the deep-sleep endpoints. The endpoints mark
/// the transaction boundary; time spent asleep is charged as standby.
Cost comm_transaction(const CommProfile& profile, Transaction t);

struct RadioPreset {
  CommProfile profile;
  StateCost rejoin;       // network re-attach after a power loss
  double sleep_power = 0.0;
};

/// Named radio presets: "lorawan-like", "nbiot-like".
RadioPreset radio_preset(std::string_view name);

// ---- actuation -------------------------------------------------------------

struct MemsActuator { double c_m, v_pull_in, v_release, switch_time; };
struct LedActuator { double v_forward, i_forward, on_time; };
struct PiezoActuator { double c_p, v_drive, pulse_time; };
struct SolenoidActuator { double r_coil, v_operate, pulse_time; };
struct EinkActuator {
  double v_drive = 0.0, i_update = 0.0, t_update = 0.0;
  double area = 0.0, energy_per_area = 0.0;  // used when t_update == 0
};
struct SmaActuator { double r_wire, i_rated, delta_t, thermal_mass; };
struct ServoActuator {
  double v_supply, i_no_load, i_stall, k_torque, omega_no_load, theta, tau_load, i_hold, t_hold;
};

using ActuatorProfile = std::variant<MemsActuator, LedActuator, PiezoActuator, SolenoidActuator,
                                     EinkActuator, SmaActuator, ServoActuator>;

struct ServoBreakdown {
  double i_avg, lambda, t_move, e_move, e_hold;
};

ServoBreakdown servo_breakdown(const ServoActuator& s);
double sma_heating_time(const SmaActuator& s);
Cost actuator_energy(const ActuatorProfile& profile);

/// Worked actuator examples: mems, led, piezo, solenoid, eink, sma, servo.
ActuatorProfile actuator_preset(std::string_view name);
const std::vector<std::string>& actuator_preset_names();

// ---- task structure --------------------------------------------------------

enum class Granularity { per_cycle, per_task, per_phase, per_instruction };
enum class TaskClass { intermittent, capacity_constrained, temporally_constrained };

struct Phase {
  std::string id;
  double cost = 0.0;
};

struct TaskSpec {
  std::string id;
  double cost = 0.0;
  double duration = 0.0;
  bool atomic = false;
  Granularity granularity = Granularity::per_task;
  std::vector<Phase> phases;
  std::optional<double> deadline;
  double checkpoint_cost = 0.0;
  double quantum = 0.0;  // per-instruction unit size
  TaskClass task_class = TaskClass::intermittent;
};

struct WorkUnit {
  double cost = 0.0;
  bool checkpoint = false;
};

std::vector<WorkUnit> split_task(const TaskSpec& task);
double total_charge(const std::vector<WorkUnit>& units);
double base_cost(const std::vector<WorkUnit>& units);

/// Security task presets: energy class -> cost, interrupt tolerance ->
/// atomic flag, timing flexibility -> deadline.
TaskSpec security_task(std::string_view name);
const std::vector<std::string>& security_task_names();

}  // namespace zed::tasks
