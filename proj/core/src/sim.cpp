#include "zed/sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "zed/error.hpp"
#include "zed/rng.hpp"

namespace zed::sim {

namespace {

using energy::EnergyState;
using energy::StorageSpec;

constexpr double kSlot = 1.0;  // abstract-regime slot length

void check_probability(std::vector<std::string>& out, const std::string& path, double p) {
  if (!(p >= 0.0 && p <= 1.0)) out.push_back(path + ": probability " + std::to_string(p) + " not in [0, 1]");
}

void check_positive(std::vector<std::string>& out, const std::string& path, double v) {
  if (!(v > 0.0)) out.push_back(path + ": must be positive");
}

void check_non_negative(std::vector<std::string>& out, const std::string& path, double v) {
  if (!(v >= 0.0)) out.push_back(path + ": must be non-negative");
}

void check_curve(std::vector<std::string>& out, const std::string& path, const policy::EnergyCurve& c,
                 bool increasing) {
  using K = policy::EnergyCurve::Kind;
  if (c.kind == K::table) {
    if (c.points.empty()) out.push_back(path + ".points_units: table must not be empty");
    for (std::size_t i = 0; i < c.points.size(); ++i)
      check_probability(out, path + ".points_units[" + std::to_string(i) + "]", c.points[i].second);
  } else if (c.kind == K::constant) {
    check_probability(out, path + ".value", c.value);
  } else {
    check_positive(out, path + ".scale_units", c.scale);
  }
  if (c.kind != K::table || !c.points.empty()) {
    const bool ok = increasing ? c.non_decreasing() : c.non_increasing();
    if (!ok)
      out.push_back(path + (increasing ? ": curve must be non-decreasing" : ": curve must be non-increasing"));
  }
}

void check_arrivals(std::vector<std::string>& out, const std::string& path, const ArrivalProcess& a) {
  using K = ArrivalProcess::Kind;
  switch (a.kind) {
    case K::bernoulli:
      check_probability(out, path + ".rate", a.rate);
      check_non_negative(out, path + ".quantum_units", a.unit);
      break;
    case K::poisson:
      if (!(a.rate >= 0.0 && a.rate < 30.0)) out.push_back(path + ".rate: poisson mean must be in [0, 30)");
      check_non_negative(out, path + ".quantum_units", a.unit);
      break;
    case K::fixed:
      for (std::size_t i = 0; i < a.sequence.size(); ++i)
        check_non_negative(out, path + ".sequence_units[" + std::to_string(i) + "]", a.sequence[i]);
      break;
  }
}

bool engine_is_abstract(Engine e) { return e == Engine::tasks || e == Engine::packets; }

void validate_abstract(std::vector<std::string>& out, const ScenarioConfig& c) {
  const AbstractConfig& a = c.abstract;
  const std::string p = "abstract";
  check_positive(out, p + ".capacity_units", a.capacity);
  if (!(a.initial >= 0.0 && a.initial <= a.capacity))
    out.push_back(p + ".initial_units: must be in [0, capacity_units]");
  check_arrivals(out, p + ".energy_arrivals", a.energy);
  check_arrivals(out, p + ".event_arrivals", a.events);
  check_positive(out, p + ".task_cost_units", a.task_cost);
  if (a.buffer < 1) out.push_back(p + ".task_buffer_size: must be >= 1");
  check_curve(out, p + ".erasure", a.erasure, false);

  const AbstractPolicy& pol = a.policy;
  const std::string pp = p + ".policy";
  using K = AbstractPolicy::Kind;
  if (pol.interval < 1) out.push_back(pp + ".interval_slots: must be >= 1");
  check_positive(out, pp + ".spend_units", pol.spend);
  check_non_negative(out, pp + ".measure_cost_units", pol.measure_cost);
  check_non_negative(out, pp + ".comparator_cost_units", pol.comparator_cost);
  check_positive(out, pp + ".threshold_units", pol.threshold);
  if (pol.kind == K::aoi_threshold && !(pol.threshold <= a.capacity))
    out.push_back(pp + ".threshold_units: must not exceed capacity_units");
  check_curve(out, pp + ".transmit_probability", pol.transmit_probability, true);

  const bool packet_policy = pol.kind == K::aoi_fully_aware || pol.kind == K::aoi_threshold;
  if (c.engine == Engine::tasks && packet_policy)
    out.push_back(pp + ".kind: packet policy used with the tasks engine");
  if (c.engine == Engine::tasks && c.n_devices != 1) out.push_back("n_devices: tasks engine runs one device");
  if (c.engine == Engine::packets && pol.kind == K::periodic_measure)
    out.push_back(pp + ".kind: periodic_measure applies to the tasks engine only");
}

void validate_gate(std::vector<std::string>& out, const GateConfig& g) {
  const std::string p = "gate";
  check_positive(out, p + ".capacitance_F", g.capacitance);
  check_positive(out, p + ".v_off_V", g.v_off);
  if (!(g.v_off < g.v_on)) out.push_back(p + ".v_on_V: must exceed v_off_V");
  if (!(g.v_on <= g.v_max)) out.push_back(p + ".v_max_V: must be >= v_on_V");
  if (!(g.v_init >= 0.0 && g.v_init <= g.v_max)) out.push_back(p + ".v_init_V: must be in [0, v_max_V]");
  check_non_negative(out, p + ".harvest_power_W", g.harvest_power);
  check_positive(out, p + ".dt_s", g.dt);
  check_positive(out, p + ".duration_s", g.duration);
  check_positive(out, p + ".interval_s", g.interval);
  if (g.radio != "nbiot-like" && g.radio != "lorawan-like")
    out.push_back(p + ".radio: unknown preset '" + g.radio + "' (nbiot-like, lorawan-like)");
}

void validate_tinyml(std::vector<std::string>& out, const TinyMlConfig& t) {
  const std::string p = "tinyml";
  check_positive(out, p + ".capacitance_F", t.capacitance);
  check_positive(out, p + ".v_min_V", t.v_min);
  if (!(t.v_min < t.v_max)) out.push_back(p + ".v_max_V: must exceed v_min_V");
  if (!(t.v_init >= 0.0 && t.v_init <= t.v_max)) out.push_back(p + ".v_init_V: must be in [0, v_max_V]");
  check_positive(out, p + ".v_nominal_V", t.v_nominal);
  check_non_negative(out, p + ".harvest_current_A", t.harvest_current);
  check_non_negative(out, p + ".quiescent_current_A", t.quiescent_current);
  check_positive(out, p + ".period_s", t.period);
  check_positive(out, p + ".duration_s", t.duration);
  if (t.models.empty()) out.push_back(p + ".models: at least one model required");
  for (std::size_t i = 0; i < t.models.size(); ++i) {
    const std::string mp = p + ".models[" + std::to_string(i) + "]";
    if (t.models[i].id.empty()) out.push_back(mp + ".id: must not be empty");
    check_positive(out, mp + ".energy_J", t.models[i].energy);
    check_positive(out, mp + ".duration_s", t.models[i].duration);
    if (!(t.models[i].duration <= t.period)) out.push_back(mp + ".duration_s: must not exceed period_s");
  }
}

void validate_solar(std::vector<std::string>& out, const SolarConfig& s) {
  const std::string p = "solar";
  if (s.days <= s.train_days) out.push_back(p + ".days: must exceed train_days");
  check_positive(out, p + ".panel.area_m2", s.panel.area);
  check_probability(out, p + ".panel.eta_pv", s.panel.eta_pv);
  check_probability(out, p + ".panel.eta_pmu", s.panel.eta_pmu);
  check_positive(out, p + ".panel.slot_s", s.panel.slot);
  check_non_negative(out, p + ".sky.peak_W_m2", s.sky.peak);
  check_positive(out, p + ".sky.day_length_s", s.sky.day_length);
  check_non_negative(out, p + ".sky.cloud_sigma", s.sky.cloud_sigma);
  const double a1 = s.sky.cloud_phi1, a2 = s.sky.cloud_phi2;
  if (!(std::abs(a2) < 1.0 && a1 + a2 < 1.0 && a2 - a1 < 1.0))
    out.push_back(p + ".sky.cloud_phi1: cloud AR(2) process must be stationary");
  if (s.diff_order > 1) out.push_back(p + ".diff_order: must be 0 or 1");
  check_positive(out, p + ".capacity_J", s.capacity);
  if (!(s.initial >= 0.0 && s.initial <= s.capacity)) out.push_back(p + ".initial_J: must be in [0, capacity_J]");
  if (!(s.reserve >= 0.0 && s.reserve < s.capacity)) out.push_back(p + ".reserve_J: must be in [0, capacity_J)");
  check_positive(out, p + ".task_energy_J", s.task_energy);
  check_non_negative(out, p + ".wake_cost_J", s.wake_cost);
  if (s.horizon < 1) out.push_back(p + ".horizon_slots: must be >= 1");
  if (s.fixed_interval < 1) out.push_back(p + ".fixed_interval_slots: must be >= 1");
}

void validate_rf(std::vector<std::string>& out, const RfConfig& r) {
  const std::string p = "rf";
  if (r.scenes < 1) out.push_back(p + ".scenes: must be >= 1");
  check_positive(out, p + ".disk_radius_m", r.disk_radius);
  if (r.scene.antennas < 1) out.push_back(p + ".antennas: must be >= 1");
  check_positive(out, p + ".tx_power_W", r.scene.tx_power);
  check_positive(out, p + ".path_loss_exponent", r.scene.path_loss_exponent);
  check_probability(out, p + ".eh_efficiency", r.scene.eh_efficiency);
  check_non_negative(out, p + ".tuning_power_W", r.scene.tuning_power);
  check_non_negative(out, p + ".measurement_power_W", r.scene.measurement_power);
  check_positive(out, p + ".spacing_wavelengths", r.scene.spacing);
  check_positive(out, p + ".min_distance_m", r.scene.min_distance);
  if (!(r.scene.min_distance < r.disk_radius)) out.push_back(p + ".min_distance_m: must be below disk_radius_m");
  check_non_negative(out, p + ".slot_s", r.schedule.slot);
  check_non_negative(out, p + ".exploit_s", r.schedule.exploit);
  check_non_negative(out, p + ".measurement_noise", r.schedule.measurement_noise);
}

double draw_arrival(const ArrivalProcess& a, Rng& rng, std::size_t slot) {
  switch (a.kind) {
    case ArrivalProcess::Kind::bernoulli: return rng.bernoulli(a.rate) ? a.unit : 0.0;
    case ArrivalProcess::Kind::poisson: return static_cast<double>(rng.poisson(a.rate)) * a.unit;
    case ArrivalProcess::Kind::fixed: return slot < a.sequence.size() ? a.sequence[slot] : 0.0;
  }
  return 0.0;
}

std::unique_ptr<policy::Policy> make_policy(const AbstractConfig& a, Engine engine) {
  using K = AbstractPolicy::Kind;
  const AbstractPolicy& p = a.policy;
  switch (p.kind) {
    case K::energy_blind:
      return std::make_unique<policy::EnergyBlind>(
          p.interval, engine == Engine::tasks ? a.task_cost : p.spend,
          engine == Engine::tasks ? policy::Target::task : policy::Target::packet);
    case K::periodic_measure:
      return std::make_unique<policy::PeriodicMeasure>(p.interval, p.measure_cost, a.task_cost);
    case K::aoi_fully_aware: return std::make_unique<policy::AoiFullyAware>(p.transmit_probability);
    case K::aoi_threshold: return std::make_unique<policy::AoiThreshold>(p.threshold);
  }
  throw ContractViolation("unknown policy kind");
}

/// Charges an EI acquisition cost; a store that cannot cover it is drained.
EnergyState pay_overhead(const EnergyState& st, const StorageSpec& spec, double cost) {
  if (cost <= 0.0) return st;
  auto r = energy::step_energy(st, spec, 0.0, cost, kSlot, cost);
  if (r.ok()) return r.state;
  const double all = st.stored * spec.eta_out;
  return energy::step_energy(st, spec, 0.0, all, kSlot, all).state;
}

EnergyState drain(const EnergyState& st, const StorageSpec& spec) {
  const double all = st.stored * spec.eta_out;
  if (all <= 0.0) return st;
  return energy::step_energy(st, spec, 0.0, all, kSlot).state;
}

StorageSpec abstract_storage(const AbstractConfig& a) { return StorageSpec::ideal(a.capacity); }

Metrics run_tasks(const ScenarioConfig& c) {
  const AbstractConfig& a = c.abstract;
  const StorageSpec spec = abstract_storage(a);
  Metrics m;
  TaskCounts counts;

  for (std::size_t d = 0; d < c.n_devices; ++d) {
    Rng energy_rng = rng_stream(c.seed, d, "energy");
    Rng task_rng = rng_stream(c.seed, d, "tasks");
    Rng policy_rng = rng_stream(c.seed, d, "policy");
    auto pol = make_policy(a, c.engine);
    EnergyState st = EnergyState::with_energy(a.initial);
    std::size_t buffer = 0;
    policy::Observation obs;

    for (std::size_t slot = 0; slot < c.slots; ++slot) {
      const double h = draw_arrival(a.energy, energy_rng, slot);
      st = energy::step_energy(st, spec, h, 0.0, kSlot).state;
      if (draw_arrival(a.events, task_rng, slot) > 0.0) {
        ++counts.arrivals;
        if (buffer < a.buffer) ++buffer;
        else ++counts.dropped;
      }

      const auto plan = pol->plan(slot, buffer);
      obs.slot = slot;
      obs.buffer_occupancy = buffer;
      obs.exact_energy.reset();
      if (plan.sample) {
        st = pay_overhead(st, spec, a.policy.measure_cost);
        obs.exact_energy = st.stored;
      }
      const auto decision = pol->decide(obs, policy_rng);

      std::string event;
      if (std::holds_alternative<policy::Execute>(decision) && buffer > 0) {
        auto r = energy::step_energy(st, spec, 0.0, a.task_cost, kSlot);
        if (r.ok()) {
          st = r.state;
          ++counts.completed;
          --buffer;
          event = "complete";
        } else {
          // The attempt dies mid-way: the energy is gone, the task stays queued.
          st = drain(st, spec);
          ++counts.failed_attempts;
          event = "fail";
        }
      }
      if (c.trace) {
        if (event.empty()) event = plan.sample ? "measure" : (buffer > 0 ? "defer" : "sleep");
        m.trace.push_back({slot, d, st.stored, event, static_cast<double>(buffer)});
      }
    }
    counts.buffered += buffer;
    m.ledger += st.ledger;
  }

  m.tasks = counts;
  m.task_completion_rate =
      counts.arrivals > 0 ? static_cast<double>(counts.completed) / static_cast<double>(counts.arrivals) : 0.0;
  return m;
}

struct PacketDevice {
  EnergyState state;
  bool has_packet = false;
  std::uint64_t generated_at = 0;
  std::uint64_t sent_generated_at = 0;
  std::uint64_t aoi = 0;
  std::unique_ptr<policy::Policy> policy;
  Rng energy_rng;
  Rng event_rng;
  Rng policy_rng;
};

Metrics run_packets(const ScenarioConfig& c) {
  const AbstractConfig& a = c.abstract;
  const StorageSpec spec = abstract_storage(a);

  std::vector<PacketDevice> devs;
  devs.reserve(c.n_devices);
  for (std::size_t d = 0; d < c.n_devices; ++d)
    devs.push_back({EnergyState::with_energy(a.initial), false, 0, 0, 0, make_policy(a, c.engine),
                    rng_stream(c.seed, d, "energy"), rng_stream(c.seed, d, "events"),
                    rng_stream(c.seed, d, "policy")});
  Rng channel_rng = rng_stream(c.seed, 0, "channel");

  std::vector<std::size_t> transmitters;
  std::vector<double> spent;
  std::vector<char> received(c.n_devices, 0);
  policy::Observation obs;
  obs.flags = std::vector<bool>(1, false);

  std::uint64_t attempts = 0, failed = 0, successes = 0, collided = 0, erased = 0, generated = 0;
  long double aoi_sum = 0.0L;
  Metrics m;

  for (std::size_t slot = 0; slot < c.slots; ++slot) {
    transmitters.clear();
    spent.clear();
    for (std::size_t d = 0; d < c.n_devices; ++d) {
      PacketDevice& dev = devs[d];
      const double h = draw_arrival(a.energy, dev.energy_rng, slot);
      if (h > 0.0) dev.state = energy::step_energy(dev.state, spec, h, 0.0, kSlot).state;
      if (draw_arrival(a.events, dev.event_rng, slot) > 0.0) {
        dev.has_packet = true;  // a fresh update replaces the buffered one
        dev.generated_at = slot;
        ++generated;
      }

      const std::size_t occupancy = dev.has_packet ? 1 : 0;
      const auto plan = dev.policy->plan(slot, occupancy);
      obs.slot = slot;
      obs.buffer_occupancy = occupancy;
      obs.exact_energy.reset();
      if (plan.sample) {
        dev.state = pay_overhead(dev.state, spec, a.policy.measure_cost);
        obs.exact_energy = dev.state.stored;
      }
      if (plan.comparator) {
        dev.state = pay_overhead(dev.state, spec, a.policy.comparator_cost);
        (*obs.flags)[0] = dev.state.stored >= a.policy.threshold;
      }
      const auto decision = dev.policy->decide(obs, dev.policy_rng);
      const auto* tx = std::get_if<policy::Transmit>(&decision);
      if (tx == nullptr || !dev.has_packet) continue;

      ++attempts;
      dev.has_packet = false;  // no retransmissions
      auto r = energy::step_energy(dev.state, spec, 0.0, tx->energy, kSlot);
      if (r.ok()) {
        dev.state = r.state;
        dev.sent_generated_at = dev.generated_at;
        transmitters.push_back(d);
        spent.push_back(tx->energy);
      } else {
        dev.state = drain(dev.state, spec);
        ++failed;
      }
    }

    if (!transmitters.empty()) {
      const auto outcome = resolve_channel(transmitters, spent, a.erasure, channel_rng);
      for (std::size_t i = 0; i < outcome.transmitters.size(); ++i) {
        switch (outcome.results[i]) {
          case ChannelResult::success:
            received[outcome.transmitters[i]] = 1;
            ++successes;
            break;
          case ChannelResult::erased: ++erased; break;
          case ChannelResult::collided: ++collided; break;
        }
      }
    }

    for (std::size_t d = 0; d < c.n_devices; ++d) {
      PacketDevice& dev = devs[d];
      dev.aoi = aoi_update(dev.aoi, dev.sent_generated_at, received[d] != 0, slot);
      aoi_sum += static_cast<long double>(dev.aoi);
      if (c.trace)
        m.trace.push_back({slot, d, dev.state.stored, received[d] ? "delivered" : "none",
                           static_cast<double>(dev.aoi)});
      received[d] = 0;
    }
  }

  for (const auto& dev : devs) m.ledger += dev.state.ledger;
  const long double cells = static_cast<long double>(c.slots) * static_cast<long double>(c.n_devices);
  m.avg_aoi = static_cast<double>(aoi_sum / cells);
  m.extras = {{"generated", static_cast<double>(generated)},
              {"attempts", static_cast<double>(attempts)},
              {"failed_attempts", static_cast<double>(failed)},
              {"successes", static_cast<double>(successes)},
              {"collided", static_cast<double>(collided)},
              {"erased", static_cast<double>(erased)}};
  return m;
}

std::int64_t ticks(double seconds, double dt) {
  return std::max<std::int64_t>(0, std::llround(seconds / dt));
}

Metrics run_gate(const ScenarioConfig& c) {
  const GateConfig& g = c.gate;
  const StorageSpec spec = StorageSpec::capacitor(g.capacitance, g.v_max);
  const auto radio = tasks::radio_preset(g.radio);
  const energy::SourceModel source = energy::constant_power_source(g.harvest_power, g.v_off);

  // Interior transaction states with their tick counts.
  std::vector<std::pair<double, std::int64_t>> steps;
  for (auto s : tasks::transaction_states(g.transaction)) {
    if (s == tasks::RadioState::deep_sleep) continue;
    const auto cost = radio.profile.at(s);
    const auto n = ticks(cost.duration, g.dt);
    if (n > 0) steps.emplace_back(cost.power, n);
  }

  enum class Phase { off, rejoin, sleep, transaction };
  Phase phase = Phase::off;
  std::size_t step_index = 0;
  std::int64_t remaining = 0;
  std::int64_t until_next = 0;
  const std::int64_t interval = std::max<std::int64_t>(1, ticks(g.interval, g.dt));
  const std::int64_t rejoin_ticks = ticks(radio.rejoin.duration, g.dt);

  policy::DualThresholdGate gate(g.v_on, g.v_off, false);
  EnergyState st = EnergyState::at_voltage(spec, g.v_init);
  std::uint64_t packets = 0, aborted = 0, on_ticks = 0, power_ons = 0;
  const std::int64_t total = ticks(g.duration, g.dt);
  Metrics m;

  auto start_transaction = [&] {
    phase = Phase::transaction;
    step_index = 0;
    remaining = steps.empty() ? 0 : steps[0].second;
    until_next = interval;
  };

  for (std::int64_t k = 0; k < total; ++k) {
    double power = 0.0;
    switch (phase) {
      case Phase::off: power = 0.0; break;
      case Phase::rejoin: power = radio.rejoin.power; break;
      case Phase::sleep: power = radio.sleep_power; break;
      case Phase::transaction: power = steps.empty() ? 0.0 : steps[step_index].first; break;
    }
    const auto r = energy::integrate_circuit(st, source, energy::ConstantPowerLoad{power, 0.0}, spec, g.dt, 1,
                                             static_cast<double>(k) * g.dt);
    st = r.state;

    if (phase != Phase::off) {
      ++on_ticks;
      --until_next;
      if (phase == Phase::rejoin) {
        if (--remaining <= 0) start_transaction();
      } else if (phase == Phase::transaction) {
        if (--remaining <= 0) {
          if (++step_index >= steps.size()) {
            ++packets;
            phase = Phase::sleep;
          } else {
            remaining = steps[step_index].second;
          }
        }
      } else if (until_next <= 0) {
        start_transaction();
      }
    }

    const auto transition = gate.update(st.voltage(spec));
    if (transition == policy::GateTransition::power_on) {
      ++power_ons;
      phase = Phase::rejoin;
      remaining = rejoin_ticks;
      if (remaining <= 0) start_transaction();
    } else if (transition == policy::GateTransition::power_off) {
      if (phase == Phase::transaction) ++aborted;
      phase = Phase::off;
    }
    if (c.trace && transition)
      m.trace.push_back({static_cast<std::uint64_t>(k), 0, st.stored,
                         *transition == policy::GateTransition::power_on ? "power_on" : "power_off",
                         st.voltage(spec)});
  }

  m.ledger = st.ledger;
  const double hours = static_cast<double>(total) * g.dt / 3600.0;
  m.throughput = static_cast<double>(packets) / hours;
  m.restart_count = gate.restarts();
  m.extras = {{"packets", static_cast<double>(packets)},
              {"aborted", static_cast<double>(aborted)},
              {"power_ons", static_cast<double>(power_ons)},
              {"on_fraction", static_cast<double>(on_ticks) / static_cast<double>(std::max<std::int64_t>(total, 1))},
              {"final_voltage_V", st.voltage(spec)}};
  return m;
}

Metrics run_tinyml(const ScenarioConfig& c) {
  const TinyMlConfig& t = c.tinyml;
  const StorageSpec spec = StorageSpec::capacitor(t.capacitance, t.v_max);
  std::vector<policy::InferenceModel> models;
  for (const auto& mc : t.models)
    models.push_back(policy::inference_model(mc.id, mc.accuracy_rank, mc.energy, mc.duration, t.v_nominal));
  policy::TinyMlSelect selector(models, t.v_min, t.capacitance);
  const energy::SourceModel source = energy::ConstantCurrent{t.harvest_current};
  const energy::LoadModel idle = energy::ConstantCurrentLoad{t.quiescent_current};

  EnergyState st = EnergyState::at_voltage(spec, t.v_init);
  std::vector<std::uint64_t> chosen(t.models.size(), 0);
  std::uint64_t deferred = 0;
  long double v_sum = 0.0L;
  const auto requests = static_cast<std::uint64_t>(std::floor(t.duration / t.period + 1e-9));
  Rng unused(0);
  Metrics m;
  policy::Observation obs;

  for (std::uint64_t k = 0; k < requests; ++k) {
    const double t0 = static_cast<double>(k) * t.period;
    const double v = st.voltage(spec);
    v_sum += v;
    obs.slot = k;
    obs.voltage = v;
    obs.harvest_current = t.harvest_current;
    const auto decision = selector.decide(obs, unused);
    double busy = 0.0;
    std::string event = "defer";
    if (const auto* sel = std::get_if<policy::SelectModel>(&decision)) {
      std::size_t idx = 0;
      while (t.models[idx].id != sel->model_id) ++idx;
      const auto& model = *std::find_if(models.begin(), models.end(),
                                        [&](const auto& im) { return im.id == sel->model_id; });
      ++chosen[idx];
      busy = model.duration;
      st = energy::integrate_circuit(st, source, energy::ConstantResistance{model.resistance}, spec, busy, 50, t0)
               .state;
      event = model.id;
    } else {
      ++deferred;
    }
    const double rest = t.period - busy;
    if (rest > 0.0) st = energy::integrate_circuit(st, source, idle, spec, rest, 20, t0 + busy).state;
    if (c.trace) m.trace.push_back({k, 0, st.stored, event, v});
  }

  m.ledger = st.ledger;
  const double n = static_cast<double>(std::max<std::uint64_t>(requests, 1));
  for (std::size_t i = 0; i < t.models.size(); ++i)
    m.extras.emplace_back("fraction_" + t.models[i].id, static_cast<double>(chosen[i]) / n);
  m.extras.emplace_back("defer_fraction", static_cast<double>(deferred) / n);
  m.extras.emplace_back("mean_voltage_V", static_cast<double>(v_sum / static_cast<long double>(n)));
  m.task_completion_rate = 1.0 - static_cast<double>(deferred) / n;
  return m;
}

Metrics run_solar(const ScenarioConfig& c) {
  const SolarConfig& s = c.solar;
  const double slot = s.panel.slot;
  const auto per_day = static_cast<std::size_t>(std::llround(86400.0 / slot));
  const std::size_t total = s.days * per_day;
  const std::size_t train = s.train_days * per_day;
  const auto irr = forecast::synthetic_irradiance(total + 1, slot, c.seed, s.sky);

  forecast::ArimaModel model =
      forecast::arima_fit(std::vector<double>(irr.begin(), irr.begin() + static_cast<std::ptrdiff_t>(train)),
                          s.ar_order, s.diff_order);
  const StorageSpec spec = StorageSpec::ideal(s.capacity);
  EnergyState st = EnergyState::with_energy(s.initial);
  std::uint64_t sent = 0, missed = 0, wakeups = 0;
  std::size_t sleep_left = 0;
  double min_stored = st.stored;
  Metrics m;

  for (std::size_t n = train; n < total; ++n) {
    model.observe(irr[n]);
    std::string event;
    if (s.policy == SolarConfig::Policy::fixed_rate) {
      if ((n - train + 1) % s.fixed_interval == 0) {
        auto r = energy::step_energy(st, spec, 0.0, s.task_energy, slot);
        if (r.ok()) {
          st = r.state;
          ++sent;
          event = "transmit";
        } else {
          ++missed;
          event = "skip";
        }
      }
    } else if (sleep_left > 0) {
      --sleep_left;
    } else {
      ++wakeups;
      st = pay_overhead(st, spec, s.wake_cost);
      const double usable = st.stored - s.reserve;
      if (usable >= s.task_energy) {
        st = energy::step_energy(st, spec, 0.0, s.task_energy, slot).state;
        ++sent;
        event = "transmit";
      } else {
        const auto fc = forecast::arima_forecast(model, s.horizon);
        std::vector<double> energies(fc.size());
        double prev = irr[n];
        for (std::size_t i = 0; i < fc.size(); ++i) {
          energies[i] = forecast::irradiance_to_energy(prev, fc[i], s.panel);
          prev = fc[i];
        }
        const auto wait = forecast::waiting_slots(s.task_energy - std::max(usable, 0.0), energies);
        sleep_left = wait ? (*wait > 0 ? *wait - 1 : 0) : s.horizon - 1;
        event = "sleep";
      }
    }
    const double h = forecast::irradiance_to_energy(irr[n], irr[n + 1], s.panel);
    st = energy::step_energy(st, spec, h, 0.0, slot).state;
    min_stored = std::min(min_stored, st.stored);
    if (c.trace && !event.empty()) m.trace.push_back({n, 0, st.stored, event, irr[n]});
  }

  m.ledger = st.ledger;
  const double hours = static_cast<double>(total - train) * slot / 3600.0;
  m.throughput = static_cast<double>(sent) / hours;
  m.extras = {{"transmissions", static_cast<double>(sent)},
              {"missed", static_cast<double>(missed)},
              {"wakeups", static_cast<double>(wakeups)},
              {"min_stored_J", min_stored},
              {"final_stored_J", st.stored}};
  return m;
}

Metrics run_rf(const ScenarioConfig& c) {
  const RfConfig& r = c.rf;
  Rng scene_rng = rng_stream(c.seed, 0, "scenes");
  Rng noise_rng = rng_stream(c.seed, 0, "measurement");
  long double dyn = 0, stat = 0, dc = 0, genie = 0, overhead = 0;
  std::uint64_t hits = 0;
  Metrics m;
  for (std::size_t i = 0; i < r.scenes; ++i) {
    const auto scene = rf::random_scene(r.scene, r.disk_radius, scene_rng);
    const auto out = rf::rf_explore_exploit(scene, r.schedule, &noise_rng);
    dyn += out.dynamic_net;
    stat += out.static_power;
    dc += out.dc;
    genie += out.genie;
    overhead += out.overhead;
    if (out.selected == out.best) ++hits;
    if (c.trace) m.trace.push_back({i, 0, 0.0, "scene", out.dynamic_net});
  }
  const long double n = static_cast<long double>(r.scenes);
  m.net_harvested_power = static_cast<double>(dyn / n);
  m.extras = {{"dc_W", static_cast<double>(dc / n)},
              {"static_W", static_cast<double>(stat / n)},
              {"dynamic_W", static_cast<double>(dyn / n)},
              {"genie_W", static_cast<double>(genie / n)},
              {"overhead_W", static_cast<double>(overhead / n)},
              {"selection_accuracy", static_cast<double>(hits) / static_cast<double>(r.scenes)}};
  return m;
}

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& c) {
  std::vector<std::string> out;
  if (c.schema != 1) out.push_back("schema: unsupported version " + std::to_string(c.schema));
  if (c.slots < 1) out.push_back("slots: must be >= 1");
  if (c.n_devices < 1) out.push_back("n_devices: must be >= 1");
  const bool abstract_engine = engine_is_abstract(c.engine);
  if ((c.regime == Regime::abstract) != abstract_engine)
    out.push_back("engine: does not belong to the configured regime");
  switch (c.engine) {
    case Engine::tasks:
    case Engine::packets: validate_abstract(out, c); break;
    case Engine::gate: validate_gate(out, c.gate); break;
    case Engine::tinyml: validate_tinyml(out, c.tinyml); break;
    case Engine::solar: validate_solar(out, c.solar); break;
    case Engine::rf: validate_rf(out, c.rf); break;
  }
  return out;
}

std::optional<double> Metrics::extra(std::string_view key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  return std::nullopt;
}

std::uint64_t aoi_update(std::uint64_t aoi, std::uint64_t generated_at, bool received, std::uint64_t now) {
  if (!received) return aoi + 1;
  require(generated_at <= now, "aoi_update: packet generated after reception");
  return now - generated_at + 1;
}

std::size_t ChannelOutcome::successes() const {
  return static_cast<std::size_t>(std::count(results.begin(), results.end(), ChannelResult::success));
}

ChannelOutcome resolve_channel(const std::vector<std::size_t>& transmitters, const std::vector<double>& spent,
                               const policy::EnergyCurve& erasure, Rng& rng) {
  require(transmitters.size() == spent.size(), "resolve_channel: one spend per transmitter");
  ChannelOutcome out;
  out.transmitters = transmitters;
  out.results.resize(transmitters.size());
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < transmitters.size(); ++i) {
    const bool lost = rng.bernoulli(erasure(spent[i]));
    out.results[i] = lost ? ChannelResult::erased : ChannelResult::success;
    if (!lost) ++survivors;
  }
  if (survivors > 1)
    for (auto& r : out.results)
      if (r == ChannelResult::success) r = ChannelResult::collided;
  return out;
}

Metrics run(const ScenarioConfig& config) {
  auto issues = validate(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  switch (config.engine) {
    case Engine::tasks: return run_tasks(config);
    case Engine::packets: return run_packets(config);
    case Engine::gate: return run_gate(config);
    case Engine::tinyml: return run_tinyml(config);
    case Engine::solar: return run_solar(config);
    case Engine::rf: return run_rf(config);
  }
  throw ContractViolation("unknown engine");
}

}  // namespace zed::sim
