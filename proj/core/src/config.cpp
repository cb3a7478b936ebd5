#include "zed/config.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

#include "zed/error.hpp"

namespace zed::config {

namespace {

using namespace zed::sim;

template <typename E, std::size_t N>
using Names = std::array<std::pair<E, std::string_view>, N>;

constexpr Names<Regime, 2> kRegimes{{{Regime::abstract, "abstract"}, {Regime::physical, "physical"}}};
constexpr Names<Engine, 6> kEngines{{{Engine::tasks, "tasks"},
                                     {Engine::packets, "packets"},
                                     {Engine::gate, "gate"},
                                     {Engine::tinyml, "tinyml"},
                                     {Engine::solar, "solar"},
                                     {Engine::rf, "rf"}}};
constexpr Names<ArrivalProcess::Kind, 3> kProcesses{{{ArrivalProcess::Kind::bernoulli, "bernoulli"},
                                                     {ArrivalProcess::Kind::poisson, "poisson"},
                                                     {ArrivalProcess::Kind::fixed, "fixed"}}};
constexpr Names<AbstractPolicy::Kind, 4> kPolicies{{{AbstractPolicy::Kind::energy_blind, "energy_blind"},
                                                    {AbstractPolicy::Kind::periodic_measure, "periodic_measure"},
                                                    {AbstractPolicy::Kind::aoi_fully_aware, "aoi_fully_aware"},
                                                    {AbstractPolicy::Kind::aoi_threshold, "aoi_threshold"}}};
constexpr Names<policy::EnergyCurve::Kind, 4> kCurves{{{policy::EnergyCurve::Kind::ramp, "ramp"},
                                                       {policy::EnergyCurve::Kind::exponential, "exponential"},
                                                       {policy::EnergyCurve::Kind::table, "table"},
                                                       {policy::EnergyCurve::Kind::constant, "constant"}}};
constexpr Names<tasks::Transaction, 3> kTransactions{{{tasks::Transaction::tx_only, "tx_only"},
                                                      {tasks::Transaction::tx_ack, "tx_ack"},
                                                      {tasks::Transaction::rx_poll, "rx_poll"}}};
constexpr Names<SolarConfig::Policy, 2> kSolarPolicies{{{SolarConfig::Policy::forecast_wait, "forecast_wait"},
                                                        {SolarConfig::Policy::fixed_rate, "fixed_rate"}}};

template <typename E, std::size_t N>
std::string name_of(const Names<E, N>& names, E value) {
  for (const auto& [e, n] : names)
    if (e == value) return std::string(n);
  return "?";
}

template <typename E, std::size_t N>
std::string choices(const Names<E, N>& names) {
  std::string s;
  for (const auto& [e, n] : names) s += (s.empty() ? "" : ", ") + std::string(n);
  return s;
}

/// Walks one JSON object, reading known keys and recording every problem.
class Reader {
 public:
  Reader(const Json* j, std::string path, std::vector<std::string>& issues)
      : j_(j), path_(std::move(path)), issues_(issues) {
    if (j_ != nullptr && !j_->is_object()) {
      issues_.push_back(where() + ": expected an object");
      j_ = nullptr;
    }
  }

  ~Reader() {
    if (j_ == nullptr) return;
    for (const auto& [key, value] : j_->items())
      if (!seen_.count(key)) issues_.push_back(at(key) + ": unknown key");
  }

  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  bool has(const std::string& key) const { return j_ != nullptr && j_->contains(key); }

  const Json* find(const std::string& key) {
    seen_.insert(key);
    if (j_ == nullptr) return nullptr;
    auto it = j_->find(key);
    return it == j_->end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = find(key)) {
      if (v->is_number()) out = v->get<double>();
      else issues_.push_back(at(key) + ": expected a number");
    }
  }

  template <typename I>
  void integer(const std::string& key, I& out) {
    if (const Json* v = find(key)) {
      if (v->is_number_unsigned()) {
        const auto raw = v->get<std::uint64_t>();
        if (raw > static_cast<std::uint64_t>(std::numeric_limits<I>::max()))
          issues_.push_back(at(key) + ": value out of range");
        else
          out = static_cast<I>(raw);
      } else if (v->is_number_integer() && std::is_signed_v<I>) {
        out = static_cast<I>(v->get<std::int64_t>());
      } else {
        issues_.push_back(at(key) + ": expected a non-negative integer");
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = find(key)) {
      if (v->is_boolean()) out = v->get<bool>();
      else issues_.push_back(at(key) + ": expected true or false");
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const Json* v = find(key)) {
      if (v->is_string()) out = v->get<std::string>();
      else issues_.push_back(at(key) + ": expected a string");
    }
  }

  template <typename E, std::size_t N>
  void choice(const std::string& key, const Names<E, N>& names, E& out) {
    if (const Json* v = find(key)) {
      if (!v->is_string()) {
        issues_.push_back(at(key) + ": expected a string");
        return;
      }
      const auto s = v->get<std::string>();
      for (const auto& [e, n] : names)
        if (n == s) {
          out = e;
          return;
        }
      issues_.push_back(at(key) + ": unknown value '" + s + "' (" + choices(names) + ")");
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) {
        issues_.push_back(at(key) + ": expected an array of numbers");
        return;
      }
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        if ((*v)[i].is_number()) out.push_back((*v)[i].get<double>());
        else issues_.push_back(at(key) + "[" + std::to_string(i) + "]: expected a number");
      }
    }
  }

  void pairs(const std::string& key, std::vector<std::pair<double, double>>& out) {
    if (const Json* v = find(key)) {
      if (!v->is_array()) {
        issues_.push_back(at(key) + ": expected an array of [x, y] pairs");
        return;
      }
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const Json& p = (*v)[i];
        if (p.is_array() && p.size() == 2 && p[0].is_number() && p[1].is_number())
          out.emplace_back(p[0].get<double>(), p[1].get<double>());
        else
          issues_.push_back(at(key) + "[" + std::to_string(i) + "]: expected [x, y]");
      }
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::vector<std::string>& issues() { return issues_; }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const Json* j_;
  std::string path_;
  std::vector<std::string>& issues_;
  std::set<std::string> seen_;
};

void read_curve(Reader& parent, const std::string& key, policy::EnergyCurve& c) {
  Reader r(parent.find(key), parent.at(key), parent.issues());
  r.choice("kind", kCurves, c.kind);
  r.number("scale_units", c.scale);
  r.pairs("points_units", c.points);
  r.number("value", c.value);
}

Json write_curve(const policy::EnergyCurve& c) {
  Json pts = Json::array();
  for (const auto& [x, y] : c.points) pts.push_back({x, y});
  return Json{{"kind", name_of(kCurves, c.kind)}, {"scale_units", c.scale}, {"points_units", pts}, {"value", c.value}};
}

void read_arrivals(Reader& parent, const std::string& key, ArrivalProcess& a) {
  Reader r(parent.find(key), parent.at(key), parent.issues());
  r.choice("process", kProcesses, a.kind);
  r.number("rate", a.rate);
  r.number("quantum_units", a.unit);
  r.numbers("sequence_units", a.sequence);
}

Json write_arrivals(const ArrivalProcess& a) {
  return Json{{"process", name_of(kProcesses, a.kind)},
              {"rate", a.rate},
              {"quantum_units", a.unit},
              {"sequence_units", a.sequence}};
}

void read_abstract(Reader& root, AbstractConfig& a) {
  Reader r(root.find("abstract"), "abstract", root.issues());
  r.number("capacity_units", a.capacity);
  r.number("initial_units", a.initial);
  read_arrivals(r, "energy_arrivals", a.energy);
  read_arrivals(r, "event_arrivals", a.events);
  r.number("task_cost_units", a.task_cost);
  r.integer("task_buffer_size", a.buffer);
  read_curve(r, "erasure", a.erasure);
  Reader p(r.find("policy"), "abstract.policy", root.issues());
  p.choice("kind", kPolicies, a.policy.kind);
  p.integer("interval_slots", a.policy.interval);
  p.number("spend_units", a.policy.spend);
  p.number("measure_cost_units", a.policy.measure_cost);
  p.number("threshold_units", a.policy.threshold);
  p.number("comparator_cost_units", a.policy.comparator_cost);
  read_curve(p, "transmit_probability", a.policy.transmit_probability);
}

Json write_abstract(const AbstractConfig& a) {
  const AbstractPolicy& p = a.policy;
  return Json{{"capacity_units", a.capacity},
              {"initial_units", a.initial},
              {"energy_arrivals", write_arrivals(a.energy)},
              {"event_arrivals", write_arrivals(a.events)},
              {"task_cost_units", a.task_cost},
              {"task_buffer_size", a.buffer},
              {"erasure", write_curve(a.erasure)},
              {"policy",
               {{"kind", name_of(kPolicies, p.kind)},
                {"interval_slots", p.interval},
                {"spend_units", p.spend},
                {"measure_cost_units", p.measure_cost},
                {"threshold_units", p.threshold},
                {"comparator_cost_units", p.comparator_cost},
                {"transmit_probability", write_curve(p.transmit_probability)}}}};
}

void read_gate(Reader& root, GateConfig& g) {
  Reader r(root.find("gate"), "gate", root.issues());
  r.number("capacitance_F", g.capacitance);
  r.number("v_on_V", g.v_on);
  r.number("v_off_V", g.v_off);
  r.number("v_max_V", g.v_max);
  r.number("v_init_V", g.v_init);
  r.number("harvest_power_W", g.harvest_power);
  r.number("dt_s", g.dt);
  r.number("duration_s", g.duration);
  r.number("interval_s", g.interval);
  r.string("radio", g.radio);
  r.choice("transaction", kTransactions, g.transaction);
}

Json write_gate(const GateConfig& g) {
  return Json{{"capacitance_F", g.capacitance}, {"v_on_V", g.v_on},
              {"v_off_V", g.v_off},             {"v_max_V", g.v_max},
              {"v_init_V", g.v_init},           {"harvest_power_W", g.harvest_power},
              {"dt_s", g.dt},                   {"duration_s", g.duration},
              {"interval_s", g.interval},       {"radio", g.radio},
              {"transaction", name_of(kTransactions, g.transaction)}};
}

void read_tinyml(Reader& root, TinyMlConfig& t) {
  Reader r(root.find("tinyml"), "tinyml", root.issues());
  r.number("capacitance_F", t.capacitance);
  r.number("v_min_V", t.v_min);
  r.number("v_max_V", t.v_max);
  r.number("v_init_V", t.v_init);
  r.number("v_nominal_V", t.v_nominal);
  r.number("harvest_current_A", t.harvest_current);
  r.number("quiescent_current_A", t.quiescent_current);
  r.number("period_s", t.period);
  r.number("duration_s", t.duration);
  if (const Json* models = r.find("models")) {
    if (!models->is_array()) {
      r.issues().push_back("tinyml.models: expected an array");
    } else {
      t.models.clear();
      for (std::size_t i = 0; i < models->size(); ++i) {
        ModelConfig m;
        Reader mr(&(*models)[i], "tinyml.models[" + std::to_string(i) + "]", r.issues());
        mr.string("id", m.id);
        mr.integer("accuracy_rank", m.accuracy_rank);
        mr.number("energy_J", m.energy);
        mr.number("duration_s", m.duration);
        t.models.push_back(std::move(m));
      }
    }
  }
}

Json write_tinyml(const TinyMlConfig& t) {
  Json models = Json::array();
  for (const auto& m : t.models)
    models.push_back(
        {{"id", m.id}, {"accuracy_rank", m.accuracy_rank}, {"energy_J", m.energy}, {"duration_s", m.duration}});
  return Json{{"capacitance_F", t.capacitance},
              {"v_min_V", t.v_min},
              {"v_max_V", t.v_max},
              {"v_init_V", t.v_init},
              {"v_nominal_V", t.v_nominal},
              {"harvest_current_A", t.harvest_current},
              {"quiescent_current_A", t.quiescent_current},
              {"period_s", t.period},
              {"duration_s", t.duration},
              {"models", models}};
}

void read_solar(Reader& root, SolarConfig& s) {
  Reader r(root.find("solar"), "solar", root.issues());
  r.integer("days", s.days);
  r.integer("train_days", s.train_days);
  {
    Reader p(r.find("panel"), "solar.panel", r.issues());
    p.number("area_m2", s.panel.area);
    p.number("eta_pv", s.panel.eta_pv);
    p.number("eta_pmu", s.panel.eta_pmu);
    p.number("slot_s", s.panel.slot);
  }
  {
    Reader k(r.find("sky"), "solar.sky", r.issues());
    k.number("peak_W_m2", s.sky.peak);
    k.number("day_length_s", s.sky.day_length);
    k.number("sunrise_s", s.sky.sunrise);
    k.number("cloud_phi1", s.sky.cloud_phi1);
    k.number("cloud_phi2", s.sky.cloud_phi2);
    k.number("cloud_sigma", s.sky.cloud_sigma);
    k.number("cloud_mean", s.sky.cloud_mean);
  }
  r.integer("ar_order", s.ar_order);
  r.integer("diff_order", s.diff_order);
  r.number("capacity_J", s.capacity);
  r.number("initial_J", s.initial);
  r.number("reserve_J", s.reserve);
  r.number("task_energy_J", s.task_energy);
  r.number("wake_cost_J", s.wake_cost);
  r.integer("horizon_slots", s.horizon);
  r.choice("policy", kSolarPolicies, s.policy);
  r.integer("fixed_interval_slots", s.fixed_interval);
}

Json write_solar(const SolarConfig& s) {
  return Json{{"days", s.days},
              {"train_days", s.train_days},
              {"panel",
               {{"area_m2", s.panel.area},
                {"eta_pv", s.panel.eta_pv},
                {"eta_pmu", s.panel.eta_pmu},
                {"slot_s", s.panel.slot}}},
              {"sky",
               {{"peak_W_m2", s.sky.peak},
                {"day_length_s", s.sky.day_length},
                {"sunrise_s", s.sky.sunrise},
                {"cloud_phi1", s.sky.cloud_phi1},
                {"cloud_phi2", s.sky.cloud_phi2},
                {"cloud_sigma", s.sky.cloud_sigma},
                {"cloud_mean", s.sky.cloud_mean}}},
              {"ar_order", s.ar_order},
              {"diff_order", s.diff_order},
              {"capacity_J", s.capacity},
              {"initial_J", s.initial},
              {"reserve_J", s.reserve},
              {"task_energy_J", s.task_energy},
              {"wake_cost_J", s.wake_cost},
              {"horizon_slots", s.horizon},
              {"policy", name_of(kSolarPolicies, s.policy)},
              {"fixed_interval_slots", s.fixed_interval}};
}

void read_rf(Reader& root, RfConfig& rf) {
  Reader r(root.find("rf"), "rf", root.issues());
  r.integer("scenes", rf.scenes);
  r.number("disk_radius_m", rf.disk_radius);
  r.integer("antennas", rf.scene.antennas);
  r.number("tx_power_W", rf.scene.tx_power);
  r.number("path_loss_exponent", rf.scene.path_loss_exponent);
  r.number("ref_loss_dB", rf.scene.ref_loss_db);
  r.number("eh_efficiency", rf.scene.eh_efficiency);
  r.number("tuning_power_W", rf.scene.tuning_power);
  r.number("measurement_power_W", rf.scene.measurement_power);
  r.number("spacing_wavelengths", rf.scene.spacing);
  r.number("min_distance_m", rf.scene.min_distance);
  r.number("slot_s", rf.schedule.slot);
  r.number("exploit_s", rf.schedule.exploit);
  r.number("measurement_noise", rf.schedule.measurement_noise);
  r.boolean("exploration_shortfall", rf.schedule.exploration_shortfall);
}

Json write_rf(const RfConfig& rf) {
  return Json{{"scenes", rf.scenes},
              {"disk_radius_m", rf.disk_radius},
              {"antennas", rf.scene.antennas},
              {"tx_power_W", rf.scene.tx_power},
              {"path_loss_exponent", rf.scene.path_loss_exponent},
              {"ref_loss_dB", rf.scene.ref_loss_db},
              {"eh_efficiency", rf.scene.eh_efficiency},
              {"tuning_power_W", rf.scene.tuning_power},
              {"measurement_power_W", rf.scene.measurement_power},
              {"spacing_wavelengths", rf.scene.spacing},
              {"min_distance_m", rf.scene.min_distance},
              {"slot_s", rf.schedule.slot},
              {"exploit_s", rf.schedule.exploit},
              {"measurement_noise", rf.schedule.measurement_noise},
              {"exploration_shortfall", rf.schedule.exploration_shortfall}};
}

constexpr std::array<std::pair<Engine, std::string_view>, 6> kBlocks{{{Engine::tasks, "abstract"},
                                                                      {Engine::packets, "abstract"},
                                                                      {Engine::gate, "gate"},
                                                                      {Engine::tinyml, "tinyml"},
                                                                      {Engine::solar, "solar"},
                                                                      {Engine::rf, "rf"}}};

std::string_view block_of(Engine e) {
  for (const auto& [engine, block] : kBlocks)
    if (engine == e) return block;
  return "";
}

}  // namespace

sim::ScenarioConfig from_json(const Json& j) {
  std::vector<std::string> issues;
  ScenarioConfig c;
  {
    Reader r(&j, "", issues);
    r.integer("schema", c.schema);
    r.string("name", c.name);
    r.choice("regime", kRegimes, c.regime);
    r.choice("engine", kEngines, c.engine);
    r.integer("seed", c.seed);
    r.integer("slots", c.slots);
    r.integer("n_devices", c.n_devices);
    r.boolean("trace", c.trace);
    if (!j.is_object() || !j.contains("schema")) issues.push_back("schema: required");

    const std::string_view active = block_of(c.engine);
    for (std::string_view block : {"abstract", "gate", "tinyml", "solar", "rf"}) {
      const std::string key(block);
      if (block != active) {
        if (r.has(key)) {
          r.find(key);
          issues.push_back(key + ": block not used by engine '" + name_of(kEngines, c.engine) + "'");
        }
        continue;
      }
      if (block == "abstract") read_abstract(r, c.abstract);
      else if (block == "gate") read_gate(r, c.gate);
      else if (block == "tinyml") read_tinyml(r, c.tinyml);
      else if (block == "solar") read_solar(r, c.solar);
      else read_rf(r, c.rf);
    }
  }
  for (auto& v : sim::validate(c)) issues.push_back(std::move(v));
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

Json to_json(const sim::ScenarioConfig& c) {
  Json j{{"schema", c.schema},
         {"name", c.name},
         {"regime", name_of(kRegimes, c.regime)},
         {"engine", name_of(kEngines, c.engine)},
         {"seed", c.seed},
         {"slots", c.slots},
         {"n_devices", c.n_devices},
         {"trace", c.trace}};
  switch (c.engine) {
    case Engine::tasks:
    case Engine::packets: j["abstract"] = write_abstract(c.abstract); break;
    case Engine::gate: j["gate"] = write_gate(c.gate); break;
    case Engine::tinyml: j["tinyml"] = write_tinyml(c.tinyml); break;
    case Engine::solar: j["solar"] = write_solar(c.solar); break;
    case Engine::rf: j["rf"] = write_rf(c.rf); break;
  }
  return j;
}

sim::ScenarioConfig parse(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError({std::string("<root>: malformed JSON: ") + e.what()});
  }
  return from_json(j);
}

sim::ScenarioConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file: " + path);
  return parse(in);
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || raw[0] == '-') return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

}  // namespace zed::config
