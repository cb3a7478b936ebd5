#include "zed/presets.hpp"

#include <algorithm>
#include <ostream>

#include "zed/error.hpp"
#include "zed/report.hpp"

namespace zed::presets {

namespace {

using sim::ScenarioConfig;

std::vector<std::uint64_t> seed_range(std::uint64_t n) {
  std::vector<std::uint64_t> s;
  for (std::uint64_t i = 1; i <= n; ++i) s.push_back(i);
  return s;
}

ScenarioConfig task_base(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  c.regime = sim::Regime::abstract;
  c.engine = sim::Engine::tasks;
  c.slots = 100000;
  c.n_devices = 1;
  auto& a = c.abstract;
  a.capacity = 5.0;
  a.energy = {sim::ArrivalProcess::Kind::poisson, 0.75, 1.0, {}};
  a.events = {sim::ArrivalProcess::Kind::bernoulli, 0.35, 1.0, {}};
  a.task_cost = 2.0;
  a.buffer = 1;
  return c;
}

Series aware(double e_c, std::size_t buffer, double capacity) {
  ScenarioConfig c = task_base("task-deferring");
  c.abstract.policy.kind = sim::AbstractPolicy::Kind::periodic_measure;
  c.abstract.policy.measure_cost = e_c;
  c.abstract.buffer = buffer;
  c.abstract.capacity = capacity;
  return {"aware_Ec" + report::format_number(e_c) + "_B" + std::to_string(buffer) + "_EM" +
              report::format_number(capacity),
          c, {sweep::parse_axis("abstract.policy.interval_slots=1:50")}};
}

Series blind(std::size_t buffer, double capacity) {
  ScenarioConfig c = task_base("task-deferring");
  c.abstract.policy.kind = sim::AbstractPolicy::Kind::energy_blind;
  c.abstract.buffer = buffer;
  c.abstract.capacity = capacity;
  return {"blind_B" + std::to_string(buffer) + "_EM" + report::format_number(capacity), c,
          {sweep::parse_axis("abstract.policy.interval_slots=1:50")}};
}

ScenarioConfig aoi_base(double p) {
  ScenarioConfig c;
  c.name = "aoi-mac";
  c.regime = sim::Regime::abstract;
  c.engine = sim::Engine::packets;
  c.slots = 100000;
  c.n_devices = 64;
  auto& a = c.abstract;
  a.capacity = 10.0;
  a.energy = {sim::ArrivalProcess::Kind::bernoulli, 0.1, 1.0, {}};
  a.events = {sim::ArrivalProcess::Kind::bernoulli, p, 1.0, {}};
  a.erasure = policy::EnergyCurve::exponential(20.0);
  a.policy.transmit_probability = policy::EnergyCurve::ramp(10.0);
  return c;
}

std::vector<Series> aoi_series() {
  std::vector<Series> out;
  for (int k : {1, 5}) {
    const double p = static_cast<double>(k) / 64.0;
    const std::string tag = "_p" + std::to_string(k) + "overN";
    ScenarioConfig partial = aoi_base(p);
    partial.abstract.policy.kind = sim::AbstractPolicy::Kind::aoi_threshold;
    out.push_back({"partial" + tag, partial, {sweep::parse_axis("abstract.policy.threshold_units=1:10")}});
    ScenarioConfig full = aoi_base(p);
    full.abstract.policy.kind = sim::AbstractPolicy::Kind::aoi_fully_aware;
    full.abstract.policy.measure_cost = 0.02;
    out.push_back({"full" + tag, full, {}});
    ScenarioConfig blind = aoi_base(p);
    blind.abstract.policy.kind = sim::AbstractPolicy::Kind::energy_blind;
    blind.abstract.policy.interval = 1;
    out.push_back({"blind" + tag, blind, {sweep::parse_axis("abstract.policy.spend_units=1:10")}});
  }
  return out;
}

std::vector<Series> tinyml_series() {
  ScenarioConfig c;
  c.name = "tinyml-select";
  c.regime = sim::Regime::physical;
  c.engine = sim::Engine::tinyml;
  c.slots = 1;
  return {{"select", c, {sweep::parse_axis("tinyml.harvest_current_A=0:0.0025:0.0001")}}};
}

std::vector<Series> rf_series() {
  std::vector<Series> out;
  struct Level {
    const char* label;
    double p_c;
    double p_m;
  };
  for (const Level& l : {Level{"overhead_none", 0.0, 0.0}, Level{"overhead_low", 1e-6, 1e-6},
                         Level{"overhead_high", 2e-5, 2e-5}}) {
    ScenarioConfig c;
    c.name = "rf-combining";
    c.regime = sim::Regime::physical;
    c.engine = sim::Engine::rf;
    c.slots = 1;
    c.rf.scene.tuning_power = l.p_c;
    c.rf.scene.measurement_power = l.p_m;
    out.push_back({l.label, c, {sweep::parse_axis("rf.antennas=1,2,4,6,8,12,16")}});
  }
  return out;
}

std::vector<Series> gate_series() {
  std::vector<Series> out;
  for (double cap : {1.5, 2.5}) {
    for (double ti : {1.0, 10.0, 60.0}) {
      ScenarioConfig c;
      c.name = "nbiot-gate";
      c.regime = sim::Regime::physical;
      c.engine = sim::Engine::gate;
      c.slots = 1;
      c.gate.capacitance = cap;
      c.gate.interval = ti;
      out.push_back({"C" + report::format_number(cap) + "F_TI" + report::format_number(ti) + "s", c,
                     {sweep::parse_axis("gate.harvest_power_W=0.001,0.002,0.003,0.004,0.005,0.006,0.008,0.01,"
                                        "0.015,0.02,0.03,0.04,0.05,0.07,0.1")}});
    }
  }
  return out;
}

std::vector<Series> solar_series() {
  ScenarioConfig f;
  f.name = "solar-forecast";
  f.regime = sim::Regime::physical;
  f.engine = sim::Engine::solar;
  f.slots = 1;
  f.solar.policy = sim::SolarConfig::Policy::forecast_wait;
  ScenarioConfig b = f;
  b.solar.policy = sim::SolarConfig::Policy::fixed_rate;
  return {{"forecast_wait", f, {}},
          {"fixed_rate", b, {sweep::parse_axis("solar.fixed_interval_slots=10,20,40,80")}}};
}

std::vector<Preset> build() {
  std::vector<Preset> out;

  std::vector<Series> tasks;
  for (double e_c : {0.0, 1.0, 2.0}) tasks.push_back(aware(e_c, 1, 5.0));
  tasks.push_back(aware(1.0, 5, 5.0));
  tasks.push_back(aware(1.0, 1, 10.0));
  tasks.push_back(blind(1, 5.0));
  tasks.push_back(blind(5, 5.0));
  tasks.push_back(blind(1, 10.0));
  out.push_back({"task-deferring",
                 "Task completion rate of periodic-measure (vs Q) and energy-blind (vs F) execution; Poisson(0.75) "
                 "energy, Bernoulli(0.35) tasks, cost 2",
                 std::move(tasks),
                 seed_range(20),
                 {{"series", "series"},
                  {"interval_slots", "axis:abstract.policy.interval_slots"},
                  {"seed", "seed"},
                  {"task_completion_rate", "metric:task_completion_rate"}}});

  out.push_back({"aoi-mac",
                 "Average AoI of 64 devices on a shared channel: threshold (vs delta), fully-aware and energy-blind "
                 "(vs E_t); E_M=10, p'=0.1, erasure exp(-E/20), sample cost 0.02",
                 aoi_series(),
                 seed_range(20),
                 {{"series", "series"},
                  {"threshold_units", "axis:abstract.policy.threshold_units"},
                  {"spend_units", "axis:abstract.policy.spend_units"},
                  {"seed", "seed"},
                  {"avg_aoi", "metric:avg_aoi"},
                  {"successes", "extra:successes"},
                  {"collided", "extra:collided"},
                  {"erased", "extra:erased"},
                  {"failed_attempts", "extra:failed_attempts"}}});

  out.push_back({"tinyml-select",
                 "Inference model selection vs harvesting current; C=0.5 F, STML 0.12 mJ, LTML 1.46 mJ",
                 tinyml_series(),
                 {1},
                 {{"series", "series"},
                  {"harvest_current_A", "axis:tinyml.harvest_current_A"},
                  {"seed", "seed"},
                  {"fraction_LTML", "extra:fraction_LTML"},
                  {"fraction_STML", "extra:fraction_STML"},
                  {"defer_fraction", "extra:defer_fraction"},
                  {"mean_voltage_V", "extra:mean_voltage_V"}}});

  out.push_back({"rf-combining",
                 "Average harvested DC power vs antenna count for DC, static, dynamic (net) and genie RF combining; "
                 "10 W source, 100 m disk",
                 rf_series(),
                 {1},
                 {{"series", "series"},
                  {"antennas", "axis:rf.antennas"},
                  {"seed", "seed"},
                  {"dc", "extra:dc_W"},
                  {"static", "extra:static_W"},
                  {"dynamic", "extra:dynamic_W"},
                  {"genie", "extra:genie_W"}}});

  out.push_back({"nbiot-gate",
                 "Dual-threshold gated NB-IoT-like radio on a capacitor: throughput and restarts vs harvest power",
                 gate_series(),
                 {1},
                 {{"series", "series"},
                  {"harvest_power_W", "axis:gate.harvest_power_W"},
                  {"seed", "seed"},
                  {"throughput_pph", "metric:throughput_pph"},
                  {"restart_count", "metric:restart_count"},
                  {"on_fraction", "extra:on_fraction"}}});

  out.push_back({"solar-forecast",
                 "ARIMA(5,1,0) irradiance forecast scheduling vs fixed-rate transmissions on a synthetic sky",
                 solar_series(),
                 seed_range(5),
                 {{"series", "series"},
                  {"fixed_interval_slots", "axis:solar.fixed_interval_slots"},
                  {"seed", "seed"},
                  {"throughput_pph", "metric:throughput_pph"},
                  {"transmissions", "extra:transmissions"},
                  {"min_stored_J", "extra:min_stored_J"}}});
  return out;
}

std::string last_segment(const std::string& path) {
  const auto dot = path.rfind('.');
  return dot == std::string::npos ? path : path.substr(dot + 1);
}

std::vector<Column> generic_columns(const Preset& p, const std::vector<SeriesResult>& results) {
  std::vector<Column> cols{{"series", "series"}};
  std::vector<std::string> paths;
  for (const auto& s : p.series)
    for (const auto& a : s.axes)
      if (std::find(paths.begin(), paths.end(), a.path) == paths.end()) paths.push_back(a.path);
  for (const auto& path : paths) cols.push_back({last_segment(path), "axis:" + path});
  cols.push_back({"seed", "seed"});
  for (const auto& m : report::metric_columns()) cols.push_back({m, "metric:" + m});
  std::vector<std::string> extras;
  for (const auto& r : results)
    for (const auto& e : report::extra_columns(r.table))
      if (std::find(extras.begin(), extras.end(), e) == extras.end()) extras.push_back(e);
  for (const auto& e : extras) cols.push_back({e, "extra:" + e});
  return cols;
}

}  // namespace

const std::vector<Preset>& all() {
  static const std::vector<Preset> presets = build();
  return presets;
}

const Preset* find(std::string_view name) {
  for (const auto& p : all())
    if (p.name == name) return &p;
  return nullptr;
}

std::vector<std::string> names() {
  std::vector<std::string> out;
  for (const auto& p : all()) out.push_back(p.name);
  return out;
}

Preset quick(const Preset& preset) {
  Preset q = preset;
  q.seeds.resize(std::min<std::size_t>(q.seeds.size(), 2));
  for (auto& s : q.series) {
    auto& c = s.base;
    c.slots = std::min<std::size_t>(c.slots, 2000);
    c.rf.scenes = std::min<std::size_t>(c.rf.scenes, 50);
    c.gate.duration = std::min(c.gate.duration, 1800.0);
    c.tinyml.duration = std::min(c.tinyml.duration, 300.0);
  }
  return q;
}

std::vector<SeriesResult> run(const Preset& preset, unsigned jobs) {
  std::vector<std::vector<sweep::Point>> expanded;
  std::vector<sim::ScenarioConfig> configs;
  for (const auto& s : preset.series) {
    expanded.push_back(sweep::expand(s.base, s.axes, preset.seeds));
    for (const auto& p : expanded.back()) configs.push_back(p.config);
  }
  auto metrics = sweep::run_points(configs, jobs);

  std::vector<SeriesResult> out;
  std::size_t k = 0;
  for (std::size_t i = 0; i < preset.series.size(); ++i) {
    SeriesResult r{preset.series[i].label, {}};
    for (const auto& a : preset.series[i].axes) r.table.axes.push_back(a.path);
    for (const auto& p : expanded[i]) r.table.rows.push_back({p.axis_values, p.seed, std::move(metrics[k++])});
    out.push_back(std::move(r));
  }
  return out;
}

void write_csv(std::ostream& out, const Preset& preset, const std::vector<SeriesResult>& results) {
  const auto cols = preset.columns.empty() ? generic_columns(preset, results) : preset.columns;
  std::vector<std::string> header;
  for (const auto& c : cols) header.push_back(c.header);
  report::write_csv_row(out, header);

  const auto& metric_names = report::metric_columns();
  for (const auto& r : results) {
    for (const auto& row : r.table.rows) {
      const auto metric_values = report::metric_cells(row.metrics);
      std::vector<std::string> fields;
      for (const auto& c : cols) {
        const auto colon = c.source.find(':');
        const std::string kind = c.source.substr(0, colon);
        const std::string key = colon == std::string::npos ? "" : c.source.substr(colon + 1);
        std::string v;
        if (kind == "series") {
          v = r.label;
        } else if (kind == "seed") {
          v = std::to_string(row.seed);
        } else if (kind == "axis") {
          for (std::size_t a = 0; a < r.table.axes.size(); ++a)
            if (r.table.axes[a] == key) v = report::cell(row.axis_values[a]);
        } else if (kind == "metric") {
          for (std::size_t m = 0; m < metric_names.size(); ++m)
            if (metric_names[m] == key) v = metric_values[m];
        } else if (kind == "extra") {
          if (auto e = row.metrics.extra(key)) v = report::format_number(*e);
        } else {
          throw ContractViolation("preset column source: " + c.source);
        }
        fields.push_back(std::move(v));
      }
      report::write_csv_row(out, fields);
    }
  }
}

}  // namespace zed::presets
