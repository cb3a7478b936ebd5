#include "zed/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace zed::report {

const std::vector<std::string>& metric_columns() {
  static const std::vector<std::string> cols{"task_completion_rate", "avg_aoi",   "net_harvested_power_W",
                                             "throughput_pph",       "restart_count", "harvested",
                                             "delivered",            "leaked",    "spilled",
                                             "acquisition_overhead"};
  return cols;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

namespace {

config::Json opt(const std::optional<double>& v) { return v ? config::Json(*v) : config::Json(nullptr); }

std::string opt_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

const char* engine_name(sim::Engine e) {
  switch (e) {
    case sim::Engine::tasks: return "tasks";
    case sim::Engine::packets: return "packets";
    case sim::Engine::gate: return "gate";
    case sim::Engine::tinyml: return "tinyml";
    case sim::Engine::solar: return "solar";
    case sim::Engine::rf: return "rf";
  }
  return "?";
}

}  // namespace

std::string cell(const config::Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return format_number(value.get<double>());
  return value.dump();
}

config::Json summary(const sim::ScenarioConfig& config, const sim::Metrics& m) {
  config::Json j;
  j["schema"] = 1;
  j["name"] = config.name;
  j["engine"] = engine_name(config.engine);
  j["seed"] = config.seed;
  j["metrics"] = {{"task_completion_rate", opt(m.task_completion_rate)},
                  {"avg_aoi", opt(m.avg_aoi)},
                  {"net_harvested_power_W", opt(m.net_harvested_power)},
                  {"throughput_pph", opt(m.throughput)},
                  {"restart_count", m.restart_count ? config::Json(*m.restart_count) : config::Json(nullptr)}};
  j["ledger"] = {{"harvested", m.ledger.harvested},
                 {"delivered", m.ledger.delivered},
                 {"leaked", m.ledger.leaked},
                 {"spilled", m.ledger.spilled},
                 {"acquisition_overhead", m.ledger.acquisition_overhead}};
  if (m.tasks)
    j["tasks"] = {{"arrivals", m.tasks->arrivals},
                  {"completed", m.tasks->completed},
                  {"failed_attempts", m.tasks->failed_attempts},
                  {"dropped", m.tasks->dropped},
                  {"buffered", m.tasks->buffered}};
  else
    j["tasks"] = nullptr;
  config::Json extras = config::Json::object();
  for (const auto& [k, v] : m.extras) extras[k] = v;
  j["extras"] = extras;
  return j;
}

std::vector<std::string> metric_cells(const sim::Metrics& m) {
  return {opt_cell(m.task_completion_rate),
          opt_cell(m.avg_aoi),
          opt_cell(m.net_harvested_power),
          opt_cell(m.throughput),
          m.restart_count ? std::to_string(*m.restart_count) : "",
          format_number(m.ledger.harvested),
          format_number(m.ledger.delivered),
          format_number(m.ledger.leaked),
          format_number(m.ledger.spilled),
          format_number(m.ledger.acquisition_overhead)};
}

std::vector<std::string> extra_columns(const sweep::Table& table) {
  std::vector<std::string> keys;
  for (const auto& row : table.rows)
    for (const auto& [k, v] : row.metrics.extras)
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  return keys;
}

void write_sweep_csv(std::ostream& out, const sweep::Table& table) {
  const auto extras = extra_columns(table);
  std::vector<std::string> header = table.axes;
  header.push_back("seed");
  for (const auto& c : metric_columns()) header.push_back(c);
  for (const auto& e : extras) header.push_back(e);
  write_csv_row(out, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> fields;
    for (const auto& v : row.axis_values) fields.push_back(cell(v));
    fields.push_back(std::to_string(row.seed));
    for (auto& c : metric_cells(row.metrics)) fields.push_back(std::move(c));
    for (const auto& e : extras) fields.push_back(opt_cell(row.metrics.extra(e)));
    write_csv_row(out, fields);
  }
}

void write_trace_csv(std::ostream& out, const sim::Metrics& m) {
  write_csv_row(out, {"slot", "device", "stored", "event", "value"});
  for (const auto& r : m.trace)
    write_csv_row(out, {std::to_string(r.slot), std::to_string(r.device), format_number(r.stored), r.event,
                        format_number(r.value)});
}

}  // namespace zed::report
