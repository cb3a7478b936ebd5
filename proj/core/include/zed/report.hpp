#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zed/config.hpp"
#include "zed/sim.hpp"
#include "zed/sweep.hpp"

namespace zed::report {

/// Metric columns of every sweep CSV, in order, after the axis columns and
/// "seed". Engine extras follow these.
const std::vector<std::string>& metric_columns();

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

/// RFC 4180 quoting: fields with a comma, quote, CR or LF are quoted and
/// inner quotes doubled.
std::string csv_field(const std::string& s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// {"schema": 1, "name", "engine", "seed", "metrics", "ledger", "tasks", "extras"}
config::Json summary(const sim::ScenarioConfig& config, const sim::Metrics& metrics);

/// Metric cells for one run, parallel to metric_columns(); absent values
/// are empty cells.
std::vector<std::string> metric_cells(const sim::Metrics& m);

/// Extras keys in first-seen order across rows.
std::vector<std::string> extra_columns(const sweep::Table& table);

void write_sweep_csv(std::ostream& out, const sweep::Table& table);
void write_trace_csv(std::ostream& out, const sim::Metrics& m);

std::string cell(const config::Json& value);

}  // namespace zed::report
