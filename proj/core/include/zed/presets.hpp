#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zed/sim.hpp"
#include "zed/sweep.hpp"

namespace zed::presets {

/// One curve of a figure: a base config swept over its axes.
struct Series {
  std::string label;
  sim::ScenarioConfig base;
  std::vector<sweep::Axis> axes;
};

/// Output column: its header and where the value comes from. Sources are
/// "series", "seed", "axis:<path>", "metric:<column>" or "extra:<key>".
struct Column {
  std::string header;
  std::string source;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<Series> series;
  std::vector<std::uint64_t> seeds;
  std::vector<Column> columns;
};

const std::vector<Preset>& all();
const Preset* find(std::string_view name);
std::vector<std::string> names();

/// Same series with fewer slots, scenes, seeds and a shorter horizon, for
/// smoke runs.
Preset quick(const Preset& preset);

struct SeriesResult {
  std::string label;
  sweep::Table table;
};

std::vector<SeriesResult> run(const Preset& preset, unsigned jobs = 1);

/// Figure-ready CSV: one row per (series, axis point, seed).
void write_csv(std::ostream& out, const Preset& preset, const std::vector<SeriesResult>& results);

}  // namespace zed::presets
