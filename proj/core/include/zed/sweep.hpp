#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zed/config.hpp"
#include "zed/sim.hpp"

namespace zed::sweep {

/// One swept parameter: a dotted config path (as in the JSON file, array
/// elements addressed by index, e.g. "tinyml.models.1.energy_J") and its
/// values.
struct Axis {
  std::string path;
  std::vector<config::Json> values;
};

/// "path=v1,v2,..." or an inclusive numeric range "path=lo:hi[:step]".
Axis parse_axis(const std::string& spec);

/// "1,2,5" or "lo:hi" (inclusive) or a bare count "20" meaning 1..20.
std::vector<std::uint64_t> parse_seeds(const std::string& spec);

struct Point {
  std::vector<config::Json> axis_values;
  std::uint64_t seed = 0;
  sim::ScenarioConfig config;
};

/// Builds and validates every (axis combination x seed) config before any
/// run. Axes vary lexicographically (first axis slowest), seeds fastest.
/// Throws ConfigError listing every bad path or invalid combination.
std::vector<Point> expand(const sim::ScenarioConfig& base, const std::vector<Axis>& axes,
                          const std::vector<std::uint64_t>& seeds);

struct Row {
  std::vector<config::Json> axis_values;
  std::uint64_t seed = 0;
  sim::Metrics metrics;
};

struct Table {
  std::vector<std::string> axes;
  std::vector<Row> rows;
};

/// Runs points on up to `jobs` threads; row order follows the points.
std::vector<sim::Metrics> run_points(const std::vector<sim::ScenarioConfig>& configs, unsigned jobs);

Table run(const sim::ScenarioConfig& base, const std::vector<Axis>& axes, const std::vector<std::uint64_t>& seeds,
          unsigned jobs = 1);

}  // namespace zed::sweep
