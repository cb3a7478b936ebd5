#include "zed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "zed/error.hpp"

namespace zed::sweep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

/// Numbers and booleans become JSON scalars; anything else is a string.
config::Json scalar(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  try {
    auto j = config::Json::parse(text);
    if (j.is_number()) return j;
  } catch (const config::Json::parse_error&) {
  }
  return text;
}

double to_double(const std::string& text, const std::string& spec) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw ContractViolation("axis '" + spec + "': bad number '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& text, const std::string& what) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size() || text.empty())
    throw ContractViolation(what + ": bad unsigned integer '" + text + "'");
  return v;
}

/// Digits after the decimal point of a plain decimal literal; -1 when the
/// text uses an exponent.
int decimals(const std::string& text) {
  if (text.find_first_of("eE") != std::string::npos) return -1;
  const auto dot = text.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
}

config::Json::json_pointer pointer_of(const std::string& path) {
  std::string p;
  for (const auto& part : split(path, '.')) p += "/" + part;
  return config::Json::json_pointer(p);
}

}  // namespace

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
    throw ContractViolation("axis '" + spec + "': expected path=values");
  Axis axis{trim(spec.substr(0, eq)), {}};
  const std::string rhs = trim(spec.substr(eq + 1));
  if (rhs.find(':') != std::string::npos && rhs.find(',') == std::string::npos) {
    const auto parts = split(rhs, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ContractViolation("axis '" + spec + "': range is lo:hi[:step]");
    const double lo = to_double(parts[0], spec);
    const double hi = to_double(parts[1], spec);
    const double step = parts.size() == 3 ? to_double(parts[2], spec) : 1.0;
    if (!(step > 0.0) || hi < lo) throw ContractViolation("axis '" + spec + "': empty or invalid range");
    const bool integral = parts[0].find_first_of(".eE") == std::string::npos &&
                          parts[1].find_first_of(".eE") == std::string::npos &&
                          (parts.size() < 3 || parts[2].find_first_of(".eE") == std::string::npos);
    int places = std::max(decimals(parts[0]), decimals(parts[1]));
    if (parts.size() == 3) places = decimals(parts[2]) < 0 ? -1 : std::max(places, decimals(parts[2]));
    if (decimals(parts[0]) < 0 || decimals(parts[1]) < 0) places = -1;
    const double scale = places >= 0 && places <= 15 ? std::pow(10.0, places) : 0.0;
    const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      double v = lo + static_cast<double>(i) * step;
      if (scale > 0.0) v = std::round(v * scale) / scale;  // 0.1 + 2 * 0.1 prints as 0.3
      if (integral && v >= 0.0) axis.values.emplace_back(static_cast<std::uint64_t>(v));
      else if (integral) axis.values.emplace_back(static_cast<std::int64_t>(v));
      else axis.values.emplace_back(v);
    }
  } else {
    for (const auto& item : split(rhs, ',')) {
      if (item.empty()) throw ContractViolation("axis '" + spec + "': empty value");
      axis.values.push_back(scalar(item));
    }
  }
  return axis;
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  const std::string s = trim(spec);
  std::vector<std::uint64_t> out;
  if (s.find(',') != std::string::npos) {
    for (const auto& item : split(s, ',')) out.push_back(to_u64(item, "seeds"));
  } else if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 2) throw ContractViolation("seeds: range is lo:hi");
    const auto lo = to_u64(parts[0], "seeds");
    const auto hi = to_u64(parts[1], "seeds");
    if (hi < lo) throw ContractViolation("seeds: empty range");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  } else {
    const auto n = to_u64(s, "seeds");
    if (n == 0) throw ContractViolation("seeds: count must be >= 1");
    for (std::uint64_t v = 1; v <= n; ++v) out.push_back(v);
  }
  return out;
}

std::vector<Point> expand(const sim::ScenarioConfig& base, const std::vector<Axis>& axes,
                          const std::vector<std::uint64_t>& seeds) {
  std::vector<std::string> issues;
  const config::Json base_json = config::to_json(base);
  std::vector<config::Json::json_pointer> ptrs;
  for (const auto& axis : axes) {
    if (axis.values.empty()) issues.push_back(axis.path + ": axis has no values");
    if (axis.path == "seed") issues.push_back("seed: sweep seeds with the seed list, not an axis");
    try {
      auto ptr = pointer_of(axis.path);
      if (!base_json.contains(ptr) || base_json.at(ptr).is_object())
        issues.push_back(axis.path + ": no such config field");
      ptrs.push_back(std::move(ptr));
    } catch (const config::Json::exception&) {
      issues.push_back(axis.path + ": malformed path");
      ptrs.emplace_back();
    }
  }
  if (seeds.empty()) issues.push_back("seeds: at least one seed required");
  if (!issues.empty()) throw ConfigError(std::move(issues));

  std::vector<Point> points;
  std::vector<std::size_t> idx(axes.size(), 0);
  bool done = false;
  while (!done) {
    config::Json j = base_json;
    std::vector<config::Json> values;
    std::string label;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      j[ptrs[a]] = axes[a].values[idx[a]];
      values.push_back(axes[a].values[idx[a]]);
      label += (label.empty() ? "" : ", ") + axes[a].path + "=" + axes[a].values[idx[a]].dump();
    }
    for (auto seed : seeds) {
      j["seed"] = seed;
      try {
        points.push_back({values, seed, config::from_json(j)});
      } catch (const ConfigError& e) {
        for (const auto& issue : e.issues()) issues.push_back("[" + label + "] " + issue);
        break;
      }
    }
    done = true;
    for (std::size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].values.size()) {
        done = false;
        break;
      }
      idx[a] = 0;
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return points;
}

std::vector<sim::Metrics> run_points(const std::vector<sim::ScenarioConfig>& configs, unsigned jobs) {
  std::vector<sim::Metrics> out(configs.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) out[i] = sim::run(configs[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        try {
          out[i] = sim::run(configs[i]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

Table run(const sim::ScenarioConfig& base, const std::vector<Axis>& axes, const std::vector<std::uint64_t>& seeds,
          unsigned jobs) {
  const auto points = expand(base, axes, seeds);
  std::vector<sim::ScenarioConfig> configs;
  configs.reserve(points.size());
  for (const auto& p : points) configs.push_back(p.config);
  auto metrics = run_points(configs, jobs);

  Table table;
  for (const auto& a : axes) table.axes.push_back(a.path);
  table.rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    table.rows.push_back({points[i].axis_values, points[i].seed, std::move(metrics[i])});
  return table;
}

}  // namespace zed::sweep
