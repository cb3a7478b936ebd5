// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// measurements. Exit status is non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "zed/ei.hpp"
#include "zed/energy.hpp"
#include "zed/forecast.hpp"
#include "zed/policy.hpp"
#include "zed/presets.hpp"
#include "zed/rf.hpp"
#include "zed/rng.hpp"
#include "zed/tasks.hpp"

namespace {

using namespace zed;

class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) ok_ = false;
    notes_.push_back((ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& text) { notes_.push_back("      " + text); }
  bool ok() const { return ok_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  bool ok_ = true;
  std::vector<std::string> notes_;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool within_rel(double value, double reference, double tol) {
  return std::abs(value - reference) <= tol * std::abs(reference);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- preset runs, shared by the shape criteria and the determinism check ---

struct PresetRun {
  std::vector<presets::SeriesResult> results;
  std::string csv;
  double elapsed = 0.0;
};

std::map<std::string, PresetRun>& preset_cache() {
  static std::map<std::string, PresetRun> cache;
  return cache;
}

PresetRun run_preset(const std::string& name) {
  const auto* p = presets::find(name);
  if (p == nullptr) throw std::runtime_error("missing preset " + name);
  const auto t0 = std::chrono::steady_clock::now();
  PresetRun r;
  r.results = presets::run(*p);
  r.elapsed = seconds_since(t0);
  std::ostringstream os;
  presets::write_csv(os, *p, r.results);
  r.csv = os.str();
  return r;
}

const PresetRun& cached_preset(const std::string& name) {
  auto& cache = preset_cache();
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, run_preset(name)).first;
  return it->second;
}

const presets::SeriesResult& series(const PresetRun& run, const std::string& label) {
  for (const auto& s : run.results)
    if (s.label == label) return s;
  throw std::runtime_error("missing series " + label);
}

/// Seed-averaged metric per value of the series' first axis (or one point
/// when the series has no axis), in axis order.
std::vector<std::pair<double, double>> curve(const presets::SeriesResult& s,
                                             const std::function<double(const sim::Metrics&)>& metric) {
  std::vector<std::pair<double, double>> out;
  std::vector<std::size_t> counts;
  for (const auto& row : s.table.rows) {
    const double x = row.axis_values.empty() ? 0.0 : row.axis_values.front().get<double>();
    if (out.empty() || out.back().first != x) {
      out.emplace_back(x, 0.0);
      counts.push_back(0);
    }
    out.back().second += metric(row.metrics);
    ++counts.back();
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].second /= static_cast<double>(counts[i]);
  return out;
}

std::vector<double> ys(const std::vector<std::pair<double, double>>& c) {
  std::vector<double> out;
  for (const auto& p : c) out.push_back(p.second);
  return out;
}

/// Centred moving average; the window shrinks at the ends.
std::vector<double> smooth(const std::vector<double>& v, std::size_t window) {
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(window / 2);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(v.size());
  std::vector<double> out;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    double sum = 0.0;
    for (auto j = lo; j <= hi; ++j) sum += v[static_cast<std::size_t>(j)];
    out.push_back(sum / static_cast<double>(hi - lo + 1));
  }
  return out;
}

/// Rises (weakly) to its maximum and falls (weakly) after it, allowing
/// counter-moves up to `tol`.
bool single_peak(const std::vector<double>& v, double tol, std::size_t* peak_out = nullptr) {
  const auto peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  if (peak_out != nullptr) *peak_out = peak;
  for (std::size_t i = 1; i <= peak; ++i)
    if (v[i] < v[i - 1] - tol) return false;
  for (std::size_t i = peak + 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] + tol) return false;
  return true;
}

// ---- criterion 1 -----------------------------------------------------------

Verdict actuator_fidelity() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    const char* name;
    double published;
  };
  for (const Row& r : {Row{"mems", 0.25e-6}, Row{"led", 0.4e-3}, Row{"piezo", 0.9e-3}, Row{"solenoid", 3.1e-3},
                       Row{"eink", 30e-3}, Row{"sma", 80e-3}}) {
    const double e = tasks::actuator_energy(tasks::actuator_preset(r.name)).energy;
    v.expect(within_rel(e, r.published, 0.05),
             std::string(r.name) + fmt(" E = %.6g J vs published %.6g J", e, r.published));
  }
  const auto sma = std::get<tasks::SmaActuator>(tasks::actuator_preset("sma"));
  const double t_heat = tasks::sma_heating_time(sma);
  v.expect(within_rel(t_heat, 0.2, 0.05), fmt("sma t_heat = %.4g s vs published 0.2 s", t_heat));
  const auto servo = tasks::servo_breakdown(std::get<tasks::ServoActuator>(tasks::actuator_preset("servo")));
  v.expect(within_rel(servo.e_move, 0.2625, 0.05), fmt("servo E_move = %.5g J vs 0.2625 J", servo.e_move));
  v.expect(within_rel(servo.e_hold, 0.75, 0.05), fmt("servo E_hold = %.5g J vs 0.75 J", servo.e_hold));
  v.expect(within_rel(servo.e_move + servo.e_hold, 1.0, 0.05),
           fmt("servo total = %.5g J vs published ~1 J", servo.e_move + servo.e_hold));
  const double elapsed = seconds_since(t0);
  v.expect(elapsed < 1.0, fmt("runtime %.3f s < 1 s", elapsed));
  return v;
}

// ---- criterion 2 -----------------------------------------------------------

Verdict task_deferring_shape() {
  Verdict v;
  const auto& run = cached_preset("task-deferring");
  const auto rate = [](const sim::Metrics& m) { return m.task_completion_rate.value_or(0.0); };
  const std::size_t seeds = presets::find("task-deferring")->seeds.size();
  v.expect(seeds >= 20, "seeds per point = " + std::to_string(seeds) + " >= 20");

  constexpr double kPeakTol = 1e-3;
  for (const auto& s : run.results) {
    const auto sm = smooth(ys(curve(s, rate)), 3);
    std::size_t peak = 0;
    const bool ok = single_peak(sm, kPeakTol, &peak);
    v.expect(ok, s.label + fmt(": single peak (window 3, tol %.0e) at x=%g, max %.4f", kPeakTol,
                               curve(s, rate)[peak].first, sm[peak]));
  }
  // Curves with a cost to acquire EI, or none at all, peak inside the axis.
  // The seed-averaged curve is used as is: a truncated smoothing window at
  // the first point would pull an F=2 peak back towards F=1.
  for (const char* label : {"aware_Ec1_B1_EM5", "aware_Ec2_B1_EM5", "blind_B1_EM5", "blind_B5_EM5"}) {
    const auto c = curve(series(run, label), rate);
    const auto y = ys(c);
    const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const bool interior = peak > 0 && peak + 1 < y.size();
    v.expect(interior, std::string(label) +
                           fmt(": interior peak at x=%g, %.4f", c[peak].first, y[peak]) +
                           (interior ? fmt(" > first %.4f and last %.4f", y.front(), y.back()) : std::string()));
  }

  const auto e0 = ys(curve(series(run, "aware_Ec0_B1_EM5"), rate));
  const auto e1 = ys(curve(series(run, "aware_Ec1_B1_EM5"), rate));
  const auto e2 = ys(curve(series(run, "aware_Ec2_B1_EM5"), rate));
  for (std::size_t q = 0; q < 3; ++q)
    v.expect(e0[q] > e1[q] && e1[q] > e2[q],
             "Q=" + std::to_string(q + 1) + fmt(": E_c 0/1/2 -> %.4f > %.4f > %.4f", e0[q], e1[q], e2[q]));

  const auto a1 = ys(curve(series(run, "aware_Ec1_B1_EM5"), rate));
  const auto a5 = ys(curve(series(run, "aware_Ec1_B5_EM5"), rate));
  bool never_worse = true;
  for (std::size_t i = 0; i < a1.size(); ++i) never_worse = never_worse && a5[i] >= a1[i] - 1e-3;
  const double best1 = *std::max_element(a1.begin(), a1.end());
  const double best5 = *std::max_element(a5.begin(), a5.end());
  v.expect(best5 > best1 && never_worse, fmt("aware B=5 vs B=1: best %.4f > %.4f, never below by > 1e-3", best5, best1));

  const auto b1 = curve(series(run, "blind_B1_EM5"), rate);
  const auto b5 = curve(series(run, "blind_B5_EM5"), rate);
  double worst = 0.0;
  for (std::size_t i = 0; i < b1.size(); ++i)
    if (b1[i].first >= 25.0) worst = std::max(worst, (b5[i].second - b1[i].second) / b1[i].second);
  v.expect(worst <= 0.005, fmt("blind F >= 25: B=5 improves on B=1 by at most %.2f%% (limit 0.5%%)", 100.0 * worst));
  v.note(fmt("blind F=1: B=1 %.4f, B=5 %.4f", b1[0].second, b5[0].second));

  v.expect(run.elapsed < 300.0, fmt("preset runtime %.1f s < 300 s", run.elapsed));
  return v;
}

// ---- criterion 3 -----------------------------------------------------------

Verdict aoi_mac() {
  Verdict v;
  const auto& run = cached_preset("aoi-mac");
  const auto aoi = [](const sim::Metrics& m) { return m.avg_aoi.value_or(0.0); };
  const auto* preset = presets::find("aoi-mac");
  const auto& base = preset->series.front().base;
  v.expect(base.n_devices == 64 && base.abstract.capacity == 10.0 && base.abstract.energy.rate == 0.1 &&
               preset->seeds.size() >= 20 && base.slots >= 100000,
           "N=64, E_M=10, p'=0.1, " + std::to_string(preset->seeds.size()) + " seeds x " +
               std::to_string(base.slots) + " slots");

  const double full1 = curve(series(run, "full_p1overN"), aoi).front().second;
  const auto part1 = curve(series(run, "partial_p1overN"), aoi);
  const double at_em = part1.back().second;
  v.expect(part1.back().first == 10.0 && within_rel(at_em, full1, 0.05),
           fmt("p=1/N: partial at delta=E_M %.2f vs fully-aware %.2f (within 5%%)", at_em, full1));

  const double full5 = curve(series(run, "full_p5overN"), aoi).front().second;
  const auto part5 = curve(series(run, "partial_p5overN"), aoi);
  const auto best5 = *std::min_element(part5.begin(), part5.end(),
                                       [](const auto& a, const auto& b) { return a.second < b.second; });
  v.expect(best5.second < full5,
           fmt("p=5/N: partial at delta*=%g %.2f < fully-aware %.2f", best5.first, best5.second, full5));

  for (const auto& [label, full, part] : {std::tuple{"blind_p1overN", full1, part1},
                                          std::tuple{"blind_p5overN", full5, part5}}) {
    const auto blind = curve(series(run, label), aoi);
    const double part_best = std::min_element(part.begin(), part.end(), [](const auto& a, const auto& b) {
                               return a.second < b.second;
                             })->second;
    const double blind_best = std::min_element(blind.begin(), blind.end(), [](const auto& a, const auto& b) {
                                return a.second < b.second;
                              })->second;
    v.expect(blind_best > full && blind_best > part_best,
             std::string(label) + fmt(": min over E_t %.2f > fully-aware %.2f and best partial %.2f", blind_best,
                                      full, part_best));
  }
  v.expect(run.elapsed < 600.0, fmt("preset runtime %.1f s < 600 s", run.elapsed));
  return v;
}

// ---- criterion 4 -----------------------------------------------------------

Verdict rf_ordering() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  rf::RfScene base{4, 10.0, 0.0, 10.0, 2.7, 40.0, 0.5, 0.0, 0.0, 0.5, 1.0};
  constexpr std::size_t kScenes = 1000;
  constexpr double kTol = 1e-9;

  std::size_t dominance_fail = 0, argmax_fail = 0, checked = 0;
  for (std::size_t m : {1, 2, 4, 6, 8, 12, 16}) {
    Rng rng = rng_stream(2024, m, "acceptance-rf");
    rf::RfSchedule ideal;
    ideal.exploration_shortfall = false;
    const auto codebook = rf::dft_codebook(m);
    for (std::size_t s = 0; s < kScenes; ++s) {
      base.antennas = m;
      const auto scene = rf::random_scene(base, 100.0, rng);
      const auto o = rf::rf_explore_exploit(scene, ideal);
      const double scale = std::max(o.genie, 1e-300);
      if (!(o.genie >= o.dynamic_net - kTol * scale && o.dynamic_net >= o.static_power - kTol * scale &&
            o.dynamic_net >= o.dc - kTol * scale))
        ++dominance_fail;
      std::vector<double> powers;
      for (const auto& phases : codebook) powers.push_back(rf::rf_dc_power(scene, phases));
      if (o.selected != rf::argmax(powers)) ++argmax_fail;
      ++checked;
    }
  }
  v.expect(dominance_fail == 0, "zero overhead: genie >= dynamic >= {static, dc} in " +
                                    std::to_string(checked - dominance_fail) + "/" + std::to_string(checked) +
                                    " scenes (M in 1,2,4,6,8,12,16)");
  v.expect(argmax_fail == 0, "noise-free selection equals brute-force argmax in " +
                                 std::to_string(checked - argmax_fail) + "/" + std::to_string(checked) + " scenes");

  // Overhead sweep at M = 8 over one fixed set of scenes.
  base.antennas = 8;
  Rng rng = rng_stream(2024, 0, "acceptance-rf-overhead");
  std::vector<rf::RfScene> scenes;
  for (std::size_t s = 0; s < kScenes; ++s) scenes.push_back(rf::random_scene(base, 100.0, rng));
  std::vector<double> levels{0.0};
  for (int i = 0; i <= 40; ++i) levels.push_back(1e-9 * std::pow(10.0, i / 8.0));
  std::vector<double> dynamic;
  double stat = 0.0, dc = 0.0;
  for (double p : levels) {
    double sum = 0.0;
    stat = dc = 0.0;
    for (auto scene : scenes) {
      scene.tuning_power = p;
      scene.measurement_power = p;
      const auto o = rf::rf_explore_exploit(scene, rf::RfSchedule{});
      sum += o.dynamic_net;
      stat += o.static_power;
      dc += o.dc;
    }
    dynamic.push_back(sum / kScenes);
  }
  stat /= kScenes;
  dc /= kScenes;
  bool monotone = true;
  for (std::size_t i = 1; i < dynamic.size(); ++i) monotone = monotone && dynamic[i] <= dynamic[i - 1];
  const auto first_below = [&](double level) {
    for (std::size_t i = 0; i < dynamic.size(); ++i)
      if (dynamic[i] < level) return i;
    return dynamic.size();
  };
  const std::size_t cross_static = first_below(stat);
  const std::size_t cross_dc = first_below(dc);
  v.expect(monotone, "M=8: dynamic net power non-increasing over 42 overhead levels");
  v.expect(dynamic.front() > stat && cross_static < dynamic.size() && cross_dc < dynamic.size() &&
               cross_static <= cross_dc,
           fmt("M=8: dynamic crosses below static at P_c=P_c'=%.3g W, below dc at %.3g W", levels[std::min(cross_static, levels.size() - 1)],
               levels[std::min(cross_dc, levels.size() - 1)]));
  v.note(fmt("M=8 averages: static %.4g W, dc %.4g W, dynamic at zero overhead %.4g W", stat, dc, dynamic.front()));

  const double elapsed = seconds_since(t0);
  v.expect(elapsed < 120.0, fmt("runtime %.2f s < 120 s", elapsed));
  return v;
}

// ---- criterion 5 -----------------------------------------------------------

Verdict tinyml_switching() {
  Verdict v;
  const auto& run = cached_preset("tinyml-select");
  const auto& s = run.results.front();
  const auto ltml = ys(curve(s, [](const sim::Metrics& m) { return *m.extra("fraction_LTML"); }));
  const auto stml = ys(curve(s, [](const sim::Metrics& m) { return *m.extra("fraction_STML"); }));
  const auto defer = ys(curve(s, [](const sim::Metrics& m) { return *m.extra("defer_fraction"); }));

  v.expect(defer.front() > 0.5, fmt("lowest current: defer fraction %.3f > 0.5", defer.front()));
  bool stml_band = false;
  for (std::size_t i = 0; i < stml.size(); ++i) stml_band = stml_band || (stml[i] > ltml[i] && stml[i] > defer[i]);
  v.expect(stml_band, "an intermediate current band where STML dominates");
  v.expect(ltml.back() > 0.9, fmt("highest current: LTML fraction %.3f > 0.9", ltml.back()));
  bool monotone = true;
  for (std::size_t i = 1; i < ltml.size(); ++i)
    monotone = monotone && ltml[i] >= ltml[i - 1] - 1e-12 && defer[i] <= defer[i - 1] + 1e-12;
  v.expect(monotone, "LTML fraction non-decreasing and defer fraction non-increasing in current");

  // Decision frontier over (V, I): the chosen accuracy never drops when V or I grows.
  const auto& cfg = presets::find("tinyml-select")->series.front().base.tinyml;
  std::vector<policy::InferenceModel> models;
  for (const auto& m : cfg.models)
    models.push_back(policy::inference_model(m.id, m.accuracy_rank, m.energy, m.duration, cfg.v_nominal));
  const policy::TinyMlSelect select(models, cfg.v_min, cfg.capacitance);
  const auto rank = [&](double volts, double amps) {
    const auto c = select.choose(volts, amps);
    return c ? select.models()[*c].accuracy_rank : -1;
  };
  bool frontier = true;
  std::vector<bool> seen(3, false);
  for (int iv = 0; iv <= 300; ++iv) {
    const double volts = 1.9 + 0.001 * iv;
    for (int ii = 0; ii <= 250; ++ii) {
      const double amps = 1e-5 * ii;
      const int r = rank(volts, amps);
      seen[static_cast<std::size_t>(r + 1)] = true;
      if (iv > 0 && r < rank(volts - 0.001, amps)) frontier = false;
      if (ii > 0 && r < rank(volts, amps - 1e-5)) frontier = false;
    }
  }
  v.expect(frontier && seen[0] && seen[1] && seen[2],
           "policy frontier monotone in V and I over 301 x 251 grid; defer, STML and LTML regions all present");
  v.expect(run.elapsed < 60.0, fmt("preset runtime %.2f s < 60 s", run.elapsed));
  return v;
}

// ---- criterion 6 -----------------------------------------------------------

Verdict solar_pipeline() {
  Verdict v;
  const forecast::PanelSpec panel{0.081 * 0.137, 0.17, 0.85, 30.0};
  const std::size_t per_day = 2880;
  std::size_t wins = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto irr = forecast::synthetic_irradiance(3 * per_day, 30.0, seed);
    const std::vector<double> train(irr.begin(), irr.begin() + 2 * per_day);
    auto model = forecast::arima_fit(train, 5, 1);
    double se_arima = 0.0, se_last = 0.0;
    for (std::size_t n = 2 * per_day; n < irr.size(); ++n) {
      const double f = forecast::arima_forecast(model, 1).front();
      const double last = model.history().back();
      se_arima += (f - irr[n]) * (f - irr[n]);
      se_last += (last - irr[n]) * (last - irr[n]);
      model.observe(irr[n]);
    }
    if (se_arima < se_last) ++wins;
  }
  v.expect(wins >= 95, "ARIMA(5,1,0) one-step MSE below last-value on " + std::to_string(wins) + "/100 seeds");

  const double e = forecast::irradiance_to_energy(500.0, 500.0, panel);
  const double hand = 0.5 * (500.0 + 500.0) * 30.0 * (0.081 * 0.137) * 0.17 * 0.85;
  v.expect(within_rel(e, hand, 1e-9) && within_rel(e, 24.05, 1e-3),
           fmt("irradiance_to_energy(500, 500) = %.6f J, hand %.6f J", e, hand));

  Rng rng(77);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t horizon = 1 + rng.below(40);
    std::vector<double> f(horizon);
    for (auto& x : f) x = rng.bernoulli(0.2) ? 0.0 : rng.uniform() * 3.0;
    const double task = rng.bernoulli(0.05) ? 0.0 : rng.uniform() * 40.0;
    std::optional<std::size_t> brute;
    for (std::size_t n = 0; n <= horizon && !brute; ++n) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += f[i];
      if (sum >= task) brute = n;
    }
    if (forecast::waiting_slots(task, f) != brute) ++mismatches;
  }
  v.expect(mismatches == 0, "waiting_slots equals prefix-sum brute force on " +
                                std::to_string(10000 - mismatches) + "/10000 random instances");
  return v;
}

// ---- criterion 7 -----------------------------------------------------------

Verdict core_invariants() {
  Verdict v;
  Rng rng(4242);

  double worst = 0.0;
  bool bounded = true;
  for (int seq = 0; seq < 10000; ++seq) {
    const double cap = 1.0 + rng.uniform() * 99.0;
    energy::Leakage leak;
    switch (rng.below(3)) {
      case 0: leak = energy::Leakage::none(); break;
      case 1: leak = energy::Leakage::fraction_per_hour(rng.uniform() * 0.5); break;
      default: leak = energy::Leakage::constant_power(rng.uniform() * 1e-3); break;
    }
    const auto spec = energy::StorageSpec::ideal(cap, 0.5 + 0.5 * rng.uniform(), 0.5 + 0.5 * rng.uniform(), leak);
    const auto start = energy::EnergyState::with_energy(rng.uniform() * cap);
    auto state = start;
    const std::size_t steps = 1 + rng.below(100);
    for (std::size_t k = 0; k < steps; ++k) {
      const double h = rng.bernoulli(0.3) ? 0.0 : rng.uniform() * cap * 0.3;
      const double l = rng.bernoulli(0.3) ? 0.0 : rng.uniform() * cap * 0.3;
      const double dt = 1.0 + rng.uniform() * 3600.0;
      const auto r = energy::step_energy(state, spec, h, l, dt, l * 0.1 * rng.uniform());
      state = r.state;
      bounded = bounded && state.stored >= 0.0 && state.stored <= cap;
    }
    const auto& g = state.ledger;
    const double scale = std::max({1.0, start.stored, g.harvested, g.delivered, g.leaked, g.spilled});
    worst = std::max(worst, std::abs(energy::conservation_residual(start, state, spec)) / scale);
  }
  v.expect(worst <= 1e-9 && bounded,
           fmt("ledger identity over 10^4 random sequences: worst relative residual %.2e <= 1e-9; 0 <= E <= E_M", worst));

  {
    const double c = 0.5, r_load = 100.0, v0 = 4.0, t = 60.0, amps = 10e-3;
    const auto spec = energy::StorageSpec::capacitor(c, 5.0);
    const auto start = energy::EnergyState::at_voltage(spec, v0);
    const auto off = energy::integrate_circuit(start, energy::ConstantCurrent{0.0}, energy::ConstantResistance{r_load},
                                               spec, t, 1000);
    const double exact_off = v0 * std::exp(-t / (r_load * c));
    const auto on = energy::integrate_circuit(start, energy::ConstantCurrent{amps}, energy::ConstantResistance{r_load},
                                              spec, t, 1000);
    const double exact_on = energy::rc_transition(v0, amps, r_load, c, t);
    const double e1 = std::abs(off.state.voltage(spec) - exact_off) / exact_off;
    const double e2 = std::abs(on.state.voltage(spec) - exact_on) / exact_on;
    v.expect(e1 <= 1e-3 && e2 <= 1e-3,
             fmt("capacitor at 1000 substeps: discharge error %.2e, CI+CR error %.2e (limit 1e-3)", e1, e2));
  }

  {
    ei::SamplerSpec s;
    s.bits = 10;
    s.v_ref = 3.0;
    s.offset = 0.01;
    s.offset_temp_coeff = 1e-4;
    s.offset_drift = 1e-6;
    const double half_lsb = ei::quantization_lsb(s.v_ref, s.bits) / 2.0;
    std::size_t violations = 0;
    for (int i = 0; i < 1000000; ++i) {
      const double t = rng.uniform() * 100.0;
      const double temp = 290.0 + rng.uniform() * 20.0;
      const double x = rng.uniform() * 2.9;
      const auto r = ei::sample_read(x, s, t, temp, rng);
      const double ideal = x + ei::offset_at(s, t, temp);
      if (!r.saturated && std::abs(r.value - ideal) > half_lsb * (1.0 + 1e-12)) ++violations;
    }
    v.expect(violations == 0, "quantization bound V_r/2^(N+1) held on 10^6 sampler draws (" +
                                  std::to_string(violations) + " violations)");
  }

  {
    const double quantum = 1e-3;
    double sum = 0.0, sum2 = 0.0;
    constexpr int kTrials = 100000;
    for (int i = 0; i < kTrials; ++i) {
      ei::CoulombCounter counter({quantum, 0.0, 0.0, ei::CounterPlacement::pre_storage, 0.0});
      const double flow = rng.uniform() * 100.0 * quantum;
      counter.step(flow, 0.0, 1.0);
      const double err = flow - counter.estimate();
      sum += err;
      sum2 += err * err;
    }
    const double mean = sum / kTrials;
    const double var = sum2 / kTrials - mean * mean;
    v.expect(within_rel(mean, quantum / 2.0, 0.02) && within_rel(var, quantum * quantum / 12.0, 0.05),
             fmt("coulomb error mean %.4g (dE/2 = %.4g, 2%%), variance %.4g", mean, quantum / 2.0, var) +
                 fmt(" (dE^2/12 = %.4g, 5%%)", quantum * quantum / 12.0));
  }

  for (const auto& name : presets::names()) {
    const auto& first = cached_preset(name);
    const auto second = run_preset(name);
    v.expect(first.csv == second.csv, "preset " + name + ": two runs byte-identical (" +
                                          std::to_string(first.csv.size()) + " bytes)");
  }
  return v;
}

// ---- criterion 8 -----------------------------------------------------------

Verdict gate_properties() {
  Verdict v;
  Rng rng(99);
  bool alternating = true;
  std::size_t transitions = 0;
  for (int trace = 0; trace < 1000; ++trace) {
    policy::DualThresholdGate gate(4.0, 3.6);
    std::optional<policy::GateTransition> last;
    double volts = 3.0 + rng.uniform() * 1.5;
    for (int k = 0; k < 2000; ++k) {
      switch (rng.below(4)) {
        case 0: volts = rng.bernoulli(0.5) ? 4.0 : 3.6; break;  // sit exactly on a threshold
        case 1: volts = 3.6 + rng.uniform() * 0.4; break;       // inside the band
        case 2: volts += rng.normal(0.0, 0.05); break;
        default: volts = rng.bernoulli(0.5) ? 3.5999999 : 4.0000001; break;
      }
      const bool was_on = gate.is_on();
      const auto t = gate.update(volts);
      if (t) {
        ++transitions;
        if (last && *last == *t) alternating = false;
        if ((*t == policy::GateTransition::power_on) == was_on) alternating = false;
        last = t;
      }
      if (gate.is_on() && volts < 3.6) alternating = false;
      if (!gate.is_on() && volts >= 4.0) alternating = false;
    }
  }
  v.expect(alternating, "hysteresis: no consecutive identical transitions over 1000 adversarial traces (" +
                            std::to_string(transitions) + " transitions)");

  const auto& run = cached_preset("nbiot-gate");
  bool all_monotone = true;
  std::string non_monotone_restarts;
  for (const auto& s : run.results) {
    const auto thr = ys(curve(s, [](const sim::Metrics& m) { return m.throughput.value_or(0.0); }));
    const auto rst = ys(curve(s, [](const sim::Metrics& m) { return static_cast<double>(m.restart_count.value_or(0)); }));
    for (std::size_t i = 1; i < thr.size(); ++i) all_monotone = all_monotone && thr[i] >= thr[i - 1];
    const auto peak = static_cast<std::size_t>(std::max_element(rst.begin(), rst.end()) - rst.begin());
    if (peak > 0 && rst[peak] > rst.front() && rst[peak] > rst.back()) {
      if (!non_monotone_restarts.empty()) non_monotone_restarts += ", ";
      non_monotone_restarts += s.label + fmt(" (%g -> %g -> %g)", rst.front(), rst[peak], rst.back());
    }
  }
  v.expect(all_monotone, "throughput non-decreasing in harvest power for every (C, TI)");
  v.expect(!non_monotone_restarts.empty(),
           "restart count rises then falls with harvest power: " + (non_monotone_restarts.empty() ? "none" : non_monotone_restarts));
  v.expect(run.elapsed < 120.0, fmt("preset runtime %.1f s < 120 s", run.elapsed));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    Verdict (*check)();
  };
  const Criterion criteria[] = {
      {1, "actuator formula fidelity", actuator_fidelity},
      {2, "task-deferring shape", task_deferring_shape},
      {3, "aoi-mac reproduction", aoi_mac},
      {4, "rf-combining ordering", rf_ordering},
      {5, "tinyml model switching", tinyml_switching},
      {6, "solar forecasting pipeline", solar_pipeline},
      {7, "core invariants and determinism", core_invariants},
      {8, "nbiot gate properties", gate_properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %d: %s (%.1f s)\n", v.ok() ? "PASS" : "FAIL", c.id, c.title, seconds_since(t0));
    for (const auto& n : v.notes()) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!v.ok()) ++failed;
  }
  std::printf("%d/8 criteria passed\n", 8 - failed);
  return failed == 0 ? 0 : 1;
}
