#include "zed/rf.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "zed/error.hpp"

namespace zed::rf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_scene(const RfScene& s) {
  require(s.antennas >= 1, "rf scene: M must be >= 1");
  require(s.tx_power > 0.0, "rf scene: tx_power must be positive");
  require(s.eh_efficiency >= 0.0 && s.eh_efficiency <= 1.0, "rf scene: eh_efficiency must be in [0, 1]");
  require(s.tuning_power >= 0.0 && s.measurement_power >= 0.0, "rf scene: overhead powers must be >= 0");
  require(s.distance > 0.0, "rf scene: distance must be positive");
}

}  // namespace

std::vector<PhaseVector> dft_codebook(std::size_t m) {
  require(m >= 1, "dft_codebook: M must be >= 1");
  std::vector<PhaseVector> book(m, PhaseVector(m));
  for (std::size_t e = 0; e < m; ++e)
    for (std::size_t k = 0; k < m; ++k)
      book[e][k] = kTwoPi * static_cast<double>((k * e) % m) / static_cast<double>(m);
  return book;
}

PhaseVector static_configuration(std::size_t m) {
  require(m >= 1, "static_configuration: M must be >= 1");
  PhaseVector p(m);
  for (std::size_t k = 0; k < m; ++k) p[k] = (k % 2 == 0) ? 0.0 : std::numbers::pi;
  return p;
}

double per_antenna_power(const RfScene& scene) {
  check_scene(scene);
  const double d = std::max(scene.distance, scene.min_distance);
  const double tx_dbm = 10.0 * std::log10(scene.tx_power * 1e3);
  const double rx_dbm = tx_dbm - scene.ref_loss_db - 10.0 * scene.path_loss_exponent * std::log10(d);
  return std::pow(10.0, rx_dbm / 10.0) * 1e-3;
}

PhaseVector array_phases(const RfScene& scene) {
  PhaseVector phi(scene.antennas);
  const double step = kTwoPi * scene.spacing * std::cos(scene.angle);
  for (std::size_t k = 0; k < scene.antennas; ++k) phi[k] = step * static_cast<double>(k);
  return phi;
}

double rf_dc_power(const RfScene& scene, const PhaseVector& phases) {
  require(phases.size() == scene.antennas, "rf_dc_power: phase vector length must equal M");
  const PhaseVector phi = array_phases(scene);
  std::complex<double> sum{0.0, 0.0};
  for (std::size_t k = 0; k < scene.antennas; ++k) sum += std::polar(1.0, phi[k] + phases[k]);
  return scene.eh_efficiency * per_antenna_power(scene) * std::norm(sum) /
         static_cast<double>(scene.antennas);
}

double dc_combining_power(const RfScene& scene) {
  return scene.eh_efficiency * per_antenna_power(scene);
}

std::size_t argmax(const std::vector<double>& values) {
  require(!values.empty(), "argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

RfOutcome rf_explore_exploit(const RfScene& scene, const RfSchedule& schedule, Rng* rng) {
  check_scene(scene);
  require(schedule.slot >= 0.0 && schedule.exploit >= 0.0, "rf schedule: durations must be >= 0");
  require(schedule.measurement_noise >= 0.0, "rf schedule: measurement noise must be >= 0");
  require(schedule.measurement_noise == 0.0 || rng != nullptr, "rf schedule: noisy measurements need an rng");

  const std::size_t m = scene.antennas;
  const auto book = dft_codebook(m);
  std::vector<double> power(m);
  std::vector<double> measured(m);
  for (std::size_t e = 0; e < m; ++e) {
    power[e] = rf_dc_power(scene, book[e]);
    measured[e] = power[e];
    if (schedule.measurement_noise > 0.0) measured[e] *= 1.0 + rng->normal(0.0, schedule.measurement_noise);
  }

  RfOutcome out;
  out.best = argmax(power);
  out.selected = argmax(measured);
  out.genie = power[out.best];
  out.static_power = rf_dc_power(scene, static_configuration(m));
  out.dc = dc_combining_power(scene);

  const double md = static_cast<double>(m);
  const double explore = md * schedule.slot;
  const double window = explore + schedule.exploit;
  const double per_test = (md - 1.0) * scene.tuning_power + scene.measurement_power;
  const double selected = power[out.selected];
  if (window <= 0.0) {
    out.dynamic_net = selected;
    return out;
  }
  double shortfall = 0.0;
  if (schedule.exploration_shortfall)
    for (double p : power) shortfall += (selected - p) * schedule.slot;
  out.overhead = md * per_test * schedule.slot / window;
  out.dynamic_net = selected - shortfall / window - out.overhead;
  return out;
}

RfScene random_scene(RfScene base, double disk_radius, Rng& rng) {
  require(disk_radius > 0.0, "random_scene: disk radius must be positive");
  // Uniform over area; reject the near-field core below min_distance.
  double r = 0.0;
  do {
    r = disk_radius * std::sqrt(rng.uniform());
  } while (r < base.min_distance);
  base.distance = r;
  base.angle = kTwoPi * rng.uniform();
  return base;
}

}  // namespace zed::rf
