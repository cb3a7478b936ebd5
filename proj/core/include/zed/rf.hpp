#pragma once

#include <cstddef>
#include <vector>

#include "zed/rng.hpp"

namespace zed::rf {

using PhaseVector = std::vector<double>;

/// One RF energy-harvesting scene: a uniform linear array at the origin and
/// an isotropic source at polar position (distance, angle from array axis).
struct RfScene {
  std::size_t antennas = 1;
  double distance = 10.0;          // m
  double angle = 0.0;              // rad
  double tx_power = 10.0;          // W
  double path_loss_exponent = 2.7;
  double ref_loss_db = 40.0;       // at 1 m
  double eh_efficiency = 0.5;
  double tuning_power = 0.0;       // W per phase shifter being tuned
  double measurement_power = 0.0;  // W per DC power measurement
  double spacing = 0.5;            // element spacing, wavelengths
  double min_distance = 1.0;       // m, near-field floor on the path-loss law

  bool operator==(const RfScene&) const = default;
};

/// Exploration timing: one codebook entry per slot, then exploitation.
struct RfSchedule {
  double slot = 1e-3;              // s per tested entry
  double exploit = 1.0;            // s of exploitation after selection
  double measurement_noise = 0.0;  // relative std of each DC power reading
  /// When false, exploration is idealized as harvesting at the selected
  /// entry; only the P_c / P_c' energy is charged.
  bool exploration_shortfall = true;

  bool operator==(const RfSchedule&) const = default;
};

/// Entry m holds phase 2 pi k m / M for antenna k.
std::vector<PhaseVector> dft_codebook(std::size_t m);
/// [0, pi, 0, pi, ...].
PhaseVector static_configuration(std::size_t m);

double per_antenna_power(const RfScene& scene);
PhaseVector array_phases(const RfScene& scene);
double rf_dc_power(const RfScene& scene, const PhaseVector& phases);
/// One rectifier per antenna: incoherent sum, the per-entry average of the
/// codebook (omnidirectional pattern).
double dc_combining_power(const RfScene& scene);

struct RfOutcome {
  std::size_t selected = 0;
  std::size_t best = 0;       // true argmax over the codebook
  double dynamic_net = 0.0;   // W, averaged over the window
  double genie = 0.0;         // W, best entry, no overhead
  double static_power = 0.0;  // W
  double dc = 0.0;            // W
  double overhead = 0.0;      // W, tuning + measurement averaged over the window
};

/// Explore all M entries, keep the one with the highest measured DC power.
/// Net = best-entry harvest - exploration shortfall - overhead, per window.
RfOutcome rf_explore_exploit(const RfScene& scene, const RfSchedule& schedule, Rng* rng = nullptr);

std::size_t argmax(const std::vector<double>& values);

/// Source placed uniformly over a disk of the given radius.
RfScene random_scene(RfScene base, double disk_radius, Rng& rng);

}  // namespace zed::rf
