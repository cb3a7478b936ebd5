#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace zed::forecast {

class FitFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ColdModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// AR(p) on the d-times differenced series (d in {0, 1}). q is reserved and
/// must be 0.
class ArimaModel {
 public:
  ArimaModel(unsigned p, unsigned d, std::vector<double> phi, unsigned q = 0);

  unsigned p() const { return p_; }
  unsigned d() const { return d_; }
  unsigned q() const { return q_; }
  const std::vector<double>& phi() const { return phi_; }

  /// Appends an observation (undifferenced) to the history.
  void observe(double value);
  bool warm() const { return history_.size() >= p_ + d_ && !history_.empty(); }
  const std::deque<double>& history() const { return history_; }

 private:
  friend std::vector<double> arima_forecast(const ArimaModel&, std::size_t);
  unsigned p_;
  unsigned d_;
  unsigned q_;
  std::vector<double> phi_;
  std::deque<double> history_;
};

/// Least-squares fit of the AR coefficients. The returned model's history
/// holds the tail of `series`, so it is ready to forecast.
ArimaModel arima_fit(const std::vector<double>& series, unsigned p, unsigned d);

/// Recursive multi-step forecast. Each step is clamped at 0 and fed back as
/// if observed.
std::vector<double> arima_forecast(const ArimaModel& model, std::size_t horizon);

struct PanelSpec {
  double area = 0.0;        // m^2
  double eta_pv = 0.0;      // xi_pv
  double eta_pmu = 0.0;     // xi_pmu
  double slot = 30.0;       // T, s

  bool operator==(const PanelSpec&) const = default;
};

double irradiance_to_energy(double i0, double i1, const PanelSpec& panel);

/// Smallest N whose forecast prefix sum reaches e_task; nullopt when the
/// horizon runs out first.
std::optional<std::size_t> waiting_slots(double e_task, const std::vector<double>& forecast_energies);

struct IrradianceSample {
  double t = 0.0;      // s
  double value = 0.0;  // W/m^2
};

/// Two-column CSV (timestamp_s, irradiance_Wm2); a non-numeric first line is
/// treated as a header.
std::vector<IrradianceSample> read_irradiance_csv(std::istream& in);

struct SyntheticSky {
  double peak = 800.0;          // W/m^2 at solar noon
  double day_length = 12.0 * 3600.0;
  double sunrise = 6.0 * 3600.0;
  double cloud_phi1 = 1.8;      // AR(2) coefficients of the cloud deviation per slot
  double cloud_phi2 = -0.82;
  double cloud_sigma = 0.006;
  double cloud_mean = 0.75;

  bool operator==(const SyntheticSky&) const = default;
};

/// Clear-sky half-sine diurnal envelope times a cloud factor in [0, 1]: the
/// mean plus a stationary AR(2) deviation, so cloud cover drifts smoothly.
std::vector<double> synthetic_irradiance(std::size_t slots, double slot_s, std::uint64_t seed,
                                         const SyntheticSky& sky = {}, double t0 = 0.0);

}  // namespace zed::forecast
