#include "zed/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>

#include "zed/error.hpp"
#include "zed/rng.hpp"

namespace zed::forecast {

namespace {

std::vector<double> difference(const std::vector<double>& x, unsigned d) {
  if (d == 0) return x;
  std::vector<double> w;
  w.reserve(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) w.push_back(x[i] - x[i - 1]);
  return w;
}

/// Solves (A) x = b for symmetric positive definite A stored row-major.
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a[i * n + i]);
  const double tol = 1e-10 * max_diag;
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > tol)) throw FitFailed("arima_fit: rank-deficient regression");
    const double ljj = std::sqrt(diag);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
    b[i] = s / a[i * n + i];
  }
  return b;
}

}  // namespace

ArimaModel::ArimaModel(unsigned p, unsigned d, std::vector<double> phi, unsigned q)
    : p_(p), d_(d), q_(q), phi_(std::move(phi)) {
  require(d_ <= 1, "arima: differencing order must be 0 or 1");
  require(q_ == 0, "arima: moving-average terms are not supported");
  require(phi_.size() == p_, "arima: coefficient count must equal p");
}

void ArimaModel::observe(double value) {
  history_.push_back(value);
  const std::size_t keep = std::max<std::size_t>(p_ + d_, 1);
  while (history_.size() > keep) history_.pop_front();
}

ArimaModel arima_fit(const std::vector<double>& series, unsigned p, unsigned d) {
  if (d > 1) throw FitFailed("arima_fit: differencing order must be 0 or 1");
  if (series.size() < static_cast<std::size_t>(2 * p + d) || series.size() <= d)
    throw FitFailed("arima_fit: series too short");

  const std::vector<double> w = difference(series, d);
  std::vector<double> phi(p, 0.0);
  if (p > 0) {
    const bool all_zero = std::all_of(w.begin(), w.end(), [](double v) { return v == 0.0; });
    if (!all_zero) {
      std::vector<double> ata(static_cast<std::size_t>(p) * p, 0.0);
      std::vector<double> atb(p, 0.0);
      for (std::size_t t = p; t < w.size(); ++t) {
        for (unsigned i = 0; i < p; ++i) {
          const double xi = w[t - 1 - i];
          atb[i] += xi * w[t];
          for (unsigned j = 0; j < p; ++j) ata[i * p + j] += xi * w[t - 1 - j];
        }
      }
      phi = cholesky_solve(std::move(ata), std::move(atb), p);
    }
  }
  ArimaModel m(p, d, std::move(phi));
  const std::size_t keep = std::max<std::size_t>(p + d, 1);
  for (std::size_t i = series.size() - std::min(keep, series.size()); i < series.size(); ++i)
    m.observe(series[i]);
  return m;
}

std::vector<double> arima_forecast(const ArimaModel& model, std::size_t horizon) {
  if (!model.warm()) throw ColdModel("arima_forecast: history shorter than p + d");
  std::vector<double> x(model.history_.begin(), model.history_.end());
  std::vector<double> out;
  out.reserve(horizon);
  const unsigned p = model.p_;
  for (std::size_t h = 0; h < horizon; ++h) {
    const std::size_t n = x.size();
    double next_w = 0.0;
    for (unsigned i = 0; i < p; ++i) {
      const double wi = model.d_ == 1 ? x[n - 1 - i] - x[n - 2 - i] : x[n - 1 - i];
      next_w += model.phi_[i] * wi;
    }
    const double next = std::max(0.0, model.d_ == 1 ? x.back() + next_w : next_w);
    out.push_back(next);
    x.push_back(next);
  }
  return out;
}

double irradiance_to_energy(double i0, double i1, const PanelSpec& panel) {
  require(i0 >= 0.0 && i1 >= 0.0, "irradiance_to_energy: irradiance must be non-negative");
  return 0.5 * (i0 + i1) * panel.slot * panel.area * panel.eta_pv * panel.eta_pmu;
}

std::optional<std::size_t> waiting_slots(double e_task, const std::vector<double>& forecast_energies) {
  require(e_task >= 0.0, "waiting_slots: task energy must be non-negative");
  if (e_task == 0.0) return 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < forecast_energies.size(); ++i) {
    acc += forecast_energies[i];
    if (acc >= e_task) return i + 1;
  }
  return std::nullopt;
}

std::vector<IrradianceSample> read_irradiance_csv(std::istream& in) {
  std::vector<IrradianceSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    IrradianceSample s;
    if (!(row >> s.t >> s.value)) {
      if (line_no == 1) continue;
      throw ContractViolation("irradiance csv: malformed line " + std::to_string(line_no));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<double> synthetic_irradiance(std::size_t slots, double slot_s, std::uint64_t seed,
                                         const SyntheticSky& sky, double t0) {
  Rng rng = rng_stream(seed, 0, "sky");
  std::vector<double> out;
  out.reserve(slots);
  double dev1 = 0.0, dev2 = 0.0;
  constexpr double kDay = 24.0 * 3600.0;
  for (std::size_t i = 0; i < slots; ++i) {
    const double tod = std::fmod(t0 + static_cast<double>(i) * slot_s, kDay);
    const double x = (tod - sky.sunrise) / sky.day_length;
    const double envelope = (x > 0.0 && x < 1.0) ? sky.peak * std::sin(std::numbers::pi * x) : 0.0;
    const double dev = sky.cloud_phi1 * dev1 + sky.cloud_phi2 * dev2 + rng.normal(0.0, sky.cloud_sigma);
    dev2 = dev1;
    dev1 = dev;
    out.push_back(envelope * std::clamp(sky.cloud_mean + dev, 0.0, 1.0));
  }
  return out;
}

}  // namespace zed::forecast
