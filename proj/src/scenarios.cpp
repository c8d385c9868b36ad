#include "idec/scenarios.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "idec/error.hpp"
#include "idec/propagator.hpp"

namespace idec::scenarios {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InvalidInput(std::string(name) + " must be positive and finite");
  }
}

std::vector<std::complex<double>> factor_series(double omega, const KernelParams& kernel,
                                                const std::vector<double>& times,
                                                bool milburn) {
  check_times(times);
  std::vector<std::complex<double>> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back(milburn ? milburn_factor(omega, kernel, t)
                          : propagator_factor(omega, kernel, t));
  }
  return out;
}

double gaussian_packet(double x, double center, double sigma_x) {
  const double y = x - center;
  return std::pow(2.0 * std::numbers::pi * sigma_x * sigma_x, -0.25) *
         std::exp(-y * y / (4.0 * sigma_x * sigma_x));
}

}  // namespace

// --- oscillator --------------------------------------------------------------

void validate(const OscillatorParams& p) {
  require_positive(p.omega, "oscillator omega");
  if (!std::isfinite(p.a0.real()) || !std::isfinite(p.a0.imag())) {
    throw InvalidInput("oscillator a0 must be finite");
  }
}

Trajectory oscillator_amplitude(const OscillatorParams& p, const std::vector<double>& times) {
  validate(p);
  Trajectory out{times, factor_series(p.omega, p.kernel, times, false),
                 EvolutionMethod::of(Method::closed_form)};
  for (auto& v : out.values) v *= p.a0;
  return out;
}

Trajectory oscillator_amplitude_milburn(const OscillatorParams& p,
                                        const std::vector<double>& times) {
  validate(p);
  Trajectory out{times, factor_series(p.omega, p.kernel, times, true),
                 EvolutionMethod::of(Method::milburn)};
  for (auto& v : out.values) v *= p.a0;
  return out;
}

// --- cat state ---------------------------------------------------------------

bool CatParams::uncertainty_advisory() const {
  const double ref = min_uncertainty_sigma_v();
  return std::abs(sigma_v - ref) > 1e-9 * ref;
}

void validate(const CatParams& p) {
  require_positive(p.mass, "cat mass");
  require_positive(p.sigma_x, "cat sigma_x");
  require_positive(p.sigma_v, "cat sigma_v");
  require_positive(p.separation_d, "cat separation D");
  require_positive(p.energy, "cat energy");
  require_positive(p.hbar, "cat hbar");
}

double interference_frequency_formula(const CatParams& p) {
  validate(p);
  return kInterferenceKappa * p.sigma_v * p.separation_d / (p.sigma_x * p.sigma_x);
}

double interference_frequency(const CatParams& p) {
  const double model = interference_frequency_formula(p);
  const double oracle = interference_frequency_oracle(p);
  if (std::abs(model - oracle) > 0.1 * std::abs(oracle)) {
    std::ostringstream os;
    os.precision(17);
    os << "interference frequency: formula " << model << " vs exact-evolution oracle "
       << oracle << " (sigma_v " << p.sigma_v << ", minimum-uncertainty value "
       << p.min_uncertainty_sigma_v() << ")";
    throw ModelMismatch(os.str(), model, oracle);
  }
  return model;
}

CatRecord cat_interference_at(const CatParams& p, double omega_if, double t,
                              const std::vector<double>& x_grid) {
  validate(p);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("cat: t must be non-negative");
  const std::complex<double> f = propagator_factor(omega_if, p.kernel, t);
  const RatePair rate = rate_pair(omega_if, p.kernel);

  CatRecord rec;
  rec.omega_if = omega_if;
  rec.visibility = std::exp(-rate.gamma * t);
  rec.t_decoherence = rate.gamma > 0.0 ? 1.0 / rate.gamma
                                       : std::numeric_limits<double>::infinity();
  const double half_d = 0.5 * p.separation_d;
  rec.p_bar.reserve(x_grid.size());
  for (double x : x_grid) {
    if (!std::isfinite(x)) throw InvalidInput("cat: x grid must be finite");
    const double psi1 = gaussian_packet(x, half_d, p.sigma_x);
    const double psi2 = gaussian_packet(x, -half_d, p.sigma_x);
    rec.p_bar.push_back(0.5 * psi1 * psi1 + 0.5 * psi2 * psi2 + psi1 * psi2 * f.real());
  }
  rec.mass = 0.0;
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    rec.mass += 0.5 * (rec.p_bar[i] + rec.p_bar[i - 1]) * (x_grid[i] - x_grid[i - 1]);
  }
  if (std::abs(rec.mass - 1.0) > 1e-6) {
    std::ostringstream os;
    os.precision(12);
    os << "numeric-warning: p_bar integrates to " << rec.mass
       << " on the supplied grid (grid too narrow or packets overlapping)";
    rec.warning = os.str();
  }
  return rec;
}

CatRecord cat_interference(const CatParams& p, double t, const std::vector<double>& x_grid) {
  return cat_interference_at(p, interference_frequency(p), t, x_grid);
}

double free_particle_spread(const CatParams& p, double t) {
  validate(p);
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("spread: t must be non-negative");
  const double tau1 = p.kernel.tau1();
  const double tau2 = p.kernel.tau2();
  const double mean = t * tau1 / tau2;
  const double second_moment = mean * mean + tau1 * tau1 * t / tau2;
  return p.sigma_x * p.sigma_x + p.sigma_v * p.sigma_v * second_moment;
}

// --- Rabi --------------------------------------------------------------------

double RabiParams::rabi_frequency() const { return g * std::sqrt(n_photons + 1.0); }

void validate(const RabiParams& p) { require_positive(p.g, "rabi g"); }

RabiTrajectory rabi_population(const RabiParams& p, const std::vector<double>& times) {
  validate(p);
  check_times(times);
  const double omega = p.rabi_frequency();
  const RatePair rate = rate_pair(omega, p.kernel);
  RabiTrajectory out{times, {}, {}, rate.gamma, rate.nu};
  out.d_bar.reserve(times.size());
  out.envelope.reserve(times.size());
  for (double t : times) {
    out.d_bar.push_back(propagator_factor(omega, p.kernel, t).real());
    out.envelope.push_back(std::exp(-rate.gamma * t));
  }
  return out;
}

double fitted_rabi_gamma(const RabiParams& p, int periods) {
  validate(p);
  if (periods < 2) throw InvalidInput("fitted_rabi_gamma: need at least 2 periods");
  const double omega = p.rabi_frequency();
  // Periods of the renormalised oscillation cos(nu t), not of the bare Omega.
  const double nu = rate_pair(omega, p.kernel).nu;
  const double span = periods * 2.0 * std::numbers::pi / nu;
  constexpr int kPerPeriod = 400;
  const int n = periods * kPerPeriod;
  const double dt = span / n;
  std::vector<double> times(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) times[static_cast<std::size_t>(i)] = i * dt;
  const RabiTrajectory traj = rabi_population(p, times);

  // Local maxima of |d|, refined by a parabola through three samples.
  std::vector<double> peak_t, peak_log;
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double a = std::abs(traj.d_bar[i - 1]);
    const double b = std::abs(traj.d_bar[i]);
    const double c = std::abs(traj.d_bar[i + 1]);
    if (b >= a && b > c) {
      const double denom = a - 2.0 * b + c;
      const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
      const double tp = times[i] + shift * dt;
      const double value = std::abs(propagator_factor(omega, p.kernel, tp).real());
      if (value > 0.0) {
        peak_t.push_back(tp);
        peak_log.push_back(std::log(value));
      }
    }
  }
  if (peak_t.size() < 2) throw NumericFailure("fitted_rabi_gamma: fewer than two maxima", 0.0);

  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  const double m = static_cast<double>(peak_t.size());
  for (std::size_t i = 0; i < peak_t.size(); ++i) {
    st += peak_t[i];
    sl += peak_log[i];
    stt += peak_t[i] * peak_t[i];
    stl += peak_t[i] * peak_log[i];
  }
  const double slope = (m * stl - st * sl) / (m * stt - st * st);
  return -slope;
}

// --- EPR ---------------------------------------------------------------------

void validate(const EprParams& p) {
  if (!std::isfinite(p.omega0)) throw InvalidInput("epr omega0 must be finite");
  require_positive(p.flight_length, "epr flight length");
  require_positive(p.speed, "epr speed");
}

EnergySpectrum epr_spectrum(const EprParams& p) {
  const double h = 0.5 * p.omega0;
  return EnergySpectrum({h, h, -h, -h}, 1.0);
}

DensityMatrix singlet_state() {
  CMatrix rho = CMatrix::Zero(4, 4);
  rho(1, 1) = rho(2, 2) = 0.5;
  rho(1, 2) = rho(2, 1) = -0.5;
  return DensityMatrix(rho);
}

DensityMatrix epr_state(const EprParams& p, double t) {
  validate(p);
  return evolve(singlet_state(), epr_spectrum(p), p.kernel, t,
                EvolutionMethod::of(Method::closed_form));
}

namespace {

Eigen::Matrix2cd spin_projection(const std::array<double, 3>& a) {
  const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (!(std::abs(norm - 1.0) <= 1e-9)) {
    throw InvalidInput("epr_correlation: axis must be a unit vector within 1e-9");
  }
  Eigen::Matrix2cd s;
  s << a[2], std::complex<double>(a[0], -a[1]), std::complex<double>(a[0], a[1]), -a[2];
  return s;
}

}  // namespace

double epr_correlation(const DensityMatrix& rho, const std::array<double, 3>& a,
                       const std::array<double, 3>& b) {
  if (rho.dim() != 4) throw InvalidInput("epr_correlation: state must be 4-dimensional");
  const Eigen::Matrix2cd sa = spin_projection(a);
  const Eigen::Matrix2cd sb = spin_projection(b);
  CMatrix op(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) op(2 * i + j, 2 * k + l) = sa(i, k) * sb(j, l);
  return expectation(rho, Observable(op));
}

double epr_correlation(const EprParams& p, double t, const std::array<double, 3>& a,
                       const std::array<double, 3>& b) {
  return epr_correlation(epr_state(p, t), a, b);
}

double singlet_fidelity(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw InvalidInput("singlet_fidelity: state must be 4-dimensional");
  const CMatrix& r = rho.entries();
  return 0.5 * (r(1, 1) + r(2, 2) - r(1, 2) - r(2, 1)).real();
}

}  // namespace idec::scenarios
