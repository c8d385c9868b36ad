#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "idec/core_state.hpp"
#include "idec/kernel.hpp"
#include "idec/observables.hpp"

namespace idec::scenarios {

// ---------------------------------------------------------------------------
// Single-mode oscillator: <a>(t) = a0 * F(omega, t).

struct OscillatorParams {
  double omega;
  std::complex<double> a0;
  KernelParams kernel;
};

void validate(const OscillatorParams& p);

Trajectory oscillator_amplitude(const OscillatorParams& p, const std::vector<double>& times);

/// The Poisson-jump comparator for the same oscillator.
Trajectory oscillator_amplitude_milburn(const OscillatorParams& p,
                                        const std::vector<double>& times);

// ---------------------------------------------------------------------------
// Free particle prepared in a superposition of two Gaussian packets centred
// at +-D/2. Packet spreading is neglected in the density; the extra
// position diffusion is reported separately by free_particle_spread.

struct CatParams {
  double mass = 1.0;
  double sigma_x = 1.0;
  double sigma_v = 0.5;
  double separation_d = 4.0;
  double energy = 0.5;  // (1/2) m <v^2>, informational
  KernelParams kernel{1.0, 1.0};
  double hbar = 1.0;

  /// sigma_v for a minimum-uncertainty packet of width sigma_x.
  double min_uncertainty_sigma_v() const { return hbar / (2.0 * mass * sigma_x); }
  /// True when sigma_v differs from the minimum-uncertainty value by more
  /// than 1e-9 relative.
  bool uncertainty_advisory() const;
};

void validate(const CatParams& p);

/// Calibrated constant of the interference-frequency formula
/// omega_if = kappa * sigma_v * D / sigma_x^2.
inline constexpr double kInterferenceKappa = 0.5;

/// Closed-form interference frequency; no oracle check.
double interference_frequency_formula(const CatParams& p);

/// Dominant oscillation frequency of psi_1^* psi_2 under exact free
/// evolution: the |psi_1 psi_2|-weighted RMS of d/dt arg(psi_1^* psi_2) at
/// t -> 0. The packets are propagated by momentum-space quadrature.
double interference_frequency_oracle(const CatParams& p);

/// Formula value, checked against the oracle. Throws ModelMismatch when they
/// differ by more than 10%.
double interference_frequency(const CatParams& p);

struct CatRecord {
  std::vector<double> p_bar;
  double visibility;
  double omega_if;
  double t_decoherence;
  double mass;                          // trapezoid integral of p_bar
  std::optional<std::string> warning;   // numeric-warning when |mass - 1| > 1e-6
};

CatRecord cat_interference(const CatParams& p, double t, const std::vector<double>& x_grid);

/// Same as cat_interference with a precomputed omega_if (no oracle run).
CatRecord cat_interference_at(const CatParams& p, double omega_if, double t,
                              const std::vector<double>& x_grid);

/// sigma_x^2 + sigma_v^2 <t'^2>, where <t'^2> = (t tau1/tau2)^2 + tau1^2 t / tau2.
double free_particle_spread(const CatParams& p, double t);

// ---------------------------------------------------------------------------
// Resonant atom-field Rabi oscillation in the dressed two-level picture.

struct RabiParams {
  double g;
  unsigned n_photons;
  KernelParams kernel;

  double rabi_frequency() const;  // g sqrt(n + 1)
};

void validate(const RabiParams& p);

struct RabiTrajectory {
  std::vector<double> times;
  std::vector<double> d_bar;
  std::vector<double> envelope;  // exp(-gamma t)
  double gamma;
  double nu;
};

RabiTrajectory rabi_population(const RabiParams& p, const std::vector<double>& times);

/// Damping rate recovered by a log-linear fit to the maxima of |d_bar| over
/// `periods` periods 2 pi / nu of the damped oscillation.
double fitted_rabi_gamma(const RabiParams& p, int periods = 10);

// ---------------------------------------------------------------------------
// Two spin-1/2 particles in the singlet state; one of them crosses a field
// region of length L at speed v. Basis order (++, +-, -+, --).

struct EprParams {
  double omega0;
  double flight_length;
  double speed;
  KernelParams kernel;

  double flight_time() const { return flight_length / speed; }
};

void validate(const EprParams& p);

/// Energies of (hbar omega0 / 2) sigma_z acting on the first spin.
EnergySpectrum epr_spectrum(const EprParams& p);

DensityMatrix singlet_state();
DensityMatrix epr_state(const EprParams& p, double t);

/// E(a, b) = Tr[rho(t) (sigma.a (x) sigma.b)]; a and b must be unit vectors
/// within 1e-9.
double epr_correlation(const EprParams& p, double t, const std::array<double, 3>& a,
                       const std::array<double, 3>& b);

double epr_correlation(const DensityMatrix& rho, const std::array<double, 3>& a,
                       const std::array<double, 3>& b);

/// <singlet| rho |singlet>.
double singlet_fidelity(const DensityMatrix& rho);

}  // namespace idec::scenarios
