#pragma once

#include <complex>
#include <vector>

#include "idec/core_state.hpp"
#include "idec/kernel.hpp"
#include "idec/propagator.hpp"

namespace idec {

/// Time series of scalar values with the method that produced them.
/// Times are strictly ascending.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> values;
  EvolutionMethod method;
};

void check_times(const std::vector<double>& times);

Trajectory expectation_trajectory(const DensityMatrix& rho0, const Observable& a,
                                  const EnergySpectrum& spectrum, const KernelParams& params,
                                  const std::vector<double>& times,
                                  const EvolutionMethod& method);

/// Kernel average of the unitary expectation
/// Tr(rho(t') A), evaluated by quadrature rather than through the factors.
std::complex<double> coarse_grained_unitary_expectation(const DensityMatrix& rho0,
                                                        const Observable& a,
                                                        const EnergySpectrum& spectrum,
                                                        const KernelParams& params, double t,
                                                        double tol = 1e-10);

/// |[A(t) - A(t - tau2)] + (i tau1 / hbar) Tr(rho(t) [A, H])| on the
/// closed-form trajectory. Zero up to rounding.
double ehrenfest_fd_residual(const DensityMatrix& rho0, const Observable& a,
                             const EnergySpectrum& spectrum, const KernelParams& params,
                             double t);

struct TMReport {
  double delta_a_bar;  // A(t) - A(t - tau2)
  double sigma_a;
  double sigma_h;
  double tau_e;        // hbar / (2 sigma_h)
  double lhs;          // |delta_a_bar| / sigma_a
  double rhs;          // tau1 / tau_e
  bool holds;          // lhs <= rhs + 1e-12
};

/// Generalized Tam-Mandelstam check at time t. sigma_a and sigma_h are
/// evaluated on the coarse-grained state at t. Throws DegenerateInput when
/// either spread vanishes.
TMReport tm_report(const DensityMatrix& rho0, const Observable& a,
                   const EnergySpectrum& spectrum, const KernelParams& params, double t);

}  // namespace idec
