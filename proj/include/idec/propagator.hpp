#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idec/core_state.hpp"
#include "idec/kernel.hpp"

namespace idec {

/// gamma(n, m) = ln(1 + omega^2 tau1^2) / (2 tau2)   symmetric, >= 0
/// nu(n, m)    = arctan(omega tau1) / tau2           antisymmetric
struct DecoherenceRates {
  RMatrix gamma;
  RMatrix nu;
};

enum class Method {
  unitary,
  closed_form,
  finite_difference,
  second_order,
  milburn,
  quadrature,
  monte_carlo,
};

struct EvolutionMethod {
  Method kind = Method::closed_form;
  std::uint64_t seed = 0;          // monte_carlo only
  std::size_t samples = 100000;    // monte_carlo only
  double tol = 1e-10;              // quadrature only

  static EvolutionMethod of(Method m) { return EvolutionMethod{m}; }
  static EvolutionMethod monte_carlo(std::uint64_t seed, std::size_t samples = 100000) {
    return EvolutionMethod{Method::monte_carlo, seed, samples};
  }
  static EvolutionMethod quadrature(double tol = 1e-10) {
    EvolutionMethod m{Method::quadrature};
    m.tol = tol;
    return m;
  }
};

std::string to_string(Method m);
/// Parses the names used by to_string; throws InvalidInput otherwise.
Method parse_method(const std::string& name);

/// (1 + i omega tau1)^-1, the one-cronon factor of the finite-difference law.
std::complex<double> step_factor(double omega, const KernelParams& params);

/// exp(-(t/tau2) Log(1 + i omega tau1)) with the principal logarithm.
std::complex<double> propagator_factor(double omega, const KernelParams& params, double t);

std::complex<double> unitary_factor(double omega, double t);
std::complex<double> second_order_factor(double omega, const KernelParams& params, double t);
std::complex<double> milburn_factor(double omega, const KernelParams& params, double t);

/// Decay rate and frequency shift for a single Bohr frequency.
struct RatePair {
  double gamma;
  double nu;
};
RatePair rate_pair(double omega, const KernelParams& params);

DecoherenceRates rates(const BohrFrequencyTable& table, const KernelParams& params);

/// Number of tau2 steps when t lies on the cronon grid, otherwise nullopt.
std::optional<std::uint64_t> grid_steps(const KernelParams& params, double t);

/// Scalar factor of `method` for one Bohr frequency. monte_carlo is not
/// handled here since it shares one sample set across all frequencies.
std::complex<double> method_factor(double omega, const KernelParams& params, double t,
                                   const EvolutionMethod& method);

/// Per-element factors F with F(n,n) = 1 and F(m,n) = conj(F(n,m)).
struct FactorTable {
  CMatrix factor;
  RMatrix standard_error;  // zero except for monte_carlo
};

FactorTable factor_table(const BohrFrequencyTable& table, const KernelParams& params,
                         double t, const EvolutionMethod& method);

/// rho(t)_{nm} = F_{nm} rho0_{nm} in the energy basis.
DensityMatrix evolve(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                     const KernelParams& params, double t, const EvolutionMethod& method);

/// Same as evolve, also returning the Monte-Carlo standard errors.
struct EvolutionResult {
  DensityMatrix state;
  RMatrix standard_error;
};
EvolutionResult evolve_with_errors(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                                   const KernelParams& params, double t,
                                   const EvolutionMethod& method);

/// omega = 2 n pi / tau1 for n = 1..n_max, where the Milburn factor is 1.
std::vector<double> milburn_frozen_frequencies(const KernelParams& params, int n_max);

/// Elementwise product F o rho0, parallelised over rows.
CMatrix apply_factors(const CMatrix& factors, const CMatrix& rho0);

}  // namespace idec
