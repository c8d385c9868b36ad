#pragma once

// Single-threaded reference versions of the OpenMP kernels. They share the
// per-element and per-block arithmetic with the parallel code, so results
// must match bit for bit; tests and the benchmark compare the two.

#include "idec/kernel.hpp"
#include "idec/propagator.hpp"

namespace idec::serial {

SampleSet sample_effective_time(const KernelParams& params, double t,
                                std::uint64_t seed, std::size_t count);

FactorTable factor_table(const BohrFrequencyTable& table, const KernelParams& params,
                         double t, const EvolutionMethod& method);

CMatrix apply_factors(const CMatrix& factors, const CMatrix& rho0);

DensityMatrix evolve(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                     const KernelParams& params, double t, const EvolutionMethod& method);

}  // namespace idec::serial
