#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "idec/kernel.hpp"

namespace idec::detail {

/// Fill one block of Gamma(shape, tau1) draws from the stream keyed by
/// (seed, block). Shared by the OpenMP and serial samplers.
void fill_gamma_block(const KernelParams& params, double t, std::uint64_t seed,
                      std::size_t block, std::span<double> out);

/// Mean and standard error of exp(-i omega t') over samples, accumulated in
/// sample order.
struct PhaseAverage {
  std::complex<double> mean;
  double standard_error;
};
PhaseAverage phase_average(double omega, std::span<const double> samples);

}  // namespace idec::detail
