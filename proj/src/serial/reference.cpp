#include "idec/serial.hpp"

#include <cmath>

#include "idec/detail/blocks.hpp"
#include "idec/error.hpp"

namespace idec::serial {

SampleSet sample_effective_time(const KernelParams& params, double t,
                                std::uint64_t seed, std::size_t count) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput("sample_effective_time: t must be positive and finite");
  }
  if (count == 0) throw InvalidInput("sample_effective_time: count must be >= 1");
  SampleSet set{std::vector<double>(count), seed, count};
  for (std::size_t begin = 0, b = 0; begin < count; begin += kSampleBlock, ++b) {
    const std::size_t len = std::min(kSampleBlock, count - begin);
    detail::fill_gamma_block(params, t, seed, b,
                             std::span<double>(set.values.data() + begin, len));
  }
  return set;
}

FactorTable factor_table(const BohrFrequencyTable& table, const KernelParams& params,
                         double t, const EvolutionMethod& method) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidInput("evolve: t must be non-negative and finite");
  }
  const int d = table.dim();
  FactorTable out{CMatrix::Ones(d, d), RMatrix::Zero(d, d)};
  const bool sampled = method.kind == Method::monte_carlo && t > 0.0;
  SampleSet samples;
  if (sampled) samples = serial::sample_effective_time(params, t, method.seed, method.samples);
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      const double omega = table(n, m);
      std::complex<double> f = 1.0;
      double se = 0.0;
      if (method.kind == Method::monte_carlo) {
        if (sampled && omega != 0.0) {
          const auto avg = detail::phase_average(omega, samples.values);
          f = avg.mean;
          se = avg.standard_error;
        }
      } else {
        f = method_factor(omega, params, t, method);
      }
      out.factor(n, m) = f;
      out.factor(m, n) = std::conj(f);
      out.standard_error(n, m) = out.standard_error(m, n) = se;
    }
  }
  return out;
}

CMatrix apply_factors(const CMatrix& factors, const CMatrix& rho0) {
  return factors.cwiseProduct(rho0);
}

DensityMatrix evolve(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                     const KernelParams& params, double t, const EvolutionMethod& method) {
  if (rho0.dim() != spectrum.dim()) throw InvalidInput("evolve: dimension mismatch");
  const FactorTable table = serial::factor_table(bohr_frequencies(spectrum), params, t, method);
  return DensityMatrix(serial::apply_factors(table.factor, rho0.entries()));
}

}  // namespace idec::serial
