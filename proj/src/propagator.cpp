#include "idec/propagator.hpp"

#include <cmath>
#include <numbers>

#include "idec/detail/blocks.hpp"
#include "idec/error.hpp"

namespace idec {

std::string to_string(Method m) {
  switch (m) {
    case Method::unitary: return "unitary";
    case Method::closed_form: return "closed_form";
    case Method::finite_difference: return "finite_difference";
    case Method::second_order: return "second_order";
    case Method::milburn: return "milburn";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::unitary, Method::closed_form, Method::finite_difference,
                   Method::second_order, Method::milburn, Method::quadrature,
                   Method::monte_carlo}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidInput("unknown evolution method '" + name + "'");
}

std::complex<double> step_factor(double omega, const KernelParams& params) {
  const double x = omega * params.tau1();
  return std::complex<double>(1.0, -x) / (1.0 + x * x);
}

RatePair rate_pair(double omega, const KernelParams& params) {
  const double x = omega * params.tau1();
  return {0.5 * std::log1p(x * x) / params.tau2(), std::atan(x) / params.tau2()};
}

std::complex<double> propagator_factor(double omega, const KernelParams& params, double t) {
  if (omega == 0.0 || t == 0.0) return 1.0;
  // 1 + i omega tau1 has positive real part, so Log is branch-safe:
  // Log(1 + ix) = ln(1 + x^2)/2 + i arctan(x).
  const RatePair r = rate_pair(omega, params);
  return std::exp(-r.gamma * t) * std::complex<double>(std::cos(r.nu * t), -std::sin(r.nu * t));
}

std::complex<double> unitary_factor(double omega, double t) {
  return {std::cos(omega * t), -std::sin(omega * t)};
}

std::complex<double> second_order_factor(double omega, const KernelParams& params, double t) {
  const double x = omega * params.tau1();
  const double steps = t / params.tau2();
  return std::exp(std::complex<double>(-0.5 * x * x * steps, -x * steps));
}

std::complex<double> milburn_factor(double omega, const KernelParams& params, double t) {
  const double x = omega * params.tau1();
  const std::complex<double> jump(std::cos(x) - 1.0, -std::sin(x));
  return std::exp(params.shape(t) * jump);
}

DecoherenceRates rates(const BohrFrequencyTable& table, const KernelParams& params) {
  const int d = table.dim();
  DecoherenceRates out{RMatrix::Zero(d, d), RMatrix::Zero(d, d)};
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      const RatePair r = rate_pair(table(n, m), params);
      out.gamma(n, m) = out.gamma(m, n) = r.gamma;
      out.nu(n, m) = r.nu;
      out.nu(m, n) = -r.nu;
    }
  }
  return out;
}

std::optional<std::uint64_t> grid_steps(const KernelParams& params, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) return std::nullopt;
  const double k = t / params.tau2();
  const double nearest = std::round(k);
  if (std::abs(k - nearest) > 1e-9 * std::max(1.0, nearest)) return std::nullopt;
  return static_cast<std::uint64_t>(nearest);
}

namespace {

std::complex<double> integer_power(std::complex<double> base, std::uint64_t k) {
  std::complex<double> result = 1.0;
  while (k > 0) {
    if (k & 1U) result *= base;
    base *= base;
    k >>= 1U;
  }
  return result;
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidInput("evolve: t must be non-negative and finite");
  }
}

}  // namespace

std::complex<double> method_factor(double omega, const KernelParams& params, double t,
                                   const EvolutionMethod& method) {
  check_time(t);
  switch (method.kind) {
    case Method::unitary: return unitary_factor(omega, t);
    case Method::closed_form: return propagator_factor(omega, params, t);
    case Method::finite_difference: {
      const auto k = grid_steps(params, t);
      if (!k) {
        throw InvalidInput("finite_difference: t = " + std::to_string(t) +
                           " is not an integer multiple of tau2");
      }
      return integer_power(step_factor(omega, params), *k);
    }
    case Method::second_order: return second_order_factor(omega, params, t);
    case Method::milburn: return milburn_factor(omega, params, t);
    case Method::quadrature: {
      if (omega == 0.0 || t == 0.0) return 1.0;
      return coarse_grain(
          params, t, [omega](double tp) { return unitary_factor(omega, tp); },
          QuadratureOptions{method.tol});
    }
    case Method::monte_carlo:
      throw InvalidInput("method_factor: monte_carlo needs a shared sample set");
  }
  return 1.0;
}

FactorTable factor_table(const BohrFrequencyTable& table, const KernelParams& params,
                         double t, const EvolutionMethod& method) {
  check_time(t);
  const int d = table.dim();
  FactorTable out{CMatrix::Ones(d, d), RMatrix::Zero(d, d)};
  if (method.kind == Method::finite_difference && !grid_steps(params, t)) {
    throw InvalidInput("finite_difference: t = " + std::to_string(t) +
                       " is not an integer multiple of tau2");
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) pairs.emplace_back(n, m);
  }

  SampleSet samples;
  const bool sampled = method.kind == Method::monte_carlo && t > 0.0;
  if (sampled) samples = sample_effective_time(params, t, method.seed, method.samples);

  const auto npairs = static_cast<std::int64_t>(pairs.size());
  // Exceptions cannot leave an OpenMP region; capture the first one.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4) if (npairs > 64 || sampled)
  for (std::int64_t i = 0; i < npairs; ++i) {
    const auto [n, m] = pairs[static_cast<std::size_t>(i)];
    const double omega = table(n, m);
    try {
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
    } catch (...) {
#pragma omp critical(idec_factor_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

CMatrix apply_factors(const CMatrix& factors, const CMatrix& rho0) {
  const auto d = static_cast<std::int64_t>(rho0.rows());
  CMatrix out(d, d);
#pragma omp parallel for schedule(static) if (d >= 32)
  for (std::int64_t m = 0; m < d; ++m) {
    for (std::int64_t n = 0; n < d; ++n) out(n, m) = factors(n, m) * rho0(n, m);
  }
  return out;
}

EvolutionResult evolve_with_errors(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                                   const KernelParams& params, double t,
                                   const EvolutionMethod& method) {
  if (rho0.dim() != spectrum.dim()) {
    throw InvalidInput("evolve: state dimension " + std::to_string(rho0.dim()) +
                       " does not match spectrum dimension " +
                       std::to_string(spectrum.dim()));
  }
  const FactorTable table = factor_table(bohr_frequencies(spectrum), params, t, method);
  return {DensityMatrix(apply_factors(table.factor, rho0.entries())), table.standard_error};
}

DensityMatrix evolve(const DensityMatrix& rho0, const EnergySpectrum& spectrum,
                     const KernelParams& params, double t, const EvolutionMethod& method) {
  return evolve_with_errors(rho0, spectrum, params, t, method).state;
}

std::vector<double> milburn_frozen_frequencies(const KernelParams& params, int n_max) {
  if (n_max < 1) throw InvalidInput("milburn_frozen_frequencies: n_max must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) out.push_back(2.0 * n * std::numbers::pi / params.tau1());
  return out;
}

}  // namespace idec
