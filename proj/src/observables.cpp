#include "idec/observables.hpp"

#include <cmath>
#include <sstream>

#include "idec/error.hpp"

namespace idec {

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
      throw InvalidInput("times must be non-negative and finite");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw InvalidInput("times must be strictly ascending");
    }
  }
}

Trajectory expectation_trajectory(const DensityMatrix& rho0, const Observable& a,
                                  const EnergySpectrum& spectrum, const KernelParams& params,
                                  const std::vector<double>& times,
                                  const EvolutionMethod& method) {
  check_times(times);
  if (rho0.dim() != a.dim()) throw InvalidInput("expectation_trajectory: dimension mismatch");
  Trajectory out{times, std::vector<std::complex<double>>(times.size()), method};
  const auto n = static_cast<std::int64_t>(times.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic) if (n > 8)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      const DensityMatrix rho = evolve(rho0, spectrum, params, times[idx], method);
      out.values[idx] = expectation(rho, a);
    } catch (...) {
#pragma omp critical(idec_trajectory_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::complex<double> coarse_grained_unitary_expectation(const DensityMatrix& rho0,
                                                        const Observable& a,
                                                        const EnergySpectrum& spectrum,
                                                        const KernelParams& params, double t,
                                                        double tol) {
  if (rho0.dim() != a.dim() || rho0.dim() != spectrum.dim()) {
    throw InvalidInput("coarse_grained_unitary_expectation: dimension mismatch");
  }
  if (t == 0.0) return expectation(rho0, a);
  const CMatrix& r = rho0.entries();
  const CMatrix& op = a.entries();
  const auto& e = spectrum.energies();
  const double hbar = spectrum.hbar();
  const int d = rho0.dim();
  // Tr(rho(t') A) with rho(t') = exp(-iHt'/hbar) rho0 exp(iHt'/hbar)
  auto unitary_expectation = [&](double tp) {
    std::complex<double> sum = 0.0;
    for (int n = 0; n < d; ++n) {
      for (int m = 0; m < d; ++m) {
        const double phase = -(e[n] - e[m]) * tp / hbar;
        sum += r(n, m) * std::complex<double>(std::cos(phase), std::sin(phase)) * op(m, n);
      }
    }
    return sum;
  };
  return coarse_grain(params, t, unitary_expectation, QuadratureOptions{tol});
}

namespace {

struct FdPieces {
  DensityMatrix now;
  std::complex<double> delta;       // A(t) - A(t - tau2)
  std::complex<double> commutator;  // Tr(rho(t) [A, H])
};

FdPieces fd_pieces(const DensityMatrix& rho0, const Observable& a,
                   const EnergySpectrum& spectrum, const KernelParams& params, double t) {
  if (!(t >= params.tau2())) throw InvalidInput("finite-difference checks need t >= tau2");
  if (rho0.dim() != a.dim() || rho0.dim() != spectrum.dim()) {
    throw InvalidInput("dimension mismatch");
  }
  const auto closed = EvolutionMethod::of(Method::closed_form);
  DensityMatrix now = evolve(rho0, spectrum, params, t, closed);
  const DensityMatrix before = evolve(rho0, spectrum, params, t - params.tau2(), closed);
  const CMatrix& op = a.entries();
  const CMatrix h = spectrum.hamiltonian();
  const std::complex<double> delta = (now.entries() * op).trace() - (before.entries() * op).trace();
  const std::complex<double> comm = (now.entries() * (op * h - h * op)).trace();
  return {std::move(now), delta, comm};
}

}  // namespace

double ehrenfest_fd_residual(const DensityMatrix& rho0, const Observable& a,
                             const EnergySpectrum& spectrum, const KernelParams& params,
                             double t) {
  const FdPieces p = fd_pieces(rho0, a, spectrum, params, t);
  const std::complex<double> i_tau(0.0, params.tau1() / spectrum.hbar());
  return std::abs(p.delta + i_tau * p.commutator);
}

TMReport tm_report(const DensityMatrix& rho0, const Observable& a,
                   const EnergySpectrum& spectrum, const KernelParams& params, double t) {
  const FdPieces p = fd_pieces(rho0, a, spectrum, params, t);
  const Observable h(spectrum.hamiltonian());
  const double sigma_a = std::sqrt(variance(p.now, a));
  const double sigma_h = std::sqrt(variance(p.now, h));
  constexpr double kFloor = 1e-12;
  if (!(sigma_h > kFloor * std::max(1.0, h.spectral_norm())) ||
      !(sigma_a > kFloor * std::max(1.0, a.spectral_norm()))) {
    std::ostringstream os;
    os.precision(17);
    os << "tm_report: degenerate spreads sigma(A) = " << sigma_a << ", sigma(H) = " << sigma_h
       << "; the inner time hbar/(2 sigma(H)) or the ratio |dA|/sigma(A) is undefined";
    throw DegenerateInput(os.str());
  }
  TMReport r{};
  r.delta_a_bar = p.delta.real();
  r.sigma_a = sigma_a;
  r.sigma_h = sigma_h;
  r.tau_e = spectrum.hbar() / (2.0 * sigma_h);
  r.lhs = std::abs(r.delta_a_bar) / sigma_a;
  r.rhs = params.tau1() / r.tau_e;
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

}  // namespace idec
