#include "idec/core_state.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "idec/error.hpp"

namespace idec {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::numeric_failure: return "numeric-failure";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::model_mismatch: return "model-mismatch";
    case ErrorKind::invariant_violation: return "invariant-violation";
  }
  return "unknown";
}

namespace {

void require_square_finite(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!m.allFinite()) {
    throw InvalidInput(std::string(what) + ": non-finite entry");
  }
}

void require_same_dim(int a, int b) {
  if (a != b) {
    throw InvalidInput("dimension mismatch: " + std::to_string(a) + " vs " +
                       std::to_string(b));
  }
}

}  // namespace

EnergySpectrum::EnergySpectrum(std::vector<double> energies, double hbar)
    : energies_(std::move(energies)), hbar_(hbar) {
  if (energies_.empty()) throw InvalidInput("spectrum: energies must be non-empty");
  for (double e : energies_) {
    if (!std::isfinite(e)) throw InvalidInput("spectrum: non-finite energy");
  }
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) {
    throw InvalidInput("spectrum: hbar must be positive and finite");
  }
}

CMatrix EnergySpectrum::hamiltonian() const {
  CMatrix h = CMatrix::Zero(dim(), dim());
  for (int n = 0; n < dim(); ++n) h(n, n) = energies_[n];
  return h;
}

BohrFrequencyTable bohr_frequencies(const EnergySpectrum& spectrum) {
  const int d = spectrum.dim();
  const auto& e = spectrum.energies();
  RMatrix omega = RMatrix::Zero(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = n + 1; m < d; ++m) {
      const double w = (e[n] - e[m]) / spectrum.hbar();
      omega(n, m) = w;
      omega(m, n) = -w;
    }
  }
  return BohrFrequencyTable(std::move(omega));
}

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  require_square_finite(entries_, "density matrix");
}

Observable::Observable(CMatrix entries) : entries_(std::move(entries)) {
  require_square_finite(entries_, "observable");
  if (max_hermiticity_deviation(entries_) > 1e-12) {
    throw InvalidInput("observable is not Hermitian within 1e-12");
  }
}

double Observable::spectral_norm() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double max_hermiticity_deviation(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const CMatrix& m) {
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::string ValidationReport::describe() const {
  if (violations.empty()) return "ok";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& v : violations) {
    if (!first) os << "; ";
    first = false;
    switch (v.invariant) {
      case Invariant::hermiticity: os << "hermiticity deviation "; break;
      case Invariant::trace: os << "trace deviation "; break;
      case Invariant::positivity: os << "negative eigenvalue magnitude "; break;
    }
    os << v.magnitude;
  }
  return os.str();
}

DensityMatrix make_density_from_pure(const CVector& amplitudes) {
  if (amplitudes.size() == 0 || !amplitudes.allFinite()) {
    throw InvalidInput("pure state: amplitudes must be non-empty and finite");
  }
  const double norm = amplitudes.norm();
  if (norm == 0.0) throw InvalidInput("pure state: zero vector");
  const CVector psi = amplitudes / norm;
  CMatrix rho = psi * psi.adjoint();
  // exact Hermitian symmetry and real diagonal
  for (int n = 0; n < rho.rows(); ++n) {
    rho(n, n) = rho(n, n).real();
    for (int m = n + 1; m < rho.cols(); ++m) rho(m, n) = std::conj(rho(n, m));
  }
  return DensityMatrix(std::move(rho));
}

ValidationReport validate_density(const DensityMatrix& rho, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("validate_density: tol must be positive");
  ValidationReport report;
  const CMatrix& m = rho.entries();
  const double herm = max_hermiticity_deviation(m);
  if (herm > tol) report.violations.push_back({Invariant::hermiticity, herm});
  const double trace_err = std::abs(m.trace() - cplx(1.0, 0.0));
  if (trace_err > tol) report.violations.push_back({Invariant::trace, trace_err});
  const double lmin = min_eigenvalue(m);
  if (lmin < -tol) report.violations.push_back({Invariant::positivity, -lmin});
  return report;
}

double expectation(const DensityMatrix& rho, const Observable& a) {
  require_same_dim(rho.dim(), a.dim());
  const cplx value = (rho.entries() * a.entries()).trace();
  const double scale = std::max(1.0, a.entries().cwiseAbs().maxCoeff());
  if (std::abs(value.imag()) > 1e-12 * scale) {
    throw InvariantViolation("expectation: imaginary residue " +
                             std::to_string(value.imag()) + " exceeds 1e-12");
  }
  return value.real();
}

double variance(const DensityMatrix& rho, const Observable& a) {
  require_same_dim(rho.dim(), a.dim());
  const double mean = expectation(rho, a);
  const double second = (rho.entries() * a.entries() * a.entries()).trace().real();
  const double var = second - mean * mean;
  if (var < 0.0 && var >= -1e-12) return 0.0;
  return var;
}

DensityMatrix diagonal_part(const DensityMatrix& rho) {
  CMatrix d = CMatrix::Zero(rho.dim(), rho.dim());
  d.diagonal() = rho.entries().diagonal();
  return DensityMatrix(std::move(d));
}

}  // namespace idec
