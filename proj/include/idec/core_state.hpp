#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace idec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Energies E_n of a time-independent Hamiltonian, diagonal in the basis
/// every propagator works in. hbar is carried explicitly (default 1).
class EnergySpectrum {
 public:
  explicit EnergySpectrum(std::vector<double> energies, double hbar = 1.0);

  const std::vector<double>& energies() const noexcept { return energies_; }
  double hbar() const noexcept { return hbar_; }
  int dim() const noexcept { return static_cast<int>(energies_.size()); }

  /// H as a diagonal matrix (energy units).
  CMatrix hamiltonian() const;

 private:
  std::vector<double> energies_;
  double hbar_;
};

/// omega(n, m) = (E_n - E_m) / hbar. Antisymmetric with zero diagonal.
class BohrFrequencyTable {
 public:
  explicit BohrFrequencyTable(RMatrix omega) : omega_(std::move(omega)) {}

  double operator()(int n, int m) const { return omega_(n, m); }
  const RMatrix& matrix() const noexcept { return omega_; }
  int dim() const noexcept { return static_cast<int>(omega_.rows()); }

 private:
  RMatrix omega_;
};

BohrFrequencyTable bohr_frequencies(const EnergySpectrum& spectrum);

/// Dense complex square matrix intended to hold a quantum state. Construction
/// only checks shape and finiteness; the physical invariants (Hermitian,
/// unit trace, positive) are reported by validate_density so that malformed
/// inputs can be diagnosed rather than rejected blindly.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const noexcept { return entries_; }
  cplx operator()(int n, int m) const { return entries_(n, m); }

 private:
  CMatrix entries_;
};

/// Hermitian operator (checked to 1e-12 at construction).
class Observable {
 public:
  explicit Observable(CMatrix entries);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const CMatrix& entries() const noexcept { return entries_; }

  /// Largest singular value; the scale used for residual tolerances.
  double spectral_norm() const;

 private:
  CMatrix entries_;
};

enum class Invariant { hermiticity, trace, positivity };

struct Violation {
  Invariant invariant;
  double magnitude;  // max |rho - rho^dagger|, |Tr rho - 1|, or -lambda_min
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const;
};

DensityMatrix make_density_from_pure(const CVector& amplitudes);

/// Positivity is flagged when lambda_min < -tol.
ValidationReport validate_density(const DensityMatrix& rho, double tol);

/// Tr(rho A). Throws InvariantViolation if the imaginary residue exceeds 1e-12.
double expectation(const DensityMatrix& rho, const Observable& a);

/// Tr(rho A^2) - Tr(rho A)^2, clamped to 0 when within -1e-12 of 0.
double variance(const DensityMatrix& rho, const Observable& a);

DensityMatrix diagonal_part(const DensityMatrix& rho);

double min_eigenvalue(const CMatrix& hermitian);
double max_hermiticity_deviation(const CMatrix& m);

}  // namespace idec
