#include "idec/random_instances.hpp"

namespace idec {

namespace {

CMatrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  return g;
}

}  // namespace

DensityMatrix random_density(int dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  for (int n = 0; n < dim; ++n) {
    rho(n, n) = rho(n, n).real();
    for (int m = n + 1; m < dim; ++m) rho(m, n) = std::conj(rho(n, m));
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix random_pure_density(int dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, 1, rng);
  return make_density_from_pure(g.col(0));
}

Observable random_observable(int dim, std::mt19937_64& rng) {
  const CMatrix g = ginibre(dim, dim, rng);
  CMatrix a = 0.5 * (g + g.adjoint());
  for (int n = 0; n < dim; ++n) {
    a(n, n) = a(n, n).real();
    for (int m = n + 1; m < dim; ++m) a(m, n) = std::conj(a(n, m));
  }
  return Observable(std::move(a));
}

EnergySpectrum random_spectrum(int dim, std::mt19937_64& rng, double scale, double hbar) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> e(static_cast<std::size_t>(dim));
  for (double& v : e) v = u(rng);
  return EnergySpectrum(std::move(e), hbar);
}

}  // namespace idec
