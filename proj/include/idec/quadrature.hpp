#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace idec {

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate;
  std::size_t evaluations;
  bool converged;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand
/// on [a, b]. The interval is first split into `initial_pieces`; the piece
/// with the largest error estimate is bisected until the summed estimate is
/// at most `abs_tol` or `max_evaluations` is reached.
QuadratureResult integrate_gk15(const std::function<std::complex<double>(double)>& f,
                                double a, double b, double abs_tol,
                                std::size_t max_evaluations,
                                int initial_pieces = 1);

}  // namespace idec
