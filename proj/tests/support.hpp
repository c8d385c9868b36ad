#pragma once

#include <complex>
#include <random>

#include <doctest.h>

#include "idec/core_state.hpp"

namespace idec::test {

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline void check_close(std::complex<double> a, std::complex<double> b, double tol) {
  INFO("a = " << a << ", b = " << b);
  CHECK(std::abs(a - b) <= tol);
}

inline CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace idec::test
