#include "idec/quadrature.hpp"

#include <array>
#include <cmath>
#include <algorithm>
#include <vector>

namespace idec {

namespace {

// Kronrod abscissae on [0, 1] (symmetric); odd indices are Gauss points.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a;
  double b;
  std::complex<double> value;
  double error;

  bool operator<(const Piece& other) const { return error < other.error; }
};

Piece eval_piece(const std::function<std::complex<double>(double)>& f, double a,
                 double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::complex<double> fc = f(center);
  std::complex<double> kronrod = fc * kKronrodWeights[7];
  std::complex<double> gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kNodes[j];
    const std::complex<double> pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk15(const std::function<std::complex<double>(double)>& f,
                                double a, double b, double abs_tol,
                                std::size_t max_evaluations, int initial_pieces) {
  constexpr std::size_t kEvalsPerPiece = 15;
  std::vector<Piece> heap;
  std::size_t evaluations = 0;
  const int pieces = std::max(1, initial_pieces);
  const double width = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == pieces) ? b : a + (i + 1) * width;
    heap.push_back(eval_piece(f, lo, hi));
    evaluations += kEvalsPerPiece;
  }
  std::make_heap(heap.begin(), heap.end());

  auto total_error = [&heap] {
    double e = 0.0;
    for (const Piece& p : heap) e += p.error;
    return e;
  };

  double error = total_error();
  while (error > abs_tol && evaluations + 2 * kEvalsPerPiece <= max_evaluations) {
    std::pop_heap(heap.begin(), heap.end());
    const Piece worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end());
      break;
    }
    for (const Piece& half : {eval_piece(f, worst.a, mid), eval_piece(f, mid, worst.b)}) {
      heap.push_back(half);
      std::push_heap(heap.begin(), heap.end());
    }
    evaluations += 2 * kEvalsPerPiece;
    error = total_error();
  }

  std::complex<double> value{};
  for (const Piece& p : heap) value += p.value;
  return {value, error, evaluations, error <= abs_tol};
}

}  // namespace idec
