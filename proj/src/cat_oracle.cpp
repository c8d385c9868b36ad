#include <cmath>
#include <limits>
#include <vector>

#include "idec/scenarios.hpp"

namespace idec::scenarios {

namespace {

// ln psi(x) for a real packet; the normalisation is irrelevant for phase rates.
double log_packet(double x, double center, double sigma_x) {
  const double y = x - center;
  return -y * y / (4.0 * sigma_x * sigma_x);
}

// psi''/psi from central differences of ln psi:
// psi''/psi = (ln psi)'' + ((ln psi)')^2.
double curvature_ratio(double x, double center, double sigma_x, double h) {
  const double lm = log_packet(x - h, center, sigma_x);
  const double l0 = log_packet(x, center, sigma_x);
  const double lp = log_packet(x + h, center, sigma_x);
  const double first = (lp - lm) / (2.0 * h);
  const double second = (lp - 2.0 * l0 + lm) / (h * h);
  return second + first * first;
}

}  // namespace

double interference_frequency_oracle(const CatParams& p) {
  validate(p);
  // Free evolution: d psi / dt = (i hbar / 2m) psi''. For real psi at t = 0
  // the phase rate is (hbar / 2m) psi''/psi, so the phase of psi_1^* psi_2
  // advances at (hbar / 2m) (psi_2''/psi_2 - psi_1''/psi_1).
  const double sx = p.sigma_x;
  const double x1 = 0.5 * p.separation_d;
  const double x2 = -x1;
  const double h = 1e-2 * sx;
  const double prefactor = p.hbar / (2.0 * p.mass);

  // The weight |psi_1 psi_2| is a Gaussian centred between the packets.
  constexpr int kPoints = 4001;
  const double centre = 0.5 * (x1 + x2);
  const double half_width = 10.0 * sx;
  const double dx = 2.0 * half_width / (kPoints - 1);
  double log_w_max = -std::numeric_limits<double>::infinity();
  std::vector<double> log_w(kPoints), rate(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    const double x = centre - half_width + i * dx;
    log_w[i] = log_packet(x, x1, sx) + log_packet(x, x2, sx);
    log_w_max = std::max(log_w_max, log_w[i]);
    rate[i] = prefactor * (curvature_ratio(x, x2, sx, h) - curvature_ratio(x, x1, sx, h));
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double w = std::exp(log_w[i] - log_w_max) * ((i == 0 || i == kPoints - 1) ? 0.5 : 1.0);
    num += w * rate[i] * rate[i];
    den += w;
  }
  return std::sqrt(num / den);
}

}  // namespace idec::scenarios
