#include "idec/kernel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "idec/error.hpp"
#include "idec/quadrature.hpp"

namespace idec {

namespace {

void require_positive_time(double t, const char* op) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput(std::string(op) + ": t must be positive and finite");
  }
}

}  // namespace

KernelParams::KernelParams(double tau1, double tau2) : tau1_(tau1), tau2_(tau2) {
  if (!(tau1 > 0.0) || !std::isfinite(tau1) || !(tau2 > 0.0) || !std::isfinite(tau2)) {
    throw InvalidInput("kernel: tau1 and tau2 must be positive and finite");
  }
}

double gamma_pdf(const KernelParams& params, double t, double tprime) {
  require_positive_time(t, "gamma_pdf");
  if (!(tprime >= 0.0)) throw InvalidInput("gamma_pdf: t' must be non-negative");
  const double k = params.shape(t);
  const double tau1 = params.tau1();
  if (tprime == 0.0) {
    if (k < 1.0) return std::numeric_limits<double>::infinity();
    if (k == 1.0) return 1.0 / tau1;
    return 0.0;
  }
  const double x = tprime / tau1;
  const double log_pdf = -std::log(tau1) - x + (k - 1.0) * std::log(x) - std::lgamma(k);
  return std::exp(log_pdf);
}

KernelMoments kernel_moments(const KernelParams& params, double t) {
  require_positive_time(t, "kernel_moments");
  const double k = params.shape(t);
  const double mean = k * params.tau1();
  const double sigma = params.tau1() * std::sqrt(k);
  return {mean, sigma, sigma / mean};
}

double poisson_pmf(const KernelParams& params, double t, unsigned n) {
  require_positive_time(t, "poisson_pmf");
  const double lambda = params.shape(t);
  if (n == 0) return std::exp(-lambda);
  return std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
}

double kernel_upper_limit(double shape, double tail) {
  // Tail of x^2 p(x): k(k+1) Q(k+2, x). Bounding that also bounds the
  // probability and first-moment tails.
  const double weight = std::max(1.0, shape * (shape + 1.0));
  return boost::math::gamma_q_inv(shape + 2.0, tail / weight);
}

std::complex<double> coarse_grain(const KernelParams& params, double t,
                                  const TimeFunction& f,
                                  const QuadratureOptions& options) {
  require_positive_time(t, "coarse_grain");
  if (!(options.tol > 0.0)) throw InvalidInput("coarse_grain: tol must be positive");
  const double k = params.shape(t);
  const double tau1 = params.tau1();
  const double log_gamma_k = std::lgamma(k);
  const double log_gamma_k1 = std::lgamma(k + 1.0);

  // Budget and tolerance are split between the two pieces.
  const double piece_tol = 0.45 * options.tol;
  const std::size_t piece_budget = options.max_evaluations / 2;

  // [0, tau1]: u = x^k turns x^(k-1) e^-x dx / Gamma(k) into
  // e^(-u^(1/k)) du / Gamma(k+1), bounded at u = 0 for every k.
  const double inv_k = 1.0 / k;
  auto head = [&](double u) -> std::complex<double> {
    if (u <= 0.0) return f(0.0) * std::exp(-log_gamma_k1);
    const double x = std::pow(u, inv_k);
    return f(tau1 * x) * std::exp(-x - log_gamma_k1);
  };
  const QuadratureResult head_part =
      integrate_gk15(head, 0.0, 1.0, piece_tol, piece_budget, 4);

  // [tau1, x_max tau1] directly in x = t'/tau1.
  double x_max = kernel_upper_limit(k, options.tol / 10.0);
  x_max = std::max(x_max, 2.0);
  auto body = [&](double x) -> std::complex<double> {
    const double log_density = -x + (k - 1.0) * std::log(x) - log_gamma_k;
    return f(tau1 * x) * std::exp(log_density);
  };
  const int pieces = static_cast<int>(std::clamp(std::ceil(x_max - 1.0), 8.0, 256.0));
  const QuadratureResult body_part =
      integrate_gk15(body, 1.0, x_max, piece_tol, piece_budget, pieces);

  const double error = head_part.error_estimate + body_part.error_estimate;
  if (!head_part.converged || !body_part.converged) {
    throw NumericFailure("coarse_grain: quadrature did not converge within " +
                             std::to_string(options.max_evaluations) +
                             " evaluations; achieved error " + std::to_string(error),
                         error);
  }
  return head_part.value + body_part.value;
}

}  // namespace idec
