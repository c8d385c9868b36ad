#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace idec {

/// The two characteristic times of the coarse-grained evolution.
///   tau1: width of one elementary evolution event
///   tau2: mean spacing between events (the cronon)
/// tau1 > tau2 is accepted but flagged through advisory().
class KernelParams {
 public:
  KernelParams(double tau1, double tau2);

  double tau1() const noexcept { return tau1_; }
  double tau2() const noexcept { return tau2_; }

  /// True when tau1 > tau2, the atypical ordering.
  bool advisory() const noexcept { return tau1_ > tau2_; }

  /// Gamma shape t / tau2 for evolution time t.
  double shape(double t) const noexcept { return t / tau2_; }

 private:
  double tau1_;
  double tau2_;
};

struct KernelMoments {
  double mean;
  double sigma;
  double relative_dispersion;
};

struct SampleSet {
  std::vector<double> values;
  std::uint64_t seed;
  std::size_t count;
};

/// Gamma density P(t, t') with shape t/tau2 and scale tau1, evaluated in log
/// space. Returns +infinity at t' = 0 when the shape is below one.
double gamma_pdf(const KernelParams& params, double t, double tprime);

KernelMoments kernel_moments(const KernelParams& params, double t);

/// Probability of n evolution events in time t: Poisson with mean t/tau2.
double poisson_pmf(const KernelParams& params, double t, unsigned n);

/// Draw `count` effective evolution times from the Gamma law. The stream is
/// split into fixed blocks keyed by (seed, block), so the result does not
/// depend on the number of OpenMP threads.
SampleSet sample_effective_time(const KernelParams& params, double t,
                                std::uint64_t seed, std::size_t count);

inline constexpr std::size_t kSampleBlock = 4096;

/// Upper integration limit (in units of tau1) beyond which the kernel's
/// second-moment tail is below `tail`.
double kernel_upper_limit(double shape, double tail);

using TimeFunction = std::function<std::complex<double>(double)>;

struct QuadratureOptions {
  double tol = 1e-10;
  std::size_t max_evaluations = 20000;
};

/// Coarse-grain average: the integral of P(t, t') f(t') over t' >= 0.
/// Throws NumericFailure when the evaluation budget is exhausted.
std::complex<double> coarse_grain(const KernelParams& params, double t,
                                  const TimeFunction& f,
                                  const QuadratureOptions& options = {});

}  // namespace idec
