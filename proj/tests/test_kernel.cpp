#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "idec/error.hpp"
#include "idec/kernel.hpp"
#include "idec/propagator.hpp"
#include "support.hpp"

using namespace idec;
using idec::test::check_close;

namespace {

struct Stats {
  double mean;
  double sd;
};

Stats stats(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1))};
}

}  // namespace

TEST_CASE("KernelParams validation and advisory flag") {
  CHECK_THROWS_AS(KernelParams(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(KernelParams(1.0, -1.0), InvalidInput);
  CHECK_FALSE(KernelParams(0.5, 1.0).advisory());
  CHECK(KernelParams(2.0, 1.0).advisory());
}

TEST_CASE("gamma_pdf examples") {
  const KernelParams unit(1.0, 1.0);
  CHECK(gamma_pdf(unit, 1.0, 0.0) == 1.0);
  for (double tp : {0.1, 1.0, 3.7}) {
    CHECK(gamma_pdf(unit, 1.0, tp) == doctest::Approx(std::exp(-tp)).epsilon(1e-14));
  }
  CHECK(gamma_pdf(unit, 2.0, 1.0) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
  CHECK(std::isinf(gamma_pdf(unit, 0.5, 0.0)));
  CHECK(gamma_pdf(unit, 3.0, 0.0) == 0.0);
  CHECK_THROWS_AS(gamma_pdf(unit, 0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(gamma_pdf(unit, 1.0, -1.0), InvalidInput);
  // Large shapes stay finite thanks to log-space evaluation.
  CHECK(std::isfinite(gamma_pdf(unit, 500.0, 500.0)));
}

TEST_CASE("kernel_moments examples") {
  const auto m = kernel_moments(KernelParams(2.0, 1.0), 5.0);
  CHECK(m.mean == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(m.sigma == doctest::Approx(2.0 * std::sqrt(5.0)).epsilon(1e-15));
  CHECK(kernel_moments(KernelParams(0.7, 0.7), 3.3).mean == doctest::Approx(3.3).epsilon(1e-15));
  CHECK(kernel_moments(KernelParams(0.3, 1.0), 100.0).relative_dispersion ==
        doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(kernel_moments(KernelParams(1, 1), 0.0), InvalidInput);
}

TEST_CASE("poisson_pmf examples and normalisation") {
  const KernelParams p(1.0, 0.5);
  CHECK(poisson_pmf(p, 1.0, 2) == doctest::Approx(0.27067056647322538).epsilon(1e-14));
  CHECK(poisson_pmf(p, 0.7, 0) == doctest::Approx(std::exp(-1.4)).epsilon(1e-15));
  for (double t : {0.1, 1.0, 7.3, 40.0}) {
    const double lambda = t / p.tau2();
    double sum = 0.0, mean = 0.0;
    for (unsigned n = 0; n < 400; ++n) {
      const double w = poisson_pmf(p, t, n);
      sum += w;
      mean += n * w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(mean == doctest::Approx(lambda).epsilon(1e-12));
  }
}

TEST_CASE("sample_effective_time reproduces the Gamma law") {
  const KernelParams p(2.0, 1.0);
  const auto s = sample_effective_time(p, 5.0, 1234, 100000);
  REQUIRE(s.values.size() == 100000);
  const auto st = stats(s.values);
  const auto m = kernel_moments(p, 5.0);
  const double se_mean = m.sigma / std::sqrt(1e5);
  CHECK(std::abs(st.mean - m.mean) <= 3.0 * se_mean);
  // Standard error of the sample sd for a Gamma law: sd * sqrt((kurtosis_excess + 2) / 4n).
  const double excess = 6.0 / 5.0;
  const double se_sd = m.sigma * std::sqrt((excess + 2.0) / (4.0 * 1e5));
  CHECK(std::abs(st.sd - m.sigma) <= 3.0 * se_sd);

  SUBCASE("same seed reproduces bit for bit") {
    const auto again = sample_effective_time(p, 5.0, 1234, 100000);
    CHECK(again.values == s.values);
    const auto other = sample_effective_time(p, 5.0, 1235, 100000);
    CHECK(other.values != s.values);
  }
  SUBCASE("prefix stability: a shorter run is a prefix of a longer one") {
    const auto shorter = sample_effective_time(p, 5.0, 1234, 5000);
    CHECK(std::equal(shorter.values.begin(), shorter.values.end(), s.values.begin()));
  }
}

TEST_CASE("sample_effective_time: exponential case matches the CDF") {
  const KernelParams p(1.5, 1.0);
  auto s = sample_effective_time(p, 1.0, 99, 100000).values;
  std::sort(s.begin(), s.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = 1.0 - std::exp(-s[i] / p.tau1());
    const double emp_hi = static_cast<double>(i + 1) / s.size();
    const double emp_lo = static_cast<double>(i) / s.size();
    worst = std::max({worst, std::abs(cdf - emp_hi), std::abs(cdf - emp_lo)});
  }
  CHECK(worst < 0.01);
}

TEST_CASE("sample_effective_time: shape below one against the incomplete gamma CDF") {
  const KernelParams p(1.0, 1.0);
  auto s = sample_effective_time(p, 0.3, 5, 100000).values;
  std::sort(s.begin(), s.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); i += 97) {
    const double cdf = boost::math::gamma_p(0.3, s[i]);
    worst = std::max(worst, std::abs(cdf - (i + 0.5) / s.size()));
  }
  CHECK(worst < 0.01);
  CHECK(s.front() >= 0.0);
  CHECK_THROWS_AS(sample_effective_time(p, 1.0, 0, 0), InvalidInput);
}

TEST_CASE("coarse_grain normalisation over the shape and ratio grid") {
  for (double ratio : {0.1, 1.0, 10.0}) {
    const KernelParams p(ratio, 1.0);
    for (double k : {0.3, 1.0, 5.0, 40.0}) {
      const auto one = coarse_grain(p, k, [](double) { return std::complex<double>(1.0); });
      INFO("tau1/tau2 = " << ratio << ", t/tau2 = " << k);
      CHECK(std::abs(one - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("coarse_grain reproduces the first two moments") {
  for (double ratio : {0.1, 1.0, 10.0}) {
    const KernelParams p(ratio, 1.0);
    for (double k : {0.3, 1.0, 5.0, 40.0}) {
      const auto m = kernel_moments(p, k);
      const double expect2 = m.mean * m.mean + m.sigma * m.sigma;
      // Absolute tolerances scaled to the size of each moment.
      const auto first = coarse_grain(p, k, [](double tp) { return std::complex<double>(tp); },
                                      QuadratureOptions{1e-10 * m.mean});
      const auto second =
          coarse_grain(p, k, [](double tp) { return std::complex<double>(tp * tp); },
                       QuadratureOptions{1e-10 * expect2});
      INFO("tau1/tau2 = " << ratio << ", t/tau2 = " << k);
      CHECK(std::abs(first.real() - m.mean) <= 1e-8 * m.mean);
      CHECK(std::abs(second.real() - expect2) <= 1e-8 * expect2);
    }
  }
}

TEST_CASE("coarse_grain of a unitary phase equals the closed-form factor") {
  // Frozen values from an independent 30-digit quadrature of the Gamma average.
  const KernelParams p(1.0, 1.0);
  check_close(coarse_grain(p, 0.5, [](double tp) { return std::polar(1.0, -tp); }),
              {0.7768869870150186, -0.3217971264527913}, 1e-9);
  check_close(coarse_grain(p, 0.5, [](double tp) { return std::polar(1.0, -10.0 * tp); }),
              {0.23388534490216442, -0.2116633280967549}, 1e-9);
  check_close(coarse_grain(p, 5.0, [](double tp) { return std::polar(1.0, -tp); }),
              {-0.125, 0.125}, 1e-9);
  check_close(propagator_factor(1.0, p, 0.5), {0.7768869870150186, -0.3217971264527913}, 1e-14);
}

TEST_CASE("coarse_grain reports budget exhaustion") {
  const KernelParams p(1.0, 1.0);
  QuadratureOptions tight;
  tight.tol = 1e-15;
  tight.max_evaluations = 200;
  try {
    coarse_grain(p, 5.0, [](double tp) { return std::polar(1.0, -50.0 * tp); }, tight);
    FAIL("expected NumericFailure");
  } catch (const NumericFailure& e) {
    CHECK(e.achieved_error() > 0.0);
    CHECK(e.kind() == ErrorKind::numeric_failure);
  }
}
