#include <cmath>
#include <random>

#include "idec/detail/blocks.hpp"
#include "idec/error.hpp"
#include "idec/kernel.hpp"

namespace idec {

namespace detail {

void fill_gamma_block(const KernelParams& params, double t, std::uint64_t seed,
                      std::size_t block, std::span<double> out) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block),
                    static_cast<std::uint32_t>(block >> 32)};
  std::mt19937_64 engine(seq);
  std::gamma_distribution<double> law(params.shape(t), params.tau1());
  for (double& v : out) v = law(engine);
}

PhaseAverage phase_average(double omega, std::span<const double> samples) {
  double sum_c = 0.0, sum_s = 0.0, sum_cc = 0.0, sum_ss = 0.0;
  for (double tp : samples) {
    const double c = std::cos(omega * tp);
    const double s = -std::sin(omega * tp);
    sum_c += c;
    sum_s += s;
    sum_cc += c * c;
    sum_ss += s * s;
  }
  const double n = static_cast<double>(samples.size());
  const double mc = sum_c / n, ms = sum_s / n;
  double var = (sum_cc / n - mc * mc) + (sum_ss / n - ms * ms);
  if (n > 1) var *= n / (n - 1);
  return {{mc, ms}, std::sqrt(std::max(var, 0.0) / n)};
}

}  // namespace detail

SampleSet sample_effective_time(const KernelParams& params, double t,
                                std::uint64_t seed, std::size_t count) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput("sample_effective_time: t must be positive and finite");
  }
  if (count == 0) throw InvalidInput("sample_effective_time: count must be >= 1");
  SampleSet set{std::vector<double>(count), seed, count};
  const auto blocks = static_cast<std::int64_t>((count + kSampleBlock - 1) / kSampleBlock);
  double* data = set.values.data();
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kSampleBlock;
    const std::size_t len = std::min(kSampleBlock, count - begin);
    detail::fill_gamma_block(params, t, seed, static_cast<std::size_t>(b),
                             std::span<double>(data + begin, len));
  }
  return set;
}

}  // namespace idec
