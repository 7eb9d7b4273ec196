#pragma once
#include <cstdint>
#include <random>
#include <vector>

namespace mockq {

// Derive an independent stream seed from a base seed and a stream index, so
// that per-walker generators do not overlap for nearby indices.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

std::mt19937_64 make_engine(std::uint64_t base, std::uint64_t stream);

// Draw samples from a tabulated density on [x[0], x[n-1]] by inverting the
// trapezoid CDF. rho need not be normalized.
class DensitySampler {
 public:
  DensitySampler(std::vector<double> x, std::vector<double> rho);
  double sample(std::mt19937_64& rng) const;
  double quantile(double u) const;

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
};

// Two-sided Kolmogorov-Smirnov statistic of samples against a CDF tabulated
// on a grid (linear interpolation between knots).
double ks_statistic(std::vector<double> samples, const std::vector<double>& x,
                    const std::vector<double>& cdf);

}  // namespace mockq
