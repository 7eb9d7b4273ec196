#include "mockq/random.hpp"

#include <algorithm>
#include <cmath>

#include "mockq/error.hpp"

namespace mockq {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t base, std::uint64_t stream) {
  return std::mt19937_64(mix_seed(base, stream));
}

DensitySampler::DensitySampler(std::vector<double> x, std::vector<double> rho) : x_(std::move(x)) {
  require(x_.size() == rho.size() && x_.size() >= 2, "bad_argument", "sampler needs matching x and rho tables");
  cdf_.assign(x_.size(), 0.0);
  for (std::size_t i = 1; i < x_.size(); ++i) {
    require(x_[i] > x_[i - 1], "bad_argument", "sampler abscissae must increase");
    require(rho[i] >= 0.0 && rho[i - 1] >= 0.0, "bad_argument", "density must be nonnegative");
    cdf_[i] = cdf_[i - 1] + 0.5 * (rho[i] + rho[i - 1]) * (x_[i] - x_[i - 1]);
  }
  const double total = cdf_.back();
  require(total > 0.0, "bad_argument", "density integrates to zero");
  for (double& c : cdf_) c /= total;
}

double DensitySampler::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return x_.front();
  if (it == cdf_.end()) return x_.back();
  const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  const double c0 = cdf_[i - 1], c1 = cdf_[i];
  const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
  return x_[i - 1] + t * (x_[i] - x_[i - 1]);
}

double DensitySampler::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return quantile(unif(rng));
}

double ks_statistic(std::vector<double> samples, const std::vector<double>& x,
                    const std::vector<double>& cdf) {
  require(!samples.empty(), "bad_argument", "no samples for KS statistic");
  require(x.size() == cdf.size() && x.size() >= 2, "bad_argument", "KS reference tables must match");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  auto ref = [&](double s) {
    if (s <= x.front()) return cdf.front();
    if (s >= x.back()) return cdf.back();
    const auto it = std::upper_bound(x.begin(), x.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double t = (s - x[i - 1]) / (x[i] - x[i - 1]);
    return cdf[i - 1] + t * (cdf[i] - cdf[i - 1]);
  };
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = ref(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

}  // namespace mockq
