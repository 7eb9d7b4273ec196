#include "mockq/variety.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mockq/error.hpp"
#include "mockq/fourier.hpp"
#include "mockq/random.hpp"

namespace mockq {

namespace {

void check_views(const RelationalSystem& sys) {
  require(sys.views.size() >= 2, "bad_argument", "a relational system needs at least two elements");
  const std::size_t dim = sys.views.front().size();
  require(dim >= 1, "bad_argument", "views must have at least one coordinate");
  for (const auto& v : sys.views) {
    require(v.size() == dim, "bad_argument", "views must share one dimension");
    for (double x : v) require(std::isfinite(x), "bad_argument", "non-finite view coordinate");
  }
}

}  // namespace

double distinctiveness(const RelationalSystem& sys, std::size_t i, std::size_t j) {
  check_views(sys);
  require(i < sys.views.size() && j < sys.views.size(), "bad_argument", "view index out of range");
  require(i != j, "bad_argument", "distinctiveness needs two distinct elements");
  double acc = 0.0;
  for (std::size_t d = 0; d < sys.views[i].size(); ++d) {
    const double diff = sys.views[i][d] - sys.views[j][d];
    acc += diff * diff;
  }
  return acc;
}

double discrete_variety(const RelationalSystem& sys) {
  check_views(sys);
  const double N = static_cast<double>(sys.views.size());
  const std::size_t dim = sys.views.front().size();
  // sum_{i != j} (v_i - v_j)^2 = 2N sum v^2 - 2 (sum v)^2, per coordinate.
  double total = 0.0;
  for (std::size_t d = 0; d < dim; ++d) {
    double s = 0.0, s2 = 0.0;
    for (const auto& v : sys.views) {
      s += v[d];
      s2 += v[d] * v[d];
    }
    total += 2.0 * N * s2 - 2.0 * s * s;
  }
  return total / (N * (N - 1.0));
}

ContinuumVariety continuum_variety(const std::vector<double>& rho, const Grid1D& grid) {
  require(rho.size() == grid.n, "grid_mismatch", "density length does not match grid");
  double max_rho = 0.0;
  for (double r : rho) {
    require(r >= 0.0 && std::isfinite(r), "bad_argument", "density must be finite, nonnegative");
    max_rho = std::max(max_rho, r);
  }
  require(max_rho > 0.0, "bad_argument", "zero density");

  const std::vector<double> d1 = spectral_derivative_real(rho, grid, 1);
  const double thresh = 1e-12 * max_rho;
  double acc = 0.0;
  std::size_t masked = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (rho[i] < thresh) {
      ++masked;
      continue;
    }
    acc += d1[i] * d1[i] / rho[i];
  }
  ContinuumVariety out;
  out.value = acc * grid.dx();
  out.mask_fraction = static_cast<double>(masked) / static_cast<double>(grid.n);
  out.reliable = out.mask_fraction <= 0.1;
  return out;
}

FisherIdentityReport variety_fisher_identity(const std::vector<double>& rho, const Grid1D& grid,
                                             double m, MockPlanck hbar) {
  require(rho.size() == grid.n, "grid_mismatch", "density length does not match grid");
  require(m > 0.0, "bad_argument", "mass must be positive");

  double max_rho = 0.0;
  for (double r : rho) max_rho = std::max(max_rho, r);
  require(max_rho > 0.0, "bad_argument", "zero density");

  // Integration by parts drops the boundary term when the window is
  // periodic-consistent or the density has decayed at the edges.
  const bool decayed = rho.front() <= 1e-8 * max_rho && rho.back() <= 1e-8 * max_rho;
  const bool wraps = std::abs(rho.front() - rho.back()) <= 1e-8 * max_rho;

  // Left side: integral of rho V_Q with the canonical quantum potential
  // -(hbar^2/2m)(sqrt rho)''/sqrt rho, all spectral on sqrt rho.
  std::vector<double> root(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) root[i] = std::sqrt(std::max(0.0, rho[i]));
  const std::vector<double> root2 = spectral_derivative_real(root, grid, 2);
  const double g = hbar * hbar / (2.0 * m);
  double lhs = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) lhs += -g * root[i] * root2[i];
  lhs *= grid.dx();

  const ContinuumVariety cv = continuum_variety(rho, grid);
  const double rhs = hbar * hbar / (8.0 * m) * cv.value;

  FisherIdentityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.residual = std::abs(lhs - rhs);
  rep.applicable = decayed || wraps;
  return rep;
}

RelationalSystem density_contrast_views(const std::vector<double>& rho, const Grid1D& grid,
                                        std::size_t n_samples, std::uint64_t seed) {
  require(rho.size() == grid.n, "grid_mismatch", "density length does not match grid");
  require(n_samples >= 64, "bad_argument", "need at least 64 samples for stable views");

  DensitySampler sampler(grid.xs(), rho);
  std::mt19937_64 rng = make_engine(seed, 0);
  std::vector<double> pts(n_samples);
  for (double& p : pts) p = sampler.sample(rng);

  // Kernel density and its slope on a fixed evaluation grid; bandwidth is a
  // deliberately under-smoothed Silverman rule so ranking stays sensitive to
  // genuine density structure.
  double mean = std::accumulate(pts.begin(), pts.end(), 0.0) / static_cast<double>(n_samples);
  double var = 0.0;
  for (double p : pts) var += (p - mean) * (p - mean);
  var /= static_cast<double>(n_samples - 1);
  const double bw = 0.75 * 1.06 * std::sqrt(var) *
                    std::pow(static_cast<double>(n_samples), -0.2);
  require(bw > 0.0, "bad_argument", "degenerate sample spread");

  constexpr std::size_t kEval = 1024;
  const double lo = grid.x_min, hi = grid.x_max;
  const double step = (hi - lo) / static_cast<double>(kEval - 1);
  std::vector<double> fhat(kEval, 0.0), fhat1(kEval, 0.0);
  const double inv_bw = 1.0 / bw;
  for (double p : pts) {
    // Gaussian kernel contributions, truncated at 8 bandwidths.
    const double reach = 8.0 * bw;
    const std::size_t j0 = static_cast<std::size_t>(
        std::clamp((p - reach - lo) / step, 0.0, static_cast<double>(kEval - 1)));
    const std::size_t j1 = static_cast<std::size_t>(
        std::clamp((p + reach - lo) / step, 0.0, static_cast<double>(kEval - 1)));
    for (std::size_t j = j0; j <= j1; ++j) {
      const double z = (lo + step * static_cast<double>(j) - p) * inv_bw;
      const double w = std::exp(-0.5 * z * z);
      fhat[j] += w;
      fhat1[j] += -z * inv_bw * w;
    }
  }

  RelationalSystem sys;
  sys.views.reserve(n_samples);
  for (double p : pts) {
    double s = std::clamp((p - lo) / step, 0.0, static_cast<double>(kEval - 1));
    std::size_t j = static_cast<std::size_t>(s);
    if (j > kEval - 2) j = kEval - 2;
    const double t = s - static_cast<double>(j);
    const double f = (1.0 - t) * fhat[j] + t * fhat[j + 1];
    const double f1 = (1.0 - t) * fhat1[j] + t * fhat1[j + 1];
    const double view = f > 0.0 ? f1 / f : 0.0;
    sys.views.push_back({view});
  }
  return sys;
}

double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b) {
  require(a.size() == b.size() && a.size() >= 3, "bad_argument", "need matched samples");
  auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  require(va > 0.0 && vb > 0.0, "bad_argument", "constant ranks have no correlation");
  return cov / std::sqrt(va * vb);
}

}  // namespace mockq
