#include "mockq/hydro.hpp"

#include <algorithm>
#include <cmath>

#include "mockq/bohm.hpp"
#include "mockq/error.hpp"
#include "mockq/fourier.hpp"
#include "mockq/random.hpp"

namespace mockq {

HydroFields hydro_fields(const WaveFunction& psi, double m, double t) {
  const std::size_t n = psi.grid.n;
  HydroFields f{psi.grid, psi.hbar, m, t, std::vector<double>(n), bohm_velocity(psi, m),
                std::vector<bool>(n, true)};
  const double thresh2 = node_threshold(psi) * node_threshold(psi);
  for (std::size_t i = 0; i < n; ++i) {
    f.rho[i] = std::norm(psi.psi[i]);
    if (f.rho[i] < thresh2) f.mask[i] = false;
  }
  return f;
}

std::vector<double> stress_tensor(const std::vector<double>& rho, const Grid1D& grid, double m,
                                  MockPlanck hbar) {
  require(rho.size() == grid.n, "grid_mismatch", "density length does not match grid");
  require(m > 0.0, "bad_argument", "mass must be positive");
  double max_rho = 0.0;
  for (double r : rho) {
    require(r >= 0.0, "bad_argument", "negative density sample");
    max_rho = std::max(max_rho, r);
  }
  require(max_rho > 0.0, "bad_argument", "zero density");

  // sigma = -(hbar^2 rho / 4m) d^2 log rho, expanded through derivatives of
  // rho itself: rho d^2 log rho = rho'' - rho'^2 / rho. The density is the
  // periodic-smooth object here, so its spectral derivatives converge even
  // when log rho has a non-periodic trend across the window.
  const std::vector<double> d1 = spectral_derivative_real(rho, grid, 1);
  const std::vector<double> d2 = spectral_derivative_real(rho, grid, 2);
  const double floor = 1e-300;
  std::vector<double> sigma(grid.n);
  const double coef = -hbar * hbar / (4.0 * m);
  for (std::size_t i = 0; i < grid.n; ++i)
    sigma[i] = coef * (d2[i] - d1[i] * d1[i] / std::max(rho[i], floor));
  return sigma;
}

namespace {

std::vector<double> centered_fd1(const std::vector<double>& f, double dx) {
  const std::size_t n = f.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n;
    const std::size_t im = (i + n - 1) % n;
    out[i] = (f[ip] - f[im]) / (2.0 * dx);
  }
  return out;
}

void check_snapshots(const std::vector<HydroFields>& snaps) {
  require(snaps.size() >= 3, "bad_argument", "need at least three snapshots");
  const double dt = snaps[1].t - snaps[0].t;
  require(dt > 0.0, "bad_argument", "snapshots must advance in time");
  for (std::size_t s = 1; s < snaps.size(); ++s) {
    require(snaps[s].grid == snaps[0].grid, "grid_mismatch", "snapshots on different grids");
    require(std::abs((snaps[s].t - snaps[s - 1].t) - dt) < 1e-9 * dt, "bad_argument",
            "snapshots must be uniformly spaced in time");
  }
}

double masked_l2(const std::vector<double>& f, const std::vector<bool>& mask, double dx) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (mask[i]) acc += f[i] * f[i];
  return std::sqrt(acc * dx);
}

std::vector<bool> and_masks(const HydroFields& a, const HydroFields& b, const HydroFields& c) {
  std::vector<bool> m(a.mask.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = a.mask[i] && b.mask[i] && c.mask[i];
  return m;
}

}  // namespace

ResidualReport euler_residual(const std::vector<HydroFields>& snapshots,
                              const std::vector<double>& V) {
  check_snapshots(snapshots);
  const std::size_t c = snapshots.size() / 2;
  const HydroFields& prev = snapshots[c - 1];
  const HydroFields& mid = snapshots[c];
  const HydroFields& next = snapshots[c + 1];
  const Grid1D& grid = mid.grid;
  require(V.size() == grid.n, "grid_mismatch", "potential length does not match grid");
  const double dt = mid.t - prev.t;
  const double dx = grid.dx();

  // Space derivatives at matching (second) order so the convergence study
  // sees a clean joint order in dt and dx.
  const std::vector<double> dv = centered_fd1(mid.v, dx);
  const std::vector<double> dV = centered_fd1(V, dx);
  const std::vector<double> sigma = stress_tensor(mid.rho, grid, mid.m, mid.hbar);
  const std::vector<double> dsigma = centered_fd1(sigma, dx);

  ResidualReport rep;
  rep.residual.resize(grid.n);
  std::vector<double> dtv(grid.n);
  const double floor = 1e-300;
  for (std::size_t i = 0; i < grid.n; ++i) {
    dtv[i] = (next.v[i] - prev.v[i]) / (2.0 * dt);
    rep.residual[i] = dtv[i] + mid.v[i] * dv[i] + dV[i] / mid.m +
                      dsigma[i] / (mid.m * std::max(mid.rho[i], floor));
  }
  const std::vector<bool> mask = and_masks(prev, mid, next);
  rep.norm = masked_l2(rep.residual, mask, dx);
  rep.scale_norm = masked_l2(dtv, mask, dx);
  return rep;
}

ResidualReport continuity_residual(const std::vector<HydroFields>& snapshots) {
  check_snapshots(snapshots);
  const std::size_t c = snapshots.size() / 2;
  const HydroFields& prev = snapshots[c - 1];
  const HydroFields& mid = snapshots[c];
  const HydroFields& next = snapshots[c + 1];
  const Grid1D& grid = mid.grid;
  const double dt = mid.t - prev.t;
  const double dx = grid.dx();

  std::vector<double> flux(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) flux[i] = mid.rho[i] * mid.v[i];
  const std::vector<double> dflux = centered_fd1(flux, dx);

  ResidualReport rep;
  rep.residual.resize(grid.n);
  std::vector<double> dtrho(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    dtrho[i] = (next.rho[i] - prev.rho[i]) / (2.0 * dt);
    rep.residual[i] = dtrho[i] + dflux[i];
  }
  const std::vector<bool> mask = and_masks(prev, mid, next);
  rep.norm = masked_l2(rep.residual, mask, dx);
  rep.scale_norm = masked_l2(dtrho, mask, dx);
  return rep;
}

ReynoldsReport quantum_reynolds(const HydroFields& fields) {
  const Grid1D& grid = fields.grid;
  const double dx = grid.dx();
  const std::vector<double> dv = spectral_derivative_real(fields.v, grid, 1);
  const std::vector<double> sigma = stress_tensor(fields.rho, grid, fields.m, fields.hbar);
  const std::vector<double> dsigma = spectral_derivative_real(sigma, grid, 1);

  std::vector<double> advection(grid.n), stress(grid.n);
  const double floor = 1e-300;
  for (std::size_t i = 0; i < grid.n; ++i) {
    advection[i] = fields.v[i] * dv[i];
    stress[i] = dsigma[i] / (fields.m * std::max(fields.rho[i], floor));
  }
  const double num = masked_l2(advection, fields.mask, dx);
  const double den = masked_l2(stress, fields.mask, dx);
  if (den < 1e-300 || !std::isfinite(num / den)) return ReynoldsReport{0.0, true};
  return ReynoldsReport{num / den, false};
}

ScalingFit structure_scaling(const std::vector<double>& field, double dx, std::size_t n_l,
                             double l_min_cells, double l_max_cells) {
  const std::size_t n = field.size();
  require(n >= 1024, "bad_argument", "field too short for scaling estimates");
  require(n_l >= 8, "bad_argument", "need at least 8 separations");
  require(l_min_cells >= 1.0 && l_max_cells > l_min_cells && l_max_cells < n / 2.0,
          "bad_argument", "separation window out of range");

  // Log-spaced integer separations, deduplicated.
  std::vector<std::size_t> lags;
  for (std::size_t j = 0; j < n_l; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(n_l - 1);
    const double l = l_min_cells * std::pow(l_max_cells / l_min_cells, f);
    const std::size_t lag = static_cast<std::size_t>(std::llround(l));
    if (lags.empty() || lag > lags.back()) lags.push_back(lag);
  }
  require(lags.size() >= 8, "bad_argument", "separation window collapsed under rounding");

  ScalingFit fit;
  for (std::size_t lag : lags) {
    double acc = 0.0;
    const std::size_t count = n - lag;  // non-circular increments
    for (std::size_t i = 0; i < count; ++i) {
      const double d = field[i + lag] - field[i];
      acc += d * d;
    }
    const double D = acc / static_cast<double>(count);
    if (!(D > 0.0)) throw Error("degenerate_fit", "structure function vanished at a separation");
    fit.l.push_back(static_cast<double>(lag) * dx);
    fit.D2.push_back(D);
  }

  // Least squares in log-log.
  const std::size_t m = fit.l.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double X = std::log(fit.l[j]);
    const double Y = std::log(fit.D2[j]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  const double denom = m * sxx - sx * sx;
  fit.exponent = (m * sxy - sx * sy) / denom;
  const double intercept = (sy - fit.exponent * sx) / m;
  double rss = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    fit.fit_value.push_back(std::exp(intercept + fit.exponent * std::log(fit.l[j])));
    const double r = std::log(fit.D2[j]) - (intercept + fit.exponent * std::log(fit.l[j]));
    rss += r * r;
  }
  fit.residual = std::sqrt(rss / m);
  return fit;
}

std::vector<double> synthesize_hurst_field(std::size_t n, double hurst, std::uint64_t seed) {
  require(n >= 1024 && (n & (n - 1)) == 0, "bad_argument", "need a power-of-two length >= 1024");
  require(hurst > 0.0 && hurst < 1.0, "bad_argument", "Hurst exponent must lie in (0,1)");

  // Exact fractional-Gaussian-noise covariance, embedded in a circulant of
  // size 2n whose eigenvalues are nonnegative for H in (0,1).
  const std::size_t M = 2 * n;
  auto gamma = [&](double j) {
    const double tw = 2.0 * hurst;
    return 0.5 * (std::pow(std::abs(j + 1), tw) - 2.0 * std::pow(std::abs(j), tw) +
                  std::pow(std::abs(j - 1), tw));
  };
  std::vector<cdouble> c(M);
  for (std::size_t j = 0; j <= n; ++j) c[j] = gamma(static_cast<double>(j));
  for (std::size_t j = 1; j < n; ++j) c[M - j] = c[j];

  const std::vector<cdouble> lambda = fft(c);
  auto lam = [&](std::size_t j) { return std::max(0.0, lambda[j].real()); };

  std::mt19937_64 rng = make_engine(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cdouble> xi(M);
  xi[0] = gauss(rng) * std::sqrt(lam(0));
  xi[n] = gauss(rng) * std::sqrt(lam(n));
  for (std::size_t j = 1; j < n; ++j) {
    const double re = gauss(rng), im = gauss(rng);
    xi[j] = cdouble(re, im) * std::sqrt(0.5 * lam(j));
    xi[M - j] = std::conj(xi[j]);
  }
  const std::vector<cdouble> spectrum_draw = fft(xi);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M));

  // Integrate the noise into fractional Brownian motion.
  std::vector<double> path(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += spectrum_draw[i].real() * scale;
    path[i] = acc;
  }
  return path;
}

}  // namespace mockq
