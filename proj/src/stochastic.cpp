#include "mockq/stochastic.hpp"

#include <algorithm>
#include <cmath>

#include "mockq/error.hpp"
#include "mockq/fourier.hpp"
#include "mockq/random.hpp"

namespace mockq {

LangevinSpec::LangevinSpec(double lambda_, double k_, std::function<double(double)> drift_,
                           std::uint64_t seed_, std::function<double(double)> noise_amplitude_)
    : lambda(lambda_), k(k_), noise_amplitude(std::move(noise_amplitude_)),
      drift(std::move(drift_)), seed(seed_) {
  require(lambda > 0.0, "bad_argument", "kinetic coefficient lambda must be positive");
  require(k >= 0.0, "bad_argument", "noise strength k must be nonnegative");
  require(static_cast<bool>(drift), "bad_argument", "drift function required");
  if (!noise_amplitude) noise_amplitude = [](double) { return 1.0; };
}

DiscretePath langevin_integrate(const LangevinSpec& spec, double phi0, double dt,
                                std::size_t steps) {
  require(dt > 0.0, "bad_argument", "time step must be positive");
  {
    const double h = 1e-6 * std::max(1.0, std::abs(phi0));
    const double dF = (spec.drift(phi0 + h) - spec.drift(phi0 - h)) / (2.0 * h);
    require(dt * spec.lambda * std::abs(dF) < 0.1, "step_too_large",
            "dt too coarse for the drift stiffness at the initial value");
  }

  std::mt19937_64 rng = make_engine(spec.seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  DiscretePath path{dt, std::vector<double>(steps + 1), {}};
  double phi = phi0;
  path.phi[0] = phi;
  for (std::size_t j = 0; j < steps; ++j) {
    const double N = spec.noise_amplitude(phi);
    require(N > 0.0, "bad_argument", "noise amplitude must stay positive");
    double incr = spec.lambda * spec.drift(phi) * dt;
    if (spec.k > 0.0) incr += std::sqrt(spec.k * N * spec.lambda * dt) * gauss(rng);
    phi += incr;
    if (std::abs(phi) > 1e10)
      throw Error("blow_up", "path diverged at step " + std::to_string(j + 1));
    path.phi[j + 1] = phi;
  }
  return path;
}

std::function<double(double)> drift_classical(const std::function<double(double)>& H) {
  require(static_cast<bool>(H), "bad_argument", "potential function required");
  return [H](double phi) {
    const double h = 1e-6 * std::max(1.0, std::abs(phi));
    return -(H(phi + h) - H(phi - h)) / (2.0 * h);
  };
}

namespace {

double cubic_interp_clamped(const Grid1D& g, const std::vector<double>& f, double x) {
  require(x >= g.x_min && x <= g.x_max, "extrapolation",
          "field excursion outside the tabulated range");
  double s = (x - g.x_min) / g.dx();
  const double n = static_cast<double>(g.n);
  s = std::clamp(s, 0.0, n - 1.0);
  std::size_t i1 = static_cast<std::size_t>(s);
  if (i1 > g.n - 2) i1 = g.n - 2;
  const double t = s - static_cast<double>(i1);
  const auto clamp_idx = [&](long j) {
    return static_cast<std::size_t>(std::clamp<long>(j, 0, static_cast<long>(g.n) - 1));
  };
  const double p0 = f[clamp_idx(static_cast<long>(i1) - 1)];
  const double p1 = f[i1];
  const double p2 = f[clamp_idx(static_cast<long>(i1) + 1)];
  const double p3 = f[clamp_idx(static_cast<long>(i1) + 2)];
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

}  // namespace

std::function<double(double)> drift_mock(const std::function<double(double)>& H,
                                         const Grid1D& vq_grid, const std::vector<double>& vq) {
  require(static_cast<bool>(H), "bad_argument", "potential function required");
  require(vq.size() == vq_grid.n, "grid_mismatch", "quantum-potential table does not match grid");
  const Grid1D grid = vq_grid;
  const std::vector<double> table = vq;
  return [H, grid, table](double phi) {
    const double h = 1e-6 * std::max(1.0, std::abs(phi));
    const double up = H(phi + h) + cubic_interp_clamped(grid, table, phi + h);
    const double dn = H(phi - h) + cubic_interp_clamped(grid, table, phi - h);
    return -(up - dn) / (2.0 * h);
  };
}

double msr_action(const DiscretePath& path, const LangevinSpec& spec) {
  const std::size_t T = path.phi.size();
  require(T >= 3, "bad_argument", "need at least three time samples");
  require(path.phi_tilde.size() == T, "bad_argument", "response field missing or mismatched");
  const double dt = path.dt;

  auto dphi = [&](std::size_t j) {
    if (j == 0) return (path.phi[1] - path.phi[0]) / dt;
    if (j == T - 1) return (path.phi[T - 1] - path.phi[T - 2]) / dt;
    return (path.phi[j + 1] - path.phi[j - 1]) / (2.0 * dt);
  };

  double J = 0.0;
  for (std::size_t j = 0; j < T; ++j) {
    const double phi = path.phi[j];
    const double pt = path.phi_tilde[j];
    const double g = pt * (dphi(j) / spec.lambda - spec.drift(phi) -
                           0.5 * spec.k * spec.noise_amplitude(phi) * pt);
    const double w = (j == 0 || j == T - 1) ? 0.5 : 1.0;
    J += w * g * dt;
  }
  return J;
}

ErgodicityReport born_ergodicity(const WaveFunction& psi, double m, double dt, std::size_t steps,
                                 std::size_t burn_in, std::uint64_t seed, std::size_t bins,
                                 const std::vector<double>* score_rho) {
  require(m > 0.0, "bad_argument", "mass must be positive");
  require(dt > 0.0 && steps > burn_in, "bad_argument", "need steps beyond the burn-in");
  require(bins >= 8, "bad_argument", "need at least 8 bins");
  const Grid1D& grid = psi.grid;
  const std::size_t n = grid.n;
  const double hbar = psi.hbar;

  // Drift (hbar/2m) d log rho / dQ, tabulated once and cubic-interpolated.
  std::vector<double> rho(n);
  double max_rho = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rho[i] = std::norm(psi.psi[i]);
    max_rho = std::max(max_rho, rho[i]);
  }
  require(max_rho > 0.0, "degenerate_state", "zero wavefunction");
  const std::vector<double> drho = spectral_derivative_real(rho, grid, 1);
  std::vector<double> drift(n);
  const double floor = 1e-14 * max_rho;
  for (std::size_t i = 0; i < n; ++i)
    drift[i] = 0.5 * hbar / m * drho[i] / std::max(rho[i], floor);

  std::mt19937_64 rng = make_engine(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise = std::sqrt(hbar / m * dt);
  const double lo = grid.x_min, hi = grid.x_max;

  double Q = 0.5 * (lo + hi);
  std::size_t reflections = 0;
  std::vector<double> samples;
  samples.reserve(steps - burn_in);
  for (std::size_t s = 0; s < steps; ++s) {
    Q += cubic_interp_clamped(grid, drift, Q) * dt + noise * gauss(rng);
    for (int guard = 0; guard < 64 && (Q < lo || Q > hi); ++guard) {
      if (Q > hi) Q = 2.0 * hi - Q;
      if (Q < lo) Q = 2.0 * lo - Q;
      ++reflections;
    }
    Q = std::clamp(Q, lo, hi);
    if (s >= burn_in) samples.push_back(Q);
  }

  // Score target: |psi|^2 by default, or a caller-supplied density.
  std::vector<double> target = score_rho ? *score_rho : rho;
  require(target.size() == n, "grid_mismatch", "score density does not match grid");
  std::vector<double> cdf(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (target[i] + target[i - 1]) * grid.dx();
  const double total = cdf.back();
  require(total > 0.0, "bad_argument", "score density integrates to zero");
  for (double& c : cdf) c /= total;

  ErgodicityReport rep;
  rep.reflections = reflections;
  rep.ks = ks_statistic(samples, grid.xs(), cdf);

  rep.bin_left.resize(bins);
  rep.bin_right.resize(bins);
  rep.count.assign(bins, 0.0);
  rep.born_density.resize(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    rep.bin_left[b] = lo + width * static_cast<double>(b);
    rep.bin_right[b] = rep.bin_left[b] + width;
    const double center = rep.bin_left[b] + 0.5 * width;
    const std::size_t gi = std::min(
        n - 1, static_cast<std::size_t>(std::max(0.0, (center - lo) / grid.dx() + 0.5)));
    rep.born_density[b] = target[gi] / total;
  }
  for (double q : samples) {
    std::size_t b = static_cast<std::size_t>((q - lo) / width);
    if (b >= bins) b = bins - 1;
    rep.count[b] += 1.0;
  }
  return rep;
}

}  // namespace mockq
