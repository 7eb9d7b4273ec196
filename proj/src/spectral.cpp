#include "mockq/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mockq/error.hpp"
#include "mockq/fourier.hpp"
#include "mockq/random.hpp"

namespace mockq {

OperatorMatrix discretize(const HamiltonianSpec& spec, const Grid1D& grid, MockPlanck hbar) {
  const std::size_t n = grid.n;
  const auto mult = kinetic_multiplier(spec, hbar, grid);

  // Kinetic part: circulant matrix whose symbol is the multiplier. The first
  // column is the inverse transform of the multiplier samples.
  std::vector<cdouble> symbol(n);
  for (std::size_t j = 0; j < n; ++j) symbol[j] = mult(grid.k(j));
  const std::vector<cdouble> col = ifft(symbol);

  Eigen::MatrixXcd M(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) M(r, c) = col[(n + r - c) % n];

  const std::vector<double> V = potential_values(spec, grid);
  for (std::size_t i = 0; i < n; ++i) M(i, i) += V[i];

  double max_abs = 0.0, max_skew = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      max_abs = std::max(max_abs, std::abs(M(r, c)));
      max_skew = std::max(max_skew, std::abs(M(r, c) - std::conj(M(c, r))));
    }
  const bool hermitian = max_skew < 1e-10 * max_abs;
  return OperatorMatrix{grid, hbar, std::move(M), hermitian};
}

std::vector<cdouble> apply(const OperatorMatrix& op, const std::vector<cdouble>& psi) {
  require(psi.size() == op.grid.n, "grid_mismatch", "state length does not match operator");
  Eigen::Map<const Eigen::VectorXcd> v(psi.data(), psi.size());
  Eigen::VectorXcd out = op.matrix * v;
  return std::vector<cdouble>(out.data(), out.data() + out.size());
}

Spectrum eigensolve(const OperatorMatrix& op, std::size_t k) {
  const std::size_t n = op.grid.n;
  require(k >= 1 && k <= n / 4, "bad_argument",
          "requested level count exceeds the trustworthy fraction n/4");
  require(op.hermitian, "solver_error", "eigensolve requires a Hermitian operator");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix);
  require(solver.info() == Eigen::Success, "solver_error", "dense eigensolver failed to converge");

  const double dx = op.grid.dx();
  Spectrum spec;
  spec.pairs.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double E = solver.eigenvalues()(i);
    Eigen::VectorXcd vec = solver.eigenvectors().col(i);
    const Eigen::VectorXcd resid = op.matrix * vec - E * vec;
    const double residual = resid.norm() * std::sqrt(dx);
    vec /= std::sqrt(dx);  // unit matrix 2-norm -> unit grid L2 norm
    std::vector<cdouble> amps(vec.data(), vec.data() + vec.size());
    spec.pairs.push_back(EigenPair{cdouble(E, 0.0),
                                   WaveFunction(op.grid, op.hbar, std::move(amps)), residual});
  }
  return spec;
}

WaveFunction hermite_eigenstate(int n, double m, double omega, MockPlanck hbar,
                                const Grid1D& grid) {
  require(n >= 0 && n <= 20, "bad_argument", "level index outside the recurrence-stable range");
  require(m > 0.0 && omega > 0.0, "bad_argument", "mass and frequency must be positive");
  const double alpha = std::sqrt(m * omega / hbar);  // y = alpha x

  // Normalized Hermite functions h_k(y) via the stable recurrence
  // h_{k+1} = y sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}.
  std::vector<cdouble> amps(grid.n);
  double max_amp = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double y = alpha * grid.x(i);
    double h_prev = 0.0;
    double h = std::pow(M_PI, -0.25) * std::exp(-0.5 * y * y);
    for (int k = 0; k < n; ++k) {
      const double h_next =
          y * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(static_cast<double>(k) / (k + 1)) * h_prev;
      h_prev = h;
      h = h_next;
    }
    const double value = std::sqrt(alpha) * h;
    amps[i] = value;
    max_amp = std::max(max_amp, std::abs(value));
  }
  const double edge = std::max(std::abs(amps.front()), std::abs(amps.back()));
  require(edge <= 1e-8 * max_amp, "truncation_error",
          "grid too small: eigenstate amplitude at the domain edge exceeds 1e-8 of peak");
  return WaveFunction(grid, hbar, std::move(amps)).normalized();
}

double imaginary_time_ground_energy(const HamiltonianSpec& spec, const Grid1D& grid,
                                    MockPlanck hbar, double beta, std::size_t steps,
                                    std::uint64_t seed) {
  require(beta > 0.0 && steps >= 10, "bad_argument", "need positive beta and at least 10 steps");
  const double dtau = beta / static_cast<double>(steps);
  const auto mult = kinetic_multiplier(spec, hbar, grid);
  const std::vector<double> V = potential_values(spec, grid);
  const std::size_t n = grid.n;

  std::vector<double> half_v(n), kin(n);
  for (std::size_t i = 0; i < n; ++i) half_v[i] = std::exp(-0.5 * dtau * V[i]);
  for (std::size_t j = 0; j < n; ++j) kin[j] = std::exp(-dtau * mult(grid.k(j)));

  std::mt19937_64 rng = make_engine(seed, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cdouble> psi(n);
  for (cdouble& a : psi) a = cdouble(gauss(rng), gauss(rng));

  auto step = [&](std::vector<cdouble>& s) {
    for (std::size_t i = 0; i < n; ++i) s[i] *= half_v[i];
    std::vector<cdouble> hat = fft(s);
    for (std::size_t j = 0; j < n; ++j) hat[j] *= kin[j];
    s = ifft(hat);
    for (std::size_t i = 0; i < n; ++i) s[i] *= half_v[i];
  };
  auto renorm = [&](std::vector<cdouble>& s) {
    double acc = 0.0;
    for (const cdouble& a : s) acc += std::norm(a);
    const double nn = std::sqrt(acc);
    require(nn > 0.0, "solver_error", "imaginary-time flow annihilated the state");
    for (cdouble& a : s) a /= nn;
    return nn;
  };

  renorm(psi);
  double decay = 0.0;
  for (std::size_t j = 0; j < steps; ++j) {
    step(psi);
    decay = renorm(psi);
  }
  // After projection has converged the per-step decay is e^{-E0 dtau}, with a
  // Strang bias of order dtau^2. Average two final steps to damp roundoff.
  step(psi);
  const double d2 = renorm(psi);
  return -0.5 * (std::log(decay) + std::log(d2)) / dtau;
}

}  // namespace mockq
