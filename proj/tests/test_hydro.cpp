#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "mockq/bohm.hpp"
#include "mockq/error.hpp"
#include "mockq/fourier.hpp"
#include "mockq/hydro.hpp"
#include "mockq/spectral.hpp"

using namespace mockq;

namespace {

constexpr double kPi = std::numbers::pi;

bool throws_code(const std::function<void()>& fn, const std::string& code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

// Node-free random state with a density floor around 1e-3 of the peak, so
// every derived field stays well conditioned.
WaveFunction mild_random_state(const Grid1D& grid, MockPlanck hbar, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-0.3, 0.3);
  std::vector<cdouble> psi(grid.n, 1.0);
  const double L = grid.length();
  for (int mode = 1; mode <= 4; ++mode) {
    const double ar = coeff(rng), ai = coeff(rng), br = coeff(rng), bi = coeff(rng);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double th = 2.0 * kPi * mode * (grid.x(i) - grid.x_min) / L;
      const cdouble g(ar * std::cos(th) + br * std::sin(th),
                      0.4 * (ai * std::cos(th) + bi * std::sin(th)));
      psi[i] *= std::exp(g);
    }
  }
  return WaveFunction(grid, hbar, std::move(psi)).normalized();
}

// Relative residual of the mid snapshot for a short propagated stretch; the
// caller halves grid spacing and snapshot separation together.
double relative_residual(std::size_t n, std::size_t lead_steps, std::size_t gap_steps,
                         bool euler) {
  Grid1D grid(-4.0, 4.0, n);
  std::vector<double> V(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i)
    V[i] = 0.4 * std::cos(2.0 * kPi * (grid.x(i) - grid.x_min) / grid.length());
  HamiltonianSpec spec = Canonical{1.0, V};

  const double dt_int = 2e-5;
  std::vector<HydroFields> snaps;
  WaveFunction cur =
      split_step_evolve(mild_random_state(grid, MockPlanck(1.0), 13), spec, dt_int, lead_steps).psi;
  snaps.push_back(hydro_fields(cur, 1.0, dt_int * static_cast<double>(lead_steps)));
  for (int s = 1; s <= 2; ++s) {
    cur = split_step_evolve(cur, spec, dt_int, gap_steps).psi;
    snaps.push_back(
        hydro_fields(cur, 1.0, dt_int * static_cast<double>(lead_steps + gap_steps * s)));
  }
  const ResidualReport rep = euler ? euler_residual(snaps, V) : continuity_residual(snaps);
  return rep.norm / rep.scale_norm;
}

HydroFields manual_fields(const Grid1D& grid, MockPlanck hbar, double m) {
  std::vector<double> rho(grid.n), v(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double th = 2.0 * kPi * (grid.x(i) - grid.x_min) / grid.length();
    rho[i] = 1.0 + 0.4 * std::cos(th) + 0.15 * std::sin(2.0 * th);
    v[i] = 0.7 * std::sin(th) + 0.2;
  }
  return HydroFields{grid, hbar, m, 0.0, rho, v, std::vector<bool>(grid.n, true)};
}

}  // namespace

TEST_CASE("hydro fields carry density, velocity, and the node mask") {
  Grid1D grid(-8.0, 8.0, 256);
  const double t = 0.4, qc = std::cos(t), pc = -std::sin(t);
  std::vector<cdouble> amp(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    amp[i] = std::pow(kPi, -0.25) *
             std::exp(cdouble(-0.5 * (x - qc) * (x - qc), pc * x - 0.5 * t - 0.5 * pc * qc));
  }
  WaveFunction psi(grid, MockPlanck(1.0), std::move(amp));

  HydroFields f = hydro_fields(psi, 1.0, t);
  CHECK(f.m == 1.0);
  CHECK(f.t == t);
  CHECK(static_cast<double>(f.hbar) == 1.0);

  double max_rho = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    CHECK(f.rho[i] == std::norm(psi.psi[i]));
    max_rho = std::max(max_rho, f.rho[i]);
  }

  // A displaced Gaussian rides at the classical momentum: v is constant.
  std::size_t masked = 0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    if (!f.mask[i]) {
      ++masked;
      CHECK(f.v[i] == 0.0);
    } else if (f.rho[i] >= 1e-8 * max_rho) {
      CHECK(std::abs(f.v[i] - pc) < 1e-6);
    }
  }
  CHECK(masked > 0);  // far tail drops below the node threshold
}

TEST_CASE("quantum stress of a Gaussian is proportional to the density") {
  Grid1D grid(-8.0, 8.0, 256);
  std::vector<double> rho(grid.n);
  double max_rho = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    rho[i] = std::exp(-grid.x(i) * grid.x(i));
    max_rho = std::max(max_rho, rho[i]);
  }
  const double hbar = 0.8, m = 1.7;
  const std::vector<double> sigma = stress_tensor(rho, grid, m, MockPlanck(hbar));
  for (std::size_t i = 0; i < grid.n; ++i)
    if (rho[i] >= 1e-8 * max_rho)
      CHECK(std::abs(sigma[i] - hbar * hbar * rho[i] / (2.0 * m)) < 1e-10);

  CHECK(throws_code([&] { stress_tensor(std::vector<double>(7, 1.0), grid, m, MockPlanck(hbar)); },
                    "grid_mismatch"));
  CHECK(throws_code([&] { stress_tensor(rho, grid, 0.0, MockPlanck(hbar)); }, "bad_argument"));
  std::vector<double> negative = rho;
  negative[10] = -1e-3;
  CHECK(throws_code([&] { stress_tensor(negative, grid, m, MockPlanck(hbar)); }, "bad_argument"));
  CHECK(throws_code([&] { stress_tensor(std::vector<double>(grid.n, 0.0), grid, m,
                                        MockPlanck(hbar)); },
                    "bad_argument"));
}

TEST_CASE("stress divergence over density equals the quantum-potential gradient") {
  Grid1D grid(-4.0, 4.0, 128);
  const double m = 1.3, hbar = 0.7;
  WaveFunction psi = mild_random_state(grid, MockPlanck(hbar), 23);
  std::vector<double> rho(grid.n);
  std::vector<cdouble> sq(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    rho[i] = std::norm(psi.psi[i]);
    sq[i] = std::abs(psi.psi[i]);
  }

  QuantumPotentialField vq = quantum_potential_canonical(WaveFunction(grid, MockPlanck(hbar), sq), m);
  std::vector<double> vqr(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) {
    REQUIRE(vq.valid[i]);
    vqr[i] = vq.values[i].real();
  }
  const std::vector<double> dvq = spectral_derivative_real(vqr, grid, 1);
  const std::vector<double> sigma = stress_tensor(rho, grid, m, MockPlanck(hbar));
  const std::vector<double> dsig = spectral_derivative_real(sigma, grid, 1);
  for (std::size_t i = 0; i < grid.n; ++i) CHECK(std::abs(dsig[i] / rho[i] - dvq[i]) < 1e-9);
}

TEST_CASE("momentum and continuity residuals shrink at second order") {
  const double euler_coarse = relative_residual(64, 8000, 2000, true);
  const double euler_fine = relative_residual(128, 9000, 1000, true);
  CHECK(euler_coarse < 0.2);
  CHECK(std::log2(euler_coarse / euler_fine) > 1.8);

  const double cont_coarse = relative_residual(64, 8000, 2000, false);
  const double cont_fine = relative_residual(128, 9000, 1000, false);
  CHECK(cont_coarse < 0.2);
  CHECK(std::log2(cont_coarse / cont_fine) > 1.8);
}

TEST_CASE("residual evaluation rejects malformed snapshot sets") {
  Grid1D grid(-4.0, 4.0, 64);
  WaveFunction psi = mild_random_state(grid, MockPlanck(1.0), 3);
  HydroFields a = hydro_fields(psi, 1.0, 0.0);
  HydroFields b = hydro_fields(psi, 1.0, 0.1);
  HydroFields c = hydro_fields(psi, 1.0, 0.2);
  std::vector<double> V(grid.n, 0.0);

  CHECK(throws_code([&] { euler_residual({a, b}, V); }, "bad_argument"));
  HydroFields skew = c;
  skew.t = 0.25;
  CHECK(throws_code([&] { euler_residual({a, b, skew}, V); }, "bad_argument"));
  HydroFields rewound = c;
  rewound.t = -0.1;
  CHECK(throws_code([&] { euler_residual({a, rewound, b}, V); }, "bad_argument"));
  CHECK(throws_code([&] { euler_residual({a, b, c}, std::vector<double>(5, 0.0)); },
                    "grid_mismatch"));

  Grid1D other(-4.0, 4.0, 128);
  HydroFields alien = hydro_fields(mild_random_state(other, MockPlanck(1.0), 3), 1.0, 0.2);
  CHECK(throws_code([&] { continuity_residual({a, b, alien}); }, "grid_mismatch"));
}

TEST_CASE("the quantum Reynolds number scales exactly") {
  Grid1D grid(-4.0, 4.0, 128);
  HydroFields base = manual_fields(grid, MockPlanck(1.0), 1.0);
  const ReynoldsReport r1 = quantum_reynolds(base);
  CHECK_FALSE(r1.infinite);
  CHECK(r1.value > 0.0);

  // Halving hbar scales the stress term by exactly 1/4.
  HydroFields half = manual_fields(grid, MockPlanck(0.5), 1.0);
  const ReynoldsReport r2 = quantum_reynolds(half);
  CHECK(r2.value == 4.0 * r1.value);

  // Doubling the density leaves both sides untouched.
  HydroFields doubled = base;
  for (double& r : doubled.rho) r *= 2.0;
  CHECK(quantum_reynolds(doubled).value == r1.value);

  HydroFields flat = base;
  flat.rho.assign(grid.n, 0.3);
  const ReynoldsReport r3 = quantum_reynolds(flat);
  CHECK(r3.infinite);
  CHECK(r3.value == 0.0);
}

TEST_CASE("white noise has a flat structure function") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> white(65536);
    for (double& w : white) w = gauss(rng);
    const ScalingFit fit = structure_scaling(white, 0.01);
    CHECK(std::abs(fit.exponent) < 0.05);
    CHECK(fit.residual < 0.05);
  }
}

TEST_CASE("fractional paths recover twice their Hurst exponent") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const std::vector<double> path = synthesize_hurst_field(65536, 1.0 / 3.0, seed);
    const ScalingFit fit = structure_scaling(path, 0.01);
    CHECK(std::abs(fit.exponent - 2.0 / 3.0) < 0.05);

    REQUIRE(fit.l.size() == fit.D2.size());
    REQUIRE(fit.l.size() == fit.fit_value.size());
    REQUIRE(fit.l.size() >= 8);
    for (std::size_t j = 0; j < fit.l.size(); ++j) {
      CHECK(fit.D2[j] > 0.0);
      if (j > 0) CHECK(fit.l[j] > fit.l[j - 1]);
    }
    // Two-cell increment variance of unit-step fractional motion.
    CHECK(std::abs(fit.D2.front() / std::pow(2.0, 2.0 / 3.0) - 1.0) < 0.05);
  }

  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const std::vector<double> path = synthesize_hurst_field(65536, 0.75, seed);
    CHECK(std::abs(structure_scaling(path, 0.01).exponent - 1.5) < 0.1);
  }

  // The exponent is a pure slope: the grid spacing drops out.
  const std::vector<double> path = synthesize_hurst_field(65536, 1.0 / 3.0, 9);
  CHECK(std::abs(structure_scaling(path, 1.0).exponent -
                 structure_scaling(path, 0.013).exponent) < 1e-9);

  CHECK(synthesize_hurst_field(2048, 0.4, 5) == synthesize_hurst_field(2048, 0.4, 5));
  CHECK(synthesize_hurst_field(2048, 0.4, 5) != synthesize_hurst_field(2048, 0.4, 6));
}

TEST_CASE("scaling fits reject degenerate or underspecified input") {
  CHECK(throws_code([] { structure_scaling(std::vector<double>(65536, 1.0), 0.01); },
                    "degenerate_fit"));
  CHECK(throws_code([] { structure_scaling(std::vector<double>(512, 0.0), 0.01); },
                    "bad_argument"));
  std::vector<double> ramp(4096);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
  CHECK(throws_code([&] { structure_scaling(ramp, 0.01, 4); }, "bad_argument"));
  CHECK(throws_code([&] { structure_scaling(ramp, 0.01, 16, 0.5, 256.0); }, "bad_argument"));
  CHECK(throws_code([&] { structure_scaling(ramp, 0.01, 16, 2.0, 3000.0); }, "bad_argument"));

  CHECK(throws_code([] { synthesize_hurst_field(1000, 0.5, 1); }, "bad_argument"));
  CHECK(throws_code([] { synthesize_hurst_field(1536, 0.5, 1); }, "bad_argument"));
  CHECK(throws_code([] { synthesize_hurst_field(2048, 0.0, 1); }, "bad_argument"));
  CHECK(throws_code([] { synthesize_hurst_field(2048, 1.0, 1); }, "bad_argument"));
}
