#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "mockq/grid.hpp"
#include "mockq/wavefunction.hpp"

namespace mockq {

struct LangevinSpec {
  double lambda;
  double k;
  std::function<double(double)> noise_amplitude;  // N[φ], default 1
  std::function<double(double)> drift;            // F[φ]
  std::uint64_t seed;

  LangevinSpec(double lambda_, double k_, std::function<double(double)> drift_,
               std::uint64_t seed_,
               std::function<double(double)> noise_amplitude_ = nullptr);
};

struct DiscretePath {
  double dt;
  std::vector<double> phi;
  std::vector<double> phi_tilde;  // empty for integrator output
};

// Euler-Maruyama: φ_{j+1} = φ_j + λF[φ_j]dt + √(k·N[φ_j]·λ·dt)·g_j.
DiscretePath langevin_integrate(const LangevinSpec& spec, double phi0, double dt,
                                std::size_t steps);

// F = −dH/dφ by central difference.
std::function<double(double)> drift_classical(const std::function<double(double)>& H);

// F = −d(H+V_Q)/dφ with V_Q tabulated on a grid and cubic-interpolated.
std::function<double(double)> drift_mock(const std::function<double(double)>& H,
                                         const Grid1D& vq_grid, const std::vector<double>& vq);

// J = ∫dt φ̃·(λ⁻¹∂_tφ − F[φ] − (k/2)N[φ]φ̃), trapezoidal in t with centered
// time differences.
double msr_action(const DiscretePath& path, const LangevinSpec& spec);

struct ErgodicityReport {
  double ks;
  std::vector<double> bin_left, bin_right;
  std::vector<double> count;
  std::vector<double> born_density;
  std::size_t reflections;
};

// Osmotic diffusion dQ = (ħ/2m)·∂ log ρ_ψ dt + √(ħ/m)dW, scored against the
// Born law of psi. Reflecting boundaries at the grid edges.
ErgodicityReport born_ergodicity(const WaveFunction& psi, double m, double dt, std::size_t steps,
                                 std::size_t burn_in, std::uint64_t seed, std::size_t bins = 64,
                                 const std::vector<double>* score_rho = nullptr);

}  // namespace mockq
