#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "mockq/grid.hpp"
#include "mockq/hamiltonian.hpp"
#include "mockq/wavefunction.hpp"

namespace mockq {

struct QuantumPotentialField {
  Grid1D grid;
  std::vector<cdouble> values;   // imaginary part is zero except for FullLV
  std::vector<bool> valid;       // false inside node masks
  std::vector<bool> resolvable;  // false where rho is below the conditioning floor
};

// V_Q = −(ħ²/2m)·(√ρ)″/√ρ, masked at nodes.
QuantumPotentialField quantum_potential_canonical(const WaveFunction& psi, double m);

// Ṽ_Q = (1/√ρ)·K(P̂)√ρ for the Hamiltonian's kinetic symbol. For states that are
// real up to a global phase the signed de-phased field replaces √ρ, which
// keeps the input smooth across nodes; elsewhere K is applied to |ψ|.
QuantumPotentialField quantum_potential_general(const WaveFunction& psi, const HamiltonianSpec& spec);

// Number of contiguous masked runs (pole regions) in a field.
std::size_t masked_region_count(const QuantumPotentialField& f);

enum class VqMode { Literal, Consistent };

// Harmonic-oscillator closed form for the ground-state quantum potential of
// the quadratic LV flow, −(ω/2)(Q−A·cos ωt)² + ħω/2 in the literal mode with
// ω = √(ad). The consistent mode returns what direct evaluation of the
// canonical formula gives on the same Gaussian, −(a/2)(Q−A·cos ωt)² + ħ√(ad)/2.
std::vector<double> harmonic_vq_closed_form(int n, double a, double d, MockPlanck hbar, double t,
                                            double A, const Grid1D& grid,
                                            VqMode mode = VqMode::Consistent);

struct EvolveResult {
  WaveFunction psi;
  bool unitary;        // false for FullLV with d < 0 (flagged, not failed)
  double norm_drift;   // |norm_final − norm_initial|
};

// Strang splitting: half potential phase, full kinetic phase in Fourier
// space, half potential phase.
EvolveResult split_step_evolve(const WaveFunction& psi, const HamiltonianSpec& spec, double dt,
                               std::size_t steps);

std::vector<double> bohm_velocity(const WaveFunction& psi, double m);

struct TrajectoryEnsemble {
  std::vector<double> positions;
  std::uint64_t seed;
  double time;
  std::size_t reflections = 0;
};

TrajectoryEnsemble sample_born_ensemble(const WaveFunction& psi, std::size_t walkers,
                                        std::uint64_t seed);

// RK4 walkers through the velocity field of a time-dependent state. The
// provider returns ψ(t) at the requested step times; velocity between grid
// points is cubic-interpolated.
TrajectoryEnsemble propagate_trajectories(const TrajectoryEnsemble& ens,
                                          const std::function<WaveFunction(double)>& psi_at,
                                          double m, double dt, std::size_t steps);

// η = V_Q·ψ, the source that linearizes the nonlinear ψ-equation.
std::vector<cdouble> environment_term_eta(const WaveFunction& psi, const HamiltonianSpec& spec);

}  // namespace mockq
