#pragma once
#include <complex>
#include <optional>
#include <vector>

#include "mockq/grid.hpp"

namespace mockq {

using cdouble = std::complex<double>;

struct WaveFunction {
  Grid1D grid;
  MockPlanck hbar;
  std::vector<cdouble> psi;

  WaveFunction(Grid1D g, MockPlanck h, std::vector<cdouble> amplitudes);

  double norm() const;
  WaveFunction normalized() const;
  double max_abs() const;
};

struct MadelungFields {
  Grid1D grid;
  MockPlanck hbar;
  std::vector<double> rho;
  std::vector<double> S;
  std::vector<double> v;                 // ∇S/m (momentum field ∇S when no mass given)
  std::vector<bool> s_interpolated;      // true where S was filled across a node
};

// Amplitudes below node_threshold(psi) count as nodes for phase handling.
double node_threshold(const WaveFunction& psi);

// Global phase θ with ψ ≈ e^{iθ}·(real field), from ½·arg(Σψ²).
double global_phase(const WaveFunction& psi);

// True when e^{-iθ}ψ is real to within tol·max|ψ|.
bool real_up_to_phase(const WaveFunction& psi, double tol = 1e-9);

// Polar decomposition ψ = √ρ·e^{iS/ħ}. S is unwrapped cumulatively from the
// grid midpoint; across nodes it is linearly interpolated and flagged. The
// velocity is computed from the probability current, not from ∇S, which keeps
// it finite near nodes. Without a mass the momentum field ∇S is returned.
MadelungFields to_madelung(const WaveFunction& psi, std::optional<double> mass = std::nullopt);

WaveFunction from_madelung(const MadelungFields& fields, MockPlanck hbar);

// Remove the global phase freedom: returns a·ψ with |a| = 1 chosen so that ψ
// best matches ref in the L2 sense.
WaveFunction align_phase(const WaveFunction& psi, const WaveFunction& ref);

}  // namespace mockq
