#pragma once
#include <Eigen/Dense>
#include <vector>

#include "mockq/grid.hpp"
#include "mockq/hamiltonian.hpp"
#include "mockq/wavefunction.hpp"

namespace mockq {

struct OperatorMatrix {
  Grid1D grid;
  MockPlanck hbar;
  Eigen::MatrixXcd matrix;
  bool hermitian;
};

struct EigenPair {
  cdouble energy;
  WaveFunction state;
  double residual;
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // sorted by Re(E)
};

// Dense grid representation: circulant kinetic matrix from the Fourier
// multiplier plus the diagonal potential.
OperatorMatrix discretize(const HamiltonianSpec& spec, const Grid1D& grid, MockPlanck hbar);

Spectrum eigensolve(const OperatorMatrix& op, std::size_t k);

std::vector<cdouble> apply(const OperatorMatrix& op, const std::vector<cdouble>& psi);

// Analytic oscillator eigenstate, normalized on the grid. Built from the
// Hermite recurrence in y = Q·sqrt(m omega / hbar).
WaveFunction hermite_eigenstate(int n, double m, double omega, MockPlanck hbar, const Grid1D& grid);

// Ground energy from the decay rate of a randomly seeded state under
// imaginary-time split-step flow.
double imaginary_time_ground_energy(const HamiltonianSpec& spec, const Grid1D& grid,
                                    MockPlanck hbar, double beta, std::size_t steps,
                                    std::uint64_t seed = 1);

}  // namespace mockq
