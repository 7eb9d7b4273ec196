#pragma once
#include <cstdint>
#include <vector>

#include "mockq/grid.hpp"
#include "mockq/wavefunction.hpp"

namespace mockq {

struct HydroFields {
  Grid1D grid;
  MockPlanck hbar;
  double m;
  double t;
  std::vector<double> rho;
  std::vector<double> v;
  std::vector<bool> mask;  // true where fields are usable (off nodes)
};

HydroFields hydro_fields(const WaveFunction& psi, double m, double t);

// σ = −(ħ²ρ/4m)·∂² log ρ, spectral derivative of log ρ.
std::vector<double> stress_tensor(const std::vector<double>& rho, const Grid1D& grid, double m,
                                  MockPlanck hbar);

struct ResidualReport {
  std::vector<double> residual;
  double norm;        // L2 over the masked region
  double scale_norm;  // L2 of the time-derivative term, for relative checks
};

// Pointwise ∂_t v + v∂v + (1/m)∂V + (1/mρ)∂σ on the middle snapshot, centered
// time differences, second-order space differences.
ResidualReport euler_residual(const std::vector<HydroFields>& snapshots,
                              const std::vector<double>& V);

// Pointwise ∂_t ρ + ∂(ρv) on the middle snapshot.
ResidualReport continuity_residual(const std::vector<HydroFields>& snapshots);

struct ReynoldsReport {
  double value;
  bool infinite;  // uniform density: quantum-stress term vanishes
};

ReynoldsReport quantum_reynolds(const HydroFields& fields);

struct ScalingFit {
  std::vector<double> l;
  std::vector<double> D2;
  std::vector<double> fit_value;
  double exponent;
  double residual;
};

// Second-order structure function over log-spaced separations and its
// log-log least-squares exponent.
ScalingFit structure_scaling(const std::vector<double>& field, double dx, std::size_t n_l = 16,
                             double l_min_cells = 2.0, double l_max_cells = 256.0);

// Fractional Gaussian motion with Hurst exponent H on n points, by circulant
// embedding of the exact increment covariance. Structure-function oracle for
// the scaling fit.
std::vector<double> synthesize_hurst_field(std::size_t n, double hurst, std::uint64_t seed);

}  // namespace mockq
