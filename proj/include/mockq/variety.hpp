#pragma once
#include <cstdint>
#include <vector>

#include "mockq/grid.hpp"

namespace mockq {

struct RelationalSystem {
  // views[i] is element i's view vector; all the same dimension.
  std::vector<std::vector<double>> views;
};

double distinctiveness(const RelationalSystem& sys, std::size_t i, std::size_t j);

// (1/N(N−1))·Σ_{i≠j}|V_i − V_j|², computed from per-coordinate moments.
double discrete_variety(const RelationalSystem& sys);

struct ContinuumVariety {
  double value;          // ∫ (ρ′)²/ρ
  double mask_fraction;  // fraction of grid excluded as nodes
  bool reliable;         // mask_fraction ≤ 0.1
};

ContinuumVariety continuum_variety(const std::vector<double>& rho, const Grid1D& grid);

struct FisherIdentityReport {
  double lhs;       // ∫ ρ·V_Q
  double rhs;       // (ħ²/8m)·continuum variety
  double residual;  // |lhs − rhs|
  bool applicable;  // density decays at the window edges
};

FisherIdentityReport variety_fisher_identity(const std::vector<double>& rho, const Grid1D& grid,
                                             double m, MockPlanck hbar);

// Monte-Carlo views for the discrete→continuum comparison: each sampled
// point's view is the local log-density slope, estimated with a Gaussian
// kernel density on a fixed evaluation grid.
RelationalSystem density_contrast_views(const std::vector<double>& rho, const Grid1D& grid,
                                        std::size_t n_samples, std::uint64_t seed);

double spearman_rank_correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mockq
