#pragma once
#include <complex>
#include <functional>
#include <vector>

#include "mockq/grid.hpp"

namespace mockq {

// Rectangular phase-space sampling: value(i,j) = f(q_i, p_j), row-major in q.
struct PhaseSpaceField {
  std::vector<double> q;
  std::vector<double> p;
  std::vector<double> values;

  double& at(std::size_t i, std::size_t j) { return values[i * p.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * p.size() + j]; }
};

PhaseSpaceField sample_phase_space(const std::vector<double>& q, const std::vector<double>& p,
                                   const std::function<double(double, double)>& f);

struct ComplexPhaseSpaceField {
  std::vector<double> q;
  std::vector<double> p;
  std::vector<std::complex<double>> values;

  std::complex<double> at(std::size_t i, std::size_t j) const { return values[i * p.size() + j]; }
};

// Deformed product truncated at order hbar^4, with a term-growth convergence
// check. Derivatives are taken with 9-point interior stencils, exact for
// polynomial fields up to degree 8. hbar = 0 gives the plain product exactly,
// so the classical limit is representable (hence double, not MockPlanck).
ComplexPhaseSpaceField moyal_star(const PhaseSpaceField& a, const PhaseSpaceField& b,
                                  double hbar);

ComplexPhaseSpaceField moyal_bracket(const PhaseSpaceField& a, const PhaseSpaceField& b,
                                     double hbar);

// {a,b} = ∂_q a ∂_p b − ∂_p a ∂_q b with the same stencils.
PhaseSpaceField poisson_bracket(const PhaseSpaceField& a, const PhaseSpaceField& b);

// Largest |value| over the interior region where the stencils are centered.
double interior_max_abs(const ComplexPhaseSpaceField& f, std::size_t margin);

}  // namespace mockq
