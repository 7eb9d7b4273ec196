#pragma once
#include <functional>
#include <variant>
#include <vector>

#include "mockq/grid.hpp"

namespace mockq {

// H = P²/2m + V(Q) with tabulated potential samples.
struct Canonical {
  double mass;
  std::vector<double> potential;
};

// H = (a+d) + ½(aQ² + dP²), the LV Hamiltonian expanded about its fixed point.
struct HarmonicLV {
  double a;
  double d;
};

// H = a(e^Q − Q) + d(e^P − P). d = −a is allowed (the vacuum-structure case).
struct FullLV {
  double a;
  double d;
};

using HamiltonianSpec = std::variant<Canonical, HarmonicLV, FullLV>;

void validate(const HamiltonianSpec& spec, const Grid1D& grid);

// Kinetic symbol K(ħk) used by the split-step propagator and the dense
// discretization. Real for all three variants, so the Fourier step is a pure
// phase and the discrete evolution stays unitary.
std::function<double(double)> kinetic_multiplier(const HamiltonianSpec& spec, MockPlanck hbar,
                                                 const Grid1D& grid);

// Multiplicative-potential part of H sampled on the grid. For HarmonicLV the
// constant (a+d) is carried here.
std::vector<double> potential_values(const HamiltonianSpec& spec, const Grid1D& grid);

// Kinetic symbol evaluated as a function of momentum p = ħk; used by the
// quantum-potential evaluator, K(P̂) acting on real fields.
double kinetic_symbol(const HamiltonianSpec& spec, double p);

double mass_of(const HamiltonianSpec& spec);

}  // namespace mockq
