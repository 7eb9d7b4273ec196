#include "mockq/hamiltonian.hpp"

#include <cmath>

#include "mockq/error.hpp"

namespace mockq {

namespace {
constexpr double kMaxFullLVMomentum = 30.0;  // e^{ħk} beyond this dwarfs double precision
}

void validate(const HamiltonianSpec& spec, const Grid1D& grid) {
  if (const auto* c = std::get_if<Canonical>(&spec)) {
    require(c->mass > 0.0, "bad_argument", "canonical mass must be positive");
    require(c->potential.size() == grid.n, "grid_mismatch", "potential table does not match grid");
  } else if (const auto* h = std::get_if<HarmonicLV>(&spec)) {
    require(h->a > 0.0 && h->d > 0.0, "bad_argument", "harmonic coefficients must be positive");
  } else if (const auto* f = std::get_if<FullLV>(&spec)) {
    require(f->d != 0.0, "bad_argument", "kinetic coefficient must be nonzero");
  }
}

std::function<double(double)> kinetic_multiplier(const HamiltonianSpec& spec, MockPlanck hbar,
                                                 const Grid1D& grid) {
  validate(spec, grid);
  if (std::holds_alternative<FullLV>(spec)) {
    const double pmax = hbar * grid.k_max();
    require(pmax <= kMaxFullLVMomentum, "multiplier_overflow",
            "e^{hbar k} overflows at this resolution; shrink the grid extent or hbar");
  }
  const double h = hbar;
  return [spec, h](double k) { return kinetic_symbol(spec, h * k); };
}

std::vector<double> potential_values(const HamiltonianSpec& spec, const Grid1D& grid) {
  validate(spec, grid);
  std::vector<double> V(grid.n);
  if (const auto* c = std::get_if<Canonical>(&spec)) {
    V = c->potential;
  } else if (const auto* hlv = std::get_if<HarmonicLV>(&spec)) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double q = grid.x(i);
      V[i] = (hlv->a + hlv->d) + 0.5 * hlv->a * q * q;
    }
  } else if (const auto* f = std::get_if<FullLV>(&spec)) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double q = grid.x(i);
      V[i] = f->a * (std::exp(q) - q);
    }
  }
  return V;
}

double kinetic_symbol(const HamiltonianSpec& spec, double p) {
  if (const auto* c = std::get_if<Canonical>(&spec)) return p * p / (2.0 * c->mass);
  if (const auto* h = std::get_if<HarmonicLV>(&spec)) return 0.5 * h->d * p * p;
  const auto& f = std::get<FullLV>(spec);
  return f.d * (std::exp(p) - p);
}

double mass_of(const HamiltonianSpec& spec) {
  if (const auto* c = std::get_if<Canonical>(&spec)) return c->mass;
  if (const auto* h = std::get_if<HarmonicLV>(&spec)) return 1.0 / h->d;
  const auto& f = std::get<FullLV>(spec);
  require(f.d != 0.0, "bad_argument", "kinetic coefficient must be nonzero");
  return 1.0 / f.d;
}

}  // namespace mockq
