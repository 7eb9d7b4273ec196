#pragma once
#include <complex>
#include <optional>
#include <vector>

#include "mockq/bohm.hpp"
#include "mockq/grid.hpp"

namespace mockq {

struct LVParams {
  double a, b, c, d;

  LVParams(double a_, double b_, double c_, double d_);
  double q1() const { return d / c; }  // fixed-point N1
  double q2() const { return a / b; }  // fixed-point N2
};

struct LVState {
  double N1, N2;
};

struct LVSample {
  double t;
  double N1, N2;
  double Q, P;
  double H;
};

// Q = log(N2/q2), P = log(N1/q1).
LVState from_canonical(const LVParams& p, double Q, double P);
void to_canonical(const LVParams& p, const LVState& s, double& Q, double& P);

double lv_hamiltonian(double Q, double P, double a, double d);

// RK4 on the population equations; each sample carries the canonical view
// and the conserved Hamiltonian.
std::vector<LVSample> lv_integrate(const LVParams& params, const LVState& state0, double t_end,
                                   double dt);

struct QuadraticFlowSample {
  double t;
  double Q, P;
};

// Linear flow Q̇ = dP, Ṗ = −w·Q integrated by the exact 2×2 matrix
// exponential. The literal mode uses w = a − ½√(ad); the consistent mode uses
// the zero net force that direct evaluation of the ground-state quantum
// potential produces, w = 0.
std::vector<QuadraticFlowSample> mock_quadratic_flow(double a, double d, MockPlanck hbar, double Q0,
                                                     double P0, double t_end, double dt,
                                                     VqMode mode);

struct FullLVVacuum {
  int n;
  double a;
  MockPlanck hbar;
  double phi;

  // d defaults to −a; passing any other value is refused.
  FullLVVacuum(int n_, double a_, MockPlanck hbar_, double phi_ = 0.0,
               std::optional<double> d = std::nullopt);

  std::complex<double> h() const;    // 2nπi
  std::complex<double> E() const;    // ia(ħ/2 + 2nπ)
  std::complex<double> f(std::complex<double> Q) const;
  std::complex<double> psi(std::complex<double> Q) const;  // e^{f(Q)}, saturated at Re f > 700
  bool saturated(std::complex<double> Q) const;
};

std::vector<std::complex<double>> full_lv_spectrum(int n_lo, int n_hi, double a, MockPlanck hbar);

struct FullLVVqConstants {
  double quadratic;          // −(1/8)d(4nπ+ħ)²
  std::complex<double> lv_exact;
};

FullLVVqConstants full_lv_vq_constants(int n, double a, double d, MockPlanck hbar);

// Numerical hook: evaluates the quadratic-kinetic and LV-kinetic quantum
// potentials of |ψ_n| = e^{−cQ/ħ} on a window where the state is
// representable, and returns the maximum deviation from constancy.
struct FullLVVqCheck {
  double quadratic_deviation;
  double lv_deviation;
  double quadratic_value;
  std::complex<double> lv_value;
};

FullLVVqCheck full_lv_vq_constancy(const FullLVVacuum& vac, double d, const Grid1D& window);

}  // namespace mockq
