#include "mockq/lv.hpp"

#include <cmath>

#include "mockq/detail/fd.hpp"
#include "mockq/error.hpp"

namespace mockq {

LVParams::LVParams(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
  require(a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0, "bad_argument",
          "population rates must all be positive");
}

LVState from_canonical(const LVParams& p, double Q, double P) {
  return LVState{p.q1() * std::exp(P), p.q2() * std::exp(Q)};
}

void to_canonical(const LVParams& p, const LVState& s, double& Q, double& P) {
  require(s.N1 > 0.0 && s.N2 > 0.0, "bad_argument", "populations must be positive");
  Q = std::log(s.N2 / p.q2());
  P = std::log(s.N1 / p.q1());
}

double lv_hamiltonian(double Q, double P, double a, double d) {
  return a * (std::exp(Q) - Q) + d * (std::exp(P) - P);
}

std::vector<LVSample> lv_integrate(const LVParams& params, const LVState& state0, double t_end,
                                   double dt) {
  require(dt > 0.0 && t_end > 0.0, "bad_argument", "need positive dt and horizon");
  require(dt * std::max(params.a, params.d) < 0.01, "step_too_large",
          "dt too coarse for the fastest rate");
  require(state0.N1 > 0.0 && state0.N2 > 0.0, "bad_argument", "populations must be positive");

  const double a = params.a, b = params.b, c = params.c, d = params.d;
  auto f1 = [&](double n1, double n2) { return n1 * (a - b * n2); };
  auto f2 = [&](double n1, double n2) { return n2 * (c * n1 - d); };

  const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
  std::vector<LVSample> out;
  out.reserve(steps + 1);
  double n1 = state0.N1, n2 = state0.N2;
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = dt * static_cast<double>(s);
    double Q, P;
    to_canonical(params, LVState{n1, n2}, Q, P);
    out.push_back(LVSample{t, n1, n2, Q, P, lv_hamiltonian(Q, P, a, d)});
    if (s == steps) break;

    const double k1a = f1(n1, n2), k1b = f2(n1, n2);
    const double k2a = f1(n1 + 0.5 * dt * k1a, n2 + 0.5 * dt * k1b);
    const double k2b = f2(n1 + 0.5 * dt * k1a, n2 + 0.5 * dt * k1b);
    const double k3a = f1(n1 + 0.5 * dt * k2a, n2 + 0.5 * dt * k2b);
    const double k3b = f2(n1 + 0.5 * dt * k2a, n2 + 0.5 * dt * k2b);
    const double k4a = f1(n1 + dt * k3a, n2 + dt * k3b);
    const double k4b = f2(n1 + dt * k3a, n2 + dt * k3b);
    n1 += dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    n2 += dt / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    if (!(n1 > 0.0) || !(n2 > 0.0))
      throw Error("blow_up", "population left the positive quadrant at step " + std::to_string(s + 1));
  }
  return out;
}

std::vector<QuadraticFlowSample> mock_quadratic_flow(double a, double d, MockPlanck hbar,
                                                     double Q0, double P0, double t_end, double dt,
                                                     VqMode mode) {
  require(a > 0.0 && d > 0.0, "bad_argument", "rates must be positive");
  require(dt > 0.0 && t_end >= 0.0, "bad_argument", "need positive dt");
  (void)hbar;  // the quantum potential shifts only the energy offset here

  // Qdot = d P, Pdot = -w Q, evaluated in closed form (exact flow).
  const double w = mode == VqMode::Literal ? a - 0.5 * std::sqrt(a * d) : 0.0;
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
  std::vector<QuadraticFlowSample> out;
  out.reserve(steps + 1);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = dt * static_cast<double>(s);
    double Q, P;
    if (w > 0.0) {
      const double Omega = std::sqrt(d * w);
      Q = Q0 * std::cos(Omega * t) + (d * P0 / Omega) * std::sin(Omega * t);
      P = P0 * std::cos(Omega * t) - (w * Q0 / Omega) * std::sin(Omega * t);
    } else {
      Q = Q0 + d * P0 * t;
      P = P0;
    }
    out.push_back(QuadraticFlowSample{t, Q, P});
  }
  return out;
}

FullLVVacuum::FullLVVacuum(int n_, double a_, MockPlanck hbar_, double phi_,
                           std::optional<double> d)
    : n(n_), a(a_), hbar(hbar_), phi(phi_) {
  require(a != 0.0, "bad_argument", "rate a must be nonzero");
  require(!d.has_value() || *d == -a, "bad_argument",
          "the exact vacuum family exists only for d = -a");
}

std::complex<double> FullLVVacuum::h() const { return std::complex<double>(0.0, 2.0 * M_PI * n); }

std::complex<double> FullLVVacuum::E() const {
  return std::complex<double>(0.0, a * (0.5 * hbar + 2.0 * M_PI * n));
}

std::complex<double> FullLVVacuum::f(std::complex<double> Q) const {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> B = h() + i * (0.5 * hbar);
  const std::complex<double> z = Q + B;
  return i / (2.0 * hbar) * z * z + i * phi;
}

bool FullLVVacuum::saturated(std::complex<double> Q) const { return f(Q).real() > 700.0; }

std::complex<double> FullLVVacuum::psi(std::complex<double> Q) const {
  std::complex<double> e = f(Q);
  if (e.real() > 700.0) e = std::complex<double>(700.0, e.imag());
  return std::exp(e);
}

std::vector<std::complex<double>> full_lv_spectrum(int n_lo, int n_hi, double a, MockPlanck hbar) {
  require(n_hi >= n_lo, "bad_argument", "empty branch range");
  std::vector<std::complex<double>> out;
  out.reserve(n_hi - n_lo + 1);
  for (int n = n_lo; n <= n_hi; ++n)
    out.emplace_back(0.0, a * (0.5 * hbar + 2.0 * M_PI * n));
  return out;
}

FullLVVqConstants full_lv_vq_constants(int n, double a, double d, MockPlanck hbar) {
  require(d == -a, "bad_argument", "the exact vacuum family exists only for d = -a");
  const double c4 = 4.0 * M_PI * n + hbar;
  const double quadratic = -0.125 * d * c4 * c4;
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> En(0.0, a * (0.5 * hbar + 2.0 * M_PI * n));
  const std::complex<double> lv_exact = -a * std::exp(i * (0.5 * hbar)) + i * a * En;
  return FullLVVqConstants{quadratic, lv_exact};
}

FullLVVqCheck full_lv_vq_constancy(const FullLVVacuum& vac, double d, const Grid1D& window) {
  require(d == -vac.a, "bad_argument", "the exact vacuum family exists only for d = -a");
  const double hbar = vac.hbar;
  const std::size_t n = window.n;

  // G = log|psi_n| on the real axis. Applying a function of P = -i hbar d/dQ
  // to e^G reduces to Taylor data of G: P e^G = -i hbar G' e^G and
  // e^P e^G = exp(sum_k (-i hbar)^k G^(k)/k!) e^G, exact here since G is
  // linear on the real axis (the series terminates after the first term).
  std::vector<double> G(n);
  for (std::size_t j = 0; j < n; ++j) G[j] = vac.f(window.x(j)).real();

  const double dx = window.dx();
  const std::vector<double> g1 = detail::fd_derivative_clamped(G, dx, 1, 4);
  const std::vector<double> g2 = detail::fd_derivative_clamped(G, dx, 2, 4);
  const std::vector<double> g3 = detail::fd_derivative_clamped(G, dx, 3, 4);
  const std::vector<double> g4 = detail::fd_derivative_clamped(G, dx, 4, 4);

  const std::complex<double> i(0.0, 1.0);
  std::vector<double> quad(n);
  std::vector<std::complex<double>> lv(n);
  for (std::size_t j = 0; j < n; ++j) {
    // Quadratic kinetic (d/2)P^2: (d/2)(-i hbar)^2 (G'' + G'^2).
    quad[j] = -0.5 * d * hbar * hbar * (g2[j] + g1[j] * g1[j]);
    // LV kinetic d(e^P - P).
    std::complex<double> shift = 0.0;
    std::complex<double> pw = 1.0;
    const double derivs[4] = {g1[j], g2[j], g3[j], g4[j]};
    double fact = 1.0;
    for (int k = 1; k <= 4; ++k) {
      pw *= -i * hbar;
      fact *= k;
      shift += pw * derivs[k - 1] / fact;
    }
    lv[j] = d * (std::exp(shift) - (-i * hbar * g1[j]));
  }

  const std::size_t mid = n / 2;
  FullLVVqCheck out{0.0, 0.0, quad[mid], lv[mid]};
  for (std::size_t j = 0; j < n; ++j) {
    out.quadratic_deviation = std::max(out.quadratic_deviation, std::abs(quad[j] - quad[mid]));
    out.lv_deviation = std::max(out.lv_deviation, std::abs(lv[j] - lv[mid]));
  }
  return out;
}

}  // namespace mockq
