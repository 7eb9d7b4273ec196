#include "mockq/moyal.hpp"

#include <array>
#include <cmath>
#include <functional>

#include "mockq/detail/fd.hpp"
#include "mockq/error.hpp"

namespace mockq {

namespace {

constexpr int kMaxOrder = 4;   // truncation of the deformation series
constexpr int kHalf = 4;       // 9-point stencils, exact through degree 8

double uniform_spacing(const std::vector<double>& axis) {
  require(axis.size() >= 2 * kHalf + 1, "bad_argument", "phase-space axis shorter than stencil");
  const double d = axis[1] - axis[0];
  require(d > 0.0, "bad_argument", "phase-space axis must increase");
  for (std::size_t i = 1; i + 1 < axis.size(); ++i)
    require(std::abs((axis[i + 1] - axis[i]) - d) < 1e-9 * d, "bad_argument",
            "phase-space axis must be uniform");
  return d;
}

// derivative along q (row index) of a row-major (nq x np) table
std::vector<double> d_q(const std::vector<double>& f, std::size_t nq, std::size_t np, double dq,
                        int order) {
  std::vector<double> out(f.size());
  std::vector<double> column(nq);
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t i = 0; i < nq; ++i) column[i] = f[i * np + j];
    const std::vector<double> dcol = detail::fd_derivative_clamped(column, dq, order, kHalf);
    for (std::size_t i = 0; i < nq; ++i) out[i * np + j] = dcol[i];
  }
  return out;
}

std::vector<double> d_p(const std::vector<double>& f, std::size_t nq, std::size_t np, double dp,
                        int order) {
  std::vector<double> out(f.size());
  std::vector<double> row(np);
  for (std::size_t i = 0; i < nq; ++i) {
    for (std::size_t j = 0; j < np; ++j) row[j] = f[i * np + j];
    const std::vector<double> drow = detail::fd_derivative_clamped(row, dp, order, kHalf);
    for (std::size_t j = 0; j < np; ++j) out[i * np + j] = drow[j];
  }
  return out;
}

using DerivTable = std::array<std::array<std::vector<double>, kMaxOrder + 1>, kMaxOrder + 1>;

// table[alpha][beta] = ∂_q^alpha ∂_p^beta f, for alpha+beta <= kMaxOrder
DerivTable mixed_derivatives(const PhaseSpaceField& f, double dq, double dp) {
  const std::size_t nq = f.q.size(), np = f.p.size();
  DerivTable table;
  for (int beta = 0; beta <= kMaxOrder; ++beta) {
    std::vector<double> base = beta == 0 ? f.values : d_p(f.values, nq, np, dp, beta);
    for (int alpha = 0; alpha + beta <= kMaxOrder; ++alpha)
      table[alpha][beta] = alpha == 0 ? base : d_q(base, nq, np, dq, alpha);
  }
  return table;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_compatible(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  require(a.q == b.q && a.p == b.p, "grid_mismatch", "phase-space fields live on different grids");
  require(a.values.size() == a.q.size() * a.p.size() &&
              b.values.size() == b.q.size() * b.p.size(),
          "grid_mismatch", "phase-space value count does not match the grid");
}

}  // namespace

PhaseSpaceField sample_phase_space(const std::vector<double>& q, const std::vector<double>& p,
                                   const std::function<double(double, double)>& f) {
  PhaseSpaceField out{q, p, std::vector<double>(q.size() * p.size())};
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j) out.at(i, j) = f(q[i], p[j]);
  return out;
}

ComplexPhaseSpaceField moyal_star(const PhaseSpaceField& a, const PhaseSpaceField& b,
                                  double hbar) {
  require(hbar >= 0.0 && std::isfinite(hbar), "bad_argument", "hbar must be nonnegative");
  check_compatible(a, b);
  const double dq = uniform_spacing(a.q);
  const double dp = uniform_spacing(a.p);
  const std::size_t total = a.values.size();

  const DerivTable da = mixed_derivatives(a, dq, dp);
  const DerivTable db = mixed_derivatives(b, dq, dp);

  ComplexPhaseSpaceField out{a.q, a.p, std::vector<std::complex<double>>(total, 0.0)};
  std::array<double, kMaxOrder + 1> term_max{};
  const std::complex<double> lambda(0.0, 0.5 * hbar);

  std::complex<double> coeff(1.0, 0.0);  // lambda^t / t!
  for (int t = 0; t <= kMaxOrder; ++t) {
    if (t > 0) coeff *= lambda / static_cast<double>(t);
    for (std::size_t idx = 0; idx < total; ++idx) {
      double term = 0.0;
      for (int r = 0; r <= t; ++r) {
        const double sign = (r % 2 == 0) ? 1.0 : -1.0;
        term += binom(t, r) * sign * da[t - r][r][idx] * db[r][t - r][idx];
      }
      out.values[idx] += coeff * term;
      term_max[t] = std::max(term_max[t], std::abs(coeff * term));
    }
  }

  // The series must not be growing at the truncation point.
  const double scale = std::max(term_max[0], 1e-300);
  if (term_max[4] > term_max[3] && term_max[3] > term_max[2] && term_max[2] > term_max[1] &&
      term_max[4] > 1e-10 * scale)
    throw Error("truncation_order", "deformation series terms grow through order 4");
  return out;
}

ComplexPhaseSpaceField moyal_bracket(const PhaseSpaceField& a, const PhaseSpaceField& b,
                                     double hbar) {
  const ComplexPhaseSpaceField ab = moyal_star(a, b, hbar);
  const ComplexPhaseSpaceField ba = moyal_star(b, a, hbar);
  ComplexPhaseSpaceField out{ab.q, ab.p, ab.values};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= ba.values[i];
  return out;
}

PhaseSpaceField poisson_bracket(const PhaseSpaceField& a, const PhaseSpaceField& b) {
  check_compatible(a, b);
  const double dq = uniform_spacing(a.q);
  const double dp = uniform_spacing(a.p);
  const std::size_t nq = a.q.size(), np = a.p.size();
  const std::vector<double> aq = d_q(a.values, nq, np, dq, 1);
  const std::vector<double> ap = d_p(a.values, nq, np, dp, 1);
  const std::vector<double> bq = d_q(b.values, nq, np, dq, 1);
  const std::vector<double> bp = d_p(b.values, nq, np, dp, 1);
  PhaseSpaceField out{a.q, a.p, std::vector<double>(a.values.size())};
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = aq[i] * bp[i] - ap[i] * bq[i];
  return out;
}

double interior_max_abs(const ComplexPhaseSpaceField& f, std::size_t margin) {
  const std::size_t nq = f.q.size(), np = f.p.size();
  require(nq > 2 * margin && np > 2 * margin, "bad_argument", "margin swallows the whole field");
  double m = 0.0;
  for (std::size_t i = margin; i < nq - margin; ++i)
    for (std::size_t j = margin; j < np - margin; ++j) m = std::max(m, std::abs(f.at(i, j)));
  return m;
}

}  // namespace mockq
