#include "mockq/wavefunction.hpp"

#include <algorithm>
#include <cmath>

#include "mockq/error.hpp"
#include "mockq/fourier.hpp"

namespace mockq {

WaveFunction::WaveFunction(Grid1D g, MockPlanck h, std::vector<cdouble> amplitudes)
    : grid(g), hbar(h), psi(std::move(amplitudes)) {
  require(psi.size() == grid.n, "grid_mismatch", "amplitude count does not match grid");
  for (const cdouble& a : psi)
    require(std::isfinite(a.real()) && std::isfinite(a.imag()), "bad_argument", "non-finite amplitude");
}

double WaveFunction::norm() const {
  double acc = 0.0;
  for (const cdouble& a : psi) acc += std::norm(a);
  return std::sqrt(acc * grid.dx());
}

WaveFunction WaveFunction::normalized() const {
  const double n = norm();
  require(n > 0.0, "degenerate_state", "cannot normalize a zero wavefunction");
  std::vector<cdouble> out(psi);
  for (cdouble& a : out) a /= n;
  return WaveFunction(grid, hbar, std::move(out));
}

double WaveFunction::max_abs() const {
  double m = 0.0;
  for (const cdouble& a : psi) m = std::max(m, std::abs(a));
  return m;
}

double node_threshold(const WaveFunction& psi) { return 1e-12 * psi.max_abs(); }

double global_phase(const WaveFunction& psi) {
  cdouble acc = 0.0;
  for (const cdouble& a : psi.psi) acc += a * a;
  if (std::abs(acc) == 0.0) return 0.0;
  return 0.5 * std::arg(acc);
}

bool real_up_to_phase(const WaveFunction& psi, double tol) {
  const double theta = global_phase(psi);
  const cdouble rot = std::polar(1.0, -theta);
  double worst = 0.0;
  for (const cdouble& a : psi.psi) worst = std::max(worst, std::abs((rot * a).imag()));
  return worst <= tol * psi.max_abs();
}

MadelungFields to_madelung(const WaveFunction& psi, std::optional<double> mass) {
  const std::size_t n = psi.grid.n;
  const double maxabs = psi.max_abs();
  require(maxabs > 0.0, "degenerate_state", "all-zero wavefunction has no polar decomposition");
  const double thresh = node_threshold(psi);
  const double hbar = psi.hbar;

  MadelungFields f{psi.grid, psi.hbar, std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) f.rho[i] = std::norm(psi.psi[i]);

  // Unwrap arg(psi) from the grid midpoint outward, skipping node samples.
  std::vector<double> phase(n, 0.0);
  std::vector<bool> defined(n, false);
  const std::size_t mid = n / 2;
  auto unwrap_step = [&](std::size_t from, std::size_t to) {
    if (std::abs(psi.psi[to]) < thresh) return;
    double prev = phase[from];
    double raw = std::arg(psi.psi[to]);
    double delta = raw - std::remainder(prev, 2.0 * M_PI);
    delta = std::remainder(delta, 2.0 * M_PI);
    phase[to] = prev + delta;
    defined[to] = true;
  };
  // Anchor: nearest non-node sample to the midpoint.
  std::size_t anchor = mid;
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t fwd = (mid + d) % n;
    if (std::abs(psi.psi[fwd]) >= thresh) {
      anchor = fwd;
      break;
    }
  }
  phase[anchor] = std::arg(psi.psi[anchor]);
  defined[anchor] = true;
  std::size_t last = anchor;
  for (std::size_t i = anchor + 1; i < n; ++i) {
    unwrap_step(last, i);
    if (defined[i]) last = i;
  }
  last = anchor;
  for (std::size_t i = anchor; i-- > 0;) {
    unwrap_step(last, i);
    if (defined[i]) last = i;
  }

  // Fill node gaps by linear interpolation between flanking defined samples
  // (constant extension at the ends) and flag them.
  std::size_t i = 0;
  while (i < n) {
    if (defined[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !defined[j]) ++j;
    const bool has_left = i > 0;
    const bool has_right = j < n;
    for (std::size_t k = i; k < j; ++k) {
      if (has_left && has_right) {
        const double t = static_cast<double>(k - (i - 1)) / static_cast<double>(j - (i - 1));
        phase[k] = phase[i - 1] + t * (phase[j] - phase[i - 1]);
      } else if (has_left) {
        phase[k] = phase[i - 1];
      } else if (has_right) {
        phase[k] = phase[j];
      }
      f.s_interpolated[k] = true;
    }
    i = j;
  }
  for (std::size_t k = 0; k < n; ++k) f.S[k] = hbar * phase[k];

  // Velocity from the probability current: v = ħ·Im(ψ* ψ′)/(m|ψ|²). Finite
  // and smooth where ∇S/m would amplify unwrap noise near nodes.
  const std::vector<cdouble> dpsi = spectral_derivative(psi.psi, psi.grid, 1);
  const double m = mass.value_or(1.0);
  const double floor2 = thresh * thresh;
  for (std::size_t k = 0; k < n; ++k) {
    const double rho = f.rho[k];
    if (rho < floor2) {
      f.v[k] = 0.0;
      continue;
    }
    f.v[k] = hbar * std::imag(std::conj(psi.psi[k]) * dpsi[k]) / (m * rho);
  }
  return f;
}

WaveFunction from_madelung(const MadelungFields& fields, MockPlanck hbar) {
  const std::size_t n = fields.grid.n;
  require(fields.rho.size() == n && fields.S.size() == n, "grid_mismatch",
          "field lengths do not match grid");
  std::vector<cdouble> psi(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(fields.rho[i] >= 0.0, "bad_argument", "negative density sample");
    psi[i] = std::sqrt(fields.rho[i]) * std::polar(1.0, fields.S[i] / hbar);
  }
  return WaveFunction(fields.grid, hbar, std::move(psi));
}

WaveFunction align_phase(const WaveFunction& psi, const WaveFunction& ref) {
  require(psi.grid == ref.grid, "grid_mismatch", "phase alignment needs a common grid");
  cdouble overlap = 0.0;
  for (std::size_t i = 0; i < psi.grid.n; ++i) overlap += std::conj(psi.psi[i]) * ref.psi[i];
  const double mag = std::abs(overlap);
  if (mag == 0.0) return psi;
  const cdouble rot = overlap / mag;
  std::vector<cdouble> out(psi.psi);
  for (cdouble& a : out) a *= rot;
  return WaveFunction(psi.grid, psi.hbar, std::move(out));
}

}  // namespace mockq
