#pragma once
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "mockq/error.hpp"

namespace mockq {

// Uniform periodic grid on [x_min, x_max). n is restricted to powers of two
// (>= 8) so Fourier-multiplier operators are always available on it.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  std::size_t n = 8;

  Grid1D() = default;
  Grid1D(double lo, double hi, std::size_t count) : x_min(lo), x_max(hi), n(count) {
    require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, "bad_argument",
            "grid needs finite x_max > x_min");
    require(count >= 8 && (count & (count - 1)) == 0,
            "bad_argument", "grid size must be a power of two >= 8");
  }

  double length() const { return x_max - x_min; }
  double dx() const { return length() / static_cast<double>(n); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

  // Angular wavenumber of FFT mode j: 2*pi*m/L with m in [-n/2, n/2).
  // The Nyquist mode (j == n/2) is assigned the negative frequency.
  double k(std::size_t j) const {
    const auto half = n / 2;
    const double m = (j < half) ? static_cast<double>(j)
                                : static_cast<double>(j) - static_cast<double>(n);
    return 2.0 * std::numbers::pi * m / length();
  }

  double k_max() const { return std::numbers::pi / dx(); }

  std::vector<double> xs() const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i);
    return out;
  }

  bool operator==(const Grid1D& other) const {
    return x_min == other.x_min && x_max == other.x_max && n == other.n;
  }
};

// Positive "mock Planck constant". Dimensionless in the population-dynamics
// systems; carries units of the system's action otherwise.
struct MockPlanck {
  double value;
  explicit MockPlanck(double v) : value(v) {
    require(std::isfinite(v) && v > 0.0, "bad_argument",
            "mock Planck constant must be positive and finite");
  }
  operator double() const { return value; }
};

}  // namespace mockq
