#include "mockq/detail/fd.hpp"

#include <cstdint>

#include "mockq/error.hpp"

namespace mockq::detail {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int order) {
  // Fornberg's recurrence (Math. Comp. 51, 1988).
  const int n = static_cast<int>(x.size()) - 1;
  require(n >= order, "bad_argument", "stencil too small for requested derivative order");
  std::vector<std::vector<double>> c(x.size(), std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = c[i][order];
  return w;
}

namespace {

std::vector<double> centered_weights(double dx, int order, int half) {
  std::vector<double> nodes(2 * half + 1);
  for (int i = -half; i <= half; ++i) nodes[i + half] = i * dx;
  return fd_weights(0.0, nodes, order);
}

}  // namespace

std::vector<double> fd_derivative_periodic(const std::vector<double>& f, double dx, int order, int half) {
  const std::vector<double> w = centered_weights(dx, order, half);
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  require(n >= 2 * half + 1, "bad_argument", "field shorter than stencil");
  std::vector<double> out(f.size(), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int s = -half; s <= half; ++s) {
      std::int64_t idx = (i + s) % n;
      if (idx < 0) idx += n;
      acc += w[s + half] * f[idx];
    }
    out[i] = acc;
  }
  return out;
}

std::vector<double> fd_derivative_clamped(const std::vector<double>& f, double dx, int order, int half) {
  const std::int64_t n = static_cast<std::int64_t>(f.size());
  require(n >= 2 * half + 1, "bad_argument", "field shorter than stencil");
  std::vector<double> nodes(2 * half + 1);
  std::vector<double> out(f.size(), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t start = i - half;
    if (start < 0) start = 0;
    if (start + 2 * half + 1 > n) start = n - 2 * half - 1;
    for (int s = 0; s <= 2 * half; ++s) nodes[s] = (start + s - i) * dx;
    const std::vector<double> w = fd_weights(0.0, nodes, order);
    double acc = 0.0;
    for (int s = 0; s <= 2 * half; ++s) acc += w[s] * f[start + s];
    out[i] = acc;
  }
  return out;
}

}  // namespace mockq::detail
