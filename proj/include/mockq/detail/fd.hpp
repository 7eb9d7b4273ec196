#pragma once
#include <cstddef>
#include <vector>

namespace mockq::detail {

// Fornberg finite-difference weights: for nodes x[0..m-1] and expansion point
// x0, returns w such that f^(order)(x0) ~= sum_i w[i] f(x[i]). Exact for
// polynomials up to degree m-1.
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int order);

// Periodic uniform-grid derivative using a centered (2*half+1)-point stencil.
std::vector<double> fd_derivative_periodic(const std::vector<double>& f, double dx, int order, int half);

// Same stencil width, but near the ends the stencil is shifted inward instead
// of wrapping. For fields that are not periodic on the window.
std::vector<double> fd_derivative_clamped(const std::vector<double>& f, double dx, int order, int half);

}  // namespace mockq::detail
