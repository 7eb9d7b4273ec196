#pragma once
#include <complex>
#include <functional>
#include <vector>

#include "mockq/grid.hpp"

namespace mockq {

using cdouble = std::complex<double>;

std::vector<cdouble> fft(const std::vector<cdouble>& in);
std::vector<cdouble> ifft(const std::vector<cdouble>& in);

// Multiply mode j by mult(k_j) and transform back.
std::vector<cdouble> apply_fourier_multiplier(const std::vector<cdouble>& f, const Grid1D& g,
                                              const std::function<cdouble(double)>& mult);
std::vector<double> apply_fourier_multiplier_real(const std::vector<double>& f, const Grid1D& g,
                                                  const std::function<double(double)>& mult);

// d^order/dx^order via the (ik)^order multiplier. Odd orders zero the Nyquist
// mode so that real input stays real.
std::vector<cdouble> spectral_derivative(const std::vector<cdouble>& f, const Grid1D& g, int order);
std::vector<double> spectral_derivative_real(const std::vector<double>& f, const Grid1D& g, int order);

}  // namespace mockq
