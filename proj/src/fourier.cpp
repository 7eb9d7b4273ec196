#include "mockq/fourier.hpp"

#include <unsupported/Eigen/FFT>

#include "mockq/error.hpp"

namespace mockq {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> engine;
  return engine;
}

}  // namespace

std::vector<cdouble> fft(const std::vector<cdouble>& in) {
  std::vector<cdouble> out(in.size());
  fft_engine().fwd(out, in);
  return out;
}

std::vector<cdouble> ifft(const std::vector<cdouble>& in) {
  std::vector<cdouble> out(in.size());
  fft_engine().inv(out, in);
  return out;
}

std::vector<cdouble> apply_fourier_multiplier(const std::vector<cdouble>& f, const Grid1D& g,
                                              const std::function<cdouble(double)>& mult) {
  require(f.size() == g.n, "grid_mismatch", "field length does not match grid");
  std::vector<cdouble> hat = fft(f);
  for (std::size_t j = 0; j < g.n; ++j) hat[j] *= mult(g.k(j));
  return ifft(hat);
}

std::vector<double> apply_fourier_multiplier_real(const std::vector<double>& f, const Grid1D& g,
                                                  const std::function<double(double)>& mult) {
  std::vector<cdouble> fc(f.begin(), f.end());
  std::vector<cdouble> out = apply_fourier_multiplier(fc, g, [&](double k) { return cdouble(mult(k), 0.0); });
  std::vector<double> re(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
  return re;
}

std::vector<cdouble> spectral_derivative(const std::vector<cdouble>& f, const Grid1D& g, int order) {
  require(order >= 1, "bad_argument", "derivative order must be positive");
  const bool odd = order % 2 == 1;
  const std::size_t nyquist = g.n / 2;
  require(f.size() == g.n, "grid_mismatch", "field length does not match grid");
  std::vector<cdouble> hat = fft(f);
  for (std::size_t j = 0; j < g.n; ++j) {
    if (odd && j == nyquist) {
      hat[j] = 0.0;
      continue;
    }
    hat[j] *= std::pow(cdouble(0.0, g.k(j)), order);
  }
  return ifft(hat);
}

std::vector<double> spectral_derivative_real(const std::vector<double>& f, const Grid1D& g, int order) {
  std::vector<cdouble> fc(f.begin(), f.end());
  std::vector<cdouble> out = spectral_derivative(fc, g, order);
  std::vector<double> re(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) re[i] = out[i].real();
  return re;
}

}  // namespace mockq
