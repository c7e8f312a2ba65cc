#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "wavedisp/spectral.hpp"

namespace testutil {

inline wavedisp::spectral::CollocationOperator unit_op(int nz) {
  return wavedisp::spectral::map_operator(wavedisp::spectral::make_operator(nz),
                                          1.0);
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(static_cast<size_t>(n));
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] =
        std::exp(la + (lb - la) * i / std::max(1, n - 1));
  return out;
}

// Quiescent water: c = F^-1 sqrt(tanh(k h)/k).
inline double quiescent_c(double k, double froude_sq, double h = 1.0) {
  return std::sqrt(std::tanh(k * h) / k / froude_sq);
}

// Constant vorticity U(z) = sigma (z + 1): positive branch closed form.
inline double linear_c(double k, double sigma, double froude_sq, double h = 1.0) {
  const double t = std::tanh(k * h);
  return sigma - sigma * t / (2.0 * k) +
         std::sqrt(sigma * sigma * t * t / (4.0 * k * k) + t / (froude_sq * k));
}

}  // namespace testutil
