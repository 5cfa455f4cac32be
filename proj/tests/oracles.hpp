#pragma once

// Independent reference implementations used only by the tests.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

/// Pass probability of the pair by summing the four (axis | normal) detection
/// channels of each polarizer over projected two-photon amplitudes. The
/// alignment factor mixes the pure state with its fully dephased version.
inline double coincidence(double f_mag, double f_phase, double th1, double par1, double perp1,
                          double th2, double par2, double perp2, double alignment = 1.0) {
  const double norm = 1.0 / std::sqrt(1.0 + f_mag * f_mag);
  const cd hh = norm;
  const cd vv = std::polar(f_mag, f_phase) * norm;
  // channel vectors in (H, V): axis (sin, cos), normal (cos, -sin)
  auto channel = [](double th, int k) -> std::array<double, 2> {
    return k == 0 ? std::array<double, 2>{std::sin(th), std::cos(th)}
                  : std::array<double, 2>{std::cos(th), -std::sin(th)};
  };
  const std::array<double, 2> t1{par1, perp1}, t2{par2, perp2};
  double pure = 0.0, mixed = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto u = channel(th1, a), w = channel(th2, b);
      const cd amp = u[0] * w[0] * hh + u[1] * w[1] * vv;
      pure += t1[a] * t2[b] * std::norm(amp);
      mixed += t1[a] * t2[b] * (std::norm(u[0] * w[0] * hh) + std::norm(u[1] * w[1] * vv));
    }
  return alignment * pure + (1.0 - alignment) * mixed;
}

/// Max and min of a sampled curve.
inline std::pair<double, double> extremes(const std::vector<double> &y) {
  double hi = y.front(), lo = y.front();
  for (double v : y) {
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return {hi, lo};
}

/// Product-state CH per pair for the four settings by direct summation,
/// ideal polarizers, coincidence-substituted marginals.
inline double ch_direct(double f, double t1, double t2, double t1p, double t2p) {
  auto p = [&](double a, double b) { return coincidence(f, 0.0, a, 1, 0, b, 1, 0); };
  auto marg = [&](double a) { return coincidence(f, 0.0, a, 1, 0, 0.0, 1, 1); };
  return p(t1, t2) - p(t1, t2p) + p(t1p, t2) + p(t1p, t2p) - marg(t1p) - marg(t2);
}

/// Sample standard deviation.
inline double stddev(const std::vector<double> &v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace oracle
