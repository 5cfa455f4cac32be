#include "pdclab/double_slit.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "pdclab/errors.hpp"
#include "pdclab/units.hpp"

namespace pdclab {

double SlitGeometry::wavevector() const { return 2.0 * kPi / wavelength_m; }

void validate(const SlitGeometry &g) {
  if (!(g.width_m > 0.0 && g.separation_m > g.width_m))
    throw InvalidInput("slit geometry needs separation_m > width_m > 0");
  if (!(g.wavelength_m > 0.0)) throw InvalidInput("wavelength_m must be > 0");
  if (!(g.det1_distance_m > 0.0 && g.det2_distance_m > 0.0))
    throw InvalidInput("detector distances must be > 0");
  if (!(g.aperture1_m >= 0.0 && g.aperture2_m >= 0.0))
    throw InvalidInput("apertures must be >= 0");
  if (!(std::abs(g.incidence_a) < kPi / 2 && std::abs(g.incidence_b) < kPi / 2))
    throw InvalidInput("incidence angles must lie in (-pi/2, pi/2)");
}

double diffraction_g(double theta, double theta_i, const SlitGeometry &geom) {
  const double x = 0.5 * geom.wavevector() * geom.width_m * (std::sin(theta) - std::sin(theta_i));
  if (std::abs(x) < 1e-6) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

double coincidence_pattern_point(const SlitGeometry &geom, double x1_m, double x2_m) {
  const double t1 = std::atan(x1_m / geom.det1_distance_m);
  const double t2 = std::atan(x2_m / geom.det2_distance_m);
  const double g1a = diffraction_g(t1, geom.incidence_a, geom);
  const double g1b = diffraction_g(t1, geom.incidence_b, geom);
  const double g2a = diffraction_g(t2, geom.incidence_a, geom);
  const double g2b = diffraction_g(t2, geom.incidence_b, geom);
  const double phase = geom.wavevector() * geom.separation_m * (std::sin(t1) - std::sin(t2));
  const double c = g1a * g1a * g2b * g2b + g2a * g2a * g1b * g1b +
                   2.0 * g1a * g2b * g2a * g1b * std::cos(phase);
  // Nonnegative analytically; clamp rounding noise at exact fringe zeros.
  return std::max(0.0, c);
}

double coincidence_pattern(const SlitGeometry &geom, double x1_m, double x2_m) {
  validate(geom);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  const double h1 = 0.5 * geom.aperture1_m;
  const double h2 = 0.5 * geom.aperture2_m;
  auto along_x2 = [&](double x1) {
    if (h2 == 0.0) return coincidence_pattern_point(geom, x1, x2_m);
    return Rule::integrate([&](double x2) { return coincidence_pattern_point(geom, x1, x2); },
                           x2_m - h2, x2_m + h2) /
           geom.aperture2_m;
  };
  if (h1 == 0.0) return along_x2(x1_m);
  return Rule::integrate(along_x2, x1_m - h1, x1_m + h1) / geom.aperture1_m;
}

std::vector<CurvePoint> pattern_scan(const SlitGeometry &geom, double fixed_x2_m,
                                     const std::vector<double> &x1_range_m) {
  if (x1_range_m.empty()) throw InvalidInput("scan range is empty");
  std::vector<CurvePoint> curve;
  curve.reserve(x1_range_m.size());
  double peak = 0.0;
  for (double x1 : x1_range_m) {
    const double c = coincidence_pattern(geom, x1, fixed_x2_m);
    peak = std::max(peak, c);
    curve.push_back({x1, c});
  }
  if (peak > 0.0)
    for (auto &p : curve) p.y /= peak;
  return curve;
}

} // namespace pdclab
