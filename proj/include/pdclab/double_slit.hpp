#pragma once

#include <vector>

namespace pdclab {

/// Two slits, each crossed by one photon of a down-converted pair, and two
/// detectors in the far field. Defaults describe the 702 nm apparatus.
struct SlitGeometry {
  double separation_m = 100e-6;
  double width_m = 10e-6;
  double wavelength_m = 702e-9;
  double incidence_a = 0.0;   ///< radians, photon incidence on slit A
  double incidence_b = 0.0;   ///< radians, photon incidence on slit B
  double det1_distance_m = 1.21;
  double det2_distance_m = 1.5;
  double aperture1_m = 2e-3;  ///< top-hat averaging width, 0 = point detector
  double aperture2_m = 2e-3;

  double wavevector() const;
};

void validate(const SlitGeometry &g);

/// Single-slit diffraction amplitude sin(x)/x with
/// x = (k w / 2)(sin theta - sin theta_i).
double diffraction_g(double theta, double theta_i, const SlitGeometry &geom);

/// Fourth-order coincidence rate (arbitrary units) for detectors at transverse
/// offsets x1, x2 from the symmetry axis. Finite apertures average the point
/// pattern over a top-hat window in each coordinate.
double coincidence_pattern(const SlitGeometry &geom, double x1_m, double x2_m);

/// Point-detector pattern, ignoring the apertures.
double coincidence_pattern_point(const SlitGeometry &geom, double x1_m, double x2_m);

struct CurvePoint {
  double x = 0.0;
  double y = 0.0;
};

/// coincidence_pattern along x1 with x2 fixed, normalized to the curve maximum.
std::vector<CurvePoint> pattern_scan(const SlitGeometry &geom, double fixed_x2_m,
                                     const std::vector<double> &x1_range_m);

} // namespace pdclab
