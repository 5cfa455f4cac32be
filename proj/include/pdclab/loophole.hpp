#pragma once

#include <optional>
#include <vector>

#include "pdclab/bell.hpp"
#include "pdclab/polarization.hpp"

namespace pdclab {

// ---------------------------------------------------------------------------
// Detection-efficiency bounds (true-singles Clauser-Horne form)

struct LoopholeOptions {
  /// Background singles probability per pair and detector. Enters the
  /// subtracted singles terms only; 0 is the no-background limit.
  double background = 0.0;
  OptimizerOptions optimizer{};
};

/// max over settings of  eta^2 * S - eta * (P1(theta1') + P2(theta2)) - 2 b,
/// the CH sum per emitted pair when every photon is detected with total
/// efficiency eta and the marginals are genuine single counts.
double ch_per_detection(const EntangledState &state, double eta, const Transmissions &eps,
                        const LoopholeOptions &opt = {});

/// Smallest eta at which ch_per_detection becomes positive, by bisection on
/// eta (interval width <= `tolerance`). std::nullopt means no violation at any
/// eta <= 1, e.g. for a product state.
std::optional<double> critical_efficiency(const EntangledState &state, const Transmissions &eps,
                                          const LoopholeOptions &opt = {},
                                          double tolerance = 1e-5);

struct LoopholeMap {
  std::vector<double> f_grid;
  std::vector<double> eta_grid;
  /// ch_per_pair[i][j] at f_grid[i], eta_grid[j].
  std::vector<std::vector<double>> ch_per_pair;
};

LoopholeMap loophole_map(const std::vector<double> &f_grid, const std::vector<double> &eta_grid,
                         const Transmissions &eps, const LoopholeOptions &opt = {});

/// Evenly spaced grid of `steps` points on [lo, hi] (steps >= 2).
std::vector<double> linspace(double lo, double hi, int steps);

// ---------------------------------------------------------------------------
// Stochastic-optics detection model: minimum reliably detected signal level

struct SantosParams {
  double eta = 0.51;               ///< detection quantum efficiency
  double focal_m = 0.009;          ///< lens focal length in front of detectors
  double radius_m = 0.001;         ///< active radius of the nonlinear medium
  double distance_m = 0.75;        ///< medium-to-detector distance
  double coherence_s = 4.2e-13;    ///< coherence time of incident photons
  double wavelength_m = 7.11e-7;   ///< mean detected wavelength (789/633 nm pair)
  double depth_m = 3e-5;           ///< active detector depth L
  double absorb_s = 1.0;           ///< absorption time T
  double singles_rate_hz = 2.7e6;  ///< measured single-detection rate R_S
};

/// Detection rate below which the model departs from quantum predictions:
/// eta F^2 Rc^2 / (2 L d^2 lambda sqrt(tau T)).
double santos_min_rate(const SantosParams &p);

/// Absorption time T at which santos_min_rate equals the measured rate R_S.
double santos_T_bound(const SantosParams &p);

/// Mean of the two conjugate wavelengths, the default lambda above.
inline double mean_wavelength(double a_m, double b_m) { return 0.5 * (a_m + b_m); }

// ---------------------------------------------------------------------------
// Visibility test of the simple local model

struct VisibilityInequality {
  double v_a = 0.0;
  double v_b = 0.0;
  double lhs = 0.0; ///< v_b / v_a
  double rhs = 0.0;
  bool satisfied = false; ///< lhs > rhs, i.e. the local model survives
};

/// Counts at relative analyzer angles 0, pi/2, pi/8, 3 pi/8.
VisibilityInequality visibility_inequality(double n0, double n90, double n22p5, double n67p5,
                                           double eta);

} // namespace pdclab
