#pragma once

#include <array>
#include <vector>

#include "pdclab/polarization.hpp"

namespace pdclab {

/// The four analyzer angles of a Clauser-Horne test, radians in [0, pi).
struct CHSettings {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta1p = 0.0;
  double theta2p = 0.0;

  std::array<double, 4> as_array() const { return {theta1, theta2, theta1p, theta2p}; }
  static CHSettings from_array(const std::array<double, 4> &a) { return {a[0], a[1], a[2], a[3]}; }
  CHSettings normalized() const;
  static CHSettings from_degrees(double t1, double t2, double t1p, double t2p);
};

struct CHResult {
  double ch_per_pair = 0.0; ///< CH divided by the number of emitted pairs
  double ratio_r = 0.0;     ///< coincidence sum over marginal sum
  double coincidence_sum = 0.0;
  double marginal_sum = 0.0;
  CHSettings settings{};
};

/// Clauser-Horne combination with the marginals N(theta1', inf) and
/// N(inf, theta2) taken as coincidences with one analyzer removed. Under this
/// convention a common detection efficiency cancels in R.
CHResult ch_sum(const EntangledState &state, const CHSettings &s,
                const Transmissions &eps = Transmissions::ideal(), double alignment = 1.0);

struct OptimizerOptions {
  double grid_step_deg = 3.0;    ///< coarse exhaustive grid spacing, <= 3
  double resolution_deg = 0.001; ///< final compass-search step
  int starts = 6;                ///< refined grid candidates
};

/// Tabulated CH objective for one state and polarizer pair.
///
/// The objective is  wc * S - ws * M  with S the four-coincidence sum and M the
/// two-marginal sum. wc = ws = 1 is the per-pair CH of a Bell test; wc = eta^2,
/// ws = eta is the true-singles form used for detection-loophole bounds.
class ChLandscape {
public:
  ChLandscape(const EntangledState &state, const Transmissions &eps, double alignment = 1.0,
              double grid_step_deg = 3.0);

  double coincidence(double theta1, double theta2) const;
  double marginal(double theta) const;
  double coincidence_sum(const CHSettings &s) const;
  double marginal_sum(const CHSettings &s) const;
  double value(const CHSettings &s, double wc, double ws) const {
    return wc * coincidence_sum(s) - ws * marginal_sum(s);
  }

  struct Maximum {
    CHSettings settings{};
    double value = 0.0;
    double coarse_value = 0.0; ///< best exhaustive-grid value before refinement
  };

  /// Global maximum over all four angles: exhaustive grid, then compass-search
  /// refinement from the best few well-separated grid cells.
  Maximum maximize(double wc, double ws, const OptimizerOptions &opt = {}) const;

  /// Same, with theta2' held at `theta2p` and the other three angles free.
  Maximum maximize_fixed_theta2p(double theta2p, double wc, double ws,
                                 const OptimizerOptions &opt = {}) const;

  int grid_size() const { return n_; }

private:
  Maximum refine(const std::vector<CHSettings> &starts, std::array<bool, 4> free, double wc,
                 double ws, const OptimizerOptions &opt) const;

  double hh_, vv_, cross_;
  Transmissions eps_;
  int n_;
  double step_;
  std::vector<double> table_; // n x n coincidence grid, arm-1 index major
  std::vector<double> marg_;  // n marginal grid
};

struct CHOptimum {
  CHResult best{};
  double coarse_grid_value = 0.0; ///< CH of the best coarse-grid cell
  /// True when an optimum with theta2' = 0 attains the global maximum.
  bool theta2p_zero_representative = false;
};

/// Maximizes the per-pair CH over all settings and reports R there.
///
/// Optima come in symmetry families (common rotation for f = 1, reflection of
/// all angles for any f, and a one-parameter family for real f). The reported
/// representative has theta2' as small as possible, then the lexicographically
/// smallest (theta1, theta2, theta1'). A non-violating state yields CH <= 0,
/// which is a valid result.
CHOptimum optimize_settings(const EntangledState &state,
                            const Transmissions &eps = Transmissions::ideal(),
                            double alignment = 1.0, const OptimizerOptions &opt = {});

} // namespace pdclab
