#include "pdclab/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "pdclab/errors.hpp"
#include "pdclab/units.hpp"

namespace pdclab {

CHSettings CHSettings::normalized() const {
  auto wrap = [](double a) {
    double w = wrap_half_turn(a);
    // Values a hair below pi are the same polarizer setting as 0.
    if (kPi - w < 1e-12) w = 0.0;
    return w;
  };
  return {wrap(theta1), wrap(theta2), wrap(theta1p), wrap(theta2p)};
}

CHSettings CHSettings::from_degrees(double t1, double t2, double t1p, double t2p) {
  return CHSettings{deg_to_rad(t1), deg_to_rad(t2), deg_to_rad(t1p), deg_to_rad(t2p)}.normalized();
}

CHResult ch_sum(const EntangledState &state, const CHSettings &s, const Transmissions &eps,
                double alignment) {
  validate(eps);
  auto n = [&](double a, double b) {
    return coincidence_prob(state, AnalyzerSetting::at(a, eps), AnalyzerSetting::at(b, eps),
                            alignment);
  };
  // With one analyzer removed the open arm passes everything.
  auto marginal = [&](double a) {
    return coincidence_prob(state, AnalyzerSetting::at(a, eps), AnalyzerSetting::open(),
                            alignment);
  };
  CHResult r;
  r.settings = s.normalized();
  r.coincidence_sum = n(s.theta1, s.theta2) - n(s.theta1, s.theta2p) + n(s.theta1p, s.theta2) +
                      n(s.theta1p, s.theta2p);
  r.marginal_sum = marginal(s.theta1p) + marginal(s.theta2);
  r.ch_per_pair = r.coincidence_sum - r.marginal_sum;
  r.ratio_r = r.marginal_sum > 0.0 ? r.coincidence_sum / r.marginal_sum : 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// ChLandscape

ChLandscape::ChLandscape(const EntangledState &state, const Transmissions &eps, double alignment,
                         double grid_step_deg)
    : hh_(state.hh_weight()), vv_(state.vv_weight()), eps_(eps) {
  validate(eps);
  if (!(alignment >= 0.0 && alignment <= 1.0)) throw InvalidInput("alignment must lie in [0, 1]");
  if (!(grid_step_deg > 0.0 && grid_step_deg <= 90.0))
    throw InvalidInput("grid step must lie in (0, 90] degrees");
  const double contrast = eps.par - eps.perp;
  cross_ = alignment * state.interference_weight() * contrast * contrast;

  n_ = static_cast<int>(std::lround(180.0 / grid_step_deg));
  step_ = kPi / n_;
  table_.resize(static_cast<std::size_t>(n_) * n_);
  marg_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    marg_[i] = marginal(i * step_);
    for (int j = 0; j < n_; ++j) table_[i * n_ + j] = coincidence(i * step_, j * step_);
  }
}

double ChLandscape::coincidence(double theta1, double theta2) const {
  const double s1 = std::sin(theta1), c1 = std::cos(theta1);
  const double s2 = std::sin(theta2), c2 = std::cos(theta2);
  const double h1 = eps_.par * s1 * s1 + eps_.perp * c1 * c1;
  const double v1 = eps_.par * c1 * c1 + eps_.perp * s1 * s1;
  const double h2 = eps_.par * s2 * s2 + eps_.perp * c2 * c2;
  const double v2 = eps_.par * c2 * c2 + eps_.perp * s2 * s2;
  return hh_ * h1 * h2 + vv_ * v1 * v2 + cross_ * s1 * c1 * s2 * c2;
}

double ChLandscape::marginal(double theta) const {
  const double s = std::sin(theta), c = std::cos(theta);
  return hh_ * (eps_.par * s * s + eps_.perp * c * c) + vv_ * (eps_.par * c * c + eps_.perp * s * s);
}

double ChLandscape::coincidence_sum(const CHSettings &s) const {
  return coincidence(s.theta1, s.theta2) - coincidence(s.theta1, s.theta2p) +
         coincidence(s.theta1p, s.theta2) + coincidence(s.theta1p, s.theta2p);
}

double ChLandscape::marginal_sum(const CHSettings &s) const {
  return marginal(s.theta1p) + marginal(s.theta2);
}

namespace {

struct GridPoint {
  double value;
  std::array<int, 4> idx;
};

int circular_distance(int a, int b, int n) {
  const int d = std::abs(a - b) % n;
  return std::min(d, n - d);
}

// Best `count` grid points, pairwise more than two cells apart in some angle.
std::vector<GridPoint> pick_separated(std::vector<GridPoint> &pts, int count, int n) {
  const std::size_t pool = std::min<std::size_t>(pts.size(), 4096);
  auto better = [](const GridPoint &a, const GridPoint &b) {
    if (a.value != b.value) return a.value > b.value;
    return a.idx < b.idx;
  };
  std::nth_element(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(pool - 1), pts.end(),
                   better);
  std::sort(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(pool), better);
  std::vector<GridPoint> chosen;
  for (std::size_t p = 0; p < pool && static_cast<int>(chosen.size()) < count; ++p) {
    bool distinct = true;
    for (const auto &c : chosen) {
      int far = 0;
      for (int k = 0; k < 4; ++k) far = std::max(far, circular_distance(pts[p].idx[k], c.idx[k], n));
      if (far <= 2) {
        distinct = false;
        break;
      }
    }
    if (distinct) chosen.push_back(pts[p]);
  }
  return chosen;
}

} // namespace

ChLandscape::Maximum ChLandscape::maximize(double wc, double ws,
                                           const OptimizerOptions &opt) const {
  const int n = n_;
  // For fixed (theta2, theta2') the theta1 terms decouple:
  // best_diff[j][k] = max_i T[i][j] - T[i][k].
  std::vector<double> best_diff(static_cast<std::size_t>(n) * n);
  std::vector<int> best_i(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double best = -1e300;
      int arg = 0;
      for (int i = 0; i < n; ++i) {
        const double d = table_[i * n + j] - table_[i * n + k];
        if (d > best) {
          best = d;
          arg = i;
        }
      }
      best_diff[j * n + k] = best;
      best_i[j * n + k] = arg;
    }
  }

  std::vector<GridPoint> pts;
  pts.reserve(static_cast<std::size_t>(n) * n * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double v = wc * (best_diff[j * n + k] + table_[l * n + j] + table_[l * n + k]) -
                         ws * (marg_[l] + marg_[j]);
        pts.push_back({v, {best_i[j * n + k], j, l, k}});
      }

  auto chosen = pick_separated(pts, std::max(1, opt.starts), n);
  std::vector<CHSettings> starts;
  for (const auto &c : chosen)
    starts.push_back({c.idx[0] * step_, c.idx[1] * step_, c.idx[2] * step_, c.idx[3] * step_});
  Maximum m = refine(starts, {true, true, true, true}, wc, ws, opt);
  m.coarse_value = chosen.front().value;
  return m;
}

ChLandscape::Maximum ChLandscape::maximize_fixed_theta2p(double theta2p, double wc, double ws,
                                                         const OptimizerOptions &opt) const {
  const int n = n_;
  std::vector<double> fixed_col(n);
  for (int i = 0; i < n; ++i) fixed_col[i] = coincidence(i * step_, theta2p);
  std::vector<double> best_diff(n);
  std::vector<int> best_i(n);
  for (int j = 0; j < n; ++j) {
    double best = -1e300;
    int arg = 0;
    for (int i = 0; i < n; ++i) {
      const double d = table_[i * n + j] - fixed_col[i];
      if (d > best) {
        best = d;
        arg = i;
      }
    }
    best_diff[j] = best;
    best_i[j] = arg;
  }
  std::vector<GridPoint> pts;
  pts.reserve(static_cast<std::size_t>(n) * n);
  const int k_fixed = static_cast<int>(std::lround(wrap_half_turn(theta2p) / step_)) % n;
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const double v =
          wc * (best_diff[j] + table_[l * n + j] + fixed_col[l]) - ws * (marg_[l] + marg_[j]);
      pts.push_back({v, {best_i[j], j, l, k_fixed}});
    }
  auto chosen = pick_separated(pts, std::max(1, opt.starts), n);
  std::vector<CHSettings> starts;
  for (const auto &c : chosen)
    starts.push_back({c.idx[0] * step_, c.idx[1] * step_, c.idx[2] * step_, theta2p});
  Maximum m = refine(starts, {true, true, true, false}, wc, ws, opt);
  m.coarse_value = chosen.front().value;
  return m;
}

ChLandscape::Maximum ChLandscape::refine(const std::vector<CHSettings> &starts,
                                         std::array<bool, 4> free, double wc, double ws,
                                         const OptimizerOptions &opt) const {
  if (!(opt.resolution_deg > 0.0)) throw InvalidInput("optimizer resolution must be positive");
  const double min_step = deg_to_rad(opt.resolution_deg);
  constexpr long kMaxEvaluations = 2'000'000;

  Maximum best;
  bool have = false;
  for (const auto &start : starts) {
    auto x = start.as_array();
    double fx = value(start, wc, ws);
    double step = step_;
    long evals = 0;
    while (step >= min_step) {
      bool moved = false;
      for (int c = 0; c < 4; ++c) {
        if (!free[c]) continue;
        for (double sign : {1.0, -1.0}) {
          auto y = x;
          y[c] += sign * step;
          const double fy = value(CHSettings::from_array(y), wc, ws);
          ++evals;
          if (fy > fx) {
            x = y;
            fx = fy;
            moved = true;
          }
        }
      }
      if (!moved) step *= 0.5;
      if (evals > kMaxEvaluations)
        throw NumericalFailure("CH settings refinement did not converge");
    }
    if (!std::isfinite(fx)) throw NumericalFailure("CH objective is not finite");
    if (!have || fx > best.value) {
      best.value = fx;
      best.settings = CHSettings::from_array(x).normalized();
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

// Ordering key for symmetry-equivalent optima.
bool canonical_less(const CHSettings &a, const CHSettings &b) {
  constexpr double tol = 1e-9;
  const std::array<double, 4> ka{a.theta2p, a.theta1, a.theta2, a.theta1p};
  const std::array<double, 4> kb{b.theta2p, b.theta1, b.theta2, b.theta1p};
  for (int i = 0; i < 4; ++i) {
    if (ka[i] < kb[i] - tol) return true;
    if (ka[i] > kb[i] + tol) return false;
  }
  return false;
}

} // namespace

CHOptimum optimize_settings(const EntangledState &state, const Transmissions &eps,
                            double alignment, const OptimizerOptions &opt) {
  if (!(opt.grid_step_deg > 0.0 && opt.grid_step_deg <= 3.0))
    throw InvalidInput("coarse grid step must lie in (0, 3] degrees");
  const ChLandscape land(state, eps, alignment, opt.grid_step_deg);

  const auto global = land.maximize(1.0, 1.0, opt);
  const auto pinned = land.maximize_fixed_theta2p(0.0, 1.0, 1.0, opt);

  CHOptimum out;
  out.coarse_grid_value = global.coarse_value;
  constexpr double kFamilyTol = 1e-8;
  CHSettings pick = global.settings;
  if (pinned.value >= global.value - kFamilyTol) {
    pick = pinned.settings;
    out.theta2p_zero_representative = true;
  }

  // Reflecting every angle is a symmetry of the coincidence law.
  const CHSettings mirrored =
      CHSettings{-pick.theta1, -pick.theta2, -pick.theta1p, -pick.theta2p}.normalized();
  if (canonical_less(mirrored, pick)) pick = mirrored;

  out.best = ch_sum(state, pick, eps, alignment);
  if (!std::isfinite(out.best.ch_per_pair)) throw NumericalFailure("CH optimum is not finite");
  return out;
}

} // namespace pdclab
