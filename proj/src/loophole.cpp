#include "pdclab/loophole.hpp"

#include <cmath>
#include <string>

#include "pdclab/errors.hpp"
#include "pdclab/units.hpp"

namespace pdclab {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidInput("eta must lie in [0, 1]");
}

void check_background(double b) {
  if (!(b >= 0.0 && std::isfinite(b))) throw InvalidInput("background must be >= 0");
}

double ch_on(const ChLandscape &land, double eta, const LoopholeOptions &opt) {
  return land.maximize(eta * eta, eta, opt.optimizer).value - 2.0 * opt.background;
}

} // namespace

double ch_per_detection(const EntangledState &state, double eta, const Transmissions &eps,
                        const LoopholeOptions &opt) {
  check_eta(eta);
  check_background(opt.background);
  const ChLandscape land(state, eps, 1.0, opt.optimizer.grid_step_deg);
  return ch_on(land, eta, opt);
}

std::optional<double> critical_efficiency(const EntangledState &state, const Transmissions &eps,
                                          const LoopholeOptions &opt, double tolerance) {
  check_background(opt.background);
  if (!(tolerance > 0.0 && tolerance <= 1e-4))
    throw InvalidInput("critical efficiency tolerance must lie in (0, 1e-4]");
  if (state.f_mag == 0.0) return std::nullopt;

  const ChLandscape land(state, eps, 1.0, opt.optimizer.grid_step_deg);
  if (ch_on(land, 1.0, opt) <= 0.0) return std::nullopt;

  // The maximum of eta^2 S - eta M over settings is increasing in eta wherever
  // it is positive, so the sign change is unique.
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (ch_on(land, mid, opt) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

LoopholeMap loophole_map(const std::vector<double> &f_grid, const std::vector<double> &eta_grid,
                         const Transmissions &eps, const LoopholeOptions &opt) {
  if (f_grid.empty() || eta_grid.empty()) throw InvalidInput("loophole map grids must be nonempty");
  check_background(opt.background);
  for (double eta : eta_grid) check_eta(eta);
  LoopholeMap map{f_grid, eta_grid, {}};
  map.ch_per_pair.reserve(f_grid.size());
  for (double f : f_grid) {
    const ChLandscape land(make_state(f), eps, 1.0, opt.optimizer.grid_step_deg);
    std::vector<double> row;
    row.reserve(eta_grid.size());
    for (double eta : eta_grid) row.push_back(ch_on(land, eta, opt));
    map.ch_per_pair.push_back(std::move(row));
  }
  return map;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) throw InvalidInput("a grid needs at least 2 steps");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = lo + (hi - lo) * i / (steps - 1);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void check_santos(const SantosParams &p, bool need_t) {
  auto positive = [](double v, const char *name) {
    if (!(v > 0.0 && std::isfinite(v)))
      throw InvalidInput(std::string(name) + " must be a finite value > 0");
  };
  if (!(p.eta > 0.0 && p.eta <= 1.0)) throw InvalidInput("eta must lie in (0, 1]");
  positive(p.focal_m, "focal_m");
  positive(p.radius_m, "radius_m");
  positive(p.distance_m, "distance_m");
  positive(p.coherence_s, "coherence_s");
  positive(p.wavelength_m, "wavelength_m");
  positive(p.depth_m, "depth_m");
  if (need_t) positive(p.absorb_s, "absorb_s");
}

// eta F^2 Rc^2 / (2 L d^2 lambda); the rate bound is this over sqrt(tau T).
double santos_prefactor(const SantosParams &p) {
  return p.eta * p.focal_m * p.focal_m * p.radius_m * p.radius_m /
         (2.0 * p.depth_m * p.distance_m * p.distance_m * p.wavelength_m);
}

} // namespace

double santos_min_rate(const SantosParams &p) {
  check_santos(p, true);
  return santos_prefactor(p) / std::sqrt(p.coherence_s * p.absorb_s);
}

double santos_T_bound(const SantosParams &p) {
  check_santos(p, false);
  if (!(p.singles_rate_hz > 0.0 && std::isfinite(p.singles_rate_hz)))
    throw InvalidInput("singles_rate_hz must be a finite value > 0");
  const double ratio = santos_prefactor(p) / p.singles_rate_hz;
  return ratio * ratio / p.coherence_s;
}

// ---------------------------------------------------------------------------

VisibilityInequality visibility_inequality(double n0, double n90, double n22p5, double n67p5,
                                           double eta) {
  for (double n : {n0, n90, n22p5, n67p5})
    if (!(n >= 0.0 && std::isfinite(n))) throw InvalidInput("counts must be finite and >= 0");
  check_eta(eta);
  if (n0 + n90 <= 0.0) throw InvalidInput("N(0) + N(pi/2) is zero");
  if (n22p5 + n67p5 <= 0.0) throw InvalidInput("N(pi/8) + N(3pi/8) is zero");

  VisibilityInequality r;
  r.v_a = (n0 - n90) / (n0 + n90);
  r.v_b = std::sqrt(2.0) * (n22p5 - n67p5) / (n22p5 + n67p5);
  if (r.v_a == 0.0) throw InvalidInput("V_a is zero; the ratio V_b / V_a is undefined");
  r.lhs = r.v_b / r.v_a;

  const double x = kPi * eta / 2.0;
  const double c = std::cos(x);
  const double sinc2 = x == 0.0 ? 1.0 : std::pow(std::sin(x) / x, 2);
  r.rhs = 1.0 + c * c * (r.v_b - sinc2);
  r.satisfied = r.lhs > r.rhs;
  return r;
}

} // namespace pdclab
