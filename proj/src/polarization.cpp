#include "pdclab/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdclab/errors.hpp"
#include "pdclab/units.hpp"

namespace pdclab {

double EntangledState::interference_weight() const {
  return 2.0 * f_mag * std::cos(f_phase) / (1.0 + f_mag * f_mag);
}

EntangledState make_state(double f_mag, double f_phase) {
  if (!std::isfinite(f_mag) || f_mag < 0.0)
    throw InvalidInput("f_mag must be a finite value >= 0, got " + std::to_string(f_mag));
  if (!std::isfinite(f_phase))
    throw InvalidInput("f_phase must be finite");
  double phase = std::fmod(f_phase, 2.0 * kPi);
  if (phase < 0.0) phase += 2.0 * kPi;
  return {f_mag, phase};
}

void validate(const Transmissions &eps) {
  if (!(eps.perp >= 0.0 && eps.perp <= eps.par && eps.par <= 1.0))
    throw InvalidInput("polarizer transmissions must satisfy 0 <= eps_perp <= eps_par <= 1");
}

namespace {

void check_alignment(double alignment) {
  if (!(alignment >= 0.0 && alignment <= 1.0))
    throw InvalidInput("alignment must lie in [0, 1]");
}

} // namespace

double coincidence_prob(const EntangledState &state, const AnalyzerSetting &a1,
                        const AnalyzerSetting &a2, double alignment) {
  check_alignment(alignment);
  const Transmissions e1 = a1.effective();
  const Transmissions e2 = a2.effective();
  validate(e1);
  validate(e2);

  const double s1 = std::sin(a1.theta), c1 = std::cos(a1.theta);
  const double s2 = std::sin(a2.theta), c2 = std::cos(a2.theta);

  // Pass probability of an H (resp. V) photon through each analyzer.
  const double h1 = e1.par * s1 * s1 + e1.perp * c1 * c1;
  const double v1 = e1.par * c1 * c1 + e1.perp * s1 * s1;
  const double h2 = e2.par * s2 * s2 + e2.perp * c2 * c2;
  const double v2 = e2.par * c2 * c2 + e2.perp * s2 * s2;

  const double cross = (e1.par - e1.perp) * (e2.par - e2.perp) * s1 * c1 * s2 * c2;
  return state.hh_weight() * h1 * h2 + state.vv_weight() * v1 * v2 +
         alignment * state.interference_weight() * cross;
}

double single_prob(const EntangledState &state, const AnalyzerSetting &a) {
  return coincidence_prob(state, a, AnalyzerSetting::open());
}

double visibility(const EntangledState &state, const AnalyzerSetting &fixed,
                  const Transmissions &eps, double alignment) {
  // P(theta1) = A + B cos 2theta1 + C sin 2theta1, so three samples fix it.
  auto p = [&](double theta) {
    return coincidence_prob(state, AnalyzerSetting::at(theta, eps), fixed, alignment);
  };
  const double p0 = p(0.0);
  const double p45 = p(kPi / 4.0);
  const double p90 = p(kPi / 2.0);
  const double mean = 0.5 * (p0 + p90);
  const double b = 0.5 * (p0 - p90);
  const double c = p45 - mean;
  double amplitude = std::hypot(b, c);
  if (amplitude <= 1e-14 * std::abs(mean)) amplitude = 0.0;
  const double hi = mean + amplitude;
  const double lo = std::max(0.0, mean - amplitude);
  if (hi + lo <= 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

} // namespace pdclab
