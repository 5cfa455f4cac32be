#pragma once

// Two-photon polarization state |HH> + f|VV> and its detection statistics
// through real (leaky) polarizers.
//
// Angle convention: an analyzer angle theta is measured from the V axis, so
// the analyzer axis is (sin theta, cos theta) in the (H, V) basis and an H
// photon is transmitted with amplitude sin theta.

namespace pdclab {

struct EntangledState {
  double f_mag = 1.0;   ///< |f|, >= 0
  double f_phase = 0.0; ///< arg f in [0, 2 pi)

  double hh_weight() const { return 1.0 / (1.0 + f_mag * f_mag); }
  double vv_weight() const { return f_mag * f_mag / (1.0 + f_mag * f_mag); }
  /// (f + f*) / (1 + |f|^2), the coefficient of the interference term.
  double interference_weight() const;
};

/// Builds a normalized state; rejects negative or non-finite |f|.
EntangledState make_state(double f_mag, double f_phase = 0.0);

/// Intensity transmissions of a polarizer for light polarized along (par)
/// and normal to (perp) its axis. 0 <= perp <= par <= 1.
struct Transmissions {
  double par = 1.0;
  double perp = 0.0;

  static Transmissions ideal() { return {1.0, 0.0}; }
  static Transmissions none() { return {1.0, 1.0}; }
};

void validate(const Transmissions &eps);

struct AnalyzerSetting {
  double theta = 0.0; ///< radians from the V axis
  Transmissions eps{};
  bool is_open = false; ///< no polarizer in this arm

  static AnalyzerSetting at(double theta, Transmissions eps = Transmissions::ideal()) {
    return {theta, eps, false};
  }
  static AnalyzerSetting open() { return {0.0, Transmissions::none(), true}; }

  /// Transmissions actually seen by the photon; an open arm passes everything.
  Transmissions effective() const { return is_open ? Transmissions::none() : eps; }
};

/// Probability per emitted pair that both photons pass their analyzers.
/// `alignment` in [0, 1] scales the interference term only and models
/// imperfect spatial overlap of the two emissions.
double coincidence_prob(const EntangledState &state, const AnalyzerSetting &a1,
                        const AnalyzerSetting &a2, double alignment = 1.0);

/// Probability per pair that the photon in one arm passes its analyzer,
/// irrespective of the other photon. Equal to coincidence_prob with the other
/// arm open; the state is symmetric so the same expression serves both arms.
double single_prob(const EntangledState &state, const AnalyzerSetting &a);

/// Fringe visibility (max - min) / (max + min) of coincidence_prob while the
/// arm-1 analyzer (transmissions `eps`) rotates through a half turn and arm 2
/// stays at `fixed`. A flat or all-zero pattern yields 0.
double visibility(const EntangledState &state, const AnalyzerSetting &fixed,
                  const Transmissions &eps, double alignment = 1.0);

} // namespace pdclab
