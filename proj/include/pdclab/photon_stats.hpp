#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pdclab {

enum class SourceKind { heralded_pdc, coherent, thermal };

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string &name);

/// Gated photon-counting source. Each gate the photons present are routed to
/// detector 1 with probability `split_ratio`, otherwise to detector 2.
struct SourceModel {
  SourceKind kind = SourceKind::coherent;
  double mean_per_gate = 0.1; ///< coherent / thermal signal photons per gate
  int modes = 1;              ///< thermal modes sharing mean_per_gate
  double split_ratio = 0.5;
  double eta1 = 1.0;
  double eta2 = 1.0;
  double dark_per_gate_1 = 0.0; ///< mean dark counts per gate
  double dark_per_gate_2 = 0.0;

  // Heralded source only.
  double heralding_fidelity = 1.0; ///< P(heralded photon present in the gate)
  double background_per_gate = 0.0;
  double trigger_rate_hz = 0.0;
  double trigger_efficiency = 1.0; ///< pairs per trigger = 1 / trigger_efficiency
  double gate_width_s = 7e-9;

  /// Mean number of uncorrelated photons per gate on the signal arm:
  /// constant background plus photons of other pairs emitted in the window.
  double accidental_mean_per_gate() const;

  static SourceModel coherent_laser(double mean_per_gate);
  static SourceModel thermal_lamp(double mean_per_gate, int modes = 1000);
  static SourceModel heralded(double trigger_rate_hz);
};

void validate(const SourceModel &src);

struct CountTally {
  std::int64_t gates_n = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
  std::int64_t nc = 0;
  double alpha = 0.0;
  double alpha_sigma = 0.0;
  bool defined = false; ///< false when n1 or n2 is zero and alpha has no value
};

/// alpha = nc N / (n1 n2) with sigma_alpha / alpha = sqrt(1/nc + 1/n1 + 1/n2).
/// This Poisson propagation ignores the positive nc-n1 correlation and so
/// slightly overstates the spread. With nc = 0 the spread uses one count.
CountTally make_tally(std::int64_t gates_n, std::int64_t n1, std::int64_t n2, std::int64_t nc);

/// Monte Carlo of n_gates gates; at most one count per detector per gate.
/// Deterministic for a given seed.
CountTally simulate_gates(const SourceModel &src, std::int64_t n_gates, std::uint64_t seed);

/// Rare-detection limit of alpha from the first two factorial moments of the
/// photon number: coherent 1, M thermal modes 1 + 1/M, heralded
/// (b1 p2 + b2 p1 + b1 b2) / ((p1 + b1)(p2 + b2)) with p the heralded-photon
/// and b the accidental click probabilities.
std::optional<double> expected_alpha(const SourceModel &src);

/// Exact expectation of P(both) / (P(1) P(2)) for the click model that
/// simulate_gates samples, from the photon-number generating function.
std::optional<double> exact_alpha(const SourceModel &src);

/// Standard deviation of alpha over multinomial resamples of the gate outcomes.
double bootstrap_alpha_sigma(const CountTally &tally, int replicates, std::uint64_t seed);

struct RatePoint {
  double trigger_rate_hz = 0.0;
  CountTally tally{};
  double expected = 0.0; ///< exact_alpha at this rate
};

/// Heralded-source alpha against trigger rate; each point runs
/// rate * acquisition_s gates with its own derived seed.
std::vector<RatePoint> alpha_vs_rate_scan(const SourceModel &src,
                                          const std::vector<double> &trigger_rates_hz,
                                          double acquisition_s, std::uint64_t seed);

/// Seed for the i-th independent stream derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

} // namespace pdclab
