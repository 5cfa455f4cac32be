#include "pdclab/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pdclab/errors.hpp"

namespace pdclab {

std::string to_string(SourceKind kind) {
  switch (kind) {
  case SourceKind::heralded_pdc: return "heralded_pdc";
  case SourceKind::coherent: return "coherent";
  case SourceKind::thermal: return "thermal";
  }
  return "unknown";
}

SourceKind source_kind_from_string(const std::string &name) {
  if (name == "heralded_pdc" || name == "heralded") return SourceKind::heralded_pdc;
  if (name == "coherent") return SourceKind::coherent;
  if (name == "thermal") return SourceKind::thermal;
  throw InvalidInput("unknown source kind '" + name +
                     "' (expected heralded_pdc, coherent or thermal)");
}

double SourceModel::accidental_mean_per_gate() const {
  return background_per_gate +
         heralding_fidelity * trigger_rate_hz / trigger_efficiency * gate_width_s;
}

SourceModel SourceModel::coherent_laser(double mean_per_gate) {
  SourceModel s;
  s.kind = SourceKind::coherent;
  s.mean_per_gate = mean_per_gate;
  return s;
}

SourceModel SourceModel::thermal_lamp(double mean_per_gate, int modes) {
  SourceModel s;
  s.kind = SourceKind::thermal;
  s.mean_per_gate = mean_per_gate;
  s.modes = modes;
  return s;
}

SourceModel SourceModel::heralded(double trigger_rate_hz) {
  SourceModel s;
  s.kind = SourceKind::heralded_pdc;
  s.heralding_fidelity = 0.3;
  s.trigger_efficiency = 0.1;
  s.trigger_rate_hz = trigger_rate_hz;
  s.eta1 = s.eta2 = 0.51;
  // 300 Hz dark rate in the 7 ns window.
  s.dark_per_gate_1 = s.dark_per_gate_2 = 300.0 * 7e-9;
  return s;
}

void validate(const SourceModel &s) {
  auto prob = [](double v, const char *name) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput(std::string(name) + " must lie in [0, 1]");
  };
  auto nonneg = [](double v, const char *name) {
    if (!(v >= 0.0 && std::isfinite(v))) throw InvalidInput(std::string(name) + " must be >= 0");
  };
  nonneg(s.mean_per_gate, "mean_per_gate");
  if (s.modes < 1) throw InvalidInput("modes must be >= 1");
  prob(s.split_ratio, "split_ratio");
  prob(s.eta1, "eta1");
  prob(s.eta2, "eta2");
  nonneg(s.dark_per_gate_1, "dark_per_gate_1");
  nonneg(s.dark_per_gate_2, "dark_per_gate_2");
  if (s.kind == SourceKind::heralded_pdc) {
    prob(s.heralding_fidelity, "heralding_fidelity");
    nonneg(s.background_per_gate, "background_per_gate");
    nonneg(s.trigger_rate_hz, "trigger_rate_hz");
    nonneg(s.gate_width_s, "gate_width_s");
    if (!(s.trigger_efficiency > 0.0 && s.trigger_efficiency <= 1.0))
      throw InvalidInput("trigger_efficiency must lie in (0, 1]");
  }
}

CountTally make_tally(std::int64_t gates_n, std::int64_t n1, std::int64_t n2, std::int64_t nc) {
  if (gates_n < 0 || n1 < 0 || n2 < 0 || nc < 0 || n1 > gates_n || n2 > gates_n ||
      nc > std::min(n1, n2))
    throw InvalidInput("inconsistent count tally");
  CountTally t{gates_n, n1, n2, nc, 0.0, 0.0, false};
  if (n1 == 0 || n2 == 0) {
    t.alpha = std::numeric_limits<double>::quiet_NaN();
    t.alpha_sigma = std::numeric_limits<double>::quiet_NaN();
    return t;
  }
  const double scale = static_cast<double>(gates_n) / (static_cast<double>(n1) * n2);
  t.alpha = nc * scale;
  if (nc > 0)
    t.alpha_sigma = t.alpha * std::sqrt(1.0 / nc + 1.0 / n1 + 1.0 / n2);
  else
    t.alpha_sigma = scale;
  t.defined = true;
  return t;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over (base, stream)
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr std::int64_t kChunkGates = 1 << 16;

double t1_of(const SourceModel &s) { return s.split_ratio * s.eta1; }
double t2_of(const SourceModel &s) { return (1.0 - s.split_ratio) * s.eta2; }

} // namespace

CountTally simulate_gates(const SourceModel &src, std::int64_t n_gates, std::uint64_t seed) {
  validate(src);
  if (n_gates <= 0) throw InvalidInput("gates must be > 0");

  const double acc = src.kind == SourceKind::heralded_pdc ? src.accidental_mean_per_gate() : 0.0;
  const double p_dark1 = -std::expm1(-src.dark_per_gate_1);
  const double p_dark2 = -std::expm1(-src.dark_per_gate_2);

  std::int64_t n1 = 0, n2 = 0, nc = 0;
  for (std::int64_t chunk = 0; chunk * kChunkGates < n_gates; ++chunk) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(chunk)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::poisson_distribution<int> coherent(src.mean_per_gate > 0.0 ? src.mean_per_gate : 1.0);
    std::poisson_distribution<int> accidental(acc > 0.0 ? acc : 1.0);
    // M modes of mean mu/M: negative binomial with success probability 1/(1 + mu/M).
    std::negative_binomial_distribution<int> thermal(
        src.modes, 1.0 / (1.0 + src.mean_per_gate / src.modes));

    const std::int64_t end = std::min(n_gates, (chunk + 1) * kChunkGates);
    for (std::int64_t g = chunk * kChunkGates; g < end; ++g) {
      int photons = 0;
      switch (src.kind) {
      case SourceKind::coherent:
        if (src.mean_per_gate > 0.0) photons = coherent(rng);
        break;
      case SourceKind::thermal:
        if (src.mean_per_gate > 0.0) photons = thermal(rng);
        break;
      case SourceKind::heralded_pdc:
        photons = uni(rng) < src.heralding_fidelity ? 1 : 0;
        if (acc > 0.0) photons += accidental(rng);
        break;
      }
      int k1 = 0;
      for (int p = 0; p < photons; ++p)
        if (uni(rng) < src.split_ratio) ++k1;
      const int k2 = photons - k1;

      bool fire1 = false, fire2 = false;
      for (int p = 0; p < k1 && !fire1; ++p) fire1 = uni(rng) < src.eta1;
      for (int p = 0; p < k2 && !fire2; ++p) fire2 = uni(rng) < src.eta2;
      if (p_dark1 > 0.0 && uni(rng) < p_dark1) fire1 = true;
      if (p_dark2 > 0.0 && uni(rng) < p_dark2) fire2 = true;
      n1 += fire1;
      n2 += fire2;
      nc += fire1 && fire2;
    }
  }
  return make_tally(n_gates, n1, n2, nc);
}

namespace {

// Factorial moments E[n] and E[n(n-1)] of the photon number per gate.
std::pair<double, double> factorial_moments(const SourceModel &s) {
  const double mu = s.mean_per_gate;
  switch (s.kind) {
  case SourceKind::coherent: return {mu, mu * mu};
  case SourceKind::thermal: return {mu, mu * mu * (1.0 + 1.0 / s.modes)};
  case SourceKind::heralded_pdc: {
    const double h = s.heralding_fidelity;
    const double a = s.accidental_mean_per_gate();
    return {h + a, 2.0 * h * a + a * a};
  }
  }
  return {0.0, 0.0};
}

// log G(1 - u) for the photon-number generating function G.
double log_pgf(const SourceModel &s, double u) {
  switch (s.kind) {
  case SourceKind::coherent: return -s.mean_per_gate * u;
  case SourceKind::thermal: return -s.modes * std::log1p(s.mean_per_gate / s.modes * u);
  case SourceKind::heralded_pdc:
    return std::log1p(-s.heralding_fidelity * u) - s.accidental_mean_per_gate() * u;
  }
  return 0.0;
}

} // namespace

std::optional<double> expected_alpha(const SourceModel &src) {
  validate(src);
  const auto [m1, m2] = factorial_moments(src);
  const double t1 = t1_of(src), t2 = t2_of(src);
  const double d1 = src.dark_per_gate_1, d2 = src.dark_per_gate_2;
  const double single1 = t1 * m1 + d1;
  const double single2 = t2 * m1 + d2;
  if (single1 <= 0.0 || single2 <= 0.0) return std::nullopt;
  const double both = t1 * t2 * m2 + t1 * m1 * d2 + d1 * t2 * m1 + d1 * d2;
  return both / (single1 * single2);
}

std::optional<double> exact_alpha(const SourceModel &src) {
  validate(src);
  const double t1 = t1_of(src), t2 = t2_of(src);
  const double d1 = src.dark_per_gate_1, d2 = src.dark_per_gate_2;
  const double p1 = -std::expm1(log_pgf(src, t1) - d1);
  const double p2 = -std::expm1(log_pgf(src, t2) - d2);
  const double any = -std::expm1(log_pgf(src, t1 + t2) - d1 - d2);
  if (p1 <= 0.0 || p2 <= 0.0) return std::nullopt;
  const double both = std::max(0.0, p1 + p2 - any);
  return both / (p1 * p2);
}

double bootstrap_alpha_sigma(const CountTally &tally, int replicates, std::uint64_t seed) {
  if (replicates < 2) throw InvalidInput("bootstrap needs at least 2 replicates");
  const std::int64_t only1 = tally.n1 - tally.nc;
  const std::int64_t only2 = tally.n2 - tally.nc;
  const double n = static_cast<double>(tally.gates_n);
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum2 = 0.0;
  int used = 0;
  for (int r = 0; r < replicates; ++r) {
    // Multinomial draw over (both, only 1, only 2, neither) by conditional binomials.
    std::int64_t left = tally.gates_n;
    double mass = n;
    auto draw = [&](std::int64_t cat) {
      if (left == 0 || mass <= 0.0) return std::int64_t{0};
      const double p = std::min(1.0, cat / mass);
      std::binomial_distribution<std::int64_t> b(left, p);
      const std::int64_t k = b(rng);
      left -= k;
      mass -= cat;
      return k;
    };
    const std::int64_t both = draw(tally.nc);
    const std::int64_t a = draw(only1);
    const std::int64_t b = draw(only2);
    const CountTally t = make_tally(tally.gates_n, both + a, both + b, both);
    if (!t.defined) continue;
    sum += t.alpha;
    sum2 += t.alpha * t.alpha;
    ++used;
  }
  if (used < 2) throw NumericalFailure("bootstrap produced too few defined replicates");
  const double mean = sum / used;
  return std::sqrt(std::max(0.0, (sum2 - used * mean * mean) / (used - 1)));
}

std::vector<RatePoint> alpha_vs_rate_scan(const SourceModel &src,
                                          const std::vector<double> &trigger_rates_hz,
                                          double acquisition_s, std::uint64_t seed) {
  if (src.kind != SourceKind::heralded_pdc)
    throw InvalidInput("rate scans apply to the heralded source");
  if (trigger_rates_hz.empty()) throw InvalidInput("rate list is empty");
  if (!(acquisition_s > 0.0)) throw InvalidInput("acquisition_s must be > 0");
  std::vector<RatePoint> out;
  for (std::size_t i = 0; i < trigger_rates_hz.size(); ++i) {
    const double rate = trigger_rates_hz[i];
    if (!(rate > 0.0)) throw InvalidInput("trigger rates must be > 0");
    SourceModel s = src;
    s.trigger_rate_hz = rate;
    const auto gates = static_cast<std::int64_t>(std::llround(rate * acquisition_s));
    RatePoint p;
    p.trigger_rate_hz = rate;
    p.tally = simulate_gates(s, std::max<std::int64_t>(gates, 1), derive_seed(seed, i));
    p.expected = exact_alpha(s).value_or(std::numeric_limits<double>::quiet_NaN());
    out.push_back(p);
  }
  return out;
}

} // namespace pdclab
