#include "pdclab/counting.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "pdclab/errors.hpp"

namespace pdclab {

namespace {

void check_rates(const RateConfig &rc) {
  if (!(rc.rate1_hz >= 0.0 && rc.rate2_hz >= 0.0 && rc.window_s >= 0.0))
    throw InvalidInput("rates and window must be >= 0");
  if (!(rc.duration_s > 0.0)) throw InvalidInput("duration_s must be > 0");
}

} // namespace

double accidental_rate(const RateConfig &rc) {
  check_rates(rc);
  return rc.rate1_hz * rc.rate2_hz * rc.window_s;
}

AccidentalSimulation simulate_accidentals(const RateConfig &rc, std::int64_t starts,
                                          std::uint64_t seed) {
  check_rates(rc);
  if (!(rc.rate1_hz > 0.0)) throw InvalidInput("rate1_hz must be > 0 to generate starts");
  if (starts <= 0) throw InvalidInput("starts must be > 0");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap1(rc.rate1_hz);
  std::exponential_distribution<double> gap2(rc.rate2_hz > 0.0 ? rc.rate2_hz : 1.0);

  // Merge the two arrival sequences; stops are kept in a sliding buffer of
  // events not older than the earliest open window.
  AccidentalSimulation out;
  double t_start = 0.0;
  double t_stop = rc.rate2_hz > 0.0 ? gap2(rng) : std::numeric_limits<double>::infinity();
  std::vector<double> pending; // stops at or after the current start
  for (std::int64_t s = 0; s < starts; ++s) {
    t_start += gap1(rng);
    const double close = t_start + rc.window_s;
    while (t_stop < close) {
      pending.push_back(t_stop);
      t_stop += gap2(rng);
    }
    std::size_t drop = 0;
    while (drop < pending.size() && pending[drop] < t_start) ++drop;
    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(drop));
    for (double t : pending)
      if (t < close) ++out.coincidences;
  }
  out.starts = starts;
  out.rate_hz = out.coincidences / t_start;
  return out;
}

double significance(double value, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be > 0");
  return value / sigma;
}

WeightedMean weighted_mean(const std::vector<double> &values, const std::vector<double> &sigmas) {
  if (values.empty() || values.size() != sigmas.size())
    throw InvalidInput("weighted mean needs matching, nonempty value and sigma lists");
  double w_sum = 0.0, wx = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(sigmas[i] > 0.0)) throw InvalidInput("sigmas must be > 0");
    const double w = 1.0 / (sigmas[i] * sigmas[i]);
    w_sum += w;
    wx += w * values[i];
  }
  return {wx / w_sum, 1.0 / std::sqrt(w_sum)};
}

double poisson_sigma(double count) { return count > 1.0 ? std::sqrt(count) : 1.0; }

std::vector<DataPoint> with_poisson_sigmas(const std::vector<double> &x,
                                           const std::vector<double> &counts) {
  if (x.size() != counts.size()) throw InvalidInput("x and count lists differ in length");
  std::vector<DataPoint> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back({x[i], counts[i], poisson_sigma(counts[i])});
  return out;
}

double chi2_upper_tail(double chi2, int dof) {
  if (dof < 1) throw InvalidInput("dof must be >= 1");
  if (!(chi2 >= 0.0)) throw InvalidInput("chi2 must be >= 0");
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

FitReport chi2_fit_columns(const std::vector<DataPoint> &data,
                           const std::vector<std::vector<double>> &columns) {
  const auto p = static_cast<Eigen::Index>(columns.size());
  const auto n = static_cast<Eigen::Index>(data.size());
  if (p < 1) throw InvalidInput("fit needs at least one parameter");
  if (n < p + 1) throw InvalidInput("fit needs at least n_params + 1 data points");
  for (const auto &c : columns)
    if (static_cast<Eigen::Index>(c.size()) != n) throw InvalidInput("basis column length mismatch");

  Eigen::MatrixXd a(n, p);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto &d = data[static_cast<std::size_t>(i)];
    if (!(d.sigma > 0.0)) throw InvalidInput("data sigmas must be > 0");
    for (Eigen::Index j = 0; j < p; ++j)
      a(i, j) = columns[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] / d.sigma;
    b(i) = d.count / d.sigma;
  }
  if (!a.allFinite() || !b.allFinite()) throw InvalidInput("fit inputs must be finite");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < p) throw InvalidInput("singular design: basis curves are degenerate on the data");
  const Eigen::VectorXd params = qr.solve(b);
  const Eigen::VectorXd resid = b - a * params;

  FitReport r;
  r.params.assign(params.data(), params.data() + p);
  r.residuals.assign(resid.data(), resid.data() + n);
  r.chi2 = resid.squaredNorm();
  r.dof = static_cast<int>(n - p);
  r.chi2_reduced = r.chi2 / r.dof;
  r.p_value = chi2_upper_tail(r.chi2, r.dof);
  r.rejected_at_5pct = r.p_value < 0.05;
  return r;
}

FitReport chi2_fit(const std::vector<DataPoint> &data, const std::vector<Basis> &basis) {
  std::vector<std::vector<double>> columns;
  columns.reserve(basis.size());
  for (const auto &f : basis) {
    std::vector<double> col;
    col.reserve(data.size());
    for (const auto &d : data) col.push_back(f(d.x));
    columns.push_back(std::move(col));
  }
  return chi2_fit_columns(data, columns);
}

double sign_runs_z(const std::vector<double> &residuals) {
  double pos = 0, neg = 0, runs = 0;
  int last = 0;
  for (double r : residuals) {
    if (r == 0.0) continue;
    const int s = r > 0.0 ? 1 : -1;
    (s > 0 ? pos : neg) += 1;
    if (s != last) runs += 1;
    last = s;
  }
  const double n = pos + neg;
  if (n < 2) return 0.0;
  if (pos == 0 || neg == 0) return -std::numeric_limits<double>::infinity();
  const double mean = 2.0 * pos * neg / n + 1.0;
  const double var = 2.0 * pos * neg * (2.0 * pos * neg - n) / (n * n * (n - 1.0));
  if (var <= 0.0) return 0.0;
  return (runs - mean) / std::sqrt(var);
}

std::vector<double> poisson_counts(const std::vector<double> &expected, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(expected.size());
  for (double mu : expected) {
    if (!(mu >= 0.0 && std::isfinite(mu))) throw InvalidInput("expected counts must be >= 0");
    if (mu == 0.0) {
      out.push_back(0.0);
      continue;
    }
    std::poisson_distribution<long long> pd(mu);
    out.push_back(static_cast<double>(pd(rng)));
  }
  return out;
}

} // namespace pdclab
