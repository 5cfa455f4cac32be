#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pdclab {

struct RateConfig {
  double rate1_hz = 0.0;
  double rate2_hz = 0.0;
  double window_s = 0.0;
  double duration_s = 1.0;
};

/// Uncorrelated coincidence rate rate1 * rate2 * window.
double accidental_rate(const RateConfig &rc);

struct AccidentalSimulation {
  std::int64_t starts = 0;
  std::int64_t coincidences = 0;
  double rate_hz = 0.0; ///< coincidences per second of simulated time
};

/// Two independent Poisson streams; every stream-2 event inside
/// [t_start, t_start + window) of a stream-1 start counts as a coincidence.
AccidentalSimulation simulate_accidentals(const RateConfig &rc, std::int64_t starts,
                                          std::uint64_t seed);

/// value / sigma
double significance(double value, double sigma);

struct WeightedMean {
  double mean = 0.0;
  double sigma = 0.0;
};

/// Inverse-variance weighted mean.
WeightedMean weighted_mean(const std::vector<double> &values, const std::vector<double> &sigmas);

struct DataPoint {
  double x = 0.0;
  double count = 0.0;
  double sigma = 1.0;
};

/// Poisson error: sqrt(count) with a floor of 1 for empty bins.
double poisson_sigma(double count);

/// Attaches Poisson sigmas to raw (x, count) pairs.
std::vector<DataPoint> with_poisson_sigmas(const std::vector<double> &x,
                                           const std::vector<double> &counts);

struct FitReport {
  std::vector<double> params;
  double chi2 = 0.0;
  int dof = 1;
  double chi2_reduced = 0.0;
  double p_value = 1.0; ///< upper-tail chi-square probability
  bool rejected_at_5pct = false;
  std::vector<double> residuals; ///< (count - model) / sigma
};

using Basis = std::function<double(double)>;

/// Weighted least squares of the counts onto a linear combination of basis
/// curves. For a pattern model the geometry is baked into the basis and only
/// the amplitude (and an optional constant offset) are free.
FitReport chi2_fit(const std::vector<DataPoint> &data, const std::vector<Basis> &basis);

/// Same, with the basis already evaluated at the data abscissae:
/// columns[j][i] = basis_j(data[i].x).
FitReport chi2_fit_columns(const std::vector<DataPoint> &data,
                           const std::vector<std::vector<double>> &columns);

/// Upper-tail probability of a chi-square with `dof` degrees of freedom.
double chi2_upper_tail(double chi2, int dof);

/// Wald-Wolfowitz runs statistic of the residual signs (z score). Zero
/// residuals are skipped; fewer than two signs gives 0, a single repeated
/// sign gives -infinity.
double sign_runs_z(const std::vector<double> &residuals);

/// Poisson-distributed counts around the given expectations.
std::vector<double> poisson_counts(const std::vector<double> &expected, std::uint64_t seed);

} // namespace pdclab
