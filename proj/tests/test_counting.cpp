#include <catch_amalgamated.hpp>

#include <cmath>

#include "pdclab/counting.hpp"
#include "pdclab/errors.hpp"

using namespace pdclab;
using Catch::Approx;

TEST_CASE("accidental rate is bilinear in the singles rates") {
  const RateConfig base{1e5, 2e5, 7e-9, 1.0};
  const double r = accidental_rate(base);
  CHECK(r == Approx(140.0));
  CHECK(accidental_rate({3e5, 2e5, 7e-9, 1.0}) == Approx(3.0 * r));
  CHECK(accidental_rate({1e5, 5e5, 7e-9, 1.0}) == Approx(2.5 * r));
  CHECK(accidental_rate({1e5, 2e5, 14e-9, 1.0}) == Approx(2.0 * r));
}

TEST_CASE("Monte Carlo accidentals agree with the analytic rate") {
  const RateConfig rc{2e5, 3e5, 20e-9, 1.0};
  const auto mc = simulate_accidentals(rc, 2000000, 8);
  CHECK(mc.rate_hz == Approx(accidental_rate(rc)).epsilon(0.05));
  const auto again = simulate_accidentals(rc, 2000000, 8);
  CHECK(again.coincidences == mc.coincidences);
}

TEST_CASE("weighted mean and significance") {
  const auto w = weighted_mean({1.0, 3.0}, {1.0, 1.0});
  CHECK(w.mean == Approx(2.0));
  CHECK(w.sigma == Approx(1.0 / std::sqrt(2.0)));
  CHECK(significance(0.022, 0.019) == Approx(0.022 / 0.019));
  CHECK_THROWS_AS(significance(1.0, 0.0), InvalidInput);
}

TEST_CASE("least squares recovers an exact line") {
  std::vector<DataPoint> d;
  for (int i = 0; i < 10; ++i) d.push_back({double(i), 3.0 + 2.0 * i, 1.0});
  const auto r = chi2_fit(d, {[](double) { return 1.0; }, [](double x) { return x; }});
  CHECK(r.params[0] == Approx(3.0));
  CHECK(r.params[1] == Approx(2.0));
  CHECK(r.chi2 == Approx(0.0).margin(1e-18));
  CHECK(r.dof == 8);
  CHECK_FALSE(r.rejected_at_5pct);
}

TEST_CASE("chi-square is invariant under a common rescaling") {
  std::vector<DataPoint> d;
  for (int i = 0; i < 12; ++i) d.push_back({0.1 * i, 5.0 + std::sin(3.0 * i), 0.7});
  std::vector<DataPoint> s = d;
  for (auto &p : s) {
    p.count *= 40.0;
    p.sigma *= 40.0;
  }
  const std::vector<Basis> basis{[](double) { return 1.0; }, [](double x) { return x; }};
  const auto a = chi2_fit(d, basis);
  const auto b = chi2_fit(s, basis);
  CHECK(a.chi2 == Approx(b.chi2).epsilon(1e-10));
  CHECK(b.params[0] == Approx(40.0 * a.params[0]));
}

TEST_CASE("chi-square tail decides the model comparison") {
  CHECK(chi2_upper_tail(12.6, 5) < 0.05);
  CHECK(chi2_upper_tail(0.9 * 5, 5) > 0.05);
  CHECK(chi2_upper_tail(11.0705, 5) == Approx(0.05).margin(1e-4));
}

TEST_CASE("fit input checks") {
  std::vector<DataPoint> d{{0, 1, 1}, {1, 2, 1}};
  const std::vector<Basis> line{[](double) { return 1.0; }, [](double x) { return x; }};
  CHECK_THROWS_AS(chi2_fit(d, line), InvalidInput);
  d.push_back({2, 3, 0.0});
  CHECK_THROWS_AS(chi2_fit(d, line), InvalidInput);
  d.back().sigma = 1.0;
  CHECK_THROWS_AS(chi2_fit(d, {[](double) { return 1.0; }, [](double) { return 2.0; }}),
                  InvalidInput);
}

TEST_CASE("runs test on residual signs") {
  CHECK(sign_runs_z({1, -1, 1, -1, 1, -1, 1, -1}) > 1.5);
  CHECK(sign_runs_z({1, 1, 1, 1, -1, -1, -1, -1}) < -1.5);
  CHECK(std::isinf(sign_runs_z({1, 1, 1})));
  CHECK(sign_runs_z({1}) == 0.0);
}

TEST_CASE("Poisson sigma floor and counts") {
  CHECK(poisson_sigma(0.0) == 1.0);
  CHECK(poisson_sigma(100.0) == 10.0);
  const auto c = poisson_counts({1000.0, 1000.0, 0.0}, 3);
  CHECK(c[2] == 0.0);
  CHECK(std::abs(c[0] - 1000.0) < 200.0);
  CHECK(poisson_counts({5.0, 7.0}, 9) == poisson_counts({5.0, 7.0}, 9));
}
