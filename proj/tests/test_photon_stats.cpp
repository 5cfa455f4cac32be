#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pdclab/errors.hpp"
#include "pdclab/photon_stats.hpp"

using namespace pdclab;
using Catch::Approx;

TEST_CASE("tally arithmetic") {
  const auto t = make_tally(1000000, 10000, 10000, 100);
  CHECK(t.alpha == Approx(1.0));
  CHECK(t.alpha_sigma == Approx(std::sqrt(0.01 + 2e-4)));
  CHECK_FALSE(make_tally(100, 0, 5, 0).defined);
  CHECK_THROWS_AS(make_tally(10, 5, 5, 6), InvalidInput);
}

TEST_CASE("simulation is deterministic per seed") {
  const auto src = SourceModel::thermal_lamp(0.2, 3);
  const auto a = simulate_gates(src, 200000, 99);
  const auto b = simulate_gates(src, 200000, 99);
  const auto c = simulate_gates(src, 200000, 100);
  CHECK(a.n1 == b.n1);
  CHECK(a.n2 == b.n2);
  CHECK(a.nc == b.nc);
  CHECK((a.n1 != c.n1 || a.nc != c.nc));
}

TEST_CASE("rare-limit expectations") {
  CHECK(*expected_alpha(SourceModel::coherent_laser(0.1)) == Approx(1.0));
  CHECK(*expected_alpha(SourceModel::thermal_lamp(0.1, 1)) == Approx(2.0));
  CHECK(*expected_alpha(SourceModel::thermal_lamp(0.1, 1000)) == Approx(1.001));
  auto h = SourceModel::heralded(1000.0);
  h.dark_per_gate_1 = h.dark_per_gate_2 = 0.0;
  h.background_per_gate = 0.0;
  h.trigger_rate_hz = 0.0;
  CHECK(*expected_alpha(h) == Approx(0.0).margin(1e-15));
}

TEST_CASE("exact alpha of the click model") {
  // ideal detectors, one thermal mode: alpha = 2 (1 + a) / (1 + 2 a), a = mu / 2
  const double a = 0.05;
  auto src = SourceModel::thermal_lamp(0.1, 1);
  CHECK(*exact_alpha(src) == Approx(2.0 * (1 + a) / (1 + 2 * a)).epsilon(1e-12));
  CHECK(*exact_alpha(SourceModel::coherent_laser(0.3)) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classical light never anti-bunches") {
  for (double mu : {0.01, 0.1, 1.0, 5.0})
    for (int m : {1, 2, 10, 1000}) {
      auto src = SourceModel::thermal_lamp(mu, m);
      src.eta1 = 0.3;
      src.dark_per_gate_2 = 1e-4;
      REQUIRE(*exact_alpha(src) >= 1.0 - 1e-12);
    }
}

TEST_CASE("simulated alpha follows the exact value") {
  for (const auto &src : {SourceModel::coherent_laser(0.1), SourceModel::thermal_lamp(0.3, 1)}) {
    const auto t = simulate_gates(src, 1000000, 4);
    CHECK(std::abs(t.alpha - *exact_alpha(src)) < 4.0 * t.alpha_sigma);
  }
}

TEST_CASE("heralded source without background gives no coincidences") {
  auto h = SourceModel::heralded(1000.0);
  h.dark_per_gate_1 = h.dark_per_gate_2 = 0.0;
  h.background_per_gate = 0.0;
  h.trigger_rate_hz = 0.0;
  const auto t = simulate_gates(h, 1000000, 12);
  CHECK(t.nc == 0);
  CHECK(t.n1 > 0);
}

TEST_CASE("spread of alpha shrinks as one over root N") {
  const auto src = SourceModel::coherent_laser(0.2);
  auto spread = [&](std::int64_t n) {
    std::vector<double> v;
    for (std::uint64_t s = 0; s < 60; ++s) v.push_back(simulate_gates(src, n, 1000 + s).alpha);
    return oracle::stddev(v);
  };
  const double ratio = spread(20000) / spread(80000);
  CHECK(ratio == Approx(2.0).epsilon(0.3));
}

TEST_CASE("analytic sigma agrees with the bootstrap in the rare regime") {
  auto src = SourceModel::coherent_laser(0.05);
  const auto t = simulate_gates(src, 400000, 77);
  const double boot = bootstrap_alpha_sigma(t, 400, 5);
  CHECK(t.alpha_sigma == Approx(boot).epsilon(0.2));
}

TEST_CASE("rate scan rises with trigger rate") {
  const auto pts = alpha_vs_rate_scan(SourceModel::heralded(1.0), {2000, 50000, 500000}, 50.0, 3);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].expected < pts[1].expected);
  CHECK(pts[1].expected < pts[2].expected);
  CHECK(pts[0].expected < 0.05);
  CHECK(pts[0].tally.gates_n == 100000);
}

TEST_CASE("source validation") {
  auto s = SourceModel::coherent_laser(0.1);
  s.split_ratio = 1.5;
  CHECK_THROWS_AS(validate(s), InvalidInput);
  CHECK_THROWS_AS(simulate_gates(SourceModel::coherent_laser(0.1), 0, 1), InvalidInput);
  CHECK_THROWS_AS(source_kind_from_string("laser"), InvalidInput);
  CHECK(source_kind_from_string("heralded") == SourceKind::heralded_pdc);
  CHECK_THROWS_AS(alpha_vs_rate_scan(SourceModel::coherent_laser(0.1), {1000}, 1.0, 1),
                  InvalidInput);
}
