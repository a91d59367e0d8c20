#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moelab/certify.hpp"

using namespace moelab;

namespace {

const double kLn2 = std::log(2.0);

}  // namespace

TEST_CASE("certified lower bound is exact for the constant channel") {
  const auto phi = constant_output_channel(2, 2);
  const auto net = build_grid_net(2, 0.25);
  const auto lower = certified_smin_lower(phi, 0.25, net);
  CHECK(lower.nats == doctest::Approx(kLn2).epsilon(1e-9));
}

TEST_CASE("certified lower bound clamps to zero for the identity channel") {
  const auto id = identity_channel(2);
  const auto net = build_grid_net(2, 0.25);
  const auto lower = certified_smin_lower(id, 0.25, net);
  CHECK(lower.nats == 0.0);
}

TEST_CASE("certified lower bound never exceeds the oracle minimum") {
  const auto net = build_grid_net(2, 0.25);
  RngStream rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const double lower = certified_smin_lower(phi, 0.25, net).nats;
    const double oracle = min_output_entropy_oracle(phi, 24).nats;
    CHECK(lower <= oracle + 1e-6);
  }
}

TEST_CASE("mismatched nets are rejected") {
  RngStream rng(2);
  const auto phi = random_subspace_channel(3, 2, 3, rng);
  const auto net = build_grid_net(2, 0.25);
  CHECK_THROWS_AS(certified_smin_lower(phi, 0.25, net), std::invalid_argument);
}

TEST_CASE("certified product upper bound caps") {
  RngStream rng(3);
  const auto square = random_subspace_channel(4, 2, 2, rng);
  CHECK(certified_product_upper(square).nats < 1e-9);
  for (int rep = 0; rep < 10; ++rep) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const double u = certified_product_upper(phi).nats;
    CHECK(u <= 2.0 * kLn2 + 1e-9);
    CHECK(u <= max_entropy_given_lambda(0.5, 4).nats + 1e-9);
  }
}

TEST_CASE("upper bound really sits above the heuristic product minimum") {
  RngStream rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const auto product = tensor_channels(phi, conjugate_channel(phi));
    const auto est = min_output_entropy_estimate(product, 8, RngStream(100 + rep));
    CHECK(certified_product_upper(phi).nats >= est.value.nats - 1e-6);
  }
}

TEST_CASE("violation gap on the constant channel never certifies") {
  const auto phi = constant_output_channel(2, 2);
  const auto net = build_grid_net(2, 0.25);
  const auto rep = violation_gap(phi, 0.25, net, 4, RngStream(5));
  CHECK(rep.lower.nats == doctest::Approx(kLn2).epsilon(1e-9));
  CHECK(rep.bell_upper.nats == doctest::Approx(2.0 * kLn2).epsilon(1e-9));
  CHECK(rep.gap == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_FALSE(rep.certified_violation);
}

TEST_CASE("violation gap invariants at desk scale") {
  const auto net = build_grid_net(2, 0.25);
  RngStream rng(6);
  for (int rep_i = 0; rep_i < 5; ++rep_i) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const auto rep = violation_gap(phi, 0.25, net, 6, RngStream(200 + rep_i));
    CHECK(rep.lower.nats <= rep.heuristic_smin.value.nats + 1e-6);
    CHECK(rep.bell_upper.nats >= 0.0);
    CHECK(rep.certified_violation == (rep.gap > kCertificationMargin));
    CHECK_FALSE(rep.certified_violation);  // expected at desk scale
  }
}

TEST_CASE("sandwich: certified lower <= oracle <= estimate <= ln k") {
  const auto net = build_grid_net(2, 0.25);
  RngStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto phi = random_subspace_channel(2, 2, 2, rng);
    const double lower = certified_smin_lower(phi, 0.25, net).nats;
    const double oracle = min_output_entropy_oracle(phi, 24).nats;
    const double estimate = min_output_entropy_estimate(phi, 8, RngStream(300 + rep)).value.nats;
    CHECK(lower <= oracle + 1e-6);
    CHECK(oracle <= estimate + 1e-6);
    CHECK(estimate <= kLn2 + 1e-6);
  }
}

TEST_CASE("subspace-dimension condition") {
  // equality case: l = a n with eps = 2 sqrt(a ln 9) makes the two sides
  // coincide as an algebraic identity
  const double a = 0.04;
  const double eps = 2.0 * std::sqrt(a * std::log(9.0));
  const double rhs = eps * eps / (4.0 * std::log(9.0));
  CHECK(std::abs(rhs - a) < 1e-12);
  CHECK(exist_subspace_condition(4, 100, 0.25, eps * (1.0 + 1e-9)));
  CHECK_FALSE(exist_subspace_condition(5, 100, 0.25, eps));

  // eps = 1, n = 100: threshold at l = 11 (eps^2 n / (4 ln 9) = 11.378)
  CHECK(exist_subspace_condition(11, 100, 0.25, 1.0));
  CHECK_FALSE(exist_subspace_condition(12, 100, 0.25, 1.0));
  CHECK_FALSE(exist_subspace_condition(1, 100, 0.25, 1e-12));
}

TEST_CASE("thebound closed form") {
  const auto r = thebound_rhs(10, 1.0, 0.25, 0.5);
  CHECK(r.value == doctest::Approx(1.7143).epsilon(1e-4));
  CHECK(r.constant == doctest::Approx(17.142857142857142).epsilon(1e-9));
  const auto zero = thebound_rhs(10, 0.0, 0.25, 0.0);
  CHECK(zero.value == doctest::Approx(0.0));
  // 1/k scaling: the constant k * value is k-independent
  const auto r2 = thebound_rhs(20, 1.0, 0.25, 0.5);
  CHECK(r2.constant == doctest::Approx(r.constant).epsilon(1e-12));
  CHECK(r2.value == doctest::Approx(r.value / 2.0).epsilon(1e-12));
}

TEST_CASE("typical-subspace bound values and vacuity") {
  const auto wide = typical_bound_rhs(4, 4, 16);
  CHECK(wide.value == doctest::Approx(10.375).epsilon(1e-9));
  CHECK(wide.vacuous);

  const auto narrow = typical_bound_rhs(2, 2, 10000);
  CHECK(narrow.value == doctest::Approx(0.21390865786510144).epsilon(1e-9));
  CHECK_FALSE(narrow.vacuous);

  const auto tiny = typical_bound_rhs(2, 2, 100000000);
  CHECK(tiny.value < 0.0025);
  CHECK(tiny.value < narrow.value);
  CHECK_THROWS_AS(typical_bound_rhs(1, 2, 4), std::domain_error);
}

TEST_CASE("analytic crossover reproduces its defining constants") {
  const auto r = analytic_crossover(1.0, 0.25, true);
  CHECK(r.finite);
  CHECK(r.epsilon == doctest::Approx(2.9646076147350224).epsilon(1e-9));
  CHECK(r.constant == doctest::Approx(53.73031279579383).epsilon(1e-9));
  // a ln k - 2a = 2 C^2 at the crossover
  CHECK(r.ln_k_star == doctest::Approx(2.0 + 2.0 * r.constant * r.constant).epsilon(1e-9));
  CHECK(r.ln_k_star == doctest::Approx(5775.893026267692).epsilon(0.01));
  CHECK(std::isinf(r.k_star));

  // the inequality holds at k* and fails at k*/2
  auto holds = [&](double ln_k) { return ln_k - 2.0 > 2.0 * r.constant * r.constant; };
  CHECK(holds(r.ln_k_star));
  CHECK_FALSE(holds(r.ln_k_star - std::log(2.0)));
}

TEST_CASE("crossover reports infinity when the shift outruns a") {
  const auto r = analytic_crossover(1e-15, 0.25, false, 1.0);
  CHECK_FALSE(r.finite);
  CHECK(std::isinf(r.ln_k_star));
}

TEST_CASE("crossover shift scales with C^2") {
  const auto a = analytic_crossover(1.0, 0.25, false, 0.01);
  const auto b = analytic_crossover(1.0, 0.25, false, 1.0);
  CHECK(a.constant < b.constant);
  CHECK(a.ln_k_star == doctest::Approx(2.0 + 2.0 * a.constant * a.constant).epsilon(1e-9));
  CHECK(b.ln_k_star == doctest::Approx(2.0 + 2.0 * b.constant * b.constant).epsilon(1e-9));
}

TEST_CASE("gap scan emits one row per grid cell, deterministically") {
  GapScanConfig cfg;
  cfg.ls = {2};
  cfg.ks = {2, 4, 8};
  cfg.ns = {2};
  cfg.theta = 0.25;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.restarts = 4;
  const auto rows = gap_scan(cfg);
  REQUIRE(rows.size() == 15);
  for (const auto& row : rows) {
    REQUIRE(row.ok);
    CHECK(row.report.lower.nats <= row.report.heuristic_smin.value.nats + 1e-6);
    CHECK(row.report.certified_violation == (row.report.gap > kCertificationMargin));
  }
  const auto rows2 = gap_scan(cfg);
  CHECK(gap_scan_csv(rows) == gap_scan_csv(rows2));
}

TEST_CASE("gap scan: empty grid and repeated seeds") {
  GapScanConfig empty;
  CHECK(gap_scan(empty).empty());
  CHECK(gap_scan_csv({}).empty());

  GapScanConfig twice;
  twice.ls = {2};
  twice.ks = {2};
  twice.ns = {2};
  twice.seeds = {9, 9};
  twice.restarts = 2;
  const auto rows = gap_scan(twice);
  REQUIRE(rows.size() == 2);
  const auto csv = gap_scan_csv(rows);
  const auto nl = csv.find('\n');
  CHECK(csv.substr(0, nl) == csv.substr(nl + 1, csv.size() - nl - 2));
}

TEST_CASE("gap scan records an error row for infeasible net dimensions") {
  GapScanConfig cfg;
  cfg.ls = {4};
  cfg.ks = {2};
  cfg.ns = {2};
  cfg.seeds = {1};
  const auto rows = gap_scan(cfg);
  REQUIRE(rows.size() == 1);
  CHECK_FALSE(rows[0].ok);
  CHECK(!rows[0].error.empty());
}
