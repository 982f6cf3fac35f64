#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "obmatch/covering.hpp"
#include "obmatch/errors.hpp"
#include "obmatch/instance.hpp"
#include "obmatch/rng.hpp"
#include "test_util.hpp"

using namespace obmatch;
using testutil::instance_c;

TEST_CASE("enumerate_matchings on tiny instances") {
  Instance single{1, 1, {{0, 0}}, {1.0}, {0}};
  CHECK(enumerate_matchings(single).size() == 2);

  const auto all = enumerate_matchings(instance_c());
  REQUIRE(all.size() == 5);
  std::set<std::vector<Edge>> seen;
  for (const Matching& m : all) seen.insert(m.pairs);
  CHECK(seen.count({}));
  CHECK(seen.count({{0, 0}}));
  CHECK(seen.count({{0, 1}}));
  CHECK(seen.count({{1, 0}}));
  CHECK(seen.count({{0, 1}, {1, 0}}));

  Instance empty{2, 2, {}, {1.0, 1.0}, {0, 1}};
  CHECK(enumerate_matchings(empty).size() == 1);
}

TEST_CASE("enumeration refuses oversized edge sets") {
  const Instance big = gen_random(5, 5, 1.0, 1.0, 1.0, 0);  // 25 edges
  CHECK_THROWS_AS(enumerate_matchings(big), SizeGuardError);
}

TEST_CASE("enumeration count matches the brute-force oracle") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst =
        gen_random(1 + static_cast<int>(uniform_below(gen, 4)),
                   1 + static_cast<int>(uniform_below(gen, 4)), 0.6, 1.0, 1.0,
                   gen());
    const auto all = enumerate_matchings(inst);
    CHECK(static_cast<long long>(all.size()) ==
          testutil::bruteforce_matching_count(inst));
    for (const Matching& m : all) CHECK(is_feasible(inst, m));
    // Exactly once each.
    std::set<std::vector<Edge>> seen;
    for (const Matching& m : all) seen.insert(m.pairs);
    CHECK(seen.size() == all.size());
  }
}

TEST_CASE("max weight matching agrees with enumeration") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst =
        gen_random(1 + static_cast<int>(uniform_below(gen, 4)),
                   1 + static_cast<int>(uniform_below(gen, 4)), 0.5, 1.0, 1.0,
                   gen());
    if (inst.edges.size() > 12) continue;
    std::vector<double> weights;
    for (int i = 0; i < inst.n_buyers; ++i) {
      weights.push_back(uniform_real(gen, 0.0, 2.0));
    }
    const MaxWeightResult result = max_weight_feasible_matching(inst, weights);
    CHECK(result.weight == testutil::bruteforce_max_weight(inst, weights));
    CHECK(is_feasible(inst, result.matching));

    const std::vector<double> unit(static_cast<std::size_t>(inst.n_buyers),
                                   1.0);
    CHECK(max_weight_feasible_matching(inst, unit).weight ==
          testutil::bruteforce_max_weight(inst, unit));
  }
}

TEST_CASE("max weight matching examples") {
  const std::vector<double> unit(3, 1.0);
  CHECK(max_weight_feasible_matching(gen_triangular(3), unit).weight == 3.0);

  const Instance c = instance_c();
  const MaxWeightResult skewed =
      max_weight_feasible_matching(c, std::vector<double>{0.0, 0.9});
  CHECK(skewed.weight == 0.9);

  CHECK(max_weight_feasible_matching(c, std::vector<double>{0.0, 0.0}).weight ==
        0.0);
  CHECK_THROWS_AS(
      max_weight_feasible_matching(c, std::vector<double>{-1.0, 0.0}),
      ParameterError);
  CHECK_THROWS_AS(max_weight_feasible_matching(c, std::vector<double>{1.0}),
                  ParameterError);
}

TEST_CASE("revenue covering is tight on instance C") {
  const Instance inst = instance_c();
  const BidProfile bids{{0.9, 0.5}};

  const CoveringReport r1 = verify_revenue_covering(inst, bids, 1.0);
  CHECK(r1.lhs == 0.9);
  CHECK(r1.rhs == 0.9);
  CHECK(r1.slack == 0.0);
  CHECK(r1.holds);
  CHECK(r1.witness_matching.pairs == std::vector<Edge>{{0, 1}, {1, 0}});

  const CoveringReport r99 = verify_revenue_covering(inst, bids, 0.99);
  CHECK(r99.lhs < 0.9);
  CHECK_FALSE(r99.holds);

  CHECK_THROWS_AS(verify_revenue_covering(inst, bids, 0.0), ParameterError);
}

TEST_CASE("revenue covering with a single buyer") {
  Instance inst{1, 1, {{0, 0}}, {1.0}, {0}};
  const CoveringReport r = verify_revenue_covering(inst, BidProfile{{0.7}}, 1.0);
  CHECK(r.lhs == 0.7);
  CHECK(r.rhs == 0.0);  // t_0 = 0
  CHECK(r.holds);
}

TEST_CASE("chain report on instance C") {
  const Instance inst = instance_c();
  const BidProfile bids{{0.9, 0.5}};

  const ChainReport full =
      verify_chain(inst, bids, make_matching({{0, 1}, {1, 0}}));
  CHECK(full.sum_winning_bids == 0.9);
  CHECK(full.matched_item_revenue == 0.9);
  CHECK(full.critical_surplus == 0.9);
  CHECK(full.holds);

  const ChainReport sub = verify_chain(inst, bids, make_matching({{1, 0}}));
  CHECK(sub.sum_winning_bids == 0.9);
  CHECK(sub.matched_item_revenue == 0.9);
  CHECK(sub.critical_surplus == 0.9);
  CHECK(sub.holds);

  const ChainReport empty = verify_chain(inst, bids, Matching{});
  CHECK(empty.matched_item_revenue == 0.0);
  CHECK(empty.critical_surplus == 0.0);
  CHECK(empty.holds);

  CHECK_THROWS_AS(verify_chain(inst, bids, make_matching({{1, 1}})),
                  ParameterError);
}

TEST_CASE("covering and chain inequalities hold on random markets") {
  std::mt19937_64 gen(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst =
        gen_random(1 + static_cast<int>(uniform_below(gen, 6)),
                   1 + static_cast<int>(uniform_below(gen, 6)), 0.5, 1.0, 1.0,
                   gen());
    BidProfile bids;
    for (int i = 0; i < inst.n_buyers; ++i) {
      bids.bids.push_back(uniform_unit(gen));
    }

    const CoveringReport covering = verify_revenue_covering(inst, bids, 1.0);
    CHECK(covering.holds);

    if (inst.edges.size() <= 12) {
      const Outcome outcome = run_auction(inst, bids);
      const CriticalBids criticals = all_critical_bids(inst, bids);
      for_each_matching(inst, [&](const Matching& m) {
        const ChainReport chain = verify_chain(inst, m, outcome, criticals);
        CHECK(chain.holds);
      });
    }
  }
}

TEST_CASE("smoothness bid sample endpoints and midpoint") {
  CHECK(smoothness_bid_sample(1.0, 0.0) == 0.0);
  CHECK(smoothness_bid_sample(1.0, 1.0) ==
        doctest::Approx(0.6321206).epsilon(1e-6));
  CHECK(smoothness_bid_sample(1.0, 1.0) == kOneMinusInvE);
  CHECK(smoothness_bid_sample(2.0, 0.5) ==
        doctest::Approx(0.7869387).epsilon(1e-6));
  CHECK_THROWS_AS(smoothness_bid_sample(1.0, -0.1), ParameterError);
  CHECK_THROWS_AS(smoothness_bid_sample(1.0, 1.1), ParameterError);
  CHECK_THROWS_AS(smoothness_bid_sample(-1.0, 0.5), ParameterError);
}

TEST_CASE("smoothness sample inverts the CDF") {
  // F(b) = ln(v / (v - b)) must recover u.
  for (double v : {0.5, 1.0, 3.0}) {
    for (int k = 0; k <= 20; ++k) {
      const double u = static_cast<double>(k) / 20.0;
      const double b = smoothness_bid_sample(v, u);
      CHECK(-std::log1p(-b / v) == doctest::Approx(u).epsilon(1e-12));
    }
  }
}

TEST_CASE("value covering closed form matches quadrature") {
  // Independent oracle: Simpson quadrature of (v - b) f(b), f(b) = 1/(v - b).
  auto quad = [](double v, double t) {
    const double bmax = kOneMinusInvE * v;
    if (t >= bmax) return 0.0;
    return testutil::simpson(
        [v](double b) { return (v - b) / (v - b); }, t, bmax, 400);
  };

  CHECK(value_covering_lhs(1.0, 0.0) ==
        doctest::Approx(0.6321206).epsilon(1e-6));
  CHECK(value_covering_lhs(1.0, 0.0) == doctest::Approx(quad(1.0, 0.0)));
  CHECK(value_covering_lhs(1.0, 0.3) ==
        doctest::Approx(0.3321206).epsilon(1e-6));
  CHECK(value_covering_lhs(1.0, 0.3) == doctest::Approx(quad(1.0, 0.3)));
  CHECK(value_covering_lhs(1.0, 0.9) == 0.0);

  for (double v : {0.5, 1.0, 2.5}) {
    for (int k = 0; k < 50; ++k) {
      const double t = kOneMinusInvE * v * static_cast<double>(k) / 49.0;
      CHECK(std::abs(value_covering_lhs(v, t) - quad(v, t)) <= 1e-6);
    }
  }

  CHECK_THROWS_AS(value_covering_lhs(0.0, 0.1), ParameterError);
  CHECK_THROWS_AS(value_covering_lhs(1.0, -0.1), ParameterError);
}

TEST_CASE("sampler distribution passes a coarse KS check") {
  std::mt19937_64 gen(5);
  const int n = 100000;
  std::vector<double> samples(n);
  for (double& s : samples) s = smoothness_bid_sample(1.0, uniform_unit(gen));
  std::sort(samples.begin(), samples.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double cdf = -std::log1p(-samples[static_cast<std::size_t>(i)]);
    ks = std::max({ks, cdf - static_cast<double>(i) / n,
                   static_cast<double>(i + 1) / n - cdf});
  }
  CHECK(ks < 0.01);
}
