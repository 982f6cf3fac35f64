#include <doctest.h>

#include <set>

#include "obmatch/errors.hpp"
#include "obmatch/instance.hpp"
#include "test_util.hpp"

using namespace obmatch;

TEST_CASE("validate accepts a minimal instance") {
  Instance inst{1, 1, {{0, 0}}, {1.0}, {0}};
  const ValidationReport report = validate_instance(inst);
  CHECK(report.ok);
  CHECK(report.violations.empty());
}

TEST_CASE("validate flags out-of-range item index") {
  Instance inst{1, 1, {{0, 5}}, {1.0}, {0}};
  const ValidationReport report = validate_instance(inst);
  CHECK_FALSE(report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].find("item index out of range") !=
        std::string::npos);
}

TEST_CASE("validate flags a non-permutation arrival order") {
  Instance inst{1, 2, {{0, 0}}, {1.0}, {0, 0}};
  const ValidationReport report = validate_instance(inst);
  CHECK_FALSE(report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].find("not a permutation") != std::string::npos);
}

TEST_CASE("validate flags duplicate edges and bad values") {
  Instance inst{2, 2, {{0, 0}, {0, 0}}, {1.0, -1.0}, {1, 0}};
  const ValidationReport report = validate_instance(inst);
  CHECK_FALSE(report.ok);
  CHECK(report.violations.size() == 2);
}

TEST_CASE("gen_random with edge_prob 1 is complete") {
  const Instance inst = gen_random(3, 4, 1.0, 0.0, 1.0, 7);
  CHECK(inst.edges.size() == 12);
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("gen_random with edge_prob 0 is empty") {
  const Instance inst = gen_random(3, 4, 0.0, 0.0, 1.0, 7);
  CHECK(inst.edges.empty());
}

TEST_CASE("gen_random is reproducible for a fixed seed") {
  const Instance a = gen_random(6, 5, 0.4, 0.25, 2.0, 12345);
  const Instance b = gen_random(6, 5, 0.4, 0.25, 2.0, 12345);
  const Instance c = gen_random(6, 5, 0.4, 0.25, 2.0, 12346);
  CHECK(a == b);
  CHECK(a != c);
  for (double v : a.values) {
    CHECK(v >= 0.25);
    CHECK(v < 2.0);
  }
  CHECK(validate_instance(a).ok);
}

TEST_CASE("gen_random rejects bad parameters") {
  CHECK_THROWS_AS(gen_random(2, 2, 1.5, 0.0, 1.0, 0), ParameterError);
  CHECK_THROWS_AS(gen_random(2, 2, 0.5, 2.0, 1.0, 0), ParameterError);
}

TEST_CASE("gen_triangular structure") {
  const Instance one = gen_triangular(1);
  CHECK(one.edges == std::vector<Edge>{{0, 0}});

  const Instance two = gen_triangular(2);
  CHECK(two.edges == std::vector<Edge>{{0, 0}, {1, 0}, {1, 1}});

  const Instance three = gen_triangular(3);
  CHECK(three.edges.size() == 6);
  CHECK(testutil::bruteforce_max_matching_size(three) == 3);

  CHECK_THROWS_AS(gen_triangular(0), ParameterError);
}

TEST_CASE("serialize then parse is the identity") {
  const Instance tri = gen_triangular(2);
  CHECK(parse(serialize(tri)) == tri);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = gen_random(5, 4, 0.5, 0.0, 3.0, seed);
    CHECK(parse(serialize(inst)) == inst);
  }
}

TEST_CASE("parse rejects missing arrival_order") {
  CHECK_THROWS_AS(
      parse(R"({"n_buyers":1,"n_items":1,"edges":[[0,0]],"values":[1]})"),
      ParseError);
}

TEST_CASE("parse surfaces validation failures") {
  CHECK_THROWS_AS(
      parse(
          R"({"n_buyers":1,"n_items":1,"edges":[[0,9]],"arrival_order":[0]})"),
      ParseError);
}

TEST_CASE("parse rejects malformed text and unknown keys") {
  CHECK_THROWS_AS(parse("not json"), ParseError);
  CHECK_THROWS_AS(
      parse(
          R"({"n_buyers":1,"n_items":1,"edges":[],"arrival_order":[0],"junk":1})"),
      ParseError);
}

TEST_CASE("parse rejects non-integer counts and indices") {
  CHECK_THROWS_AS(
      parse(R"({"n_buyers":1.5,"n_items":1,"edges":[],"arrival_order":[0]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse(
          R"({"n_buyers":1,"n_items":1,"edges":[[0.2,0]],"arrival_order":[0]})"),
      ParseError);
}

TEST_CASE("parse defaults omitted values to 1 and tolerates bids") {
  const Instance inst = parse(
      R"({"n_buyers":2,"n_items":1,"edges":[[0,0],[1,0]],"arrival_order":[0],"bids":[0.5,0.25]})");
  CHECK(inst.values == std::vector<double>{1.0, 1.0});
}

TEST_CASE("instance hash identifies equal instances") {
  const Instance a = gen_random(4, 4, 0.5, 0.0, 1.0, 3);
  const Instance b = gen_random(4, 4, 0.5, 0.0, 1.0, 3);
  const Instance c = gen_random(4, 4, 0.5, 0.0, 1.0, 4);
  CHECK(instance_hash(a) == instance_hash(b));
  CHECK(instance_hash(a) != instance_hash(c));
  CHECK(instance_hash(a).size() == 16);
}

TEST_CASE("adjacency helpers are sorted and complete") {
  const Instance inst = testutil::instance_c();
  const auto by_item = buyers_by_item(inst);
  CHECK(by_item == std::vector<std::vector<int>>{{0, 1}, {0}});
  const auto by_buyer = items_by_buyer(inst);
  CHECK(by_buyer == std::vector<std::vector<int>>{{0, 1}, {0}});
}
