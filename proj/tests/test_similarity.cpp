#include <doctest.h>

#include "kqmolsa/pipeline.hpp"
#include "kqmolsa/selftest.hpp"
#include "kqmolsa/similarity.hpp"

using namespace kqmolsa;

namespace {

ShapeDescriptor chain(int n, const std::string& name) { return describe_spheres(synthetic_chain(n), {}, name); }

}  // namespace

TEST_CASE("score arithmetic") {
  CHECK(area_ratio(30, 60) == doctest::Approx(0.5));
  CHECK(area_ratio(60, 30) == doctest::Approx(0.5));
  CHECK(combine_score(area_ratio(30, 60), 1.0, {}) == doctest::Approx(0.50));
  CHECK(combine_score(1.0, 0.0, {}) == doctest::Approx(1.0));
  // 1/(1+d) = 0.884, area ratio 0.964
  const double d = 1 / 0.884 - 1;
  CHECK(combine_score(0.964, d, {}) == doctest::Approx(0.908).epsilon(0.0006));
  CHECK_THROWS_AS(area_ratio(0, 10), std::invalid_argument);
  CHECK_THROWS_AS(area_ratio(10, -1), std::invalid_argument);
}

TEST_CASE("score is bounded and decreasing in distance") {
  double prev = 2;
  for (double d = 0; d < 50; d = d * 1.5 + 0.01) {
    const double s = combine_score(0.7, d, {});
    CHECK(s >= 0);
    CHECK(s <= 1);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("weights") {
  CHECK_NOTHROW(Weights{}.validate());
  CHECK_NOTHROW((Weights{0.0, 1.0}.validate()));
  CHECK_THROWS_AS((Weights{0.5, 0.5}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Weights{0.2, 0.7}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Weights{-0.1, 1.1}.validate()), std::invalid_argument);
  const Weights w = Weights::parse("0.1,0.9");
  CHECK(w.x == doctest::Approx(0.1));
  CHECK(w.y == doctest::Approx(0.9));
  CHECK_THROWS_AS(Weights::parse("0.3"), std::invalid_argument);
  CHECK_THROWS_AS(Weights::parse("a,b"), std::invalid_argument);
  CHECK_THROWS_AS(Weights::parse("0.6,0.4"), std::invalid_argument);
  CHECK_THROWS_AS(Weights::parse("0.3,0.7,0"), std::invalid_argument);
}

TEST_CASE("identical descriptors score 1") {
  const auto a = chain(4, "a");
  const auto s = score(a, a);
  CHECK(s.score == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(s.area_ratio == doctest::Approx(1.0));
  CHECK(s.weights.x == doctest::Approx(0.3));
}

TEST_CASE("score is linear in the weights") {
  const auto a = chain(3, "a"), b = chain(6, "b");
  const auto s0 = score(a, b, {0.0, 1.0});
  for (double x : {0.1, 0.2, 0.3, 0.4}) {
    const auto s = score(a, b, {x, 1 - x});
    CHECK(s.distance == doctest::Approx(s0.distance));
    CHECK(s.score == doctest::Approx((1 - x) * s0.score + x * s0.area_ratio).epsilon(1e-12));
  }
}

TEST_CASE("screen ranks, truncates and ties by name") {
  const auto q = chain(3, "query");
  const std::vector<ShapeDescriptor> lib{chain(7, "far"), chain(3, "zeta"), chain(4, "near"), chain(3, "alpha")};
  ScreenOptions o;
  o.jobs = 3;
  const auto rows = screen(q, lib, o);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].name == "alpha");
  CHECK(rows[1].name == "zeta");
  CHECK(rows[0].result->score == doctest::Approx(rows[1].result->score));
  CHECK(rows[0].library_index == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i - 1].result->score >= rows[i].result->score);

  o.top_n = 2;
  const auto top = screen(q, lib, o);
  REQUIRE(top.size() == 2);
  CHECK(top[0].name == "alpha");

  // same result single-threaded
  o.top_n = 0;
  o.jobs = 1;
  const auto serial = screen(q, lib, o);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(serial[i].name == rows[i].name);
    CHECK(serial[i].result->score == rows[i].result->score);
  }
}

TEST_CASE("screen of the query against itself") {
  const auto q = chain(5, "q");
  const auto rows = screen(q, {q});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].result->score == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("failing pairs become skipped rows after the scored ones") {
  const auto q = chain(3, "q");
  auto broken = chain(4, "broken");
  broken.M(1, 1) = -5;
  PipelineOptions o2;
  o2.k = 2;
  auto other_k = describe_spheres(synthetic_chain(3), o2, "k2");
  ScreenOptions o;
  o.top_n = 1;
  const auto rows = screen(q, {broken, chain(5, "ok"), other_k, chain(4, "ok2")}, o);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].result.has_value());
  CHECK(rows[1].name == "broken");
  CHECK_FALSE(rows[1].result.has_value());
  CHECK_FALSE(rows[1].error.empty());
  CHECK(rows[2].name == "k2");
  CHECK(rows[2].error.find("mismatch") != std::string::npos);
}
