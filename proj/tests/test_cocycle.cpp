#include <doctest.h>

#include <cmath>

#include "abgeom/cocycle.hpp"

using namespace abgeom;

namespace {

constexpr GroupTag kAll[] = {GroupTag::U1, GroupTag::SU2, GroupTag::SU3, GroupTag::SL2C};

GroupElement u1(double theta) {
  return GroupElement(GroupTag::U1, ComplexMatrix::Constant(1, 1, std::polar(1.0, theta)));
}

bool same(const Cocycle& a, const Cocycle& b, double tol) {
  for (int i = 0; i < a.set_count(); ++i) {
    for (int j = 0; j < a.set_count(); ++j) {
      const auto si = SetIndex::from_ordinal(i);
      const auto sj = SetIndex::from_ordinal(j);
      if (distance(a.at_x0(si, sj), b.at_x0(si, sj)) > tol) return false;
    }
  }
  for (int k = 1; k <= a.rank(); ++k) {
    if (distance(a.at_a({k, 1}, {k, -1}), b.at_a({k, 1}, {k, -1})) > tol) return false;
    if (distance(a.at_a({k, -1}, {k, 1}), b.at_a({k, -1}, {k, 1})) > tol) return false;
  }
  return true;
}

std::vector<GroupElement> random_lambda(const Cocycle& c, Rng& rng) {
  std::vector<GroupElement> l;
  for (int i = 0; i < c.set_count(); ++i) l.push_back(random_element(c.group(), rng));
  return l;
}

}  // namespace

TEST_SUITE("cocycle") {

TEST_CASE("counts") {
  CHECK(count_transition_functions(1) == 4);
  CHECK(count_transition_functions(2) == 16);
  CHECK(count_transition_functions(3) == 36);
  CHECK(count_cocycle_relations(1) == 0);
  CHECK(count_cocycle_relations(2) == 4);
  CHECK(count_cocycle_relations(3) == 20);
  for (std::int64_t n = 1; n <= 10; ++n) {
    CHECK(count_transition_functions(static_cast<int>(n)) == 4 * n * n);
    CHECK(count_cocycle_relations(static_cast<int>(n)) == n * (2 * n - 1) * (2 * n - 2) / 3);
  }
  CHECK_THROWS(count_transition_functions(0));
  CHECK_THROWS(count_cocycle_relations(-1));
}

TEST_CASE("wedge cover") {
  const WedgeCover w(2);
  CHECK(w.sets().size() == 4);
  CHECK(w.overlap({1, 1}, {1, -1}).size() == 2);
  CHECK(w.overlap({1, 1}, {2, -1}).size() == 1);
  CHECK(SetIndex::parse("2-") == SetIndex{2, -1});
  CHECK(SetIndex{3, 1}.name() == "3+");
  CHECK(SetIndex::from_ordinal(SetIndex{3, -1}.ordinal()) == SetIndex{3, -1});
  CHECK_THROWS(SetIndex::parse("2"));
}

TEST_CASE("validation") {
  const Cocycle id(GroupTag::SU2, 2);
  const auto ok = validate_cocycle(id);
  CHECK(ok.ok());
  CHECK(ok.relations_checked == 4);

  Rng rng(51);
  Cocycle bad = random_cocycle(2, GroupTag::SU2, 3);
  bad.set_pair_at_x0({1, 1}, {2, 1}, random_element(GroupTag::SU2, rng));
  const auto r = validate_cocycle(bad);
  REQUIRE_FALSE(r.ok());
  // Only triples containing both 1+ and 2+ can break.
  for (const auto& v : r.violations) {
    CHECK(v.kind == CocycleViolation::Kind::Triple);
    const bool has1 = std::find(v.sets.begin(), v.sets.end(), SetIndex{1, 1}) != v.sets.end();
    const bool has2 = std::find(v.sets.begin(), v.sets.end(), SetIndex{2, 1}) != v.sets.end();
    CHECK((has1 && has2));
  }
  CHECK(r.violations.size() == 2);

  Cocycle asym(GroupTag::U1, 1);
  asym.set_at_x0({1, 1}, {1, -1}, u1(0.3));
  const auto ra = validate_cocycle(asym);
  REQUIRE(ra.violations.size() == 1);
  CHECK(ra.violations[0].kind == CocycleViolation::Kind::Antisymmetry);
  CHECK(ra.violations[0].describe().find("antisymmetry") != std::string::npos);
}

TEST_CASE("random cocycles") {
  for (auto tag : kAll) {
    for (int n = 1; n <= 4; ++n) {
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto c = random_cocycle(n, tag, seed);
        const auto r = validate_cocycle(c, 1e-12);
        CHECK(r.ok());
      }
    }
  }
  CHECK(validate_cocycle(random_cocycle(3, GroupTag::SU2, 7)).max_residual <= 1e-12);
  CHECK(same(random_cocycle(3, GroupTag::SU3, 9), random_cocycle(3, GroupTag::SU3, 9), 0.0));
  CHECK_FALSE(same(random_cocycle(3, GroupTag::SU3, 9), random_cocycle(3, GroupTag::SU3, 10), 1e-3));
}

TEST_CASE("constant lambda action") {
  Rng rng(52);
  const auto c = random_cocycle(1, GroupTag::U1, 1);
  const std::vector<GroupElement> ids(2, identity(GroupTag::U1));
  CHECK(same(apply_constant_lambda(c, ids), c, 0.0));

  // lambda_{1+} = g01^-1 kills the x0 value.
  const std::vector<GroupElement> kill{inverse(c.g0(1)), identity(GroupTag::U1)};
  CHECK(distance_to_identity(apply_constant_lambda(c, kill).g0(1)) <= 1e-15);

  for (auto tag : kAll) {
    const auto d = random_cocycle(3, tag, 5);
    const auto l1 = random_lambda(d, rng);
    const auto l2 = random_lambda(d, rng);
    std::vector<GroupElement> l1_inv;
    std::vector<GroupElement> l21;
    for (std::size_t i = 0; i < l1.size(); ++i) {
      l1_inv.push_back(inverse(l1[i]));
      l21.push_back(l2[i] * l1[i]);
    }
    const auto moved = apply_constant_lambda(d, l1);
    CHECK(validate_cocycle(moved).ok());
    CHECK(same(apply_constant_lambda(moved, l1_inv), d, 1e-12));
    CHECK(same(apply_constant_lambda(moved, l2), apply_constant_lambda(d, l21), 1e-12));
  }
  CHECK_THROWS_AS(apply_constant_lambda(c, std::vector<GroupElement>(2, identity(GroupTag::SU2))),
                  TagMismatchError);
  CHECK_THROWS(apply_constant_lambda(c, std::vector<GroupElement>(3, identity(GroupTag::U1))));
}

TEST_CASE("lambda preserves invalidity") {
  Rng rng(53);
  Cocycle bad = random_cocycle(2, GroupTag::SU2, 3);
  bad.set_pair_at_x0({1, 1}, {2, 1}, random_element(GroupTag::SU2, rng));
  CHECK_FALSE(validate_cocycle(apply_constant_lambda(bad, random_lambda(bad, rng))).ok());
}

TEST_CASE("trivialize: identity cocycle") {
  const Cocycle id(GroupTag::SU3, 2);
  const auto t = trivialize(id, 11);
  for (const auto& set : t.maps) {
    for (const auto& g : set) CHECK(distance_to_identity(g) == 0.0);
  }
  const auto r = verify_trivialization(id, t);
  CHECK(r.passed);
  CHECK(r.max_coboundary_residual == 0.0);
}

TEST_CASE("trivialize: abelian closed form") {
  Cocycle c(GroupTag::U1, 1);
  const double th1 = 0.9;
  const double th2 = -2.2;
  c.set_pair_at_x0({1, 1}, {1, -1}, u1(th1));
  c.set_pair_at_a(1, u1(th2));
  const int S = 21;
  const auto t = trivialize(c, S);
  const auto r = verify_trivialization(c, t);
  CHECK(r.passed);
  CHECK(r.max_coboundary_residual <= 1e-12);
  // Gauge: Lambda_{1+}(x0) = 1, so Lambda_{1-}(x0) = e^{-i th1}; at a the
  // phase difference Lambda_{1+} / Lambda_{1-} is e^{i th2}.
  const auto& plus = t.maps[0];
  const auto& minus = t.maps[1];
  CHECK(std::abs(std::arg(minus[0].matrix()(0, 0)) + th1) <= 1e-12);
  const Complex ratio = plus[t.a_index()].matrix()(0, 0) / minus[t.a_index()].matrix()(0, 0);
  CHECK(std::abs(std::arg(ratio) - th2) <= 1e-12);
  // Lambda_{1-} moves monotonically in phase between its anchors.
  double prev = std::arg(minus[0].matrix()(0, 0));
  const double end = std::arg(minus[t.a_index()].matrix()(0, 0));
  for (int i = 1; i <= t.a_index(); ++i) {
    const double cur = std::arg(minus[static_cast<std::size_t>(i)].matrix()(0, 0));
    CHECK((end - prev) * (cur - prev) >= 0.0);
    prev = cur;
  }
}

TEST_CASE("trivialize: random cocycles") {
  for (auto tag : kAll) {
    for (int n = 1; n <= 3; ++n) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto c = random_cocycle(n, tag, seed);
        const auto r = verify_trivialization(c, trivialize(c, 101));
        CHECK(r.passed);
        CHECK(r.max_coboundary_residual <= 1e-9);
      }
    }
  }
  const auto c = random_cocycle(2, GroupTag::SU2, 42);
  CHECK(verify_trivialization(c, trivialize(c, 101)).max_coboundary_residual <= 1e-9);
}

TEST_CASE("trivialize: branch-boundary anchor") {
  // D = -1 in SU2 at a_1: the half-way point needs the waypoint route.
  Cocycle c(GroupTag::SU2, 1);
  c.set_pair_at_a(1, GroupElement(GroupTag::SU2, -ComplexMatrix::Identity(2, 2)));
  const auto r = verify_trivialization(c, trivialize(c, 101));
  CHECK(r.passed);
}

TEST_CASE("trivialize: errors") {
  Cocycle bad(GroupTag::U1, 1);
  bad.set_at_x0({1, 1}, {1, -1}, u1(0.3));
  CHECK_THROWS_AS(trivialize(bad, 11), ValidationError);
  CHECK_THROWS(trivialize(Cocycle(GroupTag::U1, 1), 10));
  CHECK_THROWS(trivialize(Cocycle(GroupTag::U1, 1), 1));
}

TEST_CASE("verification catches faults") {
  const auto c = random_cocycle(2, GroupTag::SU2, 8);
  auto t = trivialize(c, 41);
  REQUIRE(verify_trivialization(c, t).passed);

  Rng rng(54);
  auto corrupt = t;
  corrupt.maps[2][7] = random_element(GroupTag::SU2, rng);
  const auto r = verify_trivialization(c, corrupt);
  CHECK_FALSE(r.continuity_ok);
  CHECK(r.worst_step.rfind("2+[", 0) == 0);
  CHECK_FALSE(r.passed);

  auto anchor = t;
  anchor.maps[0][0] = random_element(GroupTag::SU2, rng);
  CHECK_FALSE(verify_trivialization(c, anchor).coboundary_ok);

  auto shape = t;
  shape.maps.pop_back();
  CHECK_FALSE(verify_trivialization(c, shape).passed);

  const Cocycle id(GroupTag::U1, 1);
  Trivialization ident = trivialize(id, 5);
  CHECK(verify_trivialization(id, ident).max_coboundary_residual == 0.0);
}

}  // TEST_SUITE
