#include <doctest.h>

#include <cmath>
#include <numbers>

#include "abgeom/propagator.hpp"
#include "oracles.hpp"

using namespace abgeom;

namespace {

constexpr double kPi = std::numbers::pi;

FluxScenario u1_scenario(const std::vector<Point>& where, const std::vector<double>& alphas) {
  FluxScenario s;
  s.rank = static_cast<int>(where.size());
  s.group = GroupTag::U1;
  s.basepoint = {0.0, 0.0};
  for (int k = 0; k < s.rank; ++k) {
    s.punctures.push_back({where[static_cast<std::size_t>(k)], k + 1});
    const double a[] = {alphas[static_cast<std::size_t>(k)]};
    s.fluxes.push_back(algebra_from_coefficients(GroupTag::U1, a));
  }
  return s;
}

WalkEnsemble ensemble(FluxScenario s, int steps, std::uint64_t samples, std::uint64_t seed = 5) {
  WalkEnsemble e;
  e.scenario = std::move(s);
  e.source = {0.0, 0.0};
  e.steps = steps;
  e.samples = samples;
  e.seed = seed;
  return e;
}

}  // namespace

TEST_SUITE("propagator") {

TEST_CASE("no punctures") {
  const auto e = ensemble(u1_scenario({}, {}), 8, 20000);
  const auto t = sample_class_amplitudes(e, Point(2.0, 0.0));
  REQUIRE(t.counts.size() == 1);
  CHECK(t.counts.begin()->first.empty());
  CHECK(t.accepted == t.counts.begin()->second);
  CHECK(t.overflow == 0);
  CHECK(t.total == 20000);
  CHECK(t.mass() == doctest::Approx(static_cast<double>(t.accepted) / 20000.0));
  const auto phi = HolonomyMap::from_scenario(e.scenario);
  CHECK(assemble_propagator(t, phi)(0, 0) == Complex(t.mass(), 0.0));
}

TEST_CASE("monte carlo agrees with exhaustive enumeration") {
  const std::vector<Point> where{{0.5, 1.5}, {-1.5, 0.5}};
  const auto s = u1_scenario(where, {0.3, -0.7});
  const std::set<std::pair<long, long>> det{{2, 0}, {0, 2}, {-2, 0}, {1, 1}, {-1, -1}};
  const std::vector<oracle::Pt> pts{{0.5, 1.5}, {-1.5, 0.5}};
  for (const int steps : {6, 10}) {
    const auto exact = oracle::enumerate_walks(steps, pts, det);
    const std::uint64_t samples = 400000;
    const auto e = ensemble(s, steps, samples, 17);
    std::vector<Point> detectors;
    for (const auto& [x, y] : det) detectors.emplace_back(static_cast<double>(x), static_cast<double>(y));
    const auto tables = sample_class_amplitudes(e, detectors, 4);
    const double all = std::pow(4.0, steps);
    const double tol = 3.0 / std::sqrt(static_cast<double>(samples));
    std::size_t i = 0;
    for (const auto& key : det) {
      const auto& t = tables[i++];
      const auto& ex = exact.count(key) ? exact.at(key) : std::map<std::string, std::uint64_t>{};
      CHECK(t.overflow == 0);
      std::set<std::string> seen;
      for (const auto& [w, n] : t.counts) {
        const std::string name = to_string(w);
        seen.insert(name);
        REQUIRE_MESSAGE(ex.count(name), "sampled class ", name, " never occurs");
        CHECK(std::abs(static_cast<double>(n) / samples - ex.at(name) / all) <= tol);
      }
      for (const auto& [name, n] : ex) {
        if (!seen.count(name)) CHECK(n / all <= tol);
      }
    }
  }
}

TEST_CASE("class support is bounded") {
  const auto s = u1_scenario({{0.5, 0.5}}, {1.0});
  for (const int steps : {5, 9, 13}) {
    auto e = ensemble(s, steps, 50000);
    e.word_cap = 64;
    const auto t = sample_class_amplitudes(e, Point(1.0, 0.0));
    for (const auto& [w, n] : t.counts) CHECK(std::labs(abelianize(w)[0]) <= max_winding(steps));
  }
  // Exhaustive check of the bound itself at small T.
  for (int steps = 1; steps <= 11; steps += 2) {
    const auto ex = oracle::enumerate_walks(steps, {{0.5, 0.5}}, {{1, 0}, {0, 1}, {-1, 0}});
    long worst = 0;
    for (const auto& [d, classes] : ex) {
      for (const auto& [name, n] : classes) {
        long sum = 0;
        for (std::size_t p = 0; (p = name.find("c1", p)) != std::string::npos; p += 2) {
          sum += name.compare(p, 5, "c1^-1") == 0 ? -1 : 1;
        }
        worst = std::max(worst, std::labs(sum));
      }
    }
    CHECK(worst <= max_winding(steps));
  }
  CHECK(max_winding(1) == 1);
  CHECK(max_winding(5) == 2);
}

TEST_CASE("closed walks") {
  const auto s = u1_scenario({{0.5, 0.5}, {-1.5, 2.5}}, {1.0, 1.0});
  const auto e = ensemble(s, 4, 10);
  const std::vector<Point> walk{{0, 0}, {1, 0}, {1, 1}, {2, 1}};
  const auto loop = closed_walk(e, walk);
  CHECK(loop.closed);
  CHECK(loop.vertices.front() == Point(0, 0));
  CHECK(to_string(word_of_loop(loop, s.punctures, 2)) == "c1");
  const std::vector<Point> above{{0, 0}, {0, 1}, {1, 1}};
  CHECK(word_of_loop(closed_walk(e, above), s.punctures, 2).empty());
}

TEST_CASE("assembly") {
  ClassAmplitudeTable t;
  t.rank = 1;
  t.total = 1000;
  t.counts[Word(1)] = 300;
  t.counts[parse_word(1, "c1")] = 200;
  t.accepted = 500;
  for (const double alpha : {0.0, 0.4, kPi / 2, 2.0, kPi}) {
    const auto phi = HolonomyMap::from_scenario(u1_scenario({{0.5, 0.5}}, {alpha}));
    const Complex k = assemble_propagator(t, phi)(0, 0);
    CHECK(std::norm(k) == doctest::Approx(oracle::two_beam(0.3, 0.2, alpha)).epsilon(1e-13));
  }
  // Trivial phi: plain sum.
  const auto trivial = HolonomyMap::from_images(GroupTag::U1, {identity(GroupTag::U1)});
  CHECK(assemble_propagator(t, trivial)(0, 0) == Complex(0.5, 0.0));

  // SU2, three classes, against direct matrix arithmetic.
  Rng rng(71);
  const auto g1 = random_element(GroupTag::SU2, rng);
  const auto g2 = random_element(GroupTag::SU2, rng);
  const auto phi = HolonomyMap::from_images(GroupTag::SU2, {g1, g2});
  ClassAmplitudeTable u;
  u.rank = 2;
  u.total = 100;
  u.counts[Word(2)] = 10;
  u.counts[parse_word(2, "c1 c2")] = 20;
  u.counts[parse_word(2, "c2^-1 c1")] = 30;
  const ComplexMatrix direct = 0.1 * ComplexMatrix::Identity(2, 2) + 0.2 * g1.matrix() * g2.matrix() +
                               0.3 * g2.matrix().adjoint() * g1.matrix();
  CHECK((assemble_propagator(u, phi) - direct).norm() <= 1e-15);
  CHECK_THROWS_AS(assemble_propagator(t, phi), RankError);
}

TEST_CASE("interference invariants") {
  const auto screen = screen_line({-6.0, 4.0}, {6.0, 4.0}, 13);
  const Point b(0.5, 2.5);
  auto e = ensemble(u1_scenario({b}, {0.0}), 24, 200000, 9);
  e.word_cap = 24;
  auto none = ensemble(u1_scenario({}, {}), 24, 200000, 9);
  const auto zero = interference_scan(e, screen, HolonomyMap::from_scenario(e.scenario), 3);
  const auto plain = interference_scan(none, screen, HolonomyMap::from_scenario(none.scenario), 2);
  for (const auto& t : zero.tables) CHECK(t.overflow == 0);
  CHECK(zero.intensity == plain.intensity);

  const auto at = [&](double alpha) {
    return intensities(zero.tables, HolonomyMap::from_scenario(u1_scenario({b}, {alpha})));
  };
  const auto i0 = at(0.0);
  const auto i2pi = at(2.0 * kPi);
  for (std::size_t i = 0; i < i0.size(); ++i) CHECK(std::abs(i0[i] - i2pi[i]) <= 1e-10);
  CHECK(at(1.0) != i0);
}

TEST_CASE("determinism and thread invariance") {
  const auto s = u1_scenario({{0.5, 1.5}, {-2.5, 0.5}}, {0.3, 1.1});
  auto e = ensemble(s, 16, 60000, 123);
  const auto screen = screen_line({-4.0, 2.0}, {4.0, 2.0}, 9);
  const auto a = sample_class_amplitudes(e, screen, 1);
  for (const int threads : {2, 3, 8}) {
    const auto b = sample_class_amplitudes(e, screen, threads);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].counts == b[i].counts);
      CHECK(a[i].overflow == b[i].overflow);
      CHECK(a[i].accepted == b[i].accepted);
    }
  }
  e.seed = 124;
  const auto c = sample_class_amplitudes(e, screen, 1);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) differs = differs || a[i].counts != c[i].counts;
  CHECK(differs);
}

TEST_CASE("convergence with more samples") {
  const auto s = u1_scenario({{0.5, 1.5}}, {1.0});
  auto e = ensemble(s, 10, 100000, 31);
  const auto small = sample_class_amplitudes(e, Point(2.0, 0.0));
  e.samples = 200000;
  const auto large = sample_class_amplitudes(e, Point(2.0, 0.0));
  const auto sa = small.amplitudes();
  for (const auto& [w, amp] : large.amplitudes()) {
    const Complex other = sa.count(w) ? sa.at(w) : Complex(0.0);
    CHECK(std::abs(amp - other) <= 2.0 / std::sqrt(100000.0));
  }
}

TEST_CASE("excision and errors") {
  auto e = ensemble(u1_scenario({{0.5, 1.5}}, {1.0}), 10, 50000);
  e.lattice.excision_margin = 0;
  const auto t = sample_class_amplitudes(e, Point(2.0, 0.0));
  e.lattice.excision_margin = -1;
  const auto u = sample_class_amplitudes(e, Point(2.0, 0.0));
  CHECK(t.accepted < u.accepted);

  CHECK_THROWS_AS(sample_class_amplitudes(e, Point(9.0, 9.0)), InsufficientSamplesError);
  CHECK_THROWS(sample_class_amplitudes(e, Point(0.5, 0.0)));
  auto bad = ensemble(u1_scenario({{1.0, 1.5}}, {1.0}), 10, 100);
  CHECK_THROWS_AS(bad.validate(), DegeneratePositionError);
  bad = ensemble(u1_scenario({{0.5, 1.5}}, {1.0}), 0, 100);
  CHECK_THROWS(bad.validate());
  e.lattice.excision_margin = 1;
  e.scenario.punctures[0].position = {0.5, 0.5};
  CHECK_THROWS(e.validate());
}

TEST_CASE("fringe shift") {
  const auto screen = screen_line({0.0, 0.0}, {30.0, 0.0}, 31);
  std::vector<double> ref;
  std::vector<double> moved;
  for (int i = 0; i < 31; ++i) {
    ref.push_back(1.0 + std::cos(0.6 * i));
    moved.push_back(1.0 + std::cos(0.6 * (i - 1)));
  }
  CHECK(fringe_shift(ref, ref, screen) == 0.0);
  CHECK(fringe_shift(moved, ref, screen) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fringe_shift(ref, moved, screen) == doctest::Approx(-fringe_shift(moved, ref, screen)));

  // Sub-pixel offsets of a smooth bump.
  std::vector<double> bump;
  std::vector<double> bump_moved;
  for (int i = 0; i < 31; ++i) {
    bump.push_back(std::exp(-0.5 * std::pow((i - 15.0) / 3.0, 2)));
    bump_moved.push_back(std::exp(-0.5 * std::pow((i - 15.4) / 3.0, 2)));
  }
  CHECK(fringe_shift(bump_moved, bump, screen) == doctest::Approx(0.4).epsilon(0.1));

  CHECK_THROWS_AS(fringe_shift(std::vector<double>(31, 2.0), ref, screen), FlatPatternError);
  CHECK_THROWS(fringe_shift(ref, std::vector<double>(30, 1.0), screen));
  const auto line = screen_line({0.0, 0.0}, {1.0, 2.0}, 3);
  CHECK(line[1] == Point(0.5, 1.0));
  CHECK_THROWS(screen_line({0.0, 0.0}, {1.0, 1.0}, 1));
}

}  // TEST_SUITE
