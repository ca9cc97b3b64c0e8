// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <thread>

#include "abgeom/cocycle.hpp"
#include "abgeom/covering.hpp"
#include "abgeom/propagator.hpp"
#include "abgeom/section.hpp"
#include "abgeom/serialize.hpp"
#include "oracles.hpp"

using namespace abgeom;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr GroupTag kGroups[] = {GroupTag::U1, GroupTag::SU2, GroupTag::SU3, GroupTag::SL2C};

int worker_count() { return std::max(2u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Word random_word(int rank, int max_len, Rng& rng) {
  std::vector<Letter> ls;
  const auto len = rng.below(static_cast<std::uint64_t>(max_len) + 1);
  for (std::uint64_t i = 0; i < len; ++i) {
    ls.push_back({static_cast<int>(rng.below(static_cast<std::uint64_t>(rank))) + 1,
                  rng.below(2) ? 1 : -1});
  }
  return Word(rank, ls);
}

PlanePath lollipop(const Point& x0, const Point& center, double r, int sides, int turns = 1,
                   double angle = 1.67) {
  const PlanePath ring = circle_path(center, r, sides, angle, turns);
  std::vector<Point> v{x0};
  v.insert(v.end(), ring.vertices.begin(), ring.vertices.end());
  v.push_back(x0);
  return PlanePath::loop(v);
}

FluxScenario make_scenario(GroupTag tag, const std::vector<Point>& where,
                           const std::vector<std::vector<double>>& coeffs, Point x0) {
  FluxScenario s;
  s.rank = static_cast<int>(where.size());
  s.group = tag;
  s.basepoint = x0;
  for (int k = 0; k < s.rank; ++k) {
    s.punctures.push_back({where[static_cast<std::size_t>(k)], k + 1});
    s.fluxes.push_back(algebra_from_coefficients(tag, coeffs[static_cast<std::size_t>(k)]));
  }
  return s;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
  Outcome o;
  for (std::int64_t n = 1; n <= 10; ++n) {
    const std::int64_t sets = 2 * n;
    const std::int64_t pairs = sets * (sets - 1) / 2;
    const std::int64_t triples = sets * (sets - 1) * (sets - 2) / 6;
    if (count_transition_functions(static_cast<int>(n)) != 2 * pairs + sets ||
        count_transition_functions(static_cast<int>(n)) != 4 * n * n) {
      o.fail("transition count wrong at n=" + std::to_string(n));
    }
    if (count_cocycle_relations(static_cast<int>(n)) != triples ||
        count_cocycle_relations(static_cast<int>(n)) != n * (2 * n - 1) * (2 * n - 2) / 3) {
      o.fail("relation count wrong at n=" + std::to_string(n));
    }
  }
  if (o.pass) o.detail = "4n^2 and n(2n-1)(2n-2)/3 exact for n=1..10";
  return o;
}

Outcome ac2() {
  Outcome o;
  double worst = 0.0;
  int runs = 0;
  for (const auto tag : kGroups) {
    for (int n = 1; n <= 3; ++n) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto c = random_cocycle(n, tag, seed);
        const auto r = verify_trivialization(c, trivialize(c, 101));
        ++runs;
        worst = std::max(worst, r.max_coboundary_residual);
        if (!r.passed || r.max_coboundary_residual > 1e-9) {
          o.fail(std::string(to_string(tag)) + " n=" + std::to_string(n) + " seed=" +
                 std::to_string(seed) + " residual " + fmt("%.3g", r.max_coboundary_residual) +
                 " step " + fmt("%.3g", r.max_step));
        }
      }
    }
  }
  if (o.pass) o.detail = std::to_string(runs) + " cocycles trivialized, max residual " + fmt("%.2e", worst);
  return o;
}

Outcome ac3() {
  Outcome o;
  Rng rng(3003);
  double worst = 0.0;
  for (const auto tag : kGroups) {
    const int rank = 3;
    std::vector<GroupElement> images;
    for (int k = 0; k < rank; ++k) images.push_back(random_element(tag, rng));
    const auto phi = HolonomyMap::from_images(tag, images);
    for (int i = 0; i < 1000; ++i) {
      const Word a = random_word(rank, 6, rng);
      const Word b = random_word(rank, 6, rng);
      const double d = distance(holonomy_of_word(phi, a * b),
                                holonomy_of_word(phi, a) * holonomy_of_word(phi, b));
      worst = std::max(worst, d);
      if (d > 1e-12) o.fail(std::string(to_string(tag)) + " defect " + fmt("%.3g", d));
    }
  }
  if (o.pass) o.detail = "4000 word pairs, max defect " + fmt("%.2e", worst);
  return o;
}

Outcome ac4() {
  Outcome o;
  Rng rng(4004);
  int checked = 0;
  int tries = 0;
  while (checked < 500 && tries < 5000) {
    ++tries;
    const int n = 1 + static_cast<int>(rng.below(3));
    std::vector<Puncture> b;
    for (int k = 1; k <= n; ++k) b.push_back({{rng.uniform(-3, 3), rng.uniform(-3, 3)}, k});
    try {
      validate_punctures(b);
    } catch (const PunctureLayoutError&) {
      continue;
    }
    std::vector<Point> v;
    for (int i = 0; i < 200; ++i) v.emplace_back(rng.uniform(-4, 4), rng.uniform(-4, 4));
    const PlanePath p = PlanePath::loop(v);
    if (!check_generic(p, b).ok()) continue;
    ++checked;
    if (abelianize(word_of_loop(p, b, n)) != winding_numbers(p, b)) {
      o.fail("abelianization differs from winding numbers on loop " + std::to_string(checked));
    }
  }
  if (checked < 500) o.fail("only " + std::to_string(checked) + " generic loops");

  // Homotopic deformation families: every member must give the same word.
  const std::vector<Puncture> b{{{-2.0, 0.3}, 1}, {{0.5, -1.0}, 2}, {{2.6, 0.8}, 3}};
  const Point x0(0.1, 4.0);
  auto base = [&](double r, int sides, double angle) {
    return lollipop(x0, b[0].position, r, sides, 1, angle)
        .then(lollipop(x0, b[1].position, r, sides, -1, angle))
        .then(lollipop(x0, b[2].position, r, sides, 2, angle));
  };
  const PlanePath ref = base(1.0, 32, 1.67);
  const Word expected = word_of_loop(ref, b, 3);
  std::vector<std::pair<std::string, std::vector<PlanePath>>> families(5);
  families[0].first = "refinement";
  families[1].first = "radius";
  families[2].first = "entry angle";
  families[3].first = "spurs";
  families[4].first = "jitter";
  for (int i = 0; i < 10; ++i) {
    families[0].second.push_back(ref.refined(1 + i));
    families[1].second.push_back(base(0.5 + 0.12 * i, 24 + 4 * i, 1.67));
    families[2].second.push_back(base(1.0, 32, 1.2 + 0.1 * i));
    std::vector<Point> spur = ref.vertices;
    const auto at = static_cast<std::size_t>(1 + rng.below(spur.size() - 2));
    const Point tip = spur[at] + Point(0.0, 0.2 + 0.05 * i);
    spur.insert(spur.begin() + static_cast<long>(at) + 1, {tip, spur[at]});
    families[3].second.push_back(PlanePath::loop(std::vector<Point>(spur.begin(), spur.end() - 1)));
    std::vector<Point> moved = ref.vertices;
    for (std::size_t j = 1; j + 1 < moved.size(); ++j) {
      moved[j] += Point(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05));
    }
    families[4].second.push_back(PlanePath::loop(std::vector<Point>(moved.begin(), moved.end() - 1)));
  }
  for (const auto& [name, members] : families) {
    for (const auto& p : members) {
      if (word_of_loop(p, b, 3) != expected) o.fail("deformation family '" + name + "' changed the word");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " random loops; 5 families all give " + to_string(expected);
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const Point x0(0.1, 1.5);
  const auto u1 = make_scenario(GroupTag::U1, {{-2.0, 0.3}, {2.05, -0.2}}, {{0.7}, {-1.9}}, x0);
  const auto su2 = make_scenario(GroupTag::SU2, {{-2.0, 0.3}}, {{0.4, 1.1, -0.3}}, x0);
  const PlanePath u1_loop = lollipop(x0, u1.punctures[0].position, 1.0, 48)
                                .then(lollipop(x0, u1.punctures[1].position, 1.0, 48, -1));
  const PlanePath su2_loop = lollipop(x0, su2.punctures[0].position, 1.0, 48, 2);
  double worst = 0.0;
  std::string slopes;
  for (const auto& [s, loop] : {std::pair{u1, u1_loop}, std::pair{su2, su2_loop}}) {
    const auto exact = holonomy_of_loop(s, loop);
    const double err = distance(wilson_line(s, loop, 10000), exact);
    worst = std::max(worst, err);
    if (err > 1e-6) o.fail(std::string(to_string(s.group)) + " Wilson error " + fmt("%.3g", err));
    std::vector<double> e;
    for (const int steps : {500, 1000, 2000, 4000}) e.push_back(distance(wilson_line(s, loop, steps), exact));
    // Least-squares slope of log err against log steps.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double x = std::log(500.0 * std::pow(2.0, static_cast<double>(i)));
      const double y = std::log(e[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(e.size());
    const double slope = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    slopes += std::string(slopes.empty() ? "" : ", ") + std::string(to_string(s.group)) + " " + fmt("%.2f", slope);
    if (std::abs(slope - 2.0) > 0.3) o.fail(std::string(to_string(s.group)) + " refinement slope " + fmt("%.2f", slope));
  }
  const auto two = make_scenario(GroupTag::SU2, {{-2.0, 0.3}, {2.05, -0.2}}, {{3.0, 0, 0}, {0, 3.0, 0}}, x0);
  GridSpec grid;
  grid.origin = {-0.2, -0.2};
  grid.cell = 1e-2;
  grid.nx = grid.ny = 20;
  const auto r = verify_flatness(two, grid, worker_count());
  if (!r.non_flat) o.fail("non-commuting fluxes not flagged NON-FLAT");
  if (o.pass) {
    o.detail = "max Wilson error " + fmt("%.2e", worst) + " at 1e4 steps; slopes " + slopes +
               "; non-commuting pair flagged (plaquette deviation " + fmt("%.2e", r.max_plaquette_deviation) + ")";
  }
  return o;
}

Outcome ac6() {
  Outcome o;
  for (int n = 1; n <= 3; ++n) {
    for (int r = 0; r <= 6; ++r) {
      std::size_t expected = 1;
      std::size_t shell = 2 * static_cast<std::size_t>(n);
      for (int i = 1; i <= r; ++i) {
        expected += shell;
        shell *= 2 * static_cast<std::size_t>(n) - 1;
      }
      if (fiber_ball_count(n, r) != expected || fiber_ball(n, r).size() != expected) {
        o.fail("ball size wrong at n=" + std::to_string(n) + " r=" + std::to_string(r));
      }
    }
  }
  if (fiber_ball_count(2, 3) != 53 || oracle::ball_size_brute(2, 3) != 53) o.fail("n=2 r=3 is not 53");
  Rng rng(6006);
  for (int i = 0; i < 500; ++i) {
    Word g = random_word(3, 6, rng);
    if (g.empty()) g = parse_word(3, "c1");
    const TreeVertex v(random_word(3, 6, rng));
    if (deck_transform(g, v) == v) o.fail("deck transformation fixed a vertex");
  }
  const double c[] = {0.8};
  const auto phi = HolonomyMap::from_images(GroupTag::U1, {exp(algebra_from_coefficients(GroupTag::U1, c))});
  const auto d = canonical_map_equivariance(phi, parse_word(1, "c1"), TreeVertex::root(1));
  if (!(d.defect > 0.1)) o.fail("canonical map looked equivariant on the witness");
  if (o.pass) o.detail = "ball counts n<=3 r<=6; 500 deck samples free; equivariance defect " + fmt("%.3f", d.defect);
  return o;
}

Outcome ac7() {
  Outcome o;
  const int threads = worker_count();
  auto u1 = [](const std::vector<Point>& where, double alpha) {
    std::vector<std::vector<double>> coeffs(where.size(), {alpha});
    return make_scenario(GroupTag::U1, where, coeffs, {0.0, 20.0});
  };
  auto ensemble = [](FluxScenario s, int steps, std::uint64_t samples, std::uint64_t seed) {
    WalkEnsemble e;
    e.scenario = std::move(s);
    e.steps = steps;
    e.samples = samples;
    e.seed = seed;
    e.word_cap = steps;
    return e;
  };
  const Point b(1.5, 5.5);
  const auto screen = screen_line({-12.0, 11.0}, {12.0, 11.0}, 13);
  const auto e = ensemble(u1({b}, 0.0), 45, 2000000, 2024);
  const auto scan = interference_scan(e, screen, HolonomyMap::from_scenario(e.scenario), threads);
  const auto phase = [&](double alpha) {
    return intensities(scan.tables, HolonomyMap::from_scenario(u1({b}, alpha)));
  };

  // 2 pi periodicity.
  const auto i0 = phase(0.0);
  const auto i2pi = phase(2.0 * kPi);
  double period = 0.0;
  for (std::size_t i = 0; i < i0.size(); ++i) period = std::max(period, std::abs(i0[i] - i2pi[i]));
  if (period > 1e-10) o.fail("alpha=2pi differs from alpha=0 by " + fmt("%.3g", period));

  // Zero flux against no punctures, same seed.
  const auto bare = ensemble(u1({}, 0.0), 45, 2000000, 2024);
  const auto plain = interference_scan(bare, screen, HolonomyMap::from_scenario(bare.scenario), threads);
  if (plain.intensity != scan.intensity) o.fail("zero-flux pattern differs from the puncture-free one");

  // Exhaustive enumeration at T <= 12.
  const std::vector<Point> where{{0.5, 1.5}, {-1.5, 0.5}};
  const std::set<std::pair<long, long>> det{{2, 0}, {0, 2}, {-2, 0}, {1, 1}, {-1, -1}, {0, 0}};
  std::vector<Point> detectors;
  for (const auto& [x, y] : det) detectors.emplace_back(static_cast<double>(x), static_cast<double>(y));
  double worst_mc = 0.0;
  double tol = 0.0;
  for (const int steps : {8, 12}) {
    const auto exact = oracle::enumerate_walks(steps, {{0.5, 1.5}, {-1.5, 0.5}}, det);
    const std::uint64_t samples = 1000000;
    tol = 3.0 / std::sqrt(static_cast<double>(samples));
    const auto tables = sample_class_amplitudes(ensemble(u1(where, 0.3), steps, samples, 77), detectors, threads);
    const double all = std::pow(4.0, steps);
    std::size_t i = 0;
    for (const auto& key : det) {
      const auto& t = tables[i++];
      std::map<std::string, double> diff;
      if (exact.count(key)) {
        for (const auto& [name, n] : exact.at(key)) diff[name] -= n / all;
      }
      for (const auto& [w, n] : t.counts) diff[to_string(w)] += static_cast<double>(n) / samples;
      for (const auto& [name, d] : diff) {
        worst_mc = std::max(worst_mc, std::abs(d));
        if (std::abs(d) > tol) o.fail("class " + name + " off enumeration by " + fmt("%.3g", d));
      }
    }
  }

  // Fringe shift at alpha = pi/2 against the two-beam closed form built from
  // the e and c1 amplitudes alone.
  const double alpha = kPi / 2;
  const Word eps(1);
  const Word c1 = parse_word(1, "c1");
  std::vector<double> tb0;
  std::vector<double> tba;
  for (const auto& t : scan.tables) {
    const auto amp = t.amplitudes();
    const double a0 = amp.count(eps) ? amp.at(eps).real() : 0.0;
    const double a1 = amp.count(c1) ? amp.at(c1).real() : 0.0;
    tb0.push_back(oracle::two_beam(a0, a1, 0.0));
    tba.push_back(oracle::two_beam(a0, a1, alpha));
  }
  const double shift = fringe_shift(phase(alpha), i0, screen);
  const double closed = fringe_shift(tba, tb0, screen);
  const double rel = std::abs(shift - closed) / std::abs(closed);
  if (!(std::abs(shift) > 0.0)) o.fail("no fringe shift at alpha=pi/2");
  if (!(rel <= 0.1)) o.fail("fringe shift " + fmt("%.4f", shift) + " vs two-beam " + fmt("%.4f", closed));

  if (o.pass) {
    o.detail = "2pi period " + fmt("%.1e", period) + "; zero flux bit-identical; MC vs enumeration max " +
               fmt("%.2e", worst_mc) + " (tol " + fmt("%.1e", tol) + "); shift " + fmt("%.3f", shift) +
               " vs two-beam " + fmt("%.3f", closed) + " (" + fmt("%.1f", 100 * rel) + "%)";
  }
  return o;
}

Outcome ac8() {
  Outcome o;
  const auto su2 = make_scenario(GroupTag::SU2, {{-2.0, 0.3}, {2.05, -0.2}},
                                 {{0.4, -1.1, 0.8}, {1.5, 0.2, -0.3}}, {0.1, 3.0});
  const auto field = vortex_connection(su2);
  const GaugeField lambda = [](const Point& x) -> ComplexMatrix {
    const double c[] = {std::sin(x.x()), 0.7 * std::cos(x.y()), 0.3 * x.x() * x.y()};
    return exp(algebra_from_coefficients(GroupTag::SU2, c)).matrix();
  };
  const SectionField psi = [](const Point& x) -> ComplexVector {
    ComplexVector z(2);
    z << Complex(std::cos(x.x()), x.y()), Complex(x.x() * x.y(), std::sin(x.y()));
    return z;
  };
  const auto gauged = gauge_transform(psi, field, lambda);
  Rng rng(8008);
  double cov = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Point x(rng.uniform(-4, 4), rng.uniform(-3, 4));
    if ((x - su2.punctures[0].position).norm() < 0.3 || (x - su2.punctures[1].position).norm() < 0.3) continue;
    const Point v(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const ComplexVector lhs = covariant_derivative(gauged.connection, gauged.section, v, x);
    const ComplexVector rhs = lambda(x) * covariant_derivative(field, psi, v, x);
    cov = std::max(cov, (lhs - rhs).norm());
  }
  if (cov > 1e-6) o.fail("gauge covariance error " + fmt("%.3g", cov));

  double trip = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<Point> v{{0.1, 3.0}};
    for (int j = 0; j < 6; ++j) v.emplace_back(rng.uniform(-4, 4), rng.uniform(-3, 4));
    const PlanePath p = PlanePath::open(v);
    if (!check_generic(p, su2.punctures).ok()) continue;
    ComplexVector z0(2);
    z0 << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
    try {
      const auto there = parallel_transport(su2, z0, p, 4000);
      trip = std::max(trip, (parallel_transport(su2, there, p.reversed(), 4000) - z0).norm());
    } catch (const PunctureProximityError&) {
    }
  }
  if (trip > 1e-8) o.fail("transport round trip error " + fmt("%.3g", trip));

  double rep = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = random_element(GroupTag::SU2, rng);
    const auto h = random_element(GroupTag::SU2, rng);
    ComplexVector z(2);
    z << Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal());
    const FiberPoint a{{0.0, 0.0}, g, z};
    const FiberPoint b{{0.0, 0.0}, g * h, inverse(h).matrix() * z};
    rep = std::max(rep, (canonical_rep(a).z - canonical_rep(b).z).norm());
  }
  if (rep > 1e-12) o.fail("canonical_rep invariance error " + fmt("%.3g", rep));
  if (o.pass) {
    o.detail = "covariance " + fmt("%.1e", cov) + ", round trip " + fmt("%.1e", trip) +
               ", canonical_rep " + fmt("%.1e", rep);
  }
  return o;
}

Outcome ac9() {
  Outcome o;
  const int many = worker_count();
  // Cocycle generation and its certificate.
  const auto run_cert = [] {
    const auto c = random_cocycle(3, GroupTag::SL2C, 99);
    return dump_json(certificate_to_json({c, trivialize(c, 51), kConstructionTol}));
  };
  if (run_cert() != run_cert()) o.fail("certificate differs between runs");

  // Walk sampling across thread counts.
  const auto s = make_scenario(GroupTag::U1, {{0.5, 1.5}, {-2.5, 0.5}}, {{0.3}, {1.1}}, {0.0, 20.0});
  WalkEnsemble e;
  e.scenario = s;
  e.steps = 20;
  e.samples = 300000;
  e.seed = 4242;
  const auto screen = screen_line({-6.0, 2.0}, {6.0, 2.0}, 7);
  const auto tables = [&](int threads) {
    std::string out;
    for (const auto& t : sample_class_amplitudes(e, screen, threads)) out += dump_json(class_table_to_json(t));
    return out;
  };
  const std::string t1 = tables(1);
  if (t1 != tables(1)) o.fail("class tables differ between runs");
  for (const int threads : {2, many}) {
    if (tables(threads) != t1) o.fail("class tables differ at " + std::to_string(threads) + " threads");
  }

  // Flatness scan across thread counts.
  const auto two = make_scenario(GroupTag::SU2, {{-2.0, 0.3}, {2.05, -0.2}}, {{3.0, 0, 0}, {0, 3.0, 0}}, {0.1, 3.0});
  GridSpec grid;
  grid.origin = {-0.2, -0.2};
  grid.nx = grid.ny = 16;
  const std::string f1 = dump_json(flatness_to_json(verify_flatness(two, grid, 1)));
  if (dump_json(flatness_to_json(verify_flatness(two, grid, many))) != f1) o.fail("flatness report depends on threads");
  if (o.pass) o.detail = "certificate, class tables (1/2/" + std::to_string(many) + " threads) and flatness report byte-identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& ex) {
      o.fail(std::string("threw: ") + ex.what());
    }
    std::printf("%s %s  %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed ? 1 : 0;
}
