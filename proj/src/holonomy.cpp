#include "abgeom/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace abgeom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFlatStepRatio = 1e-3;

double min_clearance(const PlanePath& path, const std::vector<Puncture>& punctures) {
  double best = INFINITY;
  const auto& v = path.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Point d = v[i + 1] - v[i];
    const double len2 = d.squaredNorm();
    for (const auto& b : punctures) {
      double t = len2 > 0.0 ? (b.position - v[i]).dot(d) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      best = std::min(best, (b.position - (v[i] + t * d)).norm());
    }
  }
  if (v.size() == 1) {
    for (const auto& b : punctures) best = std::min(best, (b.position - v[0]).norm());
  }
  return best;
}

std::vector<int> allocate_steps(const PlanePath& path, int steps) {
  const auto& v = path.vertices;
  std::vector<int> pieces;
  if (v.size() < 2) return pieces;
  const double total = path.length();
  pieces.reserve(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double len = (v[i + 1] - v[i]).norm();
    const int n = total > 0.0 ? static_cast<int>(std::lround(steps * len / total)) : 1;
    pieces.push_back(std::max(1, n));
  }
  return pieces;
}

ComplexMatrix ordered_exponential(const ConnectionField& field, GroupTag tag,
                                  const PlanePath& path, int steps) {
  const int d = dimension(tag);
  ComplexMatrix w = ComplexMatrix::Identity(d, d);
  const auto pieces = allocate_steps(path, steps);
  const auto& v = path.vertices;
  int since_projection = 0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Point delta = (v[i + 1] - v[i]) / static_cast<double>(pieces[i]);
    for (int j = 0; j < pieces[i]; ++j) {
      const Point mid = v[i] + (j + 0.5) * delta;
      const auto a = field(mid);
      const ComplexMatrix x = a[0] * delta.x() + a[1] * delta.y();
      w = exp(AlgebraElement::trusted(tag, x)).matrix() * w;
      if (++since_projection == kReprojectEvery) {
        w = project_to_group(tag, w);
        since_projection = 0;
      }
    }
  }
  return project_to_group(tag, w);
}

}  // namespace

void FluxScenario::validate() const {
  if (rank < 0) throw ConfigError("scenario rank must be non-negative");
  if (static_cast<int>(punctures.size()) != rank) {
    throw ConfigError("scenario has " + std::to_string(punctures.size()) +
                      " punctures for rank " + std::to_string(rank));
  }
  if (static_cast<int>(fluxes.size()) != rank) {
    throw ConfigError("scenario has " + std::to_string(fluxes.size()) + " fluxes for rank " +
                      std::to_string(rank));
  }
  validate_punctures(punctures);
  for (const auto& f : fluxes) {
    if (f.tag() != group) throw TagMismatchError("flux group tag differs from scenario group");
  }
  const auto report = check_generic(PlanePath::open({basepoint}), punctures);
  if (!report.ok()) throw DegeneratePositionError("basepoint: " + report.violations.front().describe());
  for (const auto& b : punctures) {
    if ((b.position - basepoint).norm() <= kGenericTol) {
      throw DegeneratePositionError("basepoint coincides with a puncture");
    }
  }
}

const Puncture& FluxScenario::puncture(int label) const {
  for (const auto& b : punctures) {
    if (b.label == label) return b;
  }
  throw RankError("no puncture labelled " + std::to_string(label));
}

HolonomyMap::HolonomyMap(GroupTag tag, std::vector<GroupElement> images)
    : tag_(tag), images_(std::move(images)) {
  inverses_.reserve(images_.size());
  for (const auto& g : images_) {
    if (g.tag() != tag_) throw TagMismatchError("generator image tag mismatch");
    inverses_.push_back(inverse(g).matrix());
  }
}

HolonomyMap HolonomyMap::from_scenario(const FluxScenario& scenario) {
  std::vector<GroupElement> images;
  images.reserve(scenario.fluxes.size());
  for (const auto& f : scenario.fluxes) images.push_back(exp(f));
  return HolonomyMap(scenario.group, std::move(images));
}

HolonomyMap HolonomyMap::from_images(GroupTag tag, std::vector<GroupElement> images) {
  return HolonomyMap(tag, std::move(images));
}

HolonomyMap HolonomyMap::conjugated(const GroupElement& h) const {
  const ComplexMatrix h_inv = inverse(h).matrix();
  std::vector<GroupElement> out;
  out.reserve(images_.size());
  for (const auto& g : images_) {
    out.push_back(GroupElement::trusted(tag_, h.matrix() * g.matrix() * h_inv));
  }
  return HolonomyMap(tag_, std::move(out));
}

GroupElement holonomy_of_word(const HolonomyMap& phi, const Word& w) {
  if (w.rank() != phi.rank()) {
    throw RankError("word rank " + std::to_string(w.rank()) + " vs holonomy rank " +
                    std::to_string(phi.rank()));
  }
  const int d = dimension(phi.tag_);
  ComplexMatrix m = ComplexMatrix::Identity(d, d);
  for (const auto& l : w.letters()) {
    const auto k = static_cast<std::size_t>(l.generator - 1);
    m = m * (l.sign > 0 ? phi.images_[k].matrix() : phi.inverses_[k]);
  }
  return GroupElement::trusted(phi.tag_, m);
}

GroupElement holonomy_of_loop(const FluxScenario& scenario, const PlanePath& path) {
  return holonomy_of_loop(scenario, HolonomyMap::from_scenario(scenario), path);
}

GroupElement holonomy_of_loop(const FluxScenario& scenario, const HolonomyMap& phi,
                              const PlanePath& path) {
  if (path.vertices.empty() || (path.vertices.front() - scenario.basepoint).norm() > kGenericTol) {
    throw BasepointMismatchError("loop does not start at the scenario basepoint");
  }
  return holonomy_of_word(phi, word_of_loop(path, scenario.punctures, scenario.rank));
}

ConnectionValue connection_at(const FluxScenario& scenario, const Point& x) {
  const int d = dimension(scenario.group);
  ComplexMatrix ax = ComplexMatrix::Zero(d, d);
  ComplexMatrix ay = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < scenario.punctures.size(); ++k) {
    const Point r = x - scenario.punctures[k].position;
    const double r2 = r.squaredNorm();
    if (std::sqrt(r2) <= 1e-6) {
      throw PunctureProximityError("connection evaluated within 1e-6 of puncture b" +
                                   std::to_string(scenario.punctures[k].label));
    }
    const ComplexMatrix& f = scenario.fluxes[static_cast<std::size_t>(scenario.punctures[k].label - 1)].matrix();
    ax += f * (-r.y() / (kTwoPi * r2));
    ay += f * (r.x() / (kTwoPi * r2));
  }
  return {AlgebraElement::trusted(scenario.group, ax), AlgebraElement::trusted(scenario.group, ay)};
}

ConnectionField vortex_connection(const FluxScenario& scenario) {
  return [scenario](const Point& x) {
    const auto a = connection_at(scenario, x);
    return std::array<ComplexMatrix, 2>{a.ax.matrix(), a.ay.matrix()};
  };
}

GroupElement wilson_line(const FluxScenario& scenario, const PlanePath& path, int steps) {
  if (steps < 1) throw std::invalid_argument("wilson_line needs steps >= 1");
  if (min_clearance(path, scenario.punctures) < kWilsonClearance) {
    throw PunctureProximityError("path passes within 1e-3 of a puncture");
  }
  return GroupElement::trusted(
      scenario.group, ordered_exponential(vortex_connection(scenario), scenario.group, path, steps));
}

GroupElement wilson_line(const ConnectionField& field, GroupTag tag, const PlanePath& path,
                         int steps) {
  if (steps < 1) throw std::invalid_argument("wilson_line needs steps >= 1");
  return GroupElement::trusted(tag, ordered_exponential(field, tag, path, steps));
}

RefinedWilson wilson_line_refined(const FluxScenario& scenario, const PlanePath& path,
                                  int initial_steps, double tol, int max_steps) {
  int steps = std::max(1, initial_steps);
  GroupElement prev = wilson_line(scenario, path, steps);
  double change = INFINITY;
  while (steps * 2 <= max_steps) {
    steps *= 2;
    GroupElement next = wilson_line(scenario, path, steps);
    change = distance(prev, next);
    prev = next;
    if (change <= tol) return {prev, steps, change};
  }
  throw NonConvergenceError("wilson_line did not converge to " + std::to_string(tol) +
                            " by " + std::to_string(steps) + " steps (last change " +
                            std::to_string(change) + ")");
}

FlatnessReport verify_flatness(const FluxScenario& scenario, const GridSpec& grid, int threads) {
  FlatnessReport report;
  const int n = scenario.rank;
  for (int j = 1; j <= n; ++j) {
    for (int k = j + 1; k <= n; ++k) {
      const double c =
          commutator(scenario.fluxes[j - 1], scenario.fluxes[k - 1]).matrix().norm();
      report.commutators.push_back({j, k, c});
      report.max_commutator = std::max(report.max_commutator, c);
    }
  }
  report.non_flat = n >= 2 && report.max_commutator > kCommutatorTol;

  const int cells = grid.nx * grid.ny;
  std::vector<double> deviation(static_cast<std::size_t>(std::max(cells, 0)), -1.0);
  const auto field = vortex_connection(scenario);
  const double margin = kWilsonClearance;

  auto scan = [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      const int ix = c % grid.nx;
      const int iy = c / grid.nx;
      const Point lo = grid.origin + Point(ix * grid.cell, iy * grid.cell);
      const Point hi = lo + Point(grid.cell, grid.cell);
      bool blocked = false;
      for (const auto& b : scenario.punctures) {
        const Point& p = b.position;
        if (p.x() > lo.x() - margin && p.x() < hi.x() + margin && p.y() > lo.y() - margin &&
            p.y() < hi.y() + margin) {
          blocked = true;
        }
      }
      if (blocked) continue;
      const PlanePath square = PlanePath::loop(
          {lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())});
      // Midpoint error per step grows like (step / clearance)^3.
      const double clearance = min_clearance(square, scenario.punctures);
      const double fine = std::ceil(grid.cell / (kFlatStepRatio * clearance));
      const int sub = std::max(grid.substeps, static_cast<int>(std::min(fine, 65536.0)));
      const ComplexMatrix w = ordered_exponential(field, scenario.group, square, 4 * sub);
      deviation[static_cast<std::size_t>(c)] =
          (w - ComplexMatrix::Identity(w.rows(), w.cols())).norm();
    }
  };

  const int workers = std::clamp(threads, 1, std::max(1, cells));
  if (workers == 1) {
    scan(0, cells);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cells + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
      const int b = t * chunk;
      const int e = std::min(cells, b + chunk);
      if (b < e) pool.emplace_back(scan, b, e);
    }
    for (auto& th : pool) th.join();
  }

  for (int c = 0; c < cells; ++c) {
    const double dev = deviation[static_cast<std::size_t>(c)];
    if (dev < 0.0) {
      ++report.plaquettes_skipped;
      continue;
    }
    ++report.plaquettes_scanned;
    if (dev > report.max_plaquette_deviation) {
      report.max_plaquette_deviation = dev;
      report.worst_plaquette_center =
          grid.origin + Point((c % grid.nx + 0.5) * grid.cell, (c / grid.nx + 0.5) * grid.cell);
    }
  }
  return report;
}

}  // namespace abgeom
