#include "abgeom/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace abgeom {

namespace {

struct LatticeKey {
  long i;
  long j;
  friend auto operator<=>(const LatticeKey&, const LatticeKey&) = default;
};

struct Block {
  long i_lo, i_hi, j_lo, j_hi;
  bool contains(long i, long j) const { return i >= i_lo && i <= i_hi && j >= j_lo && j <= j_hi; }
};

double lattice_coord(double value, double origin, double spacing) {
  return (value - origin) / spacing;
}

bool on_lattice_line(double u) { return std::abs(u - std::round(u)) <= 1e-9; }

std::vector<Block> excised_blocks(const WalkEnsemble& e) {
  std::vector<Block> blocks;
  if (e.lattice.excision_margin < 0) return blocks;
  const long m = e.lattice.excision_margin;
  for (const auto& b : e.scenario.punctures) {
    const auto ci = static_cast<long>(std::floor(lattice_coord(b.position.x(), e.source.x(), e.lattice.spacing)));
    const auto cj = static_cast<long>(std::floor(lattice_coord(b.position.y(), e.source.y(), e.lattice.spacing)));
    blocks.push_back({ci - m, ci + 1 + m, cj - m, cj + 1 + m});
  }
  return blocks;
}

LatticeKey detector_key(const WalkEnsemble& e, const Point& p) {
  const double u = lattice_coord(p.x(), e.source.x(), e.lattice.spacing);
  const double v = lattice_coord(p.y(), e.source.y(), e.lattice.spacing);
  if (!on_lattice_line(u) || !on_lattice_line(v)) {
    throw std::invalid_argument("detector (" + std::to_string(p.x()) + ", " +
                                std::to_string(p.y()) + ") is not a lattice point");
  }
  return {std::lround(u), std::lround(v)};
}

Point lattice_point(const WalkEnsemble& e, long i, long j) {
  return e.source + e.lattice.spacing * Point(static_cast<double>(i), static_cast<double>(j));
}

using ShardTables = std::vector<ClassAmplitudeTable>;

ShardTables run_shard(const WalkEnsemble& e, std::uint64_t shard, std::uint64_t walks,
                      const std::map<LatticeKey, std::vector<std::size_t>>& detectors,
                      std::size_t detector_count, const std::vector<Block>& blocks) {
  ShardTables tables(detector_count);
  for (auto& t : tables) {
    t.rank = e.scenario.rank;
    t.total = walks;
  }
  Rng rng(derive_seed(e.seed, shard));
  std::vector<LatticeKey> trail(static_cast<std::size_t>(e.steps) + 1);
  std::vector<Point> walk;
  for (std::uint64_t w = 0; w < walks; ++w) {
    long i = 0;
    long j = 0;
    bool excised = false;
    trail[0] = {0, 0};
    for (int s = 1; s <= e.steps; ++s) {
      switch (rng.below(4)) {
        case 0: ++i; break;
        case 1: --i; break;
        case 2: ++j; break;
        default: --j; break;
      }
      trail[static_cast<std::size_t>(s)] = {i, j};
      if (!excised) {
        for (const auto& b : blocks) excised = excised || b.contains(i, j);
      }
    }
    if (excised) continue;
    const auto hit = detectors.find({i, j});
    if (hit == detectors.end()) continue;

    walk.clear();
    for (const auto& k : trail) walk.push_back(lattice_point(e, k.i, k.j));
    const Word word = word_of_loop(closed_walk(e, walk), e.scenario.punctures, e.scenario.rank);
    for (const std::size_t d : hit->second) {
      auto& t = tables[d];
      ++t.accepted;
      if (static_cast<int>(word.size()) > e.word_cap) {
        ++t.overflow;
      } else {
        ++t.counts[word];
      }
    }
  }
  return tables;
}

}  // namespace

void WalkEnsemble::validate() const {
  scenario.validate();
  if (steps < 1) throw std::invalid_argument("walk length must be at least 1");
  if (samples < 1) throw std::invalid_argument("need at least one walk");
  if (shards < 1) throw std::invalid_argument("need at least one shard");
  if (word_cap < 0) throw std::invalid_argument("word cap must be non-negative");
  if (!(lattice.spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  for (const auto& b : scenario.punctures) {
    if (on_lattice_line(lattice_coord(b.position.x(), source.x(), lattice.spacing)) ||
        on_lattice_line(lattice_coord(b.position.y(), source.y(), lattice.spacing))) {
      throw DegeneratePositionError("puncture b" + std::to_string(b.label) +
                                    " lies on a lattice line; place it inside a cell");
    }
  }
  for (const auto& blk : excised_blocks(*this)) {
    if (blk.contains(0, 0)) throw std::invalid_argument("walk source lies in an excised cell");
  }
}

std::map<Word, Complex> ClassAmplitudeTable::amplitudes() const {
  std::map<Word, Complex> out;
  for (const auto& [w, c] : counts) {
    out.emplace(w, Complex(static_cast<double>(c) / static_cast<double>(total), 0.0));
  }
  return out;
}

double ClassAmplitudeTable::mass() const {
  std::uint64_t in_cap = 0;
  for (const auto& [w, c] : counts) in_cap += c;
  return total ? static_cast<double>(in_cap) / static_cast<double>(total) : 0.0;
}

double ClassAmplitudeTable::overflow_mass() const {
  return total ? static_cast<double>(overflow) / static_cast<double>(total) : 0.0;
}

long max_winding(int steps) { return steps < 1 ? 0 : 1 + (steps - 1) / 4; }

PlanePath closed_walk(const WalkEnsemble& ensemble, const std::vector<Point>& walk) {
  const Point& end = walk.back();
  double top = std::max(ensemble.source.y(), end.y());
  for (const auto& b : ensemble.scenario.punctures) top = std::max(top, b.position.y());
  top += ensemble.lattice.spacing;
  std::vector<Point> v = walk;
  v.emplace_back(end.x(), top);
  v.emplace_back(ensemble.source.x(), top);
  v.push_back(ensemble.source);
  return {std::move(v), true};
}

std::vector<ClassAmplitudeTable> sample_class_amplitudes(const WalkEnsemble& ensemble,
                                                         const std::vector<Point>& detectors,
                                                         int threads) {
  ensemble.validate();
  std::map<LatticeKey, std::vector<std::size_t>> index;
  for (std::size_t d = 0; d < detectors.size(); ++d) {
    index[detector_key(ensemble, detectors[d])].push_back(d);
  }
  const auto blocks = excised_blocks(ensemble);
  const auto shards = static_cast<std::uint64_t>(ensemble.shards);
  std::vector<ShardTables> per_shard(shards);

  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t s = first; s < shards; s += stride) {
      const std::uint64_t walks = ensemble.samples / shards + (s < ensemble.samples % shards ? 1 : 0);
      per_shard[s] = run_shard(ensemble, s, walks, index, detectors.size(), blocks);
    }
  };
  const auto workers = static_cast<std::uint64_t>(std::clamp<std::uint64_t>(
      static_cast<std::uint64_t>(std::max(threads, 1)), 1, shards));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
    for (auto& th : pool) th.join();
  }

  std::vector<ClassAmplitudeTable> merged(detectors.size());
  for (auto& t : merged) {
    t.rank = ensemble.scenario.rank;
    t.total = ensemble.samples;
  }
  for (const auto& shard : per_shard) {
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      merged[d].accepted += shard[d].accepted;
      merged[d].overflow += shard[d].overflow;
      for (const auto& [w, c] : shard[d].counts) merged[d].counts[w] += c;
    }
  }
  return merged;
}

ClassAmplitudeTable sample_class_amplitudes(const WalkEnsemble& ensemble, const Point& detector,
                                            int threads) {
  auto tables = sample_class_amplitudes(ensemble, std::vector<Point>{detector}, threads);
  if (tables.front().accepted == 0) {
    throw InsufficientSamplesError("no walk of " + std::to_string(ensemble.samples) +
                                   " reached the detector");
  }
  return std::move(tables.front());
}

ComplexMatrix assemble_propagator(const ClassAmplitudeTable& table, const HolonomyMap& phi) {
  if (table.rank != phi.rank()) {
    throw RankError("class table rank " + std::to_string(table.rank) + " vs holonomy rank " +
                    std::to_string(phi.rank()));
  }
  const int d = dimension(phi.tag());
  ComplexMatrix k = ComplexMatrix::Zero(d, d);
  if (table.total == 0) return k;
  // Integer counts first, one division at the end: with trivial phi the sum
  // is exact and does not depend on how the walks split into classes.
  for (const auto& [w, n] : table.counts) k += static_cast<double>(n) * holonomy_of_word(phi, w).matrix();
  return k / static_cast<double>(table.total);
}

std::vector<double> intensities(const std::vector<ClassAmplitudeTable>& tables,
                                const HolonomyMap& phi) {
  std::vector<double> out;
  out.reserve(tables.size());
  for (const auto& t : tables) out.push_back(assemble_propagator(t, phi).squaredNorm());
  return out;
}

InterferenceScan interference_scan(const WalkEnsemble& ensemble, const std::vector<Point>& screen,
                                   const HolonomyMap& phi, int threads) {
  InterferenceScan scan;
  scan.tables = sample_class_amplitudes(ensemble, screen, threads);
  std::uint64_t reached = 0;
  for (const auto& t : scan.tables) reached += t.accepted;
  if (reached == 0) {
    throw InsufficientSamplesError("no walk of " + std::to_string(ensemble.samples) +
                                   " reached the screen");
  }
  scan.intensity = intensities(scan.tables, phi);
  return scan;
}

double fringe_shift(const std::vector<double>& shifted, const std::vector<double>& reference,
                    const std::vector<Point>& screen) {
  const std::size_t n = screen.size();
  if (shifted.size() != n || reference.size() != n) {
    throw std::invalid_argument("fringe_shift: patterns and screen differ in length");
  }
  if (n < 3) throw std::invalid_argument("fringe_shift needs at least 3 screen points");
  const double pixel = (screen[1] - screen[0]).norm();

  auto centered = [&](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(n);
    std::vector<double> out(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v[i] - mean;
      var += out[i] * out[i];
    }
    var /= static_cast<double>(n);
    if (var <= 1e-300 || var <= 1e-12 * mean * mean) {
      throw FlatPatternError("pattern variance too small to locate fringes");
    }
    return out;
  };
  const auto a = centered(shifted);
  const auto b = centered(reference);

  const long reach = static_cast<long>(n - 1) / 2;
  auto corr = [&](long s) {
    double sum = 0.0;
    for (long x = 0; x < static_cast<long>(n); ++x) {
      const long y = x - s;
      if (y >= 0 && y < static_cast<long>(n)) sum += a[static_cast<std::size_t>(x)] * b[static_cast<std::size_t>(y)];
    }
    return sum;
  };
  long best = 0;
  double best_value = corr(0);
  for (long s = 1; s <= reach; ++s) {
    for (long cand : {s, -s}) {
      const double c = corr(cand);
      if (c > best_value) {
        best_value = c;
        best = cand;
      }
    }
  }
  double frac = 0.0;
  if (std::abs(best) < reach) {
    const double lo = corr(best - 1);
    const double hi = corr(best + 1);
    const double curvature = lo - 2.0 * best_value + hi;
    if (curvature < 0.0) frac = 0.5 * (lo - hi) / curvature;
  }
  return (static_cast<double>(best) + frac) * pixel;
}

std::vector<Point> screen_line(const Point& from, const Point& to, int count) {
  if (count < 2) throw std::invalid_argument("screen needs at least 2 points");
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // Scale before dividing so grid-aligned endpoints give exact points.
    out.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

}  // namespace abgeom
