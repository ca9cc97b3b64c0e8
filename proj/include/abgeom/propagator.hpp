#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "abgeom/holonomy.hpp"

namespace abgeom {

struct LatticeSpec {
  double spacing = 1.0;
  // Cells around each puncture that walks may not enter: -1 disables
  // excision, 0 blocks the puncture's own cell, 1 adds a one-cell margin.
  int excision_margin = -1;
};

// Lattice random walks of fixed length from `source`. Walks are split into
// `shards` fixed sub-streams seeded from `seed`, so the tallies do not depend
// on how many threads process them.
struct WalkEnsemble {
  FluxScenario scenario;
  Point source = Point::Zero();
  int steps = 1;                 // T
  std::uint64_t samples = 1000;  // total walks
  std::uint64_t seed = 1;
  int word_cap = 8;
  int shards = 64;
  LatticeSpec lattice;

  void validate() const;
};

class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FlatPatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Homotopy-class tallies of the walks that reached one detector. Amplitudes
// are count / total walks: uniform, phase-free weight per walk.
struct ClassAmplitudeTable {
  int rank = 1;
  std::map<Word, std::uint64_t> counts;
  std::uint64_t overflow = 0;  // walks whose class word is longer than word_cap
  std::uint64_t accepted = 0;  // walks reaching the detector (including overflow)
  std::uint64_t total = 0;     // walks sampled

  std::map<Word, Complex> amplitudes() const;
  double mass() const;           // sum of in-cap amplitudes
  double overflow_mass() const;  // overflow / total
};

// A-priori bound on |abelianize(w)_k| for walks of T steps: the first
// crossing of a cut ray costs one step and every further same-sense crossing
// needs at least four more to get back around the puncture.
long max_winding(int steps);

// Walk from the source, then the fixed return path: straight up to a height
// above every puncture, across, and down to the source. The return leg
// crosses no cut ray.
PlanePath closed_walk(const WalkEnsemble& ensemble, const std::vector<Point>& walk);

std::vector<ClassAmplitudeTable> sample_class_amplitudes(const WalkEnsemble& ensemble,
                                                         const std::vector<Point>& detectors,
                                                         int threads = 1);
// Throws InsufficientSamplesError when no walk reaches the detector.
ClassAmplitudeTable sample_class_amplitudes(const WalkEnsemble& ensemble, const Point& detector,
                                            int threads = 1);

// K = sum over classes of amplitude(class) * phi(class).
ComplexMatrix assemble_propagator(const ClassAmplitudeTable& table, const HolonomyMap& phi);

struct InterferenceScan {
  std::vector<ClassAmplitudeTable> tables;
  std::vector<double> intensity;  // ||K||_F^2 per screen point
};

// Throws InsufficientSamplesError when no walk reaches any screen point.
InterferenceScan interference_scan(const WalkEnsemble& ensemble, const std::vector<Point>& screen,
                                   const HolonomyMap& phi, int threads = 1);
std::vector<double> intensities(const std::vector<ClassAmplitudeTable>& tables,
                                const HolonomyMap& phi);

// Offset s maximizing the cross-correlation sum_x a(x) b(x - s), refined by a
// parabola through the peak and its neighbours and scaled to screen units.
// Positive when `shifted` is `reference` moved towards later screen points.
double fringe_shift(const std::vector<double>& shifted, const std::vector<double>& reference,
                    const std::vector<Point>& screen);

// Points from `from` to `to` (inclusive), `count` of them, equally spaced.
std::vector<Point> screen_line(const Point& from, const Point& to, int count);

}  // namespace abgeom
