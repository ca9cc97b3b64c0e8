#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "abgeom/freegroup.hpp"
#include "abgeom/geometry.hpp"
#include "abgeom/liegroups.hpp"

namespace abgeom {

// n thin flux lines through the plane: punctures b_k with algebra-valued
// fluxes F_k, observed from the basepoint x0.
struct FluxScenario {
  int rank = 0;
  std::vector<Puncture> punctures;
  Point basepoint = Point::Zero();
  GroupTag group = GroupTag::U1;
  std::vector<AlgebraElement> fluxes;

  // Punctures valid per validate_punctures, fluxes match group and rank,
  // basepoint off every cut ray.
  void validate() const;
  const Puncture& puncture(int label) const;
};

// phi : pi_1 -> G, fixed by phi(c_k) = exp(F_k).
class HolonomyMap {
 public:
  static HolonomyMap from_scenario(const FluxScenario& scenario);
  static HolonomyMap from_images(GroupTag tag, std::vector<GroupElement> images);

  GroupTag tag() const { return tag_; }
  int rank() const { return static_cast<int>(images_.size()); }
  const GroupElement& image(int k) const { return images_.at(static_cast<std::size_t>(k - 1)); }
  const std::vector<GroupElement>& images() const { return images_; }

  // Basepoint gauge change: every image replaced by h image h^-1.
  HolonomyMap conjugated(const GroupElement& h) const;

 private:
  HolonomyMap(GroupTag tag, std::vector<GroupElement> images);

  GroupTag tag_;
  std::vector<GroupElement> images_;
  std::vector<ComplexMatrix> inverses_;

  friend GroupElement holonomy_of_word(const HolonomyMap&, const Word&);
};

// Ordered product phi(l_1) phi(l_2) ... over the letters of w.
GroupElement holonomy_of_word(const HolonomyMap& phi, const Word& w);

class BasepointMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PunctureProximityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Classifies the loop (which must start within 1e-9 of x0) and applies phi.
GroupElement holonomy_of_loop(const FluxScenario& scenario, const PlanePath& path);
GroupElement holonomy_of_loop(const FluxScenario& scenario, const HolonomyMap& phi,
                              const PlanePath& path);

struct ConnectionValue {
  AlgebraElement ax;
  AlgebraElement ay;
};

// A(x) = sum_k (F_k / 2 pi) (-(y - y_k), x - x_k) / r_k^2, so that one CCW turn
// around b_k integrates to F_k.
ConnectionValue connection_at(const FluxScenario& scenario, const Point& x);

// Generic matrix-valued connection 1-form, (A_x, A_y) at a point.
using ConnectionField = std::function<std::array<ComplexMatrix, 2>(const Point&)>;
ConnectionField vortex_connection(const FluxScenario& scenario);

inline constexpr double kWilsonClearance = 1e-3;
inline constexpr int kReprojectEvery = 1024;

// Path-ordered product of exp(A(midpoint) . dl) over `steps` sub-segments
// (allocated to path segments in proportion to length, at least one each);
// later factors multiply on the left. Re-projected to the group every
// kReprojectEvery factors and at the end.
GroupElement wilson_line(const FluxScenario& scenario, const PlanePath& path, int steps);
GroupElement wilson_line(const ConnectionField& field, GroupTag tag, const PlanePath& path,
                         int steps);

// Doubles `steps` from `initial_steps` until successive results differ by at
// most `tol`; throws NonConvergenceError past `max_steps`.
struct RefinedWilson {
  GroupElement value;
  int steps;
  double last_change;
};
RefinedWilson wilson_line_refined(const FluxScenario& scenario, const PlanePath& path,
                                  int initial_steps, double tol, int max_steps);

struct GridSpec {
  Point origin = Point::Zero();  // lower-left corner of the scan
  double cell = 1e-2;            // plaquette side
  int nx = 1;
  int ny = 1;
  int substeps = 4;  // minimum Wilson sub-steps per plaquette side; more near punctures
};

struct CommutatorEntry {
  int j;
  int k;
  double norm;
};

struct FlatnessReport {
  double max_plaquette_deviation = 0.0;
  Point worst_plaquette_center = Point::Zero();
  int plaquettes_scanned = 0;
  int plaquettes_skipped = 0;  // contain or touch a puncture
  std::vector<CommutatorEntry> commutators;
  double max_commutator = 0.0;
  bool non_flat = false;  // some [F_j, F_k] exceeds 1e-12 with n >= 2
};

inline constexpr double kCommutatorTol = 1e-12;

// Scans every grid plaquette's 4-sided Wilson loop. Runs on `threads`
// workers; the report is independent of the thread count.
FlatnessReport verify_flatness(const FluxScenario& scenario, const GridSpec& grid,
                               int threads = 1);

}  // namespace abgeom
