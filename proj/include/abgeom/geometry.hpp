#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "abgeom/freegroup.hpp"

namespace abgeom {

using Point = Eigen::Vector2d;

inline constexpr double kGenericTol = 1e-9;

struct Puncture {
  Point position;
  int label = 1;  // 1-based; generator c_label winds once CCW around it
};

struct PlanePath {
  std::vector<Point> vertices;
  bool closed = false;

  // Marks the path closed; appends the first vertex if the ends differ.
  static PlanePath loop(std::vector<Point> vertices);
  static PlanePath open(std::vector<Point> vertices);

  PlanePath reversed() const;
  // Concatenation of two paths sharing the junction vertex.
  PlanePath then(const PlanePath& next) const;
  // Splits every segment into `pieces` equal parts.
  PlanePath refined(int pieces) const;
  double length() const;
};

class OpenPathError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegeneratePositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PathTooCoarseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PunctureLayoutError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GenericityViolation {
  enum class Kind { VertexOnRay, SegmentNearPuncture };
  Kind kind;
  std::size_t index;  // vertex index, or segment start index
  int puncture;       // label
  double gap;         // distance that fell below tolerance

  std::string describe() const;
};

struct GenericityReport {
  std::vector<GenericityViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Every vertex lying on a downward cut ray and every segment passing within
// `tol` of a puncture.
GenericityReport check_generic(const PlanePath& path, const std::vector<Puncture>& punctures,
                               double tol = kGenericTol);

// Homotopy class of a closed path: crossings of the downward ray below each
// puncture, in path order (left-to-right crossing = c_k, right-to-left =
// c_k^-1), then freely reduced.
Word word_of_loop(const PlanePath& path, const std::vector<Puncture>& punctures, int rank);

// Unreduced crossing letters, in path order; works on open paths too.
std::vector<Letter> crossing_letters(const PlanePath& path,
                                     const std::vector<Puncture>& punctures);

// Total signed turning angle about each puncture divided by 2 pi, rounded.
std::vector<long> winding_numbers(const PlanePath& path, const std::vector<Puncture>& punctures);

// Requires labels 1..n, pairwise distinct x-coordinates (gap > tol).
void validate_punctures(const std::vector<Puncture>& punctures, double tol = kGenericTol);

// Nudges punctures horizontally until x-coordinates are pairwise separated by
// at least `min_gap`; deterministic, order-preserving on x.
std::vector<Puncture> jitter_punctures(std::vector<Puncture> punctures, double min_gap = 1e-6);

// Regular CCW polygon approximating a circle; `start_angle` picks the first
// vertex. `turns` may be negative (CW) or > 1.
PlanePath circle_path(const Point& center, double radius, int sides, double start_angle = 0.1,
                      int turns = 1);

}  // namespace abgeom
