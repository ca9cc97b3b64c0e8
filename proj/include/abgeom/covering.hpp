#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "abgeom/freegroup.hpp"
#include "abgeom/holonomy.hpp"

namespace abgeom {

// Vertex of the Cayley tree of F_n, i.e. a point of the universal cover of
// the wedge of n circles lying over x0. The root (identity word) is the
// fixed fiber basepoint y0.
class TreeVertex {
 public:
  explicit TreeVertex(Word word) : word_(std::move(word)) {}
  static TreeVertex root(int rank) { return TreeVertex(Word(rank)); }

  const Word& word() const { return word_; }
  int rank() const { return word_.rank(); }
  // Distance from the root.
  std::size_t depth() const { return word_.size(); }

  // The 2n neighbours, ordered c1, c1^-1, c2, ...
  std::vector<TreeVertex> neighbours() const;

  friend bool operator==(const TreeVertex&, const TreeVertex&) = default;
  friend auto operator<=>(const TreeVertex& a, const TreeVertex& b) { return a.word_ <=> b.word_; }

 private:
  Word word_;
};

struct TreeEdge {
  TreeVertex from;
  Letter letter;

  TreeVertex to() const;
};

class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultFiberCap = 1'000'000;

// End vertex of the lift of w starting at `start`: start.word * w.
TreeVertex lift_loop(const Word& w, const TreeVertex& start);

// Every vertex visited while lifting w letter by letter, including both ends.
std::vector<TreeVertex> lift_trace(const Word& w, const TreeVertex& start);

// Left action of pi_1 on the fiber: g . v = g * v.word.
TreeVertex deck_transform(const Word& g, const TreeVertex& v);

// Closed-form size of the radius-r ball: 1 + sum_{i=1..r} 2n (2n-1)^(i-1).
std::size_t fiber_ball_count(int rank, int radius);

// All vertices within `radius` of the root, in shortlex order. Throws
// ResourceCapError when the count would exceed `cap`.
std::vector<TreeVertex> fiber_ball(int rank, int radius, std::size_t cap = kDefaultFiberCap);

// phi(Psi(y)) for the fiber point y = end.
GroupElement monodromy_holonomy(const HolonomyMap& phi, const TreeVertex& end);

// The canonical map f(y) = (pi(y), 1) into M x G, paired with phi on the
// structure groups, would be a principal bundle morphism only if
// f(g . y) = f(y) . phi(g) for all g, y. Both sides lie over the same base
// point, so the check reduces to comparing their G components: identity on
// the left, phi(g) on the right.
struct EquivarianceDefect {
  GroupElement lhs_fiber;  // G component of f(g . y)
  GroupElement rhs_fiber;  // G component of f(y) . phi(g)
  double defect;           // distance between the two
};
EquivarianceDefect canonical_map_equivariance(const HolonomyMap& phi, const Word& g,
                                              const TreeVertex& y);

}  // namespace abgeom
