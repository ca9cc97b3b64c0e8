#include "abgeom/covering.hpp"

#include <algorithm>
#include <limits>

namespace abgeom {

namespace {

void check_rank(int a, int b) {
  if (a != b) {
    throw RankError("rank mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::vector<TreeVertex> TreeVertex::neighbours() const {
  std::vector<TreeVertex> out;
  out.reserve(static_cast<std::size_t>(2 * rank()));
  for (int k = 1; k <= rank(); ++k) {
    for (int s : {1, -1}) out.push_back(TreeEdge{*this, Letter{k, s}}.to());
  }
  return out;
}

TreeVertex TreeEdge::to() const {
  const Letter l[] = {letter};
  return TreeVertex(concat(from.word(), Word(from.rank(), l)));
}

TreeVertex lift_loop(const Word& w, const TreeVertex& start) {
  check_rank(w.rank(), start.rank());
  return TreeVertex(concat(start.word(), w));
}

std::vector<TreeVertex> lift_trace(const Word& w, const TreeVertex& start) {
  check_rank(w.rank(), start.rank());
  std::vector<TreeVertex> trace{start};
  trace.reserve(w.size() + 1);
  for (const auto& l : w.letters()) trace.push_back(TreeEdge{trace.back(), l}.to());
  return trace;
}

TreeVertex deck_transform(const Word& g, const TreeVertex& v) {
  check_rank(g.rank(), v.rank());
  return TreeVertex(concat(g, v.word()));
}

std::size_t fiber_ball_count(int rank, int radius) {
  if (rank < 1) throw RankError("rank must be at least 1");
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  // Saturates at SIZE_MAX.
  constexpr auto kMax = static_cast<unsigned __int128>(std::numeric_limits<std::size_t>::max());
  const unsigned __int128 degree = 2 * static_cast<unsigned>(rank);
  unsigned __int128 total = 1;
  unsigned __int128 shell = degree;
  for (int i = 1; i <= radius && total < kMax; ++i) {
    total += shell;
    shell = std::min(shell * (degree - 1), kMax);
  }
  return static_cast<std::size_t>(std::min(total, kMax));
}

std::vector<TreeVertex> fiber_ball(int rank, int radius, std::size_t cap) {
  const std::size_t count = fiber_ball_count(rank, radius);
  if (count > cap) {
    throw ResourceCapError("fiber ball of radius " + std::to_string(radius) + " has " +
                           std::to_string(count) + " vertices, cap is " + std::to_string(cap));
  }
  // Breadth-first by depth; extending each shell in letter order keeps
  // shortlex order because every reduced word has a unique parent.
  std::vector<TreeVertex> ball{TreeVertex::root(rank)};
  ball.reserve(count);
  std::size_t shell_begin = 0;
  for (int depth = 1; depth <= radius; ++depth) {
    const std::size_t shell_end = ball.size();
    for (std::size_t i = shell_begin; i < shell_end; ++i) {
      const Word& w = ball[i].word();
      for (int k = 1; k <= rank; ++k) {
        for (int s : {1, -1}) {
          const Letter l{k, s};
          if (!w.empty() && w.letters().back().cancels(l)) continue;
          std::vector<Letter> next = w.letters();
          next.push_back(l);
          ball.emplace_back(Word(rank, next));
        }
      }
    }
    shell_begin = shell_end;
  }
  return ball;
}

GroupElement monodromy_holonomy(const HolonomyMap& phi, const TreeVertex& end) {
  check_rank(phi.rank(), end.rank());
  return holonomy_of_word(phi, end.word());
}

EquivarianceDefect canonical_map_equivariance(const HolonomyMap& phi, const Word& g,
                                              const TreeVertex& y) {
  check_rank(phi.rank(), y.rank());
  (void)deck_transform(g, y);  // g . y lies over the same base point as y
  const GroupElement lhs = identity(phi.tag());
  const GroupElement rhs = holonomy_of_word(phi, g);
  return {lhs, rhs, distance(lhs, rhs)};
}

}  // namespace abgeom
