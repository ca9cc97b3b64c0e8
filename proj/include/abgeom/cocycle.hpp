#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "abgeom/freegroup.hpp"
#include "abgeom/liegroups.hpp"

namespace abgeom {

// One of the 2n open sets U_{k+}, U_{k-} covering the wedge of n circles.
struct SetIndex {
  int k = 1;
  int sign = 1;

  // Dense position 2(k-1) + (sign < 0).
  int ordinal() const { return 2 * (k - 1) + (sign < 0 ? 1 : 0); }
  static SetIndex from_ordinal(int i) { return {i / 2 + 1, i % 2 == 0 ? 1 : -1}; }
  std::string name() const { return std::to_string(k) + (sign > 0 ? "+" : "-"); }
  static SetIndex parse(const std::string& name);

  friend bool operator==(const SetIndex&, const SetIndex&) = default;
};

// Combinatorial model of the cover: U_{k+} and U_{k-} meet in two
// contractible pieces around x0 and a_k; sets on different circles meet only
// around x0.
class WedgeCover {
 public:
  explicit WedgeCover(int rank);

  int rank() const { return rank_; }
  int set_count() const { return 2 * rank_; }
  std::vector<SetIndex> sets() const;

  enum class Point { X0, A };  // A means a_k of the shared circle
  std::vector<Point> overlap(const SetIndex& beta, const SetIndex& alpha) const;

 private:
  int rank_;
};

// Number of transition functions over the cover, 2 C(2n,2) + 2n (= 4n^2),
// counting identity self-overlaps and both orders of each pair.
std::int64_t count_transition_functions(int n);
// C(2n, 3): one relation per unordered triple of sets, all meeting at x0.
std::int64_t count_cocycle_relations(int n);

// G-valued transition data g_{beta,alpha} up to homotopy: one value at x0 for
// every ordered pair of sets (identity on the diagonal), plus the value at
// a_k of g_{k+,k-} and g_{k-,k+}.
class Cocycle {
 public:
  Cocycle(GroupTag group, int rank);  // all-identity cocycle

  GroupTag group() const { return group_; }
  int rank() const { return rank_; }
  int set_count() const { return 2 * rank_; }

  const GroupElement& at_x0(const SetIndex& beta, const SetIndex& alpha) const;
  void set_at_x0(const SetIndex& beta, const SetIndex& alpha, GroupElement g);
  // g_{beta,alpha}(a_k) for {beta, alpha} = {k+, k-}.
  const GroupElement& at_a(const SetIndex& beta, const SetIndex& alpha) const;
  void set_at_a(const SetIndex& beta, const SetIndex& alpha, GroupElement g);

  // g_{0k} and g_k in the proof's naming.
  const GroupElement& g0(int k) const { return at_x0({k, 1}, {k, -1}); }
  const GroupElement& ga(int k) const { return at_a({k, 1}, {k, -1}); }

  // Writes g at (beta, alpha) and its inverse at (alpha, beta).
  void set_pair_at_x0(const SetIndex& beta, const SetIndex& alpha, const GroupElement& g);
  void set_pair_at_a(int k, const GroupElement& g_plus_minus);

 private:
  std::size_t x0_slot(const SetIndex& beta, const SetIndex& alpha) const;
  std::size_t a_slot(const SetIndex& beta, const SetIndex& alpha) const;

  GroupTag group_;
  int rank_;
  std::vector<GroupElement> x0_;  // (2n)^2, row = beta
  std::vector<GroupElement> a_;   // 2n: [2(k-1)] = g_{k+,k-}(a_k), [2(k-1)+1] = g_{k-,k+}(a_k)
};

inline constexpr double kValidationTol = 1e-10;
inline constexpr double kConstructionTol = 1e-9;

struct CocycleViolation {
  enum class Kind { Membership, Diagonal, Antisymmetry, Triple };
  Kind kind;
  std::vector<SetIndex> sets;  // pair or triple involved
  bool at_a = false;           // antisymmetry violation at a_k rather than x0
  double residual;

  std::string describe() const;
};

struct CocycleReport {
  std::vector<CocycleViolation> violations;
  double max_residual = 0.0;
  std::int64_t relations_checked = 0;
  bool ok() const { return violations.empty(); }
};

// Checks membership, identity diagonal, antisymmetry at x0 and every a_k,
// and g_{b,a} g_{a,c} = g_{b,c} for one ordering of each unordered triple.
CocycleReport validate_cocycle(const Cocycle& c, double tol = kValidationTol);

// Free data: g_{1+,1-}(x0), g_{1+,j+/-}(x0) for j >= 2, and g_{k+,k-}(a_k) for
// every k. Everything else at x0 is completed through the root set 1+.
Cocycle random_cocycle(int n, GroupTag group, std::uint64_t seed);

// g'_{beta,alpha}(p) = lambda_beta g_{beta,alpha}(p) lambda_alpha^-1 with
// constant lambda per set (indexed by SetIndex::ordinal()).
Cocycle apply_constant_lambda(const Cocycle& c, const std::vector<GroupElement>& lambda);

// Sampled maps Lambda_alpha : [0,1] -> G, one per set. Sample 0 and S-1 both
// sit over x0; sample (S-1)/2 sits over a_k.
struct Trivialization {
  GroupTag group = GroupTag::U1;
  int rank = 0;
  int samples = 0;
  std::vector<std::vector<GroupElement>> maps;  // [set ordinal][sample]

  int x0_index_begin() const { return 0; }
  int x0_index_end() const { return samples - 1; }
  int a_index() const { return (samples - 1) / 2; }
  double step_bound() const { return 10.0 / samples; }
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrivializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Spanning-tree gauge at x0 (Lambda_{1+}(x0) = identity), a_k anchors split
// between U_{k+} and U_{k-} (halfway for unitary groups, balanced by arc length
// for SL2C), and equal-arc-length geodesic interpolation in between.
// `samples_per_set` must be odd and >= 3.
Trivialization trivialize(const Cocycle& c, int samples_per_set);

struct TrivializationReport {
  double max_coboundary_residual = 0.0;
  std::string worst_coboundary;  // "beta,alpha@point"
  double max_step = 0.0;
  double step_bound = 0.0;
  std::string worst_step;  // "set[index]"
  double max_membership_violation = 0.0;
  bool coboundary_ok = false;
  bool continuity_ok = false;
  bool passed = false;
};

// Independent re-check of Lambda_beta(p) Lambda_alpha(p)^-1 = g_{beta,alpha}(p)
// at every overlap point and of the sampled step bound.
TrivializationReport verify_trivialization(const Cocycle& c, const Trivialization& t,
                                           double tol = kConstructionTol);

}  // namespace abgeom
