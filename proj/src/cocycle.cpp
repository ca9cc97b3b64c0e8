#include "abgeom/cocycle.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace abgeom {

namespace {

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void require_rank(int n) {
  if (n < 1) throw std::invalid_argument("cover rank must be at least 1, got " + std::to_string(n));
}

ComplexMatrix inv(const GroupElement& g) { return inverse(g).matrix(); }

double residual(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).norm(); }

}  // namespace

SetIndex SetIndex::parse(const std::string& name) {
  if (name.size() < 2 || (name.back() != '+' && name.back() != '-')) {
    throw std::invalid_argument("bad set name '" + name + "'");
  }
  return {std::stoi(name.substr(0, name.size() - 1)), name.back() == '+' ? 1 : -1};
}

WedgeCover::WedgeCover(int rank) : rank_(rank) { require_rank(rank); }

std::vector<SetIndex> WedgeCover::sets() const {
  std::vector<SetIndex> out;
  for (int i = 0; i < set_count(); ++i) out.push_back(SetIndex::from_ordinal(i));
  return out;
}

std::vector<WedgeCover::Point> WedgeCover::overlap(const SetIndex& beta,
                                                   const SetIndex& alpha) const {
  if (beta.k == alpha.k && beta.sign != alpha.sign) return {Point::X0, Point::A};
  return {Point::X0};
}

std::int64_t count_transition_functions(int n) {
  require_rank(n);
  return 2 * binomial(2 * n, 2) + 2 * n;
}

std::int64_t count_cocycle_relations(int n) {
  require_rank(n);
  return binomial(2 * n, 3);
}

Cocycle::Cocycle(GroupTag group, int rank)
    : group_(group),
      rank_(rank),
      x0_(static_cast<std::size_t>(4 * rank * rank), identity(group)),
      a_(static_cast<std::size_t>(2 * rank), identity(group)) {
  require_rank(rank);
}

std::size_t Cocycle::x0_slot(const SetIndex& beta, const SetIndex& alpha) const {
  const int b = beta.ordinal();
  const int a = alpha.ordinal();
  if (beta.k < 1 || beta.k > rank_ || alpha.k < 1 || alpha.k > rank_) {
    throw RankError("set index out of range for rank " + std::to_string(rank_));
  }
  return static_cast<std::size_t>(b * set_count() + a);
}

std::size_t Cocycle::a_slot(const SetIndex& beta, const SetIndex& alpha) const {
  if (beta.k != alpha.k || beta.sign == alpha.sign || beta.k < 1 || beta.k > rank_) {
    throw std::invalid_argument("sets " + beta.name() + " and " + alpha.name() +
                                " do not meet at an a_k");
  }
  return static_cast<std::size_t>(2 * (beta.k - 1) + (beta.sign > 0 ? 0 : 1));
}

const GroupElement& Cocycle::at_x0(const SetIndex& beta, const SetIndex& alpha) const {
  return x0_[x0_slot(beta, alpha)];
}

void Cocycle::set_at_x0(const SetIndex& beta, const SetIndex& alpha, GroupElement g) {
  if (g.tag() != group_) throw TagMismatchError("cocycle value tag mismatch");
  x0_[x0_slot(beta, alpha)] = std::move(g);
}

const GroupElement& Cocycle::at_a(const SetIndex& beta, const SetIndex& alpha) const {
  return a_[a_slot(beta, alpha)];
}

void Cocycle::set_at_a(const SetIndex& beta, const SetIndex& alpha, GroupElement g) {
  if (g.tag() != group_) throw TagMismatchError("cocycle value tag mismatch");
  a_[a_slot(beta, alpha)] = std::move(g);
}

void Cocycle::set_pair_at_x0(const SetIndex& beta, const SetIndex& alpha, const GroupElement& g) {
  set_at_x0(beta, alpha, g);
  set_at_x0(alpha, beta, inverse(g));
}

void Cocycle::set_pair_at_a(int k, const GroupElement& g_plus_minus) {
  set_at_a({k, 1}, {k, -1}, g_plus_minus);
  set_at_a({k, -1}, {k, 1}, inverse(g_plus_minus));
}

std::string CocycleViolation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Membership: os << "membership"; break;
    case Kind::Diagonal: os << "diagonal"; break;
    case Kind::Antisymmetry: os << "antisymmetry"; break;
    case Kind::Triple: os << "triple"; break;
  }
  os << " (";
  for (std::size_t i = 0; i < sets.size(); ++i) os << (i ? "," : "") << sets[i].name();
  os << (at_a ? ")@a" : ")@x0") << " residual " << residual;
  return os.str();
}

CocycleReport validate_cocycle(const Cocycle& c, double tol) {
  CocycleReport report;
  const int m = c.set_count();
  auto note = [&](CocycleViolation v) {
    report.max_residual = std::max(report.max_residual, v.residual);
    if (!(v.residual <= tol)) report.violations.push_back(std::move(v));
  };
  const int d = dimension(c.group());
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);

  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      const SetIndex sb = SetIndex::from_ordinal(b);
      const SetIndex sa = SetIndex::from_ordinal(a);
      const GroupElement& g = c.at_x0(sb, sa);
      note({CocycleViolation::Kind::Membership, {sb, sa}, false,
            membership_violation(c.group(), g.matrix())});
      if (a == b) {
        note({CocycleViolation::Kind::Diagonal, {sb}, false, residual(g.matrix(), id)});
      } else if (a > b) {
        note({CocycleViolation::Kind::Antisymmetry, {sb, sa}, false,
              residual(g.matrix() * c.at_x0(sa, sb).matrix(), id)});
      }
    }
  }
  for (int k = 1; k <= c.rank(); ++k) {
    const SetIndex p{k, 1};
    const SetIndex q{k, -1};
    for (const auto& g : {c.at_a(p, q), c.at_a(q, p)}) {
      note({CocycleViolation::Kind::Membership, {p, q}, true,
            membership_violation(c.group(), g.matrix())});
    }
    note({CocycleViolation::Kind::Antisymmetry, {p, q}, true,
          residual(c.at_a(p, q).matrix() * c.at_a(q, p).matrix(), id)});
  }
  for (int b = 0; b < m; ++b) {
    for (int a = b + 1; a < m; ++a) {
      for (int g = a + 1; g < m; ++g) {
        const SetIndex sb = SetIndex::from_ordinal(b);
        const SetIndex sa = SetIndex::from_ordinal(a);
        const SetIndex sg = SetIndex::from_ordinal(g);
        const ComplexMatrix lhs = c.at_x0(sb, sa).matrix() * c.at_x0(sa, sg).matrix();
        note({CocycleViolation::Kind::Triple, {sb, sa, sg}, false,
              residual(lhs, c.at_x0(sb, sg).matrix())});
        ++report.relations_checked;
      }
    }
  }
  return report;
}

Cocycle random_cocycle(int n, GroupTag group, std::uint64_t seed) {
  require_rank(n);
  Rng rng(derive_seed(seed, 0));
  Cocycle c(group, n);
  const int m = 2 * n;

  // trunk[alpha] = g_{alpha,1+}(x0)
  std::vector<GroupElement> trunk(static_cast<std::size_t>(m), identity(group));
  const GroupElement g01 = random_element(group, rng);
  trunk[1] = inverse(g01);
  for (int j = 2; j <= n; ++j) {
    for (int s : {1, -1}) {
      const GroupElement g1j = random_element(group, rng);  // g_{1+, j s}
      trunk[static_cast<std::size_t>(SetIndex{j, s}.ordinal())] = inverse(g1j);
    }
  }
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      if (a == b) continue;
      c.set_at_x0(SetIndex::from_ordinal(b), SetIndex::from_ordinal(a),
                  GroupElement::trusted(group, trunk[b].matrix() * inverse(trunk[a]).matrix()));
    }
  }
  // Free data keeps its exact drawn value.
  c.set_pair_at_x0({1, 1}, {1, -1}, g01);
  for (int k = 1; k <= n; ++k) c.set_pair_at_a(k, random_element(group, rng));
  return c;
}

Cocycle apply_constant_lambda(const Cocycle& c, const std::vector<GroupElement>& lambda) {
  if (static_cast<int>(lambda.size()) != c.set_count()) {
    throw std::invalid_argument("need one lambda per set (" + std::to_string(c.set_count()) + ")");
  }
  for (const auto& l : lambda) {
    if (l.tag() != c.group()) throw TagMismatchError("lambda tag mismatch");
  }
  Cocycle out(c.group(), c.rank());
  const int m = c.set_count();
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      const SetIndex sb = SetIndex::from_ordinal(b);
      const SetIndex sa = SetIndex::from_ordinal(a);
      out.set_at_x0(sb, sa,
                    GroupElement::trusted(c.group(), lambda[b].matrix() * c.at_x0(sb, sa).matrix() *
                                                         inv(lambda[a])));
    }
  }
  for (int k = 1; k <= c.rank(); ++k) {
    for (int s : {1, -1}) {
      const SetIndex sb{k, s};
      const SetIndex sa{k, -s};
      out.set_at_a(sb, sa,
                   GroupElement::trusted(c.group(), lambda[sb.ordinal()].matrix() *
                                                        c.at_a(sb, sa).matrix() *
                                                        inv(lambda[sa.ordinal()])));
    }
  }
  return out;
}

constexpr int kArcOversample = 16;

double rough_arc(const GroupElement& a, const GroupElement& b) {
  double len = 0.0;
  GroupElement prev = a;
  for (int j = 1; j <= 8; ++j) {
    const GroupElement cur = j == 8 ? b : geodesic(a, b, j / 8.0);
    len += distance(prev, cur);
    prev = cur;
  }
  return len;
}

Trivialization trivialize(const Cocycle& c, int samples_per_set) {
  if (samples_per_set < 3 || samples_per_set % 2 == 0) {
    throw std::invalid_argument("samples_per_set must be odd and >= 3");
  }
  const auto report = validate_cocycle(c);
  if (!report.ok()) {
    throw ValidationError("cocycle invalid: " + report.violations.front().describe());
  }
  const GroupTag tag = c.group();
  const int m = c.set_count();
  const SetIndex root{1, 1};

  std::vector<GroupElement> at_x0;
  at_x0.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const SetIndex sa = SetIndex::from_ordinal(a);
    at_x0.push_back(a == 0 ? identity(tag) : c.at_x0(sa, root));
  }

  std::vector<GroupElement> at_a(static_cast<std::size_t>(m), identity(tag));
  for (int k = 1; k <= c.rank(); ++k) {
    const auto plus = static_cast<std::size_t>(SetIndex{k, 1}.ordinal());
    const auto minus = static_cast<std::size_t>(SetIndex{k, -1}.ordinal());
    // Lambda_{k+}(a) = Lambda_{k+}(x0) M, Lambda_{k-}(a) = g_k^-1 Lambda_{k+}(a),
    // with M halfway from the identity to D = Lambda_{k+}(x0)^-1 g_k Lambda_{k-}(x0).
    const GroupElement d = GroupElement::trusted(
        tag, inv(at_x0[plus]) * c.ga(k).matrix() * at_x0[minus].matrix());
    // Split D between the two sets. Unitary groups are balanced at 1/2; for
    // SL2C the matrix-norm arc lengths differ, so try a few splits.
    double best = std::numeric_limits<double>::infinity();
    for (const double t : {0.5, 0.35, 0.65, 0.2, 0.8}) {
      GroupElement part = identity(tag);
      try {
        part = path_to_identity(d, 1.0 - t);
      } catch (const BranchBoundaryError& e) {
        throw TrivializationError(std::string("a_") + std::to_string(k) + " anchor: " + e.what());
      }
      const GroupElement p_a = GroupElement::trusted(tag, at_x0[plus].matrix() * part.matrix());
      const GroupElement m_a = GroupElement::trusted(tag, inv(c.ga(k)) * p_a.matrix());
      const double cost = std::max(rough_arc(at_x0[plus], p_a), rough_arc(at_x0[minus], m_a));
      if (cost < best * (1.0 - 1e-9)) {
        best = cost;
        at_a[plus] = p_a;
      }
      if (tag != GroupTag::SL2C) break;
    }
    at_a[minus] = GroupElement::trusted(tag, inv(c.ga(k)) * at_a[plus].matrix());
  }

  Trivialization t;
  t.group = tag;
  t.rank = c.rank();
  t.samples = samples_per_set;
  t.maps.resize(static_cast<std::size_t>(m));
  const int mid = t.a_index();
  for (int a = 0; a < m; ++a) {
    const GroupElement& start = at_x0[static_cast<std::size_t>(a)];
    const GroupElement& turn = at_a[static_cast<std::size_t>(a)];
    std::vector<GroupElement> outward;
    outward.reserve(static_cast<std::size_t>(mid) + 1);
    try {
      // Resample at equal matrix-norm arc length; for SL2C the geodesic's
      // constant speed is in the wrong metric and the steps bunch up.
      const int fine = kArcOversample * mid;
      std::vector<double> arc{0.0};
      GroupElement prev = start;
      for (int j = 1; j <= fine; ++j) {
        const GroupElement cur =
            j == fine ? turn : geodesic(start, turn, static_cast<double>(j) / fine);
        arc.push_back(arc.back() + distance(prev, cur));
        prev = cur;
      }
      for (int i = 0; i <= mid; ++i) {
        if (i == 0) {
          outward.push_back(start);
        } else if (i == mid) {
          outward.push_back(turn);
        } else {
          const double target = arc.back() * i / mid;
          const auto it = std::lower_bound(arc.begin(), arc.end(), target);
          const auto j = static_cast<int>(it - arc.begin());
          const double seg = arc[j] - arc[j - 1];
          const double frac = seg > 0.0 ? (target - arc[j - 1]) / seg : 0.0;
          outward.push_back(geodesic(start, turn, (j - 1 + frac) / fine));
        }
      }
    } catch (const BranchBoundaryError& e) {
      throw TrivializationError("interpolation on U_" + SetIndex::from_ordinal(a).name() + ": " +
                                e.what());
    }
    auto& samples = t.maps[static_cast<std::size_t>(a)];
    samples = outward;
    for (int i = mid - 1; i >= 0; --i) samples.push_back(outward[static_cast<std::size_t>(i)]);
  }
  return t;
}

TrivializationReport verify_trivialization(const Cocycle& c, const Trivialization& t,
                                           double tol) {
  TrivializationReport r;
  r.step_bound = t.samples > 0 ? t.step_bound() : 0.0;
  const int m = c.set_count();
  const bool shapes_ok = t.group == c.group() && t.rank == c.rank() && t.samples >= 3 &&
                         t.samples % 2 == 1 && static_cast<int>(t.maps.size()) == m &&
                         std::all_of(t.maps.begin(), t.maps.end(), [&](const auto& v) {
                           return static_cast<int>(v.size()) == t.samples;
                         });
  if (!shapes_ok) {
    r.worst_coboundary = "shape mismatch";
    r.max_coboundary_residual = INFINITY;
    return r;
  }
  auto sample = [&](int set, int i) -> const GroupElement& {
    return t.maps[static_cast<std::size_t>(set)][static_cast<std::size_t>(i)];
  };

  auto record = [&](double res, const std::string& where) {
    if (!(res <= r.max_coboundary_residual)) {
      r.max_coboundary_residual = res;
      r.worst_coboundary = where;
    }
  };
  for (int b = 0; b < m; ++b) {
    for (int a = 0; a < m; ++a) {
      if (a == b) continue;
      const SetIndex sb = SetIndex::from_ordinal(b);
      const SetIndex sa = SetIndex::from_ordinal(a);
      for (int i : {t.x0_index_begin(), t.x0_index_end()}) {
        const ComplexMatrix lhs = sample(b, i).matrix() * inv(sample(a, i));
        record(residual(lhs, c.at_x0(sb, sa).matrix()), sb.name() + "," + sa.name() + "@x0");
      }
      if (sb.k == sa.k) {
        const int i = t.a_index();
        const ComplexMatrix lhs = sample(b, i).matrix() * inv(sample(a, i));
        record(residual(lhs, c.at_a(sb, sa).matrix()),
               sb.name() + "," + sa.name() + "@a" + std::to_string(sb.k));
      }
    }
  }

  for (int a = 0; a < m; ++a) {
    for (int i = 0; i < t.samples; ++i) {
      r.max_membership_violation =
          std::max(r.max_membership_violation, membership_violation(c.group(), sample(a, i).matrix()));
      if (i + 1 < t.samples) {
        const double step = distance(sample(a, i), sample(a, i + 1));
        if (!(step <= r.max_step)) {
          r.max_step = step;
          r.worst_step = SetIndex::from_ordinal(a).name() + "[" + std::to_string(i) + "]";
        }
      }
    }
  }
  r.coboundary_ok = r.max_coboundary_residual <= tol;
  r.continuity_ok = r.max_step <= r.step_bound;
  r.passed = r.coboundary_ok && r.continuity_ok && r.max_membership_violation <= kMembershipTol;
  return r;
}

}  // namespace abgeom
