#include "abgeom/liegroups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace abgeom {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

bool is_unitary_group(GroupTag tag) { return tag != GroupTag::SL2C; }

void check_tags(GroupTag a, GroupTag b) {
  if (a != b) {
    throw TagMismatchError("group tag mismatch: " + std::string(to_string(a)) + " vs " +
                           std::string(to_string(b)));
  }
}

void check_shape(GroupTag tag, const ComplexMatrix& m) {
  const int d = dimension(tag);
  if (m.rows() != d || m.cols() != d) {
    throw MembershipError(std::string(to_string(tag)) + " expects a " + std::to_string(d) +
                          "x" + std::to_string(d) + " matrix");
  }
}

ComplexMatrix pauli(int a) {
  ComplexMatrix s(2, 2);
  switch (a) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

ComplexMatrix gell_mann(int a) {
  ComplexMatrix l = ComplexMatrix::Zero(3, 3);
  switch (a) {
    case 1: l(0, 1) = 1; l(1, 0) = 1; break;
    case 2: l(0, 1) = -kI; l(1, 0) = kI; break;
    case 3: l(0, 0) = 1; l(1, 1) = -1; break;
    case 4: l(0, 2) = 1; l(2, 0) = 1; break;
    case 5: l(0, 2) = -kI; l(2, 0) = kI; break;
    case 6: l(1, 2) = 1; l(2, 1) = 1; break;
    case 7: l(1, 2) = -kI; l(2, 1) = kI; break;
    default:
      l(0, 0) = 1.0 / std::sqrt(3.0);
      l(1, 1) = 1.0 / std::sqrt(3.0);
      l(2, 2) = -2.0 / std::sqrt(3.0);
      break;
  }
  return l;
}

std::vector<ComplexMatrix> make_basis(GroupTag tag) {
  std::vector<ComplexMatrix> b;
  switch (tag) {
    case GroupTag::U1:
      b.push_back(ComplexMatrix::Constant(1, 1, kI));
      break;
    case GroupTag::SU2:
      for (int a = 1; a <= 3; ++a) b.push_back(0.5 * kI * pauli(a));
      break;
    case GroupTag::SU3:
      for (int a = 1; a <= 8; ++a) b.push_back(0.5 * kI * gell_mann(a));
      break;
    case GroupTag::SL2C:
      for (int a = 1; a <= 3; ++a) b.push_back(0.5 * kI * pauli(a));
      for (int a = 1; a <= 3; ++a) b.push_back(0.5 * pauli(a));
      break;
  }
  return b;
}

double one_norm(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// exp(i H) for Hermitian H.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const ComplexVector phases =
      es.eigenvalues().unaryExpr([](double d) { return std::exp(Complex(0.0, d)); });
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Principal-branch eigenphases and unitary eigenbasis of a (near) unitary
// matrix via complex Schur form; for normal matrices T is diagonal.
void unitary_phases(const ComplexMatrix& u, ComplexMatrix& q, Eigen::VectorXd& phases) {
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();
  phases.resize(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) phases(i) = std::arg(t(i, i));
}

ComplexMatrix sqrtm_denman_beavers(const ComplexMatrix& a) {
  const auto n = a.rows();
  ComplexMatrix y = a;
  ComplexMatrix z = ComplexMatrix::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    const ComplexMatrix y_next = 0.5 * (y + z.inverse());
    const ComplexMatrix z_next = 0.5 * (z + y.inverse());
    const double change = (y_next - y).norm();
    y = y_next;
    z = z_next;
    if (change <= 1e-15 * std::max(1.0, y.norm())) break;
  }
  return y;
}

}  // namespace

int dimension(GroupTag tag) {
  switch (tag) {
    case GroupTag::U1: return 1;
    case GroupTag::SU2: return 2;
    case GroupTag::SU3: return 3;
    case GroupTag::SL2C: return 2;
  }
  return 0;
}

int algebra_dimension(GroupTag tag) {
  switch (tag) {
    case GroupTag::U1: return 1;
    case GroupTag::SU2: return 3;
    case GroupTag::SU3: return 8;
    case GroupTag::SL2C: return 6;
  }
  return 0;
}

std::string_view to_string(GroupTag tag) {
  switch (tag) {
    case GroupTag::U1: return "U1";
    case GroupTag::SU2: return "SU2";
    case GroupTag::SU3: return "SU3";
    case GroupTag::SL2C: return "SL2C";
  }
  return "?";
}

GroupTag parse_group_tag(std::string_view name) {
  if (name == "U1") return GroupTag::U1;
  if (name == "SU2") return GroupTag::SU2;
  if (name == "SU3") return GroupTag::SU3;
  if (name == "SL2C") return GroupTag::SL2C;
  throw ConfigError("unsupported group '" + std::string(name) +
                    "' (path-connected groups only: U1, SU2, SU3, SL2C)");
}

double membership_violation(GroupTag tag, const ComplexMatrix& m) {
  const int d = dimension(tag);
  if (m.rows() != d || m.cols() != d) return INFINITY;
  if (!m.allFinite()) return INFINITY;
  switch (tag) {
    case GroupTag::U1:
      return std::abs(std::abs(m(0, 0)) - 1.0);
    case GroupTag::SU2:
    case GroupTag::SU3: {
      const double unit = (m.adjoint() * m - ComplexMatrix::Identity(d, d)).norm();
      return std::max(unit, std::abs(m.determinant() - 1.0));
    }
    case GroupTag::SL2C:
      return std::abs(m.determinant() - 1.0);
  }
  return INFINITY;
}

double algebra_violation(GroupTag tag, const ComplexMatrix& x) {
  const int d = dimension(tag);
  if (x.rows() != d || x.cols() != d) return INFINITY;
  if (!x.allFinite()) return INFINITY;
  const double scale = std::max(1.0, x.norm());
  switch (tag) {
    case GroupTag::U1:
      return std::abs(x(0, 0).real()) / scale;
    case GroupTag::SU2:
    case GroupTag::SU3:
      return std::max((x + x.adjoint()).norm(), std::abs(x.trace())) / scale;
    case GroupTag::SL2C:
      return std::abs(x.trace()) / scale;
  }
  return INFINITY;
}

GroupElement::GroupElement(GroupTag tag, ComplexMatrix m, double tol)
    : tag_(tag), m_(std::move(m)) {
  check_shape(tag_, m_);
  const double v = membership_violation(tag_, m_);
  if (!(v <= tol)) {
    throw MembershipError(std::string(to_string(tag_)) +
                          " membership violated by " + std::to_string(v));
  }
}

GroupElement GroupElement::identity(GroupTag tag) {
  const int d = dimension(tag);
  return trusted(tag, ComplexMatrix::Identity(d, d));
}

GroupElement GroupElement::trusted(GroupTag tag, ComplexMatrix m) {
  GroupElement g;
  g.tag_ = tag;
  g.m_ = std::move(m);
  return g;
}

AlgebraElement::AlgebraElement(GroupTag tag, ComplexMatrix x, double tol)
    : tag_(tag), x_(std::move(x)) {
  check_shape(tag_, x_);
  const double v = algebra_violation(tag_, x_);
  if (!(v <= tol)) {
    throw MembershipError(std::string(to_string(tag_)) +
                          " algebra membership violated by " + std::to_string(v));
  }
}

AlgebraElement AlgebraElement::zero(GroupTag tag) {
  const int d = dimension(tag);
  return trusted(tag, ComplexMatrix::Zero(d, d));
}

AlgebraElement AlgebraElement::trusted(GroupTag tag, ComplexMatrix x) {
  AlgebraElement a;
  a.tag_ = tag;
  a.x_ = std::move(x);
  return a;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  check_tags(tag_, o.tag_);
  return trusted(tag_, x_ + o.x_);
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  check_tags(tag_, o.tag_);
  return trusted(tag_, x_ - o.x_);
}

GroupElement identity(GroupTag tag) { return GroupElement::identity(tag); }

GroupElement multiply(const GroupElement& a, const GroupElement& b) {
  check_tags(a.tag(), b.tag());
  return GroupElement(a.tag(), a.matrix() * b.matrix());
}

GroupElement inverse(const GroupElement& a) {
  if (is_unitary_group(a.tag())) {
    return GroupElement::trusted(a.tag(), a.matrix().adjoint());
  }
  // det = 1 adjugate
  const auto& m = a.matrix();
  ComplexMatrix inv(2, 2);
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return GroupElement::trusted(a.tag(), inv / m.determinant());
}

GroupElement exp(const AlgebraElement& x) {
  const GroupTag tag = x.tag();
  switch (tag) {
    case GroupTag::U1:
      return GroupElement::trusted(tag, ComplexMatrix::Constant(1, 1, std::exp(Complex(0.0, x.matrix()(0, 0).imag()))));
    case GroupTag::SU2:
    case GroupTag::SU3: {
      // X = i H with H Hermitian; symmetrize against roundoff.
      const ComplexMatrix h = -kI * x.matrix();
      const ComplexMatrix herm = 0.5 * (h + h.adjoint());
      return GroupElement::trusted(tag, exp_i_hermitian(herm));
    }
    case GroupTag::SL2C: {
      ComplexMatrix e = expm_scaling_squaring(x.matrix());
      return GroupElement::trusted(tag, e / std::sqrt(e.determinant()));
    }
  }
  throw GroupError("unreachable");
}

AlgebraElement log(const GroupElement& g) {
  const GroupTag tag = g.tag();
  const int d = g.dim();
  if (tag == GroupTag::U1) {
    const double phase = std::arg(g.matrix()(0, 0));
    if (std::abs(phase) >= kPi - kBranchTol) {
      throw BranchBoundaryError("U1 log: phase on the branch cut at pi");
    }
    return AlgebraElement::trusted(tag, ComplexMatrix::Constant(1, 1, Complex(0.0, phase)));
  }
  if (tag == GroupTag::SL2C) {
    const Complex half_tr = 0.5 * g.matrix().trace();
    const Complex disc = std::sqrt(half_tr * half_tr - 1.0);
    for (const Complex lambda : {half_tr + disc, half_tr - disc}) {
      if (lambda.real() < 0.0 && std::abs(lambda.imag()) <= kBranchTol * std::abs(lambda)) {
        throw BranchBoundaryError("SL2C log: eigenvalue on the negative real axis");
      }
    }
    ComplexMatrix x = logm_inverse_scaling(g.matrix());
    x -= (x.trace() / 2.0) * ComplexMatrix::Identity(2, 2);
    return AlgebraElement::trusted(tag, x);
  }

  ComplexMatrix q;
  Eigen::VectorXd phases;
  unitary_phases(g.matrix(), q, phases);
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    if (std::abs(phases(i)) >= kPi - kBranchTol) {
      throw BranchBoundaryError(std::string(to_string(tag)) +
                                " log: eigenphase on the branch cut at pi");
    }
  }
  // det = 1 forces the phase sum to a multiple of 2 pi.
  const long winding = std::lround(phases.sum() / (2.0 * kPi));
  if (winding != 0) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](auto a, auto b) { return phases(a) > phases(b); });
    if (winding > 0) {
      for (long j = 0; j < winding; ++j) phases(order[j]) -= 2.0 * kPi;
    } else {
      for (long j = 0; j < -winding; ++j) phases(order[d - 1 - j]) += 2.0 * kPi;
    }
  }
  const ComplexVector diag = phases.cast<Complex>() * kI;
  ComplexMatrix x = q * diag.asDiagonal() * q.adjoint();
  x = 0.5 * (x - x.adjoint());
  x -= (x.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  return AlgebraElement::trusted(tag, x);
}

GroupElement path_to_identity(const GroupElement& g, double t) {
  if (t <= 0.0) return g;
  if (t >= 1.0) return identity(g.tag());
  try {
    return exp((1.0 - t) * log(g));
  } catch (const BranchBoundaryError&) {
  }
  // Waypoint h = exp(eps * E_j) for the first basis direction that moves g
  // off the branch cut.
  const auto& basis = algebra_basis(g.tag());
  for (const double eps : {0.25, 0.5, 0.125}) {
    for (const auto& e : basis) {
      const GroupElement h = exp(AlgebraElement::trusted(g.tag(), eps * e));
      const GroupElement gh = GroupElement::trusted(g.tag(), g.matrix() * inverse(h).matrix());
      AlgebraElement log_gh = AlgebraElement::zero(g.tag());
      AlgebraElement log_h = AlgebraElement::zero(g.tag());
      try {
        log_gh = log(gh);
        log_h = log(h);
      } catch (const BranchBoundaryError&) {
        continue;
      }
      if (t <= 0.5) {
        const double s = 2.0 * t;
        return GroupElement::trusted(g.tag(), exp((1.0 - s) * log_gh).matrix() * h.matrix());
      }
      const double s = 2.0 * t - 1.0;
      return exp((1.0 - s) * log_h);
    }
  }
  throw BranchBoundaryError("path_to_identity: no interior waypoint found");
}

GroupElement geodesic(const GroupElement& a, const GroupElement& b, double s) {
  check_tags(a.tag(), b.tag());
  const GroupElement rel = GroupElement::trusted(a.tag(), inverse(a).matrix() * b.matrix());
  return GroupElement::trusted(a.tag(), a.matrix() * path_to_identity(rel, 1.0 - s).matrix());
}

double distance(const GroupElement& a, const GroupElement& b) {
  check_tags(a.tag(), b.tag());
  return (a.matrix() - b.matrix()).norm();
}

double distance(const AlgebraElement& a, const AlgebraElement& b) {
  check_tags(a.tag(), b.tag());
  return (a.matrix() - b.matrix()).norm();
}

double distance_to_identity(const GroupElement& g) {
  return (g.matrix() - ComplexMatrix::Identity(g.dim(), g.dim())).norm();
}

ComplexMatrix project_to_group(GroupTag tag, const ComplexMatrix& m) {
  const int d = dimension(tag);
  switch (tag) {
    case GroupTag::U1:
      return ComplexMatrix::Constant(1, 1, m(0, 0) / std::abs(m(0, 0)));
    case GroupTag::SU2:
    case GroupTag::SU3: {
      Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      ComplexMatrix u = svd.matrixU() * svd.matrixV().adjoint();
      const Complex det = u.determinant();
      return u * std::exp(Complex(0.0, -std::arg(det) / d));
    }
    case GroupTag::SL2C:
      return m / std::sqrt(m.determinant());
  }
  return m;
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) {
  check_tags(a.tag(), b.tag());
  return AlgebraElement::trusted(a.tag(),
                                 a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

const std::vector<ComplexMatrix>& algebra_basis(GroupTag tag) {
  static const std::vector<ComplexMatrix> u1 = make_basis(GroupTag::U1);
  static const std::vector<ComplexMatrix> su2 = make_basis(GroupTag::SU2);
  static const std::vector<ComplexMatrix> su3 = make_basis(GroupTag::SU3);
  static const std::vector<ComplexMatrix> sl2c = make_basis(GroupTag::SL2C);
  switch (tag) {
    case GroupTag::U1: return u1;
    case GroupTag::SU2: return su2;
    case GroupTag::SU3: return su3;
    case GroupTag::SL2C: return sl2c;
  }
  return u1;
}

AlgebraElement algebra_from_coefficients(GroupTag tag, std::span<const double> coeffs) {
  const auto& basis = algebra_basis(tag);
  if (coeffs.size() != basis.size()) {
    throw ConfigError(std::string(to_string(tag)) + " expects " +
                      std::to_string(basis.size()) + " algebra coefficients, got " +
                      std::to_string(coeffs.size()));
  }
  const int d = dimension(tag);
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (std::size_t a = 0; a < basis.size(); ++a) x += coeffs[a] * basis[a];
  return AlgebraElement(tag, x);
}

std::vector<double> algebra_coefficients(const AlgebraElement& x) {
  // The bases are orthogonal under Re tr(A^H B).
  const auto& basis = algebra_basis(x.tag());
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& e : basis) {
    const double num = (e.adjoint() * x.matrix()).trace().real();
    const double den = (e.adjoint() * e).trace().real();
    out.push_back(num / den);
  }
  return out;
}

GroupElement random_element(GroupTag tag, Rng& rng) {
  switch (tag) {
    case GroupTag::U1:
      return GroupElement::trusted(
          tag, ComplexMatrix::Constant(1, 1, std::exp(Complex(0.0, rng.uniform(-kPi, kPi)))));
    case GroupTag::SU2:
    case GroupTag::SU3: {
      const int d = dimension(tag);
      ComplexMatrix z(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) z(i, j) = Complex(rng.normal(), rng.normal());
      }
      Eigen::HouseholderQR<ComplexMatrix> qr(z);
      ComplexMatrix q = qr.householderQ();
      const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
      for (int i = 0; i < d; ++i) q.col(i) *= r(i, i) / std::abs(r(i, i));
      return GroupElement::trusted(tag, project_to_group(tag, q));
    }
    case GroupTag::SL2C: {
      const GroupElement rot = random_element(GroupTag::SU2, rng);
      const auto& basis = algebra_basis(tag);
      ComplexMatrix boost = ComplexMatrix::Zero(2, 2);
      for (int a = 3; a < 6; ++a) boost += rng.uniform(-0.5, 0.5) * basis[a];
      const ComplexMatrix b = exp(AlgebraElement::trusted(tag, boost)).matrix();
      return GroupElement::trusted(tag, project_to_group(tag, rot.matrix() * b));
    }
  }
  throw GroupError("unreachable");
}

AlgebraElement random_algebra(GroupTag tag, Rng& rng, double scale) {
  const auto& basis = algebra_basis(tag);
  const int d = dimension(tag);
  ComplexMatrix x = ComplexMatrix::Zero(d, d);
  for (const auto& e : basis) x += scale * rng.uniform(-1.0, 1.0) * e;
  return AlgebraElement::trusted(tag, x);
}

ComplexMatrix expm_scaling_squaring(const ComplexMatrix& x) {
  const auto n = x.rows();
  const double norm = one_norm(x);
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const ComplexMatrix y = x / std::ldexp(1.0, squarings);
  ComplexMatrix sum = ComplexMatrix::Identity(n, n);
  ComplexMatrix term = ComplexMatrix::Identity(n, n);
  for (int j = 1; j <= 30; ++j) {
    term = term * y / static_cast<double>(j);
    sum += term;
    if (one_norm(term) < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

ComplexMatrix logm_inverse_scaling(const ComplexMatrix& a) {
  const auto n = a.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  ComplexMatrix r = a;
  int roots = 0;
  while ((r - id).norm() > 0.1 && roots < 60) {
    r = sqrtm_denman_beavers(r);
    ++roots;
  }
  const ComplexMatrix e = r - id;
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  ComplexMatrix pow = id;
  for (int j = 1; j <= 60; ++j) {
    pow = pow * e;
    const ComplexMatrix term = pow / static_cast<double>(j);
    if (j % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
    if (term.norm() < 1e-18) break;
  }
  return std::ldexp(1.0, roots) * sum;
}

}  // namespace abgeom
