#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "abgeom/random.hpp"

namespace abgeom {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Structure groups in their defining representation. All are path connected.
enum class GroupTag { U1, SU2, SU3, SL2C };

int dimension(GroupTag tag);
// Number of real coefficients in the documented algebra basis.
int algebra_dimension(GroupTag tag);
std::string_view to_string(GroupTag tag);
// Accepts "U1", "SU2", "SU3", "SL2C". Anything else (including disconnected
// groups such as "O2" or "Z2") is a ConfigError.
GroupTag parse_group_tag(std::string_view name);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TagMismatchError : public GroupError {
 public:
  using GroupError::GroupError;
};

class MembershipError : public GroupError {
 public:
  using GroupError::GroupError;
};

// The principal logarithm does not exist: an eigenphase sits on -pi.
class BranchBoundaryError : public GroupError {
 public:
  using GroupError::GroupError;
};

inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kBranchTol = 1e-12;

// Largest residual of the group-membership conditions for `m`.
// U1: ||z| - 1|; SU(d): max(||M^H M - I||_F, |det M - 1|); SL2C: |det M - 1|.
double membership_violation(GroupTag tag, const ComplexMatrix& m);
double algebra_violation(GroupTag tag, const ComplexMatrix& x);

class GroupElement {
 public:
  // Validates membership at `tol`; throws MembershipError otherwise.
  GroupElement(GroupTag tag, ComplexMatrix m, double tol = kMembershipTol);

  static GroupElement identity(GroupTag tag);
  // Skips validation. Callers guarantee membership.
  static GroupElement trusted(GroupTag tag, ComplexMatrix m);

  GroupTag tag() const { return tag_; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  GroupElement() = default;
  GroupTag tag_ = GroupTag::U1;
  ComplexMatrix m_;
};

class AlgebraElement {
 public:
  AlgebraElement(GroupTag tag, ComplexMatrix x, double tol = kMembershipTol);

  static AlgebraElement zero(GroupTag tag);
  static AlgebraElement trusted(GroupTag tag, ComplexMatrix x);

  GroupTag tag() const { return tag_; }
  int dim() const { return static_cast<int>(x_.rows()); }
  const ComplexMatrix& matrix() const { return x_; }

  AlgebraElement operator*(double s) const { return trusted(tag_, s * x_); }
  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;

 private:
  AlgebraElement() = default;
  GroupTag tag_ = GroupTag::U1;
  ComplexMatrix x_;
};

inline AlgebraElement operator*(double s, const AlgebraElement& x) { return x * s; }

GroupElement identity(GroupTag tag);
GroupElement multiply(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return multiply(a, b);
}

GroupElement exp(const AlgebraElement& x);

// Principal logarithm (eigenphases in (-pi, pi)). For SU3 the principal
// phases may sum to +-2pi; the phase(s) of largest magnitude on the offending
// side are shifted by 2pi so the result stays traceless.
// Throws BranchBoundaryError when an eigenphase is within kBranchTol of pi
// (for SL2C: an eigenvalue on the closed negative real axis).
AlgebraElement log(const GroupElement& g);

// Continuous path with path_to_identity(g, 0) == g and
// path_to_identity(g, 1) == identity. Uses exp((1 - t) log g) when the
// principal log exists; otherwise routes through a nearby interior waypoint h
// (first half g h^-1 -> identity translated by h, second half h -> identity).
GroupElement path_to_identity(const GroupElement& g, double t);

// Path from a (s = 0) to b (s = 1): a * path_to_identity(a^-1 b, 1 - s).
GroupElement geodesic(const GroupElement& a, const GroupElement& b, double s);

// Frobenius norm of a - b.
double distance(const GroupElement& a, const GroupElement& b);
double distance(const AlgebraElement& a, const AlgebraElement& b);
double distance_to_identity(const GroupElement& g);

// Nearest group element: polar projection for U1/SU2/SU3 followed by a
// determinant phase fix; determinant rescaling for SL2C.
ComplexMatrix project_to_group(GroupTag tag, const ComplexMatrix& m);

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);

// Fixed real basis per group, used for config coefficient lists.
//   U1:   {i}
//   SU2:  i sigma_a / 2                     (a = 1..3)
//   SU3:  i lambda_a / 2                    (Gell-Mann, a = 1..8)
//   SL2C: i sigma_a / 2, then sigma_a / 2   (rotations, then boosts)
const std::vector<ComplexMatrix>& algebra_basis(GroupTag tag);
AlgebraElement algebra_from_coefficients(GroupTag tag, std::span<const double> coeffs);
std::vector<double> algebra_coefficients(const AlgebraElement& x);

// Haar-random for the compact groups; SU2 rotation times a bounded boost for
// SL2C.
GroupElement random_element(GroupTag tag, Rng& rng);
AlgebraElement random_algebra(GroupTag tag, Rng& rng, double scale = 1.0);

// Dense matrix routines used by the SL2C backend.
ComplexMatrix expm_scaling_squaring(const ComplexMatrix& x);
ComplexMatrix logm_inverse_scaling(const ComplexMatrix& a);

}  // namespace abgeom
