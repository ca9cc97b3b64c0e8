#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "abgeom/holonomy.hpp"

namespace abgeom {

// Point ((x, g), z) of (M x G) x_G C^m, with m the defining dimension of G.
struct FiberPoint {
  Point base = Point::Zero();
  GroupElement gauge = GroupElement::identity(GroupTag::U1);
  ComplexVector z;
};

class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Representative with identity gauge: (x, 1, g z). ((x, g h), h^-1 z) maps to
// the same representative for every h.
FiberPoint canonical_rep(const FiberPoint& p);
bool equivalent(const FiberPoint& a, const FiberPoint& b, double tol = 1e-12);

// Values in the canonical gauge at scattered grid points.
struct SampledSection {
  std::vector<Point> grid;
  std::vector<ComplexVector> values;

  // Value at a grid point within `tol`; nullptr if absent.
  const ComplexVector* find(const Point& x, double tol = 1e-12) const;
  void validate() const;
};

using SectionField = std::function<ComplexVector(const Point&)>;
using GaugeField = std::function<ComplexMatrix(const Point&)>;

inline constexpr double kDerivativeStep = 1e-4;

// z(end) = W(path) z0, with W the Wilson line of the scenario connection. A
// CCW loop around b_k therefore acts by exp(F_k).
ComplexVector parallel_transport(const FluxScenario& scenario, const ComplexVector& z0,
                                 const PlanePath& path, int steps);
ComplexVector parallel_transport(const ConnectionField& field, GroupTag tag,
                                 const ComplexVector& z0, const PlanePath& path, int steps);

// Covariant derivative compatible with parallel_transport: a section built by
// transporting z0 along a curve is covariantly constant along it.
//   nabla_V psi(x) = d psi(x)[V] - (A(x) . V) psi(x)
// with d psi from central differences at step h.
ComplexVector covariant_derivative(const ConnectionField& field, const SectionField& psi,
                                   const Point& direction, const Point& x,
                                   double h = kDerivativeStep);
ComplexVector covariant_derivative(const FluxScenario& scenario, const SectionField& psi,
                                   const Point& direction, const Point& x,
                                   double h = kDerivativeStep);

class GridTooSparseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Same, reading psi(x +- h V) from the grid; throws GridTooSparseError if the
// stencil points are missing.
ComplexVector covariant_derivative(const FluxScenario& scenario, const SampledSection& psi,
                                   const Point& direction, const Point& x,
                                   double h = kDerivativeStep);

struct GaugedFields {
  SectionField section;
  ConnectionField connection;
};

// psi' = Lambda psi, A' = Lambda A Lambda^-1 + (d Lambda) Lambda^-1, with
// d Lambda from central differences at step h. Under this pair
// nabla' psi' = Lambda nabla psi, and loop holonomies based at x0 become
// Lambda(x0) W Lambda(x0)^-1.
GaugedFields gauge_transform(const SectionField& psi, const ConnectionField& field,
                             const GaugeField& lambda, double h = kDerivativeStep);

// CSV: x,y,Re z1,Im z1,... one grid point per line; '#' comments skipped.
void write_section_csv(std::ostream& out, const SampledSection& s);
SampledSection read_section_csv(std::istream& in);

}  // namespace abgeom
