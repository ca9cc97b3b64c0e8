#include "abgeom/section.hpp"

#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace abgeom {

namespace {

Point unit(const Point& v) {
  const double n = v.norm();
  if (n == 0.0) throw std::invalid_argument("direction must be nonzero");
  return v / n;
}

}  // namespace

FiberPoint canonical_rep(const FiberPoint& p) {
  if (p.z.size() != p.gauge.dim()) {
    throw DimensionMismatchError("fiber vector has dimension " + std::to_string(p.z.size()) +
                                 ", gauge acts on " + std::to_string(p.gauge.dim()));
  }
  return {p.base, identity(p.gauge.tag()), p.gauge.matrix() * p.z};
}

bool equivalent(const FiberPoint& a, const FiberPoint& b, double tol) {
  if ((a.base - b.base).norm() > tol) return false;
  return (canonical_rep(a).z - canonical_rep(b).z).norm() <= tol;
}

const ComplexVector* SampledSection::find(const Point& x, double tol) const {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if ((grid[i] - x).norm() <= tol) return &values[i];
  }
  return nullptr;
}

void SampledSection::validate() const {
  if (grid.size() != values.size()) throw std::invalid_argument("grid/value count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].allFinite()) throw std::invalid_argument("non-finite section value");
    if (i && values[i].size() != values[0].size()) {
      throw DimensionMismatchError("section values differ in dimension");
    }
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      if (grid[i] == grid[j]) throw std::invalid_argument("duplicate grid point");
    }
  }
}

ComplexVector parallel_transport(const FluxScenario& scenario, const ComplexVector& z0,
                                 const PlanePath& path, int steps) {
  if (z0.size() != dimension(scenario.group)) {
    throw DimensionMismatchError("transported vector must have dimension " +
                                 std::to_string(dimension(scenario.group)));
  }
  return wilson_line(scenario, path, steps).matrix() * z0;
}

ComplexVector parallel_transport(const ConnectionField& field, GroupTag tag,
                                 const ComplexVector& z0, const PlanePath& path, int steps) {
  if (z0.size() != dimension(tag)) {
    throw DimensionMismatchError("transported vector must have dimension " +
                                 std::to_string(dimension(tag)));
  }
  return wilson_line(field, tag, path, steps).matrix() * z0;
}

ComplexVector covariant_derivative(const ConnectionField& field, const SectionField& psi,
                                   const Point& direction, const Point& x, double h) {
  const ComplexVector forward = psi(x + h * direction);
  const ComplexVector backward = psi(x - h * direction);
  const auto a = field(x);
  const ComplexMatrix a_v = a[0] * direction.x() + a[1] * direction.y();
  return (forward - backward) / (2.0 * h) - a_v * psi(x);
}

ComplexVector covariant_derivative(const FluxScenario& scenario, const SectionField& psi,
                                   const Point& direction, const Point& x, double h) {
  return covariant_derivative(vortex_connection(scenario), psi, direction, x, h);
}

ComplexVector covariant_derivative(const FluxScenario& scenario, const SampledSection& psi,
                                   const Point& direction, const Point& x, double h) {
  // The stencil uses the unit direction; scale back by |V| for linearity.
  const double len = direction.norm();
  const Point u = unit(direction);
  const ComplexVector* center = psi.find(x);
  const ComplexVector* fwd = psi.find(x + h * u, 1e-9 * h);
  const ComplexVector* bwd = psi.find(x - h * u, 1e-9 * h);
  if (!center || !fwd || !bwd) {
    throw GridTooSparseError("section grid lacks the central-difference stencil at (" +
                             std::to_string(x.x()) + ", " + std::to_string(x.y()) + ")");
  }
  const auto a = connection_at(scenario, x);
  const ComplexMatrix a_u = a.ax.matrix() * u.x() + a.ay.matrix() * u.y();
  return len * ((*fwd - *bwd) / (2.0 * h) - a_u * (*center));
}

GaugedFields gauge_transform(const SectionField& psi, const ConnectionField& field,
                             const GaugeField& lambda, double h) {
  GaugedFields out;
  out.section = [psi, lambda](const Point& x) -> ComplexVector { return lambda(x) * psi(x); };
  out.connection = [field, lambda, h](const Point& x) {
    const ComplexMatrix l = lambda(x);
    const ComplexMatrix l_inv = l.inverse();
    const auto a = field(x);
    const Point ex(h, 0.0);
    const Point ey(0.0, h);
    const ComplexMatrix dlx = (lambda(x + ex) - lambda(x - ex)) / (2.0 * h);
    const ComplexMatrix dly = (lambda(x + ey) - lambda(x - ey)) / (2.0 * h);
    return std::array<ComplexMatrix, 2>{l * a[0] * l_inv + dlx * l_inv,
                                        l * a[1] * l_inv + dly * l_inv};
  };
  return out;
}

void write_section_csv(std::ostream& out, const SampledSection& s) {
  s.validate();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    out << s.grid[i].x() << ',' << s.grid[i].y();
    for (Eigen::Index j = 0; j < s.values[i].size(); ++j) {
      out << ',' << s.values[i](j).real() << ',' << s.values[i](j).imag();
    }
    out << '\n';
  }
}

SampledSection read_section_csv(std::istream& in) {
  SampledSection s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw std::invalid_argument("section CSV line " + std::to_string(lineno) +
                                    ": bad number '" + cell + "'");
      }
    }
    if (cells.size() < 4 || cells.size() % 2 != 0) {
      throw std::invalid_argument("section CSV line " + std::to_string(lineno) +
                                  ": expected x,y then Re/Im pairs");
    }
    s.grid.emplace_back(cells[0], cells[1]);
    ComplexVector z((cells.size() - 2) / 2);
    for (Eigen::Index j = 0; j < z.size(); ++j) z(j) = Complex(cells[2 + 2 * j], cells[3 + 2 * j]);
    s.values.push_back(std::move(z));
  }
  s.validate();
  return s;
}

}  // namespace abgeom
