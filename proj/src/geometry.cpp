#include "abgeom/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace abgeom {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Point& x, const Point& p, const Point& q) {
  const Point d = q - p;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return (x - p).norm();
  const double t = std::clamp((x - p).dot(d) / len2, 0.0, 1.0);
  return (x - (p + t * d)).norm();
}

void require_closed(const PlanePath& path) {
  if (!path.closed) throw OpenPathError("path is not closed");
  if (path.vertices.size() < 2) throw OpenPathError("path needs at least 2 vertices");
  if ((path.vertices.front() - path.vertices.back()).norm() > kGenericTol) {
    throw OpenPathError("closed path must end at its first vertex");
  }
}

}  // namespace

PlanePath PlanePath::loop(std::vector<Point> vertices) {
  if (!vertices.empty() && vertices.front() != vertices.back()) {
    vertices.push_back(vertices.front());
  }
  return {std::move(vertices), true};
}

PlanePath PlanePath::open(std::vector<Point> vertices) { return {std::move(vertices), false}; }

PlanePath PlanePath::reversed() const {
  return {std::vector<Point>(vertices.rbegin(), vertices.rend()), closed};
}

PlanePath PlanePath::then(const PlanePath& next) const {
  PlanePath out{vertices, false};
  auto it = next.vertices.begin();
  if (!out.vertices.empty() && it != next.vertices.end() &&
      (*it - out.vertices.back()).norm() <= kGenericTol) {
    ++it;
  }
  out.vertices.insert(out.vertices.end(), it, next.vertices.end());
  out.closed = out.vertices.size() >= 2 &&
               (out.vertices.front() - out.vertices.back()).norm() <= kGenericTol;
  return out;
}

PlanePath PlanePath::refined(int pieces) const {
  if (pieces <= 1 || vertices.size() < 2) return *this;
  PlanePath out{{}, closed};
  out.vertices.reserve((vertices.size() - 1) * pieces + 1);
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    for (int j = 0; j < pieces; ++j) {
      const double t = static_cast<double>(j) / pieces;
      out.vertices.push_back((1.0 - t) * vertices[i] + t * vertices[i + 1]);
    }
  }
  out.vertices.push_back(vertices.back());
  return out;
}

double PlanePath::length() const {
  double l = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) l += (vertices[i + 1] - vertices[i]).norm();
  return l;
}

std::string GenericityViolation::describe() const {
  std::ostringstream os;
  if (kind == Kind::VertexOnRay) {
    os << "vertex " << index << " lies on the cut ray of puncture b" << puncture
       << " (offset " << gap << ")";
  } else {
    os << "segment " << index << "->" << index + 1 << " passes within " << gap
       << " of puncture b" << puncture;
  }
  return os.str();
}

GenericityReport check_generic(const PlanePath& path, const std::vector<Puncture>& punctures,
                               double tol) {
  GenericityReport report;
  const auto& v = path.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (const auto& b : punctures) {
      const double dx = std::abs(v[i].x() - b.position.x());
      if (dx <= tol && v[i].y() < b.position.y() + tol) {
        report.violations.push_back({GenericityViolation::Kind::VertexOnRay, i, b.label, dx});
      }
    }
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    for (const auto& b : punctures) {
      const double d = point_segment_distance(b.position, v[i], v[i + 1]);
      if (d <= tol) {
        report.violations.push_back(
            {GenericityViolation::Kind::SegmentNearPuncture, i, b.label, d});
      }
    }
  }
  return report;
}

std::vector<Letter> crossing_letters(const PlanePath& path,
                                     const std::vector<Puncture>& punctures) {
  std::vector<Letter> letters;
  struct Hit {
    double t;
    Letter letter;
  };
  std::vector<Hit> hits;
  const auto& v = path.vertices;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[i + 1];
    hits.clear();
    for (const auto& b : punctures) {
      const double dp = p.x() - b.position.x();
      const double dq = q.x() - b.position.x();
      if (!((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0))) continue;
      const double t = dp / (dp - dq);
      const double y = p.y() + t * (q.y() - p.y());
      if (y < b.position.y()) hits.push_back({t, Letter{b.label, dp < 0.0 ? 1 : -1}});
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
    for (const auto& h : hits) letters.push_back(h.letter);
  }
  return letters;
}

Word word_of_loop(const PlanePath& path, const std::vector<Puncture>& punctures, int rank) {
  require_closed(path);
  const auto report = check_generic(path, punctures);
  if (!report.ok()) {
    std::string msg = "degenerate position: " + report.violations.front().describe();
    if (report.violations.size() > 1) {
      msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
    }
    throw DegeneratePositionError(msg);
  }
  return reduce(rank, crossing_letters(path, punctures));
}

std::vector<long> winding_numbers(const PlanePath& path, const std::vector<Puncture>& punctures) {
  require_closed(path);
  std::vector<long> out(punctures.size(), 0);
  const auto& v = path.vertices;
  for (std::size_t k = 0; k < punctures.size(); ++k) {
    const Point& c = punctures[k].position;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const Point a = v[i] - c;
      const Point b = v[i + 1] - c;
      total += std::atan2(cross(a, b), a.dot(b));
    }
    const double turns = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 0.25) {
      throw PathTooCoarseError("winding about b" + std::to_string(punctures[k].label) +
                               " not near an integer: " + std::to_string(turns));
    }
    out[static_cast<std::size_t>(punctures[k].label - 1)] = static_cast<long>(rounded);
  }
  return out;
}

void validate_punctures(const std::vector<Puncture>& punctures, double tol) {
  const int n = static_cast<int>(punctures.size());
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const auto& b : punctures) {
    if (b.label < 1 || b.label > n || seen[b.label - 1]) {
      throw PunctureLayoutError("puncture labels must be a permutation of 1..n");
    }
    seen[b.label - 1] = true;
    if (!b.position.allFinite()) throw PunctureLayoutError("non-finite puncture position");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(punctures[i].position.x() - punctures[j].position.x()) <= tol) {
        throw PunctureLayoutError("punctures b" + std::to_string(punctures[i].label) + " and b" +
                                  std::to_string(punctures[j].label) +
                                  " share an x-coordinate; use jitter_punctures");
      }
    }
  }
}

std::vector<Puncture> jitter_punctures(std::vector<Puncture> punctures, double min_gap) {
  std::vector<std::size_t> order(punctures.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return punctures[a].position.x() < punctures[b].position.x();
  });
  for (std::size_t r = 1; r < order.size(); ++r) {
    const double prev = punctures[order[r - 1]].position.x();
    double& x = punctures[order[r]].position.x();
    if (x - prev < min_gap) x = prev + min_gap;
  }
  return punctures;
}

PlanePath circle_path(const Point& center, double radius, int sides, double start_angle,
                      int turns) {
  const int total = sides * std::abs(turns);
  const double dir = turns >= 0 ? 1.0 : -1.0;
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>(total) + 1);
  for (int i = 0; i < total; ++i) {
    const double a = start_angle + dir * 2.0 * std::numbers::pi * i / sides;
    v.emplace_back(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a));
  }
  v.push_back(v.front());
  return {std::move(v), true};
}

}  // namespace abgeom
