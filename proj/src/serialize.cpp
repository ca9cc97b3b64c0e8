#include "abgeom/serialize.hpp"

namespace abgeom {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

void check_kind(const Json& j, const char* kind) {
  const auto& v = field(j, "schema_version", kind);
  if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
    throw ParseError(std::string(kind) + ": unsupported schema_version");
  }
  const auto& k = field(j, "kind", kind);
  if (!k.is_string() || k.get<std::string>() != kind) {
    throw ParseError(std::string("expected kind '") + kind + "'");
  }
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer()) throw ParseError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

SetIndex set_field(const Json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key + ": expected a set name like \"1+\"");
  try {
    return SetIndex::parse(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("matrix rows differ in length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Json element_to_json(const GroupElement& g) { return matrix_to_json(g.matrix()); }

GroupElement element_from_json(GroupTag tag, const Json& j) {
  ComplexMatrix m = matrix_from_json(j);
  const int d = dimension(tag);
  if (m.rows() != d || m.cols() != d) {
    throw ParseError("expected a " + std::to_string(d) + "x" + std::to_string(d) + " matrix for " +
                     std::string(to_string(tag)));
  }
  if (!m.allFinite()) throw ParseError("non-finite matrix entry");
  return GroupElement::trusted(tag, std::move(m));
}

Json cocycle_to_json(const Cocycle& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "cocycle";
  j["group"] = std::string(to_string(c.group()));
  j["rank"] = c.rank();
  Json x0 = Json::array();
  for (int b = 0; b < c.set_count(); ++b) {
    for (int a = 0; a < c.set_count(); ++a) {
      const auto sb = SetIndex::from_ordinal(b);
      const auto sa = SetIndex::from_ordinal(a);
      x0.push_back({{"beta", sb.name()}, {"alpha", sa.name()}, {"value", element_to_json(c.at_x0(sb, sa))}});
    }
  }
  j["x0"] = std::move(x0);
  Json a = Json::array();
  for (int k = 1; k <= c.rank(); ++k) {
    a.push_back({{"k", k},
                 {"plus_minus", element_to_json(c.at_a({k, 1}, {k, -1}))},
                 {"minus_plus", element_to_json(c.at_a({k, -1}, {k, 1}))}});
  }
  j["a"] = std::move(a);
  return j;
}

Cocycle cocycle_from_json(const Json& j) {
  check_kind(j, "cocycle");
  const auto& g = field(j, "group", "cocycle");
  if (!g.is_string()) throw ParseError("cocycle.group: expected a string");
  GroupTag tag;
  try {
    tag = parse_group_tag(g.get<std::string>());
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }
  const int rank = int_field(j, "rank", "cocycle");
  if (rank < 1) throw ParseError("cocycle.rank must be positive");
  Cocycle c(tag, rank);

  const auto& x0 = field(j, "x0", "cocycle");
  const auto m = static_cast<std::size_t>(2 * rank);
  if (!x0.is_array() || x0.size() != m * m) {
    throw ParseError("cocycle.x0: expected " + std::to_string(m * m) + " entries");
  }
  std::vector<bool> seen(m * m, false);
  for (const auto& e : x0) {
    const SetIndex b = set_field(e, "beta", "cocycle.x0");
    const SetIndex a = set_field(e, "alpha", "cocycle.x0");
    if (b.k > rank || a.k > rank) throw ParseError("cocycle.x0: set index beyond rank");
    const auto slot = static_cast<std::size_t>(b.ordinal()) * m + static_cast<std::size_t>(a.ordinal());
    if (seen[slot]) throw ParseError("cocycle.x0: duplicate entry " + b.name() + "," + a.name());
    seen[slot] = true;
    c.set_at_x0(b, a, element_from_json(tag, field(e, "value", "cocycle.x0")));
  }

  const auto& av = field(j, "a", "cocycle");
  if (!av.is_array() || static_cast<int>(av.size()) != rank) {
    throw ParseError("cocycle.a: expected " + std::to_string(rank) + " entries");
  }
  std::vector<bool> seen_k(static_cast<std::size_t>(rank), false);
  for (const auto& e : av) {
    const int k = int_field(e, "k", "cocycle.a");
    if (k < 1 || k > rank || seen_k[static_cast<std::size_t>(k - 1)]) {
      throw ParseError("cocycle.a: bad or duplicate k");
    }
    seen_k[static_cast<std::size_t>(k - 1)] = true;
    c.set_at_a({k, 1}, {k, -1}, element_from_json(tag, field(e, "plus_minus", "cocycle.a")));
    c.set_at_a({k, -1}, {k, 1}, element_from_json(tag, field(e, "minus_plus", "cocycle.a")));
  }
  return c;
}

Json certificate_to_json(const Certificate& c) {
  const auto& t = c.trivialization;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "certificate";
  j["tolerance"] = c.tolerance;
  j["samples"] = t.samples;
  j["cocycle"] = cocycle_to_json(c.cocycle);
  Json maps = Json::array();
  for (std::size_t s = 0; s < t.maps.size(); ++s) {
    Json values = Json::array();
    for (const auto& g : t.maps[s]) values.push_back(element_to_json(g));
    maps.push_back({{"set", SetIndex::from_ordinal(static_cast<int>(s)).name()}, {"values", std::move(values)}});
  }
  j["maps"] = std::move(maps);
  return j;
}

Certificate certificate_from_json(const Json& j) {
  check_kind(j, "certificate");
  Cocycle cocycle = cocycle_from_json(field(j, "cocycle", "certificate"));
  const auto& tol = field(j, "tolerance", "certificate");
  if (!tol.is_number() || !(tol.get<double>() > 0.0)) {
    throw ParseError("certificate.tolerance: expected a positive number");
  }
  Trivialization t;
  t.group = cocycle.group();
  t.rank = cocycle.rank();
  t.samples = int_field(j, "samples", "certificate");
  const auto& maps = field(j, "maps", "certificate");
  if (!maps.is_array() || static_cast<int>(maps.size()) != cocycle.set_count()) {
    throw ParseError("certificate.maps: expected one entry per set");
  }
  t.maps.resize(maps.size());
  for (const auto& e : maps) {
    const SetIndex s = set_field(e, "set", "certificate.maps");
    if (s.k > cocycle.rank()) throw ParseError("certificate.maps: set index beyond rank");
    const auto& values = field(e, "values", "certificate.maps");
    if (!values.is_array()) throw ParseError("certificate.maps.values: expected an array");
    auto& out = t.maps[static_cast<std::size_t>(s.ordinal())];
    if (!out.empty()) throw ParseError("certificate.maps: duplicate set " + s.name());
    for (const auto& v : values) out.push_back(element_from_json(cocycle.group(), v));
  }
  return {std::move(cocycle), std::move(t), tol.get<double>()};
}

Json class_table_to_json(const ClassAmplitudeTable& t) {
  Json classes = Json::object();
  for (const auto& [w, amp] : t.amplitudes()) classes[to_string(w)] = complex_to_json(amp);
  Json j;
  j["classes"] = std::move(classes);
  j["accepted"] = t.accepted;
  j["total"] = t.total;
  j["mass"] = t.mass();
  j["overflow_mass"] = t.overflow_mass();
  return j;
}

Json flatness_to_json(const FlatnessReport& r) {
  Json j;
  j["non_flat"] = r.non_flat;
  j["max_plaquette_deviation"] = r.max_plaquette_deviation;
  j["worst_plaquette_center"] = Json::array({r.worst_plaquette_center.x(), r.worst_plaquette_center.y()});
  j["plaquettes_scanned"] = r.plaquettes_scanned;
  j["plaquettes_skipped"] = r.plaquettes_skipped;
  j["max_commutator"] = r.max_commutator;
  Json comm = Json::array();
  for (const auto& c : r.commutators) comm.push_back({{"j", c.j}, {"k", c.k}, {"norm", c.norm}});
  j["commutators"] = std::move(comm);
  return j;
}

Json cocycle_report_to_json(const CocycleReport& r) {
  Json j;
  j["ok"] = r.ok();
  j["relations_checked"] = r.relations_checked;
  j["max_residual"] = r.max_residual;
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back(x.describe());
  j["violations"] = std::move(v);
  return j;
}

Json trivialization_report_to_json(const TrivializationReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["max_residual"] = r.max_coboundary_residual;
  j["worst_coboundary"] = r.worst_coboundary;
  j["max_step"] = r.max_step;
  j["step_bound"] = r.step_bound;
  j["worst_step"] = r.worst_step;
  j["max_membership_violation"] = r.max_membership_violation;
  return j;
}

Json words_to_json(const std::vector<TreeVertex>& vs) {
  Json j = Json::array();
  for (const auto& v : vs) j.push_back(to_string(v.word()));
  return j;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace abgeom
