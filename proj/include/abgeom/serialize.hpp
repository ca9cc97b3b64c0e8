#pragma once

#include <string>

#include <json.hpp>

#include "abgeom/cocycle.hpp"
#include "abgeom/covering.hpp"
#include "abgeom/propagator.hpp"
#include "abgeom/scenario.hpp"

namespace abgeom {

using Json = nlohmann::ordered_json;

// Complex entries as [re, im]; matrices as arrays of rows.
Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json element_to_json(const GroupElement& g);
// No membership check: callers decide what to do with a bad matrix.
GroupElement element_from_json(GroupTag tag, const Json& j);

// { schema_version, kind: "cocycle", group, rank,
//   x0: [{beta, alpha, value}], a: [{k, plus_minus, minus_plus}] }
Json cocycle_to_json(const Cocycle& c);
Cocycle cocycle_from_json(const Json& j);

struct Certificate {
  Cocycle cocycle;
  Trivialization trivialization;
  double tolerance = kConstructionTol;
};

// { schema_version, kind: "certificate", tolerance, samples, cocycle,
//   maps: [{set, values: [matrix, ...]}] }
Json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

Json class_table_to_json(const ClassAmplitudeTable& t);
Json flatness_to_json(const FlatnessReport& r);
Json cocycle_report_to_json(const CocycleReport& r);
Json trivialization_report_to_json(const TrivializationReport& r);
Json words_to_json(const std::vector<TreeVertex>& vs);

// Parses text, mapping JSON syntax errors to ParseError.
Json parse_json(const std::string& text);
// Two-space indent, trailing newline, shortest round-trip doubles.
std::string dump_json(const Json& j);

}  // namespace abgeom
