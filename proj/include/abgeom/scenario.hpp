#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "abgeom/propagator.hpp"

namespace abgeom {

inline constexpr int kSchemaVersion = 1;

// Malformed input file: bad JSON, missing or unknown fields, wrong types.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct WalkParams {
  Point source = Point::Zero();
  int steps = 40;
  std::uint64_t samples = 200000;
  int word_cap = 8;
  int shards = 64;
  double spacing = 1.0;
  int excision_margin = -1;
};

struct ScreenParams {
  Point from{-10.0, 10.0};
  Point to{10.0, 10.0};
  int count = 21;
};

// Scenario file, JSON:
//   { "schema_version": 1, "rank": n, "group": "SU2",
//     "punctures": [[x, y], ...],          labels 1..n in this order
//     "basepoint": [x, y],
//     "fluxes": [[c_1, ...], ...],         coefficients in algebra_basis(group)
//     "walks": {...}, "screen": {...} }    optional
// Unknown keys are rejected at every level.
struct ScenarioFile {
  FluxScenario scenario;
  WalkParams walks;
  ScreenParams screen;
  bool has_walks = false;
  bool has_screen = false;

  WalkEnsemble ensemble(std::uint64_t seed) const;
  std::vector<Point> screen_points() const;
};

// Throws ParseError on malformed input; the resulting FluxScenario is
// validated, so its own errors (layout, flux shape) propagate.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);
std::string dump_scenario(const ScenarioFile& file);

// x,y per line; '#' comments and blank lines skipped. Closed unless `open`.
PlanePath parse_path_csv(const std::string& text, bool closed = true);
PlanePath load_path_csv(const std::string& path, bool closed = true);

std::string read_text_file(const std::string& path);

}  // namespace abgeom
