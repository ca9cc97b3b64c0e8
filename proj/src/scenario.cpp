#include "abgeom/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace abgeom {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

const Json& require(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const Json& j, const std::string& what) {
  if (!j.is_number()) throw ParseError(what + ": expected a number");
  return j.get<double>();
}

long long integer(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ParseError(what + ": expected an integer");
  return j.get<long long>();
}

Point point(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ParseError(what + ": expected [x, y]");
  return {number(j[0], what), number(j[1], what)};
}

Json point_json(const Point& p) { return Json::array({p.x(), p.y()}); }

void parse_walks(const Json& j, WalkParams& w) {
  reject_unknown(j, {"source", "steps", "samples", "word_cap", "shards", "spacing", "excision_margin"},
                 "walks");
  if (j.contains("source")) w.source = point(j["source"], "walks.source");
  if (j.contains("steps")) w.steps = static_cast<int>(integer(j["steps"], "walks.steps"));
  if (j.contains("samples")) {
    const auto s = integer(j["samples"], "walks.samples");
    if (s < 1) throw ParseError("walks.samples: must be positive");
    w.samples = static_cast<std::uint64_t>(s);
  }
  if (j.contains("word_cap")) w.word_cap = static_cast<int>(integer(j["word_cap"], "walks.word_cap"));
  if (j.contains("shards")) w.shards = static_cast<int>(integer(j["shards"], "walks.shards"));
  if (j.contains("spacing")) w.spacing = number(j["spacing"], "walks.spacing");
  if (j.contains("excision_margin")) {
    w.excision_margin = static_cast<int>(integer(j["excision_margin"], "walks.excision_margin"));
  }
}

void parse_screen(const Json& j, ScreenParams& s) {
  reject_unknown(j, {"from", "to", "count"}, "screen");
  if (j.contains("from")) s.from = point(j["from"], "screen.from");
  if (j.contains("to")) s.to = point(j["to"], "screen.to");
  if (j.contains("count")) s.count = static_cast<int>(integer(j["count"], "screen.count"));
}

}  // namespace

WalkEnsemble ScenarioFile::ensemble(std::uint64_t seed) const {
  WalkEnsemble e;
  e.scenario = scenario;
  e.source = walks.source;
  e.steps = walks.steps;
  e.samples = walks.samples;
  e.seed = seed;
  e.word_cap = walks.word_cap;
  e.shards = walks.shards;
  e.lattice.spacing = walks.spacing;
  e.lattice.excision_margin = walks.excision_margin;
  return e;
}

std::vector<Point> ScenarioFile::screen_points() const {
  return screen_line(screen.from, screen.to, screen.count);
}

ScenarioFile parse_scenario(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  reject_unknown(j, {"schema_version", "rank", "group", "punctures", "basepoint", "fluxes", "walks", "screen"},
                 "scenario");
  const auto version = integer(require(j, "schema_version", "scenario"), "schema_version");
  if (version != kSchemaVersion) {
    throw ParseError("scenario: unsupported schema_version " + std::to_string(version));
  }

  ScenarioFile out;
  FluxScenario& s = out.scenario;
  s.rank = static_cast<int>(integer(require(j, "rank", "scenario"), "rank"));
  const auto& group = require(j, "group", "scenario");
  if (!group.is_string()) throw ParseError("group: expected a string");
  try {
    s.group = parse_group_tag(group.get<std::string>());
  } catch (const ConfigError& e) {
    throw ParseError(e.what());
  }

  const auto& punctures = require(j, "punctures", "scenario");
  if (!punctures.is_array()) throw ParseError("punctures: expected an array");
  int label = 1;
  for (const auto& p : punctures) {
    s.punctures.push_back({point(p, "punctures[" + std::to_string(label - 1) + "]"), label});
    ++label;
  }
  if (static_cast<int>(s.punctures.size()) != s.rank) {
    throw ParseError("punctures: " + std::to_string(s.punctures.size()) + " given for rank " +
                     std::to_string(s.rank));
  }
  s.basepoint = point(require(j, "basepoint", "scenario"), "basepoint");

  const auto& fluxes = require(j, "fluxes", "scenario");
  if (!fluxes.is_array() || static_cast<int>(fluxes.size()) != s.rank) {
    throw ParseError("fluxes: expected one coefficient list per puncture");
  }
  const auto dim = static_cast<std::size_t>(algebra_dimension(s.group));
  for (std::size_t k = 0; k < fluxes.size(); ++k) {
    const auto& f = fluxes[k];
    const std::string what = "fluxes[" + std::to_string(k) + "]";
    if (!f.is_array() || f.size() != dim) {
      throw ParseError(what + ": expected " + std::to_string(dim) + " coefficients for " +
                       std::string(to_string(s.group)));
    }
    std::vector<double> c;
    for (const auto& x : f) c.push_back(number(x, what));
    s.fluxes.push_back(algebra_from_coefficients(s.group, c));
  }

  if (j.contains("walks")) {
    parse_walks(j["walks"], out.walks);
    out.has_walks = true;
  }
  if (j.contains("screen")) {
    parse_screen(j["screen"], out.screen);
    out.has_screen = true;
  }
  s.validate();
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioFile load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

std::string dump_scenario(const ScenarioFile& file) {
  const FluxScenario& s = file.scenario;
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["rank"] = s.rank;
  j["group"] = std::string(to_string(s.group));
  j["punctures"] = Json::array();
  for (const auto& p : s.punctures) j["punctures"].push_back(point_json(p.position));
  j["basepoint"] = point_json(s.basepoint);
  j["fluxes"] = Json::array();
  for (const auto& f : s.fluxes) j["fluxes"].push_back(algebra_coefficients(f));
  if (file.has_walks) {
    const auto& w = file.walks;
    j["walks"] = {{"source", point_json(w.source)}, {"steps", w.steps},
                  {"samples", w.samples},           {"word_cap", w.word_cap},
                  {"shards", w.shards},             {"spacing", w.spacing},
                  {"excision_margin", w.excision_margin}};
  }
  if (file.has_screen) {
    j["screen"] = {{"from", point_json(file.screen.from)},
                   {"to", point_json(file.screen.to)},
                   {"count", file.screen.count}};
  }
  return j.dump(2) + "\n";
}

PlanePath parse_path_csv(const std::string& text, bool closed) {
  std::vector<Point> v;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
      continue;
    }
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("no comma");
      std::size_t used = 0;
      const std::string xs = line.substr(0, comma);
      const std::string ys = line.substr(comma + 1);
      const double x = std::stod(xs, &used);
      if (xs.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("x");
      const double y = std::stod(ys, &used);
      if (ys.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("y");
      v.emplace_back(x, y);
    } catch (const std::exception&) {
      throw ParseError("path CSV line " + std::to_string(lineno) + ": expected 'x,y'");
    }
  }
  if (v.size() < 2) throw ParseError("path CSV: need at least 2 vertices");
  return closed ? PlanePath::loop(std::move(v)) : PlanePath::open(std::move(v));
}

PlanePath load_path_csv(const std::string& path, bool closed) {
  return parse_path_csv(read_text_file(path), closed);
}

}  // namespace abgeom
