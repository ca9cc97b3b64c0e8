// abgeom command-line front end.
//
// Exit codes: 0 ok, 1 other failure, 2 parse/usage, 3 genericity,
// 4 non-flat, 5 cocycle validation, 6 certificate verification,
// 7 insufficient samples, 8 resource cap.

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "abgeom/cocycle.hpp"
#include "abgeom/covering.hpp"
#include "abgeom/propagator.hpp"
#include "abgeom/scenario.hpp"
#include "abgeom/section.hpp"
#include "abgeom/serialize.hpp"

using namespace abgeom;

namespace {

enum Exit {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kGeneric = 3,
  kNonFlat = 4,
  kInvalid = 5,
  kUnverified = 6,
  kSamples = 7,
  kCap = 8,
};

// Raised for outcomes that are not exceptions in the library (a non-flat
// scan, a failed verification) but must end the process with a code.
struct Failure {
  int code;
  std::string message;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ABGEOM_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Failure{kParse, std::string("ABGEOM_SEED is not an unsigned integer: '") + env + "'"};
  }
  return 1;
}

void emit(const Json& j, const std::string& path) {
  const std::string text = dump_json(j);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kOther, "cannot write '" + path + "'"};
  out << text;
}

bool non_commuting(const FluxScenario& s) {
  for (std::size_t j = 0; j < s.fluxes.size(); ++j) {
    for (std::size_t k = j + 1; k < s.fluxes.size(); ++k) {
      if (commutator(s.fluxes[j], s.fluxes[k]).matrix().norm() > kCommutatorTol) return true;
    }
  }
  return false;
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

Json winding_json(const std::vector<long>& w) {
  Json j = Json::array();
  for (long v : w) j.push_back(v);
  return j;
}

// ---------------------------------------------------------------------------

struct ClassifyArgs {
  std::string scenario;
  std::string path;
};

void run_classify(const ClassifyArgs& a) {
  const auto file = load_scenario(a.scenario);
  const auto loop = load_path_csv(a.path);
  const auto& s = file.scenario;
  const Word w = word_of_loop(loop, s.punctures, s.rank);
  Json j;
  j["word"] = to_string(w);
  j["winding"] = winding_json(winding_numbers(loop, s.punctures));
  emit(j, "");
}

struct HolonomyArgs {
  std::string scenario;
  std::string word;
  std::string path;
  bool numeric = false;
  int steps = 10000;
  bool force = false;
};

void run_holonomy(const HolonomyArgs& a) {
  const auto file = load_scenario(a.scenario);
  const auto& s = file.scenario;
  const auto phi = HolonomyMap::from_scenario(s);
  if (a.word.empty() == a.path.empty()) throw Failure{kParse, "give exactly one of --word and --path"};
  if (a.numeric && a.path.empty()) throw Failure{kParse, "--numeric needs --path"};

  std::optional<PlanePath> loop;
  Word w(s.rank);
  if (!a.path.empty()) {
    loop = load_path_csv(a.path);
    if ((loop->vertices.front() - s.basepoint).norm() > kGenericTol) {
      throw Failure{kParse, "path does not start at the scenario basepoint"};
    }
    w = word_of_loop(*loop, s.punctures, s.rank);
  } else {
    w = parse_word(s.rank, a.word);
  }
  const GroupElement exact = holonomy_of_word(phi, w);
  Json j;
  j["group"] = std::string(to_string(s.group));
  j["word"] = to_string(w);
  j["holonomy"] = element_to_json(exact);
  if (a.numeric) {
    if (non_commuting(s) && !a.force) {
      throw Failure{kNonFlat, "scenario fluxes do not commute; the numeric Wilson loop is path dependent (use --force)"};
    }
    const GroupElement numeric = wilson_line(s, *loop, a.steps);
    j["numeric"] = element_to_json(numeric);
    j["steps"] = a.steps;
    j["distance"] = distance(numeric, exact);
  }
  emit(j, "");
}

struct CocycleArgs {
  int rank = 1;
  std::string group = "U1";
  std::optional<std::uint64_t> seed;
  std::string input;
  std::string output;
  int samples = 101;
};

void run_cocycle_gen(const CocycleArgs& a) {
  const auto c = random_cocycle(a.rank, parse_group_tag(a.group), a.seed.value_or(default_seed()));
  emit(cocycle_to_json(c), a.output);
}

void run_cocycle_validate(const CocycleArgs& a) {
  const auto c = cocycle_from_json(parse_json(read_text_file(a.input)));
  const auto r = validate_cocycle(c);
  emit(cocycle_report_to_json(r), a.output);
  if (!r.ok()) throw Failure{kInvalid, "cocycle invalid: " + r.violations.front().describe()};
}

void run_cocycle_trivialize(const CocycleArgs& a) {
  const auto c = cocycle_from_json(parse_json(read_text_file(a.input)));
  const Certificate cert{c, trivialize(c, a.samples), kConstructionTol};
  emit(certificate_to_json(cert), a.output);
}

void run_cocycle_verify(const CocycleArgs& a) {
  const auto cert = certificate_from_json(parse_json(read_text_file(a.input)));
  const auto r = verify_trivialization(cert.cocycle, cert.trivialization, cert.tolerance);
  emit(trivialization_report_to_json(r), a.output);
  if (!r.passed) {
    std::ostringstream msg;
    msg << "certificate rejected: coboundary residual " << r.max_coboundary_residual << " ("
        << r.worst_coboundary << "), max step " << r.max_step << " (" << r.worst_step << ")";
    throw Failure{kUnverified, msg.str()};
  }
}

struct InterfereArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string csv;
  std::string summary;
  std::string tables;
  bool baseline = false;
  int threads = 1;
};

void run_interfere(const InterfereArgs& a) {
  const auto file = load_scenario(a.scenario);
  if (!file.has_walks) throw Failure{kParse, "scenario has no \"walks\" section"};
  const std::uint64_t seed = a.seed.value_or(default_seed());
  const auto ensemble = file.ensemble(seed);
  const auto screen = file.screen_points();
  const auto phi = HolonomyMap::from_scenario(file.scenario);
  const auto scan = interference_scan(ensemble, screen, phi, a.threads);

  std::ostringstream csv;
  csv << "x,y,intensity\n";
  for (std::size_t i = 0; i < screen.size(); ++i) {
    csv << shortest(screen[i].x()) << ',' << shortest(screen[i].y()) << ','
        << shortest(scan.intensity[i]) << '\n';
  }
  if (a.csv.empty() || a.csv == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.csv, std::ios::binary);
    if (!out) throw Failure{kOther, "cannot write '" + a.csv + "'"};
    out << csv.str();
  }

  Json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["seed"] = seed;
  summary["steps"] = ensemble.steps;
  summary["samples"] = ensemble.samples;
  std::uint64_t accepted = 0;
  std::uint64_t overflow = 0;
  double mass = 0.0;
  for (const auto& t : scan.tables) {
    accepted += t.accepted;
    overflow += t.overflow;
    mass += t.mass();
  }
  summary["accepted"] = accepted;
  summary["mass"] = mass;
  summary["overflow_mass"] = static_cast<double>(overflow) / static_cast<double>(ensemble.samples);
  if (a.baseline) {
    // Zero-flux baseline from the same walks.
    std::vector<GroupElement> ids(static_cast<std::size_t>(file.scenario.rank), identity(file.scenario.group));
    const auto base = intensities(scan.tables, HolonomyMap::from_images(file.scenario.group, ids));
    summary["fringe_shift"] = fringe_shift(scan.intensity, base, screen);
  }
  if (!a.summary.empty()) emit(summary, a.summary);
  if (!a.tables.empty()) {
    Json t = Json::array();
    for (std::size_t i = 0; i < screen.size(); ++i) {
      Json row = class_table_to_json(scan.tables[i]);
      row["detector"] = {screen[i].x(), screen[i].y()};
      t.push_back(row);
    }
    emit(t, a.tables);
  }
}

struct CoverArgs {
  std::string scenario;
  int rank = 0;
  std::string word;
  std::string from;
  int radius = 1;
  std::size_t cap = kDefaultFiberCap;
  bool count_only = false;
};

int cover_rank(const CoverArgs& a) {
  if (!a.scenario.empty()) return load_scenario(a.scenario).scenario.rank;
  if (a.rank < 1) throw Failure{kParse, "give --rank or --scenario"};
  return a.rank;
}

void run_cover_lift(const CoverArgs& a) {
  const int n = cover_rank(a);
  const TreeVertex start = a.from.empty() ? TreeVertex::root(n) : TreeVertex(parse_word(n, a.from));
  Json j;
  j["start"] = to_string(start.word());
  j["end"] = to_string(lift_loop(parse_word(n, a.word), start).word());
  emit(j, "");
}

void run_cover_ball(const CoverArgs& a) {
  const int n = cover_rank(a);
  const auto ball = fiber_ball(n, a.radius, a.cap);
  Json j;
  j["rank"] = n;
  j["radius"] = a.radius;
  j["count"] = ball.size();
  if (!a.count_only) j["words"] = words_to_json(ball);
  emit(j, "");
}

void run_cover_monodromy(const CoverArgs& a) {
  if (a.scenario.empty()) throw Failure{kParse, "monodromy needs --scenario"};
  const auto s = load_scenario(a.scenario).scenario;
  const auto phi = HolonomyMap::from_scenario(s);
  const TreeVertex v(parse_word(s.rank, a.word));
  Json j;
  j["vertex"] = to_string(v.word());
  j["holonomy"] = element_to_json(monodromy_holonomy(phi, v));
  emit(j, "");
}

struct FlatArgs {
  std::string scenario;
  std::vector<double> origin{-1.0, -1.0};
  double cell = 0.05;
  int nx = 40;
  int ny = 40;
  int substeps = 4;
  int threads = 1;
};

void run_flatcheck(const FlatArgs& a) {
  const auto s = load_scenario(a.scenario).scenario;
  GridSpec g;
  g.origin = {a.origin[0], a.origin[1]};
  g.cell = a.cell;
  g.nx = a.nx;
  g.ny = a.ny;
  g.substeps = a.substeps;
  const auto r = verify_flatness(s, g, a.threads);
  emit(flatness_to_json(r), "");
  if (r.non_flat) throw Failure{kNonFlat, "NON-FLAT: flux commutator norm " + std::to_string(r.max_commutator)};
}

struct TransportArgs {
  std::string scenario;
  std::string path;
  std::vector<double> z;
  int steps = 10000;
  bool open = true;
};

void run_transport(const TransportArgs& a) {
  const auto s = load_scenario(a.scenario).scenario;
  const auto path = load_path_csv(a.path, !a.open);
  if (a.z.size() % 2 != 0) throw Failure{kParse, "--z takes re im pairs"};
  ComplexVector z0(static_cast<Eigen::Index>(a.z.size() / 2));
  for (Eigen::Index i = 0; i < z0.size(); ++i) z0(i) = Complex(a.z[2 * i], a.z[2 * i + 1]);
  const auto z = parallel_transport(s, z0, path, a.steps);
  Json j;
  j["steps"] = a.steps;
  j["z"] = Json::array();
  for (Eigen::Index i = 0; i < z.size(); ++i) j["z"].push_back(complex_to_json(z(i)));
  emit(j, "");
}

// ---------------------------------------------------------------------------

int error_code(const std::exception_ptr& e, std::string& message) {
  try {
    std::rethrow_exception(e);
  } catch (const Failure& f) {
    message = f.message;
    return f.code;
  } catch (const ParseError& x) {
    message = x.what();
    return kParse;
  } catch (const WordSyntaxError& x) {
    message = x.what();
    return kParse;
  } catch (const Json::exception& x) {
    message = std::string("bad JSON content: ") + x.what();
    return kParse;
  } catch (const ConfigError& x) {
    message = x.what();
    return kParse;
  } catch (const DegeneratePositionError& x) {
    message = x.what();
    return kGeneric;
  } catch (const PunctureLayoutError& x) {
    message = x.what();
    return kGeneric;
  } catch (const PunctureProximityError& x) {
    message = x.what();
    return kGeneric;
  } catch (const ValidationError& x) {
    message = x.what();
    return kInvalid;
  } catch (const InsufficientSamplesError& x) {
    message = x.what();
    return kSamples;
  } catch (const ResourceCapError& x) {
    message = x.what();
    return kCap;
  } catch (const std::invalid_argument& x) {
    message = x.what();
    return kParse;
  } catch (const std::exception& x) {
    message = x.what();
    return kOther;
  }
}

void one_line(std::string& s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aharonov-Bohm geometry toolkit: loop classes, holonomy, cocycles, covers, interference"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "abgeom 1.0");
  std::function<void()> action;

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Reduced word and winding numbers of a loop");
  classify->add_option("--scenario,-s", ca.scenario, "Scenario JSON")->required();
  classify->add_option("path", ca.path, "Loop CSV (x,y per line)")->required();
  classify->callback([&] { action = [&] { run_classify(ca); }; });

  HolonomyArgs ha;
  auto* holonomy = app.add_subcommand("holonomy", "Holonomy of a word or loop");
  holonomy->add_option("--scenario,-s", ha.scenario, "Scenario JSON")->required();
  holonomy->add_option("--word,-w", ha.word, "Word such as \"c1 c2^-1\"");
  holonomy->add_option("--path,-p", ha.path, "Loop CSV starting at the basepoint");
  holonomy->add_flag("--numeric", ha.numeric, "Also integrate the Wilson loop along --path");
  holonomy->add_option("--steps", ha.steps, "Wilson-line sub-steps")->check(CLI::PositiveNumber);
  holonomy->add_flag("--force", ha.force, "Integrate even when fluxes do not commute");
  holonomy->callback([&] { action = [&] { run_holonomy(ha); }; });

  CocycleArgs co;
  auto* cocycle = app.add_subcommand("cocycle", "Cocycles over the wedge of circles");
  cocycle->require_subcommand(1);
  auto* gen = cocycle->add_subcommand("gen", "Random valid cocycle");
  gen->add_option("--rank,-n", co.rank, "Number of circles")->check(CLI::PositiveNumber);
  gen->add_option("--group,-g", co.group, "U1, SU2, SU3 or SL2C");
  gen->add_option("--seed", co.seed, "Seed (default: $ABGEOM_SEED or 1)");
  gen->add_option("--output,-o", co.output, "Output file (default stdout)");
  gen->callback([&] { action = [&] { run_cocycle_gen(co); }; });
  auto* validate = cocycle->add_subcommand("validate", "Check cocycle conditions");
  validate->add_option("cocycle", co.input, "Cocycle JSON")->required();
  validate->add_option("--output,-o", co.output, "Report file (default stdout)");
  validate->callback([&] { action = [&] { run_cocycle_validate(co); }; });
  auto* triv = cocycle->add_subcommand("trivialize", "Build a trivialization certificate");
  triv->add_option("cocycle", co.input, "Cocycle JSON")->required();
  triv->add_option("--samples", co.samples, "Samples per set (odd)");
  triv->add_option("--output,-o", co.output, "Certificate file (default stdout)");
  triv->callback([&] { action = [&] { run_cocycle_trivialize(co); }; });
  auto* verify = cocycle->add_subcommand("verify", "Re-check a certificate");
  verify->add_option("certificate", co.input, "Certificate JSON")->required();
  verify->add_option("--output,-o", co.output, "Report file (default stdout)");
  verify->callback([&] { action = [&] { run_cocycle_verify(co); }; });

  InterfereArgs ia;
  auto* interfere = app.add_subcommand("interfere", "Lattice-walk interference pattern");
  interfere->add_option("--scenario,-s", ia.scenario, "Scenario JSON with walks/screen")->required();
  interfere->add_option("--seed", ia.seed, "Seed (default: $ABGEOM_SEED or 1)");
  interfere->add_option("--csv", ia.csv, "Intensity CSV (default stdout)");
  interfere->add_option("--summary", ia.summary, "Summary JSON");
  interfere->add_option("--tables", ia.tables, "Per-detector class tables JSON");
  interfere->add_flag("--baseline", ia.baseline, "Report the fringe shift against zero flux");
  interfere->add_option("--threads,-j", ia.threads, "Worker threads")->check(CLI::PositiveNumber);
  interfere->callback([&] { action = [&] { run_interfere(ia); }; });

  CoverArgs cv;
  auto* cover = app.add_subcommand("cover", "Universal cover of the wedge of circles");
  cover->require_subcommand(1);
  auto* lift = cover->add_subcommand("lift", "Endpoint of a lifted loop");
  lift->add_option("--scenario,-s", cv.scenario, "Scenario JSON (for the rank)");
  lift->add_option("--rank,-n", cv.rank, "Rank");
  lift->add_option("word", cv.word, "Loop word")->required();
  lift->add_option("--from", cv.from, "Start vertex word (default root)");
  lift->callback([&] { action = [&] { run_cover_lift(cv); }; });
  auto* ball = cover->add_subcommand("ball", "Fiber vertices within a radius");
  ball->add_option("--scenario,-s", cv.scenario, "Scenario JSON (for the rank)");
  ball->add_option("--rank,-n", cv.rank, "Rank");
  ball->add_option("--radius,-r", cv.radius, "Radius")->check(CLI::NonNegativeNumber);
  ball->add_option("--cap", cv.cap, "Maximum vertices to list");
  ball->add_flag("--count-only", cv.count_only, "Omit the word list");
  ball->callback([&] { action = [&] { run_cover_ball(cv); }; });
  auto* mono = cover->add_subcommand("monodromy", "Holonomy attached to a fiber vertex");
  mono->add_option("--scenario,-s", cv.scenario, "Scenario JSON")->required();
  mono->add_option("word", cv.word, "Vertex word")->required();
  mono->callback([&] { action = [&] { run_cover_monodromy(cv); }; });

  FlatArgs fa;
  auto* flat = app.add_subcommand("flatcheck", "Plaquette scan for curvature");
  flat->add_option("--scenario,-s", fa.scenario, "Scenario JSON")->required();
  flat->add_option("--origin", fa.origin, "Lower-left corner x y")->expected(2);
  flat->add_option("--cell", fa.cell, "Plaquette side")->check(CLI::PositiveNumber);
  flat->add_option("--nx", fa.nx, "Columns")->check(CLI::PositiveNumber);
  flat->add_option("--ny", fa.ny, "Rows")->check(CLI::PositiveNumber);
  flat->add_option("--substeps", fa.substeps, "Minimum sub-steps per side")->check(CLI::PositiveNumber);
  flat->add_option("--threads,-j", fa.threads, "Worker threads")->check(CLI::PositiveNumber);
  flat->callback([&] { action = [&] { run_flatcheck(fa); }; });

  TransportArgs ta;
  auto* transport = app.add_subcommand("transport", "Parallel transport of a fiber vector");
  transport->add_option("--scenario,-s", ta.scenario, "Scenario JSON")->required();
  transport->add_option("--path,-p", ta.path, "Path CSV")->required();
  transport->add_option("--z", ta.z, "Initial vector as re im pairs")->required();
  transport->add_option("--steps", ta.steps, "Sub-steps")->check(CLI::PositiveNumber);
  transport->add_flag("!--closed", ta.open, "Treat the path CSV as a closed loop");
  transport->callback([&] { action = [&] { run_transport(ta); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    one_line(msg);
    std::cerr << "error[E" << kParse << "]: " << msg << '\n';
    return kParse;
  }

  try {
    action();
    std::cout.flush();
    return kOk;
  } catch (...) {
    std::string msg;
    const int code = error_code(std::current_exception(), msg);
    one_line(msg);
    std::cout.flush();
    std::cerr << "error[E" << code << "]: " << msg << '\n';
    return code;
  }
}
