#include "galmon/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "galmon/errors.hpp"
#include "galmon/groups.hpp"
#include "galmon/monodromy.hpp"
#include "galmon/problems.hpp"
#include "galmon/tracker.hpp"

namespace galmon::cli {

namespace {

struct StartPair {
  CVector z;
  CVector x;
};

struct Problem {
  std::string name;
  GateSystem system;
  std::function<StartPair(Rng&)> fabricate;
  bool has_translation = false;
};

std::optional<Problem> builtin(const std::string& name) {
  if (name == "p3p")
    return Problem{name, p3p_system(), [](Rng& rng) {
                     const auto f = p3p_fabricate(rng);
                     return StartPair{f.instance.parameters(), f.solution.unknowns()};
                   }};
  if (name == "fivepoint")
    return Problem{name, fivepoint_system(),
                   [](Rng& rng) {
                     const auto f = fivepoint_fabricate(rng);
                     return StartPair{f.parameters, f.solution};
                   },
                   true};
  return std::nullopt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw Error("cannot write " + path);
}

// A built-in problem name or a system-source file.
Problem load_problem(const std::string& what) {
  if (auto p = builtin(what)) return *p;
  if (!std::filesystem::is_regular_file(what)) throw InvalidArgument("unknown problem: " + what);
  return Problem{what, parse_system(read_file(what)), {}};
}

StartPair read_start(const std::string& path, const GateSystem& sys) {
  const SolutionSet s = solutions_from_json(read_file(path));
  if (s.parameters.size() != sys.num_parameters()) throw InvalidArgument("start file: wrong parameter count");
  if (s.solutions.empty() || s.solutions.front().size() != sys.num_unknowns())
    throw InvalidArgument("start file: needs a solution with one entry per unknown");
  return {s.parameters, s.solutions.front()};
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

double max_abs_residual(const GateSystem& sys, const CVector& z, const CVector& x) {
  const CVector f = evaluate(sys, z, x);
  double r = 0.0;
  for (const auto& v : f) r = std::max(r, std::abs(v));
  return r;
}

class Clock {
public:
  explicit Clock(bool verbose, std::ostream& err) : verbose_(verbose), err_(err) {}
  void lap(const char* what) {
    const auto now = std::chrono::steady_clock::now();
    if (verbose_) err_ << what << ": " << std::chrono::duration<double>(now - last_).count() << " s\n";
    last_ = now;
  }

private:
  bool verbose_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Globals {
  std::uint64_t seed = 1;
  bool verbose = false;
};

// ---------------------------------------------------------------------------

struct FabricateArgs {
  std::string problem;
  std::string out_path;
};

int cmd_fabricate(const FabricateArgs& a, const Globals& g, std::ostream& out) {
  const auto p = builtin(a.problem);
  if (!p) throw InvalidArgument("unknown problem: " + a.problem);
  Rng rng(g.seed);
  const StartPair s = p->fabricate(rng);
  const double r = norm2(evaluate(p->system, s.z, s.x));
  const std::string json = solutions_to_json({s.z, {s.x}, {r}});
  if (!a.out_path.empty()) write_file(a.out_path, json + "\n");
  out << json << "\n";
  out << "residual: " << sci(r) << "\n";
  return r <= 1e-8 ? kOk : kFailure;
}

// ---------------------------------------------------------------------------

struct MonodromyArgs {
  std::string problem;
  std::size_t nodes = 5;
  std::size_t stabilization = 20;
  bool saturate = false;
  std::optional<std::size_t> target_count;
  std::string equivalencer;
  std::string start_path;
  std::string group_path;
  std::string solutions_path;
  unsigned threads = 1;
  double tolerance = 1e-8;
};

void report_group(const PermGroup& grp, std::ostream& out) {
  out << "order: " << grp.order() << "\n";
  if (grp.degree() > 1 && is_transitive(grp)) {
    const auto blocks = minimal_block_system(grp);
    out << "blocks: " << (blocks ? format_partition_1based(blocks->cells) : "none") << "\n";
  } else {
    out << "blocks: intransitive\n";
  }
  out << "even: " << (is_even_subgroup(grp) ? "true" : "false") << "\n";
}

int cmd_monodromy(const MonodromyArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  Clock clock(g.verbose, err);
  const Problem p = load_problem(a.problem);
  if (!a.equivalencer.empty() && !(a.equivalencer == "translation" && p.has_translation))
    throw InvalidArgument("equivalencer '" + a.equivalencer + "' is not available for " + p.name);
  if (a.nodes < 2) throw InvalidArgument("--nodes must be at least 2");
  if (p.system.num_outputs() < p.system.num_unknowns()) throw InvalidArgument("system is underdetermined");

  Rng rng(g.seed);
  StartPair start;
  if (!a.start_path.empty())
    start = read_start(a.start_path, p.system);
  else if (p.fabricate)
    start = p.fabricate(rng);
  else
    throw InvalidArgument("file-based systems need --start");
  clock.lap("start pair");

  GraphOptions gopts;
  gopts.n_nodes = a.nodes;
  if (!a.equivalencer.empty()) gopts.equivalencer = fivepoint_equivalencer;
  std::optional<GateSystem> square;
  if (p.system.num_outputs() > p.system.num_unknowns()) {
    square = square_up(p.system, start.z, start.x, rng).system;
    gopts.verifier = p.system;
  }
  HomotopyGraph graph = build_graph(square ? *square : p.system, start.z, start.x, gopts, rng);

  MonodromyOptions mopts;
  mopts.stabilization_limit = a.stabilization;
  mopts.saturate = a.saturate;
  mopts.target_count = a.target_count;
  mopts.threads = a.threads;
  TrackerOptions topts;
  topts.corrector_tolerance = a.tolerance;
  const MonodromyResult res = run(graph, mopts, topts);
  clock.lap("monodromy");

  const std::size_t d = res.solutions.size();
  if (!a.group_path.empty()) write_file(a.group_path, export_perm_script(res.permutations) + "\n");
  if (!a.solutions_path.empty())
    write_file(a.solutions_path,
               solutions_to_json({start.z, res.solutions, residuals(p.system, start.z, res.solutions)}) + "\n");

  out << (a.equivalencer.empty() ? "solutions: " : "classes: ") << d << "\n";
  out << "loops: " << res.loops_run << "\n";
  out << "paths: " << res.paths_tracked << "\n";
  out << "failures: " << res.failures << "\n";
  out << "stopped-by: " << to_string(res.stopped_by) << "\n";
  out << "permutations: " << res.permutations.size() << "\n";

  const PermGroup grp(d, res.permutations);
  report_group(grp, out);
  clock.lap("group analysis");
  try {
    out << "width: " << galois_width(grp) << "\n";
  } catch (const UnsupportedGroup& e) {
    out << "width: unsupported\n";
    err << "error: " << e.what() << "\n";
    return kUnsupportedGroup;
  }
  clock.lap("galois width");
  return kOk;
}

// ---------------------------------------------------------------------------

struct TrackArgs {
  std::string problem;
  std::string start_path;
  std::string target_path;
  bool random_real_target = false;
  std::string out_path;
  unsigned threads = 1;
};

int cmd_track(const TrackArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  Clock clock(g.verbose, err);
  const Problem p = load_problem(a.problem);
  const SolutionSet start = solutions_from_json(read_file(a.start_path));
  if (start.parameters.size() != p.system.num_parameters()) throw InvalidArgument("start file: wrong parameter count");
  if (start.solutions.empty()) throw InvalidArgument("start file has no solutions");
  for (const auto& x : start.solutions)
    if (x.size() != p.system.num_unknowns()) throw InvalidArgument("start file: wrong solution length");
  if (a.random_real_target == !a.target_path.empty())
    throw InvalidArgument("give exactly one of --target and --random-real-target");

  Rng rng(g.seed);
  CVector target;
  if (a.random_real_target) {
    target = random_real_vector(rng, p.system.num_parameters());
  } else {
    target = solutions_from_json(read_file(a.target_path)).parameters;
    if (target.size() != p.system.num_parameters()) throw InvalidArgument("target file: wrong parameter count");
  }

  GateSystem sys = p.system;
  if (sys.num_outputs() > sys.num_unknowns()) sys = square_up(p.system, start.parameters, start.solutions[0], rng).system;
  if (sys.num_outputs() != sys.num_unknowns()) throw InvalidArgument("system is underdetermined");
  const PathSegment seg{start.parameters, target, random_unit_complex(rng), random_unit_complex(rng)};
  const auto results = track_many(sys, seg, start.solutions, {}, a.threads);
  clock.lap("tracking");

  std::vector<CVector> endpoints;
  std::size_t ok = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].ok()) {
      ++ok;
      endpoints.push_back(results[i].endpoint);
    } else {
      err << "path " << i << ": " << to_string(results[i].status) << "\n";
    }
  }
  if (p.name == "fivepoint") {
    const std::size_t n = endpoints.size();
    for (std::size_t i = 0; i < n; ++i) endpoints.push_back(twisted_pair(endpoints[i]));
  }
  double worst = 0.0;
  for (const auto& x : endpoints) worst = std::max(worst, max_abs_residual(p.system, target, x));

  if (!a.out_path.empty())
    write_file(a.out_path, solutions_to_json({target, endpoints, residuals(p.system, target, endpoints)}) + "\n");
  out << "paths: " << results.size() << "\n";
  out << "succeeded: " << ok << "\n";
  out << "solutions: " << endpoints.size() << "\n";
  out << "max-residual: " << sci(worst) << "\n";
  return ok == results.size() ? kOk : kTrackingFailure;
}

// ---------------------------------------------------------------------------

struct GroupArgs {
  std::string path;
  bool order = false;
  bool blocks = false;
  bool width = false;
  bool even = false;
};

int cmd_group(GroupArgs a, std::ostream& out, std::ostream& err) {
  const auto perms = parse_perm_script(read_file(a.path));
  if (!(a.order || a.blocks || a.width || a.even)) a.order = a.blocks = a.width = a.even = true;
  const std::size_t degree = perms.empty() ? 0 : perms.front().degree();
  const PermGroup grp(degree, perms);
  out << "degree: " << degree << "\n";
  out << "generators: " << perms.size() << "\n";
  if (a.order) out << "order: " << grp.order() << "\n";
  if (a.blocks) {
    if (degree > 1 && is_transitive(grp)) {
      const auto blocks = minimal_block_system(grp);
      out << "blocks: " << (blocks ? format_partition_1based(blocks->cells) : "none") << "\n";
    } else {
      out << "blocks: intransitive\n";
    }
  }
  if (a.even) out << "even: " << (is_even_subgroup(grp) ? "true" : "false") << "\n";
  if (a.width) {
    try {
      out << "width: " << galois_width(grp) << "\n";
    } catch (const UnsupportedGroup& e) {
      err << "error: " << e.what() << "\n";
      return kUnsupportedGroup;
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct RansacArgs {
  std::int64_t n = 0;
  std::int64_t k = 0;
  double p_inlier = 0.5;
  double s = 0.95;
  std::vector<std::int64_t> table;
};

int cmd_ransac(const RansacArgs& a, std::ostream& out) {
  if (!a.table.empty()) {
    out << ransac_table_csv(a.table[0], a.table[1], a.p_inlier, a.s);
    return kOk;
  }
  out << ransac_trials(a.n, a.k, a.p_inlier, a.s) << "\n";
  return kOk;
}

int exit_code(const Error& e) {
  if (dynamic_cast<const RankDeficient*>(&e)) return kRankDeficient;
  if (dynamic_cast<const TrackFailureRate*>(&e)) return kTrackingFailure;
  if (dynamic_cast<const UnsupportedGroup*>(&e)) return kUnsupportedGroup;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const InvalidProbability*>(&e) || dynamic_cast<const NoInlierSample*>(&e) ||
      dynamic_cast<const MixedDegree*>(&e))
    return kUsage;
  return kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical monodromy solver and Galois group analysis", "galmon"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_flag("--verbose", g.verbose, "Timings on stderr");

  FabricateArgs fa;
  auto* fab = app.add_subcommand("fabricate", "Fabricate a problem-solution pair");
  fab->add_option("problem", fa.problem, "p3p or fivepoint")->required();
  fab->add_option("--out", fa.out_path, "Also write the JSON here");

  MonodromyArgs ma;
  auto* mono = app.add_subcommand("monodromy", "Solve by monodromy and analyze the group");
  mono->add_option("problem", ma.problem, "p3p, fivepoint, or a system file")->required();
  mono->add_option("--nodes", ma.nodes, "Nodes of the homotopy graph")->capture_default_str();
  mono->add_option("--stabilization", ma.stabilization, "Crossings without progress before stopping")
      ->capture_default_str();
  mono->add_flag("--saturate", ma.saturate, "Run until every edge is saturated");
  mono->add_option("--target-count", ma.target_count, "Stop once the base has this many solutions");
  mono->add_option("--equivalencer", ma.equivalencer, "translation (fivepoint only)");
  mono->add_option("--start", ma.start_path, "Start pair as solutions JSON");
  mono->add_option("--out-group", ma.group_path, "Write the permutations as a perm-script");
  mono->add_option("--out-solutions", ma.solutions_path, "Write the solutions JSON");
  mono->add_option("--threads", ma.threads, "Tracking threads")->capture_default_str();
  mono->add_option("--tolerance", ma.tolerance, "Corrector tolerance")->capture_default_str();

  TrackArgs ta;
  auto* trk = app.add_subcommand("track", "Track start solutions to a target instance");
  trk->add_option("problem", ta.problem, "p3p, fivepoint, or a system file")->required();
  trk->add_option("--start", ta.start_path, "Start parameters and solutions (JSON)")->required();
  trk->add_option("--target", ta.target_path, "Target parameters (JSON)");
  trk->add_flag("--random-real-target", ta.random_real_target, "Draw real Gaussian target parameters");
  trk->add_option("--out", ta.out_path, "Write the endpoints JSON");
  trk->add_option("--threads", ta.threads, "Tracking threads")->capture_default_str();

  GroupArgs ga;
  auto* grp = app.add_subcommand("group", "Analyze a perm-script file");
  grp->add_option("file", ga.path)->required();
  grp->add_flag("--order", ga.order);
  grp->add_flag("--blocks", ga.blocks);
  grp->add_flag("--width", ga.width);
  grp->add_flag("--even", ga.even);

  RansacArgs ra;
  auto* ran = app.add_subcommand("ransac-trials", "Number of RanSaC trials");
  ran->add_option("--n", ra.n, "Correspondences");
  ran->add_option("--k", ra.k, "Sample size");
  ran->add_option("--p-inlier", ra.p_inlier, "Inlier fraction")->capture_default_str();
  ran->add_option("--s", ra.s, "Required success probability")->capture_default_str();
  ran->add_option("--table", ra.table, "CSV over n_min..n_max for k = 3..6")->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*fab) return cmd_fabricate(fa, g, out);
    if (*mono) return cmd_monodromy(ma, g, out, err);
    if (*trk) return cmd_track(ta, g, out, err);
    if (*grp) return cmd_group(ga, out, err);
    if (*ran) {
      if (ra.table.empty() && (ra.n == 0 || ra.k == 0)) throw InvalidArgument("ransac-trials needs --n and --k");
      return cmd_ransac(ra, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e);
  }
  return kUsage;
}

}  // namespace galmon::cli
