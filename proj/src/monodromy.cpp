#include "galmon/monodromy.hpp"

#include <algorithm>

#include <json.hpp>

#include "galmon/errors.hpp"

namespace galmon {

// ---------------------------------------------------------------------------
// Registry

SolutionRegistry::SolutionRegistry(double tolerance, Equivalencer equivalencer)
    : tolerance_(tolerance), equivalencer_(std::move(equivalencer)) {
  if (!(tolerance > 0.0)) throw InvalidArgument("dedup tolerance must be positive");
}

CVector SolutionRegistry::key(std::span<const Complex> x) const {
  return equivalencer_ ? equivalencer_(x) : CVector(x.begin(), x.end());
}

std::optional<std::size_t> SolutionRegistry::find(std::span<const Complex> x) const {
  const CVector k = key(x);
  for (std::size_t id = 0; id < keys_.size(); ++id) {
    if (keys_[id].size() != k.size()) continue;
    double diff = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) diff = std::max(diff, std::abs(k[i] - keys_[id][i]));
    if (diff <= tolerance_ * (1.0 + norm_inf(keys_[id]))) return id;
  }
  return std::nullopt;
}

std::pair<std::size_t, bool> SolutionRegistry::insert(std::span<const Complex> x) {
  if (auto id = find(x)) return {*id, false};
  solutions_.emplace_back(x.begin(), x.end());
  keys_.push_back(key(x));
  return {solutions_.size() - 1, true};
}

// ---------------------------------------------------------------------------
// Graph

HomotopyGraph build_graph(const GateSystem& sys, const CVector& z0, const CVector& x0, const GraphOptions& opts,
                          Rng& rng) {
  if (opts.n_nodes < 2) throw InvalidArgument("monodromy graph needs at least 2 nodes");
  if (sys.num_outputs() != sys.num_unknowns()) throw InvalidArgument("monodromy needs a square system");
  if (z0.size() != sys.num_parameters() || x0.size() != sys.num_unknowns())
    throw InvalidArgument("start pair has the wrong dimensions");
  const double r = norm2(evaluate(sys, z0, x0));
  if (!(r <= 1e-8 * (1.0 + norm_inf(x0)))) throw InvalidArgument("start pair residual exceeds 1e-8");
  if (numerical_rank(jacobian_unknowns(sys, z0, x0)) < sys.num_unknowns())
    throw RankDeficient("Jacobian at the start pair is rank deficient");

  HomotopyGraph g{sys, {}, {}, opts.verifier, opts.verifier_tolerance};
  for (std::size_t v = 0; v < opts.n_nodes; ++v) {
    CVector z = v == 0 ? z0 : random_complex_vector(rng, sys.num_parameters());
    g.nodes.push_back({std::move(z), SolutionRegistry(opts.dedup_tolerance, opts.equivalencer)});
  }
  g.nodes[0].registry.insert(x0);
  for (std::size_t a = 0; a < opts.n_nodes; ++a)
    for (std::size_t b = a + 1; b < opts.n_nodes; ++b) {
      HomotopyEdge e;
      e.from = a;
      e.to = b;
      const Complex ga = random_unit_complex(rng);
      const Complex gb = random_unit_complex(rng);
      e.segment = {g.nodes[a].z, g.nodes[b].z, ga, gb};
      g.edges.push_back(std::move(e));
    }
  return g;
}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Stabilization:
      return "stabilization";
    case StopReason::Saturation:
      return "saturation";
    case StopReason::TargetCount:
      return "target-count";
  }
  return "unknown";
}

namespace {

template <typename T>
T& slot(std::vector<T>& v, std::size_t i) {
  if (v.size() <= i) v.resize(i + 1);
  return v[i];
}

template <typename T>
T get(const std::vector<T>& v, std::size_t i) {
  return i < v.size() ? v[i] : T{};
}

class Scheduler {
public:
  Scheduler(HomotopyGraph& g, const MonodromyOptions& opts, const TrackerOptions& topts, MonodromyResult& res)
      : g_(g), opts_(opts), topts_(topts), res_(res) {}

  std::vector<std::size_t> pending(const HomotopyEdge& e, bool forward) const {
    const auto& src = g_.nodes[forward ? e.from : e.to].registry;
    const auto& tried = forward ? e.tried_forward : e.tried_backward;
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < src.size(); ++id)
      if (!get(tried, id)) ids.push_back(id);
    return ids;
  }

  // Tracks every pending solution across one edge direction; returns whether
  // the destination registry grew.
  bool cross(HomotopyEdge& e, bool forward) {
    const std::vector<std::size_t> ids = pending(e, forward);
    const BasePoint& src = g_.nodes[forward ? e.from : e.to];
    BasePoint& dst = g_.nodes[forward ? e.to : e.from];
    auto& map = forward ? e.forward : e.backward;
    auto& inverse = forward ? e.backward : e.forward;
    auto& tried = forward ? e.tried_forward : e.tried_backward;
    auto& tried_back = forward ? e.tried_backward : e.tried_forward;

    std::vector<CVector> starts;
    for (std::size_t id : ids) starts.push_back(src.registry[id]);
    const PathSegment seg = forward ? e.segment : e.segment.reversed();
    auto results = track_many(g_.system, seg, starts, topts_, opts_.threads);
    res_.paths_tracked += ids.size();

    // Paths that failed or ended off the verifier get one slower retry along the same path.
    std::vector<std::size_t> again;
    std::vector<CVector> again_starts;
    for (std::size_t k = 0; k < ids.size(); ++k)
      if (!accepted(results[k], dst.z)) {
        again.push_back(k);
        again_starts.push_back(starts[k]);
      }
    if (!again.empty()) {
      const auto retried = track_many(g_.system, seg, again_starts, careful(topts_), opts_.threads);
      res_.paths_tracked += again.size();
      for (std::size_t k = 0; k < again.size(); ++k)
        if (retried[k].ok() || !results[again[k]].ok()) results[again[k]] = retried[k];
    }

    bool grew = false;
    std::size_t track_failures = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const std::size_t id = ids[k];
      slot(tried, id) = 1;
      if (!results[k].ok()) {
        ++track_failures;
        ++res_.failures;
        continue;
      }
      const CVector& y = results[k].endpoint;
      if (g_.verifier && !(norm2(evaluate(*g_.verifier, dst.z, y)) <= g_.verifier_tolerance)) {
        ++res_.failures;
        continue;
      }
      std::size_t target;
      if (auto found = dst.registry.find(y)) {
        target = *found;
        // A second source landing on the same solution means a path jumped.
        if (auto prev = get(inverse, target); prev && *prev != id) {
          ++res_.failures;
          continue;
        }
      } else {
        target = dst.registry.insert(y).first;
        grew = true;
      }
      slot(map, id) = target;
      slot(inverse, target) = id;
      slot(tried_back, target) = 1;
    }
    if (ids.size() >= 4 && 2 * track_failures > ids.size())
      throw TrackFailureRate(std::to_string(track_failures) + " of " + std::to_string(ids.size()) +
                             " paths failed on one edge crossing");
    return grew;
  }

  bool accepted(const TrackResult& r, const CVector& z) const {
    return r.ok() && (!g_.verifier || norm2(evaluate(*g_.verifier, z, r.endpoint)) <= g_.verifier_tolerance);
  }

  static TrackerOptions careful(TrackerOptions o) {
    o.initial_step = std::min(o.initial_step, 0.01);
    o.max_step = std::min(o.max_step, 0.05);
    o.min_step = std::min(o.min_step, 1e-9);
    o.max_steps *= 10;
    return o;
  }

  StopReason loop() {
    std::size_t stall = 0;
    for (;;) {
      if (opts_.target_count && g_.nodes[0].registry.size() >= *opts_.target_count) return StopReason::TargetCount;
      HomotopyEdge* best = nullptr;
      bool best_forward = true;
      std::size_t best_count = 0;
      for (auto& e : g_.edges)
        for (bool forward : {true, false}) {
          const std::size_t c = pending(e, forward).size();
          if (c > best_count) {
            best = &e;
            best_forward = forward;
            best_count = c;
          }
        }
      if (!best) return StopReason::Saturation;
      const bool grew = cross(*best, best_forward);
      ++res_.loops_run;
      stall = grew ? 0 : stall + 1;
      if (!opts_.saturate && stall >= opts_.stabilization_limit) return StopReason::Stabilization;
    }
  }

private:
  HomotopyGraph& g_;
  const MonodromyOptions& opts_;
  const TrackerOptions& topts_;
  MonodromyResult& res_;
};

}  // namespace

MonodromyResult run(HomotopyGraph& graph, const MonodromyOptions& opts, const TrackerOptions& tracker_opts) {
  tracker_opts.validate();
  if (opts.stabilization_limit == 0) throw InvalidArgument("stabilization limit must be positive");
  MonodromyResult res;
  res.stopped_by = Scheduler(graph, opts, tracker_opts, res).loop();
  res.solutions = graph.nodes[0].registry.solutions();
  res.permutations = permutations(graph, opts.max_cycles);
  return res;
}

// ---------------------------------------------------------------------------
// Loop permutations

namespace {

class CycleWalker {
public:
  CycleWalker(const HomotopyGraph& g, std::size_t max_cycles) : g_(g), max_cycles_(max_cycles) {
    const std::size_t n = g.nodes.size();
    edge_of_.assign(n * n, 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      edge_of_[g.edges[i].from * n + g.edges[i].to] = i;
      edge_of_[g.edges[i].to * n + g.edges[i].from] = i;
    }
  }

  std::vector<Permutation> run() {
    if (g_.nodes.size() == 2) {
      emit({0, 1});
    } else {
      std::vector<std::size_t> path{0};
      std::vector<char> used(g_.nodes.size(), 0);
      used[0] = 1;
      extend(path, used);
    }
    return std::move(out_);
  }

private:
  void extend(std::vector<std::size_t>& path, std::vector<char>& used) {
    if (cycles_ >= max_cycles_) return;
    if (path.size() >= 3 && path[1] < path.back()) emit(path);
    for (std::size_t v = 1; v < g_.nodes.size(); ++v) {
      if (used[v]) continue;
      used[v] = 1;
      path.push_back(v);
      extend(path, used);
      path.pop_back();
      used[v] = 0;
    }
  }

  std::optional<std::size_t> step(std::size_t a, std::size_t b, std::size_t id) const {
    const HomotopyEdge& e = g_.edges[edge_of_[a * g_.nodes.size() + b]];
    return get(a < b ? e.forward : e.backward, id);
  }

  void emit(const std::vector<std::size_t>& cycle) {
    ++cycles_;
    const std::size_t d = g_.nodes[0].registry.size();
    std::vector<Point> images(d);
    std::vector<char> hit(d, 0);
    for (std::size_t id = 0; id < d; ++id) {
      std::optional<std::size_t> cur = id;
      for (std::size_t k = 0; k < cycle.size() && cur; ++k) cur = step(cycle[k], cycle[(k + 1) % cycle.size()], *cur);
      if (!cur || *cur >= d || hit[*cur]) return;
      hit[*cur] = 1;
      images[id] = static_cast<Point>(*cur);
    }
    out_.emplace_back(std::move(images));
  }

  const HomotopyGraph& g_;
  std::size_t max_cycles_;
  std::size_t cycles_ = 0;
  std::vector<std::size_t> edge_of_;
  std::vector<Permutation> out_;
};

}  // namespace

std::vector<Permutation> permutations(const HomotopyGraph& graph, std::size_t max_cycles) {
  return CycleWalker(graph, max_cycles).run();
}

// ---------------------------------------------------------------------------
// Solutions JSON

using nlohmann::json;

namespace {

json to_json(const CVector& v) {
  json a = json::array();
  for (const Complex& c : v) a.push_back({c.real(), c.imag()});
  return a;
}

CVector from_json(const json& a) {
  if (!a.is_array()) throw ParseError("expected an array of [re, im] pairs", 1, 1);
  CVector v;
  for (const auto& c : a) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw ParseError("expected a [re, im] pair", 1, 1);
    v.emplace_back(c[0].get<double>(), c[1].get<double>());
  }
  return v;
}

}  // namespace

std::string solutions_to_json(const SolutionSet& set) {
  json j;
  j["parameters"] = to_json(set.parameters);
  j["solutions"] = json::array();
  for (const auto& s : set.solutions) j["solutions"].push_back(to_json(s));
  j["residuals"] = set.residuals;
  return j.dump();
}

SolutionSet solutions_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte);
  }
  if (!j.is_object()) throw ParseError("expected a JSON object", 1, 1);
  SolutionSet set;
  if (j.contains("parameters")) set.parameters = from_json(j["parameters"]);
  if (j.contains("solutions")) {
    if (!j["solutions"].is_array()) throw ParseError("\"solutions\" must be an array", 1, 1);
    for (const auto& s : j["solutions"]) set.solutions.push_back(from_json(s));
  }
  if (j.contains("residuals")) {
    if (!j["residuals"].is_array()) throw ParseError("\"residuals\" must be an array", 1, 1);
    for (const auto& r : j["residuals"]) {
      if (!r.is_number()) throw ParseError("residuals must be numbers", 1, 1);
      set.residuals.push_back(r.get<double>());
    }
  }
  return set;
}

std::vector<double> residuals(const GateSystem& sys, const CVector& z, const std::vector<CVector>& solutions) {
  std::vector<double> r;
  for (const auto& x : solutions) r.push_back(norm2(evaluate(sys, z, x)));
  return r;
}

}  // namespace galmon
