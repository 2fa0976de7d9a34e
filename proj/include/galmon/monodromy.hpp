#pragma once

// Monodromy solving over a complete graph of parameter-homotopy edges.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "galmon/groups.hpp"
#include "galmon/linalg.hpp"
#include "galmon/random.hpp"
#include "galmon/slp.hpp"
#include "galmon/tracker.hpp"

namespace galmon {

/// Maps a solution vector to the key under which solutions are identified.
using Equivalencer = std::function<CVector(std::span<const Complex>)>;

/// Solutions with stable ids in insertion order; duplicates are detected in
/// the relative max-norm, on keys when an equivalencer is set.
class SolutionRegistry {
public:
  explicit SolutionRegistry(double tolerance = 1e-6, Equivalencer equivalencer = {});

  std::optional<std::size_t> find(std::span<const Complex> x) const;
  /// Returns the id of x and whether it was new.
  std::pair<std::size_t, bool> insert(std::span<const Complex> x);

  std::size_t size() const { return solutions_.size(); }
  const CVector& operator[](std::size_t id) const { return solutions_[id]; }
  const std::vector<CVector>& solutions() const { return solutions_; }

private:
  CVector key(std::span<const Complex> x) const;

  double tolerance_;
  Equivalencer equivalencer_;
  std::vector<CVector> solutions_;
  std::vector<CVector> keys_;
};

struct BasePoint {
  CVector z;
  SolutionRegistry registry;
};

/// Edge between nodes a < b. `forward[i]` is the id at b reached from id i
/// at a; `backward` is its inverse. The attempted flags mark ids already
/// sent across in each direction.
struct HomotopyEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  PathSegment segment;
  std::vector<std::optional<std::size_t>> forward;
  std::vector<std::optional<std::size_t>> backward;
  std::vector<char> tried_forward;
  std::vector<char> tried_backward;
};

struct GraphOptions {
  std::size_t n_nodes = 5;
  double dedup_tolerance = 1e-6;
  Equivalencer equivalencer;
  /// When set, endpoints whose residual against this system exceeds
  /// `verifier_tolerance` are rejected (e.g. the system before square-up).
  std::optional<GateSystem> verifier;
  double verifier_tolerance = 1e-4;
};

struct HomotopyGraph {
  GateSystem system;
  std::vector<BasePoint> nodes;
  std::vector<HomotopyEdge> edges;
  std::optional<GateSystem> verifier;
  double verifier_tolerance = 1e-4;
};

/// Requires a square system, residual of (z0, x0) at most 1e-8 relative to
/// 1 + |x0| and a full-rank Jacobian (RankDeficient otherwise).
HomotopyGraph build_graph(const GateSystem& sys, const CVector& z0, const CVector& x0, const GraphOptions& opts,
                          Rng& rng);

struct MonodromyOptions {
  std::size_t stabilization_limit = 20;
  bool saturate = false;
  std::optional<std::size_t> target_count;
  unsigned threads = 1;
  std::size_t max_cycles = 1000;
};

enum class StopReason { Stabilization, Saturation, TargetCount };
const char* to_string(StopReason r);

struct MonodromyResult {
  std::vector<CVector> solutions;
  std::vector<Permutation> permutations;
  std::size_t loops_run = 0;
  std::size_t paths_tracked = 0;
  std::size_t failures = 0;
  StopReason stopped_by = StopReason::Stabilization;
};

/// Throws TrackFailureRate when more than half of the paths of one edge
/// crossing (of at least four) fail.
MonodromyResult run(HomotopyGraph& graph, const MonodromyOptions& opts = {}, const TrackerOptions& tracker_opts = {});

/// Permutations of the base solutions along every simple cycle through node
/// 0 whose correspondences are total.
std::vector<Permutation> permutations(const HomotopyGraph& graph, std::size_t max_cycles = 1000);

struct SolutionSet {
  CVector parameters;
  std::vector<CVector> solutions;
  std::vector<double> residuals;
};

/// {"parameters": [[re,im],...], "solutions": [[[re,im],...],...], "residuals": [...]}
std::string solutions_to_json(const SolutionSet& set);
/// Throws ParseError on malformed input.
SolutionSet solutions_from_json(std::string_view text);

/// Residual norms of `solutions` against `sys` at parameters z.
std::vector<double> residuals(const GateSystem& sys, const CVector& z, const std::vector<CVector>& solutions);

}  // namespace galmon
