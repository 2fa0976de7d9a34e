#include <algorithm>
#include <numeric>
#include <set>

#include "galmon/errors.hpp"
#include "galmon/groups.hpp"

namespace galmon {

// ---------------------------------------------------------------------------
// Stabilizer chain (deterministic Schreier-Sims)

StabilizerChain::StabilizerChain(std::size_t degree, const std::vector<Permutation>& generators,
                                 const std::vector<Point>& base_prefix)
    : degree_(degree) {
  std::vector<char> used(degree, 0);
  for (Point b : base_prefix) {
    if (b >= degree || used[b]) throw InvalidArgument("base prefix has repeated or out-of-range points");
    used[b] = 1;
    levels_.push_back({b, {}, {}, {}});
  }
  std::vector<Permutation> gens;
  for (const auto& g : generators) {
    if (g.degree() != degree) throw MixedDegree("generator degree differs from group degree");
    if (!g.is_identity() && std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
  }
  for (const auto& g : gens) {
    const bool fixes_base =
        std::all_of(levels_.begin(), levels_.end(), [&](const Level& l) { return g[l.point] == l.point; });
    if (!fixes_base) continue;
    for (Point p = 0; p < degree; ++p)
      if (g[p] != p) {
        levels_.push_back({p, {}, {}, {}});
        break;
      }
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    for (const auto& g : gens) {
      bool fixes = true;
      for (std::size_t j = 0; j < i && fixes; ++j) fixes = g[levels_[j].point] == levels_[j].point;
      if (fixes) levels_[i].gens.push_back(g);
    }
    rebuild_transversal(levels_[i]);
  }
  build(static_cast<std::ptrdiff_t>(levels_.size()) - 1);
  for (const auto& l : levels_) base_.push_back(l.point);
}

bool StabilizerChain::add_generator(const Permutation& g) {
  if (g.degree() != degree_) throw MixedDegree("generator degree differs from group degree");
  auto [h, j] = strip(g, 0);
  if (j == levels_.size() && h.is_identity()) return false;
  if (j == levels_.size()) {
    Point moved = 0;
    while (h[moved] == moved) ++moved;
    levels_.push_back({moved, {}, {}, {}});
    base_.push_back(moved);
  }
  for (std::size_t l = 0; l <= j; ++l) {
    levels_[l].gens.push_back(h);
    rebuild_transversal(levels_[l]);
  }
  build(static_cast<std::ptrdiff_t>(j));
  base_.clear();
  for (const auto& l : levels_) base_.push_back(l.point);
  return true;
}

void StabilizerChain::rebuild_transversal(Level& lvl) const {
  lvl.transversal.assign(degree_, std::nullopt);
  lvl.inverse.assign(degree_, std::nullopt);
  lvl.transversal[lvl.point] = Permutation::identity(degree_);
  lvl.inverse[lvl.point] = lvl.transversal[lvl.point];
  std::vector<Point> queue{lvl.point};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Point gamma = queue[q];
    for (const auto& s : lvl.gens) {
      const Point delta = s[gamma];
      if (!lvl.transversal[delta]) {
        lvl.transversal[delta] = *lvl.transversal[gamma] * s;
        lvl.inverse[delta] = lvl.transversal[delta]->inverse();
        queue.push_back(delta);
      }
    }
  }
}

std::pair<Permutation, std::size_t> StabilizerChain::strip(const Permutation& g, std::size_t start) const {
  Permutation h = g;
  for (std::size_t l = start; l < levels_.size(); ++l) {
    const Point beta = h[levels_[l].point];
    const auto& u_inv = levels_[l].inverse[beta];
    if (!u_inv) return {h, l};
    h = h * *u_inv;
  }
  return {h, levels_.size()};
}

void StabilizerChain::build(std::ptrdiff_t from) {
  std::ptrdiff_t i = from;
  while (i >= 0) {
    bool extended = false;
    const std::size_t li = static_cast<std::size_t>(i);
    for (Point beta = 0; beta < degree_ && !extended; ++beta) {
      if (!levels_[li].transversal[beta]) continue;
      for (std::size_t si = 0; si < levels_[li].gens.size(); ++si) {
        const Permutation& s = levels_[li].gens[si];
        const Permutation& u_beta = *levels_[li].transversal[beta];
        const Permutation schreier = u_beta * s * *levels_[li].inverse[s[beta]];
        if (schreier.is_identity()) continue;
        auto [h, j] = strip(schreier, li + 1);
        if (j == levels_.size() && h.is_identity()) continue;
        if (j == levels_.size()) {
          Point moved = 0;
          while (h[moved] == moved) ++moved;
          levels_.push_back({moved, {}, {}, {}});
        }
        for (std::size_t l = li + 1; l <= j; ++l) {
          levels_[l].gens.push_back(h);
          rebuild_transversal(levels_[l]);
        }
        i = static_cast<std::ptrdiff_t>(j);
        extended = true;
        break;
      }
    }
    if (!extended) --i;
  }
}

BigInt StabilizerChain::order() const {
  BigInt n = 1;
  for (const auto& l : levels_)
    n *= static_cast<unsigned>(std::count_if(l.transversal.begin(), l.transversal.end(),
                                             [](const auto& u) { return u.has_value(); }));
  return n;
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.degree() != degree_) return false;
  auto [h, j] = strip(g, 0);
  return j == levels_.size() && h.is_identity();
}

std::vector<Point> StabilizerChain::orbit(std::size_t level) const {
  std::vector<Point> out;
  for (Point p = 0; p < degree_; ++p)
    if (levels_[level].transversal[p]) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// PermGroup

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators)
    : degree_(degree), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.degree() != degree_) throw MixedDegree("generators must share one degree");
}

PermGroup::PermGroup(std::vector<Permutation> generators) : degree_(0), generators_(std::move(generators)) {
  if (!generators_.empty()) degree_ = generators_.front().degree();
  for (const auto& g : generators_)
    if (g.degree() != degree_) throw MixedDegree("generators must share one degree");
}

bool PermGroup::is_trivial() const {
  return std::all_of(generators_.begin(), generators_.end(), [](const auto& g) { return g.is_identity(); });
}

const StabilizerChain& PermGroup::chain() const {
  if (!chain_) chain_.emplace(degree_, generators_);
  return *chain_;
}

// ---------------------------------------------------------------------------
// Orbits and blocks

namespace {

class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0U); }
  Point find(Point x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(Point a, Point b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

private:
  std::vector<Point> parent_;
};

Partition classes(UnionFind& uf, std::size_t n) {
  std::vector<std::vector<Point>> by_root(n);
  for (Point p = 0; p < n; ++p) by_root[uf.find(p)].push_back(p);
  Partition out;
  for (auto& c : by_root)
    if (!c.empty()) out.push_back(std::move(c));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Partition orbits(const PermGroup& g) {
  UnionFind uf(g.degree());
  for (const auto& s : g.generators())
    for (Point p = 0; p < g.degree(); ++p) uf.unite(p, s[p]);
  return classes(uf, g.degree());
}

bool is_transitive(const PermGroup& g) { return g.degree() <= 1 || orbits(g).size() == 1; }

std::optional<BlockSystem> minimal_blocks(const PermGroup& g, Point a, Point b) {
  if (!is_transitive(g)) throw NotTransitive("minimal_blocks: group is not transitive");
  if (a >= g.degree() || b >= g.degree() || a == b) throw InvalidArgument("minimal_blocks: need two distinct points");
  UnionFind uf(g.degree());
  std::vector<std::pair<Point, Point>> queue{{a, b}};
  uf.unite(a, b);
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [x, y] = queue[q];
    for (const auto& s : g.generators()) {
      const Point gx = s[x], gy = s[y];
      if (uf.unite(gx, gy)) queue.emplace_back(gx, gy);
    }
  }
  BlockSystem bs{classes(uf, g.degree())};
  if (bs.cells.size() == 1) return std::nullopt;
  return bs;
}

std::optional<BlockSystem> minimal_block_system(const PermGroup& g) {
  if (!is_transitive(g)) throw NotTransitive("minimal_block_system: group is not transitive");
  std::optional<BlockSystem> best;
  for (Point j = 1; j < g.degree(); ++j) {
    auto bs = minimal_blocks(g, 0, j);
    if (!bs) continue;
    if (!best || bs->block_size() < best->block_size() ||
        (bs->block_size() == best->block_size() && bs->cells.front() < best->cells.front()))
      best = std::move(bs);
  }
  return best;
}

BlockAction block_action(const PermGroup& g, const BlockSystem& blocks) {
  const std::size_t d = g.degree(), m = blocks.cells.size();
  std::vector<std::ptrdiff_t> cell_of(d, -1);
  if (m == 0) throw InvalidBlocks("block system has no cells");
  const std::size_t size = blocks.cells.front().size();
  for (std::size_t c = 0; c < m; ++c) {
    if (blocks.cells[c].size() != size) throw InvalidBlocks("cells differ in size");
    for (Point p : blocks.cells[c]) {
      if (p >= d || cell_of[p] != -1) throw InvalidBlocks("cells overlap or contain invalid points");
      cell_of[p] = static_cast<std::ptrdiff_t>(c);
    }
  }
  if (std::find(cell_of.begin(), cell_of.end(), -1) != cell_of.end()) throw InvalidBlocks("cells do not cover all points");

  // Each generator acting on points and cells side by side.
  std::vector<Permutation> combined, image_gens;
  for (const auto& s : g.generators()) {
    std::vector<Point> img(d + m), cell_img(m);
    for (Point p = 0; p < d; ++p) img[p] = s[p];
    for (std::size_t c = 0; c < m; ++c) {
      const auto target = cell_of[s[blocks.cells[c].front()]];
      for (Point p : blocks.cells[c])
        if (cell_of[s[p]] != target) throw InvalidBlocks("partition is not invariant under the group");
      cell_img[c] = static_cast<Point>(target);
      img[d + c] = static_cast<Point>(d + static_cast<std::size_t>(target));
    }
    combined.emplace_back(std::move(img));
    image_gens.emplace_back(std::move(cell_img));
  }

  std::vector<Point> prefix(m);
  std::iota(prefix.begin(), prefix.end(), static_cast<Point>(d));
  const StabilizerChain chain(d + m, combined, prefix);
  std::vector<Permutation> kernel_gens;
  if (chain.levels() > m)
    for (const auto& k : chain.strong_generators(m)) {
      std::vector<Point> img(k.images().begin(), k.images().begin() + static_cast<std::ptrdiff_t>(d));
      kernel_gens.emplace_back(std::move(img));
    }
  return {PermGroup(m, std::move(image_gens)), PermGroup(d, std::move(kernel_gens))};
}

PermGroup restrict_to_orbit(const PermGroup& g, std::span<const Point> orbit) {
  std::vector<Point> sorted(orbit.begin(), orbit.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::ptrdiff_t> index(g.degree(), -1);
  for (std::size_t i = 0; i < sorted.size(); ++i) index[sorted[i]] = static_cast<std::ptrdiff_t>(i);
  std::vector<Permutation> gens;
  for (const auto& s : g.generators()) {
    std::vector<Point> img(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const auto j = index[s[sorted[i]]];
      if (j < 0) throw InvalidArgument("restrict_to_orbit: point set is not invariant");
      img[i] = static_cast<Point>(j);
    }
    gens.emplace_back(std::move(img));
  }
  return PermGroup(sorted.size(), std::move(gens));
}

// ---------------------------------------------------------------------------
// Structure tests

namespace {

BigInt factorial(std::size_t n) {
  BigInt f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<unsigned>(i);
  return f;
}

Permutation commutator(const Permutation& a, const Permutation& b) {
  return a.inverse() * b.inverse() * a * b;
}

}  // namespace

NaturalKind is_natural_sym_or_alt(const PermGroup& g) {
  std::vector<Point> support;
  for (Point p = 0; p < g.degree(); ++p)
    if (std::any_of(g.generators().begin(), g.generators().end(), [&](const auto& s) { return s[p] != p; }))
      support.push_back(p);
  if (support.empty()) return NaturalKind::Neither;
  const Partition orbs = orbits(g);
  const bool transitive_on_support =
      std::any_of(orbs.begin(), orbs.end(), [&](const auto& o) { return o == support; });
  if (!transitive_on_support) return NaturalKind::Neither;
  const BigInt order = g.order();
  const BigInt full = factorial(support.size());
  if (order == full) return NaturalKind::Sym;
  if (support.size() >= 3 && order * 2 == full && is_even_subgroup(g)) return NaturalKind::Alt;
  return NaturalKind::Neither;
}

bool is_even_subgroup(const PermGroup& g) {
  return std::all_of(g.generators().begin(), g.generators().end(), [](const auto& s) { return s.is_even(); });
}

PermGroup normal_closure(const PermGroup& g, const std::vector<Permutation>& gens) {
  std::vector<Permutation> closure;
  for (const auto& h : gens)
    if (!h.is_identity() && std::find(closure.begin(), closure.end(), h) == closure.end()) closure.push_back(h);
  if (closure.empty()) return PermGroup(g.degree(), {});

  std::vector<Permutation> pending = std::move(closure);
  closure = {pending.front()};
  StabilizerChain chain(g.degree(), closure);
  for (std::size_t i = 1; i < pending.size(); ++i)
    if (chain.add_generator(pending[i])) closure.push_back(pending[i]);
  for (std::size_t i = 0; i < closure.size(); ++i)
    for (const auto& s : g.generators()) {
      const Permutation conj = s.inverse() * closure[i] * s;
      if (chain.add_generator(conj)) closure.push_back(conj);
    }
  return PermGroup(g.degree(), std::move(closure));
}

PermGroup derived_subgroup(const PermGroup& g) {
  std::vector<Permutation> comms;
  const auto& gens = g.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      Permutation c = commutator(gens[i], gens[j]);
      if (!c.is_identity()) comms.push_back(std::move(c));
    }
  return normal_closure(g, comms);
}

bool is_solvable(const PermGroup& g) {
  PermGroup h = g;
  while (!h.is_trivial()) {
    PermGroup d = derived_subgroup(h);
    if (d.order() == h.order()) return false;
    h = std::move(d);
  }
  return true;
}

std::string format_partition_1based(const Partition& p) {
  std::string s = "[ ";
  for (std::size_t c = 0; c < p.size(); ++c) {
    s += c ? ", [ " : "[ ";
    for (std::size_t i = 0; i < p[c].size(); ++i) s += (i ? ", " : "") + std::to_string(p[c][i] + 1);
    s += " ]";
  }
  return s + " ]";
}

}  // namespace galmon
