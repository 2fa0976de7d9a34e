#include <bit>
#include <map>
#include <tuple>

#include "galmon/slp.hpp"

namespace galmon {

namespace {

// Hash-consing builder that folds constants and drops identities as nodes
// are created.
class Simplifier {
public:
  NodeId build(const ExprNode& n, NodeId a, NodeId b) {
    switch (n.kind) {
      case NodeKind::Constant:
        return constant(n.value);
      case NodeKind::Unknown:
      case NodeKind::Parameter:
        return intern({n.kind, 0, 0, n.index, {}});
      case NodeKind::Add:
        if (is_const(a) && is_const(b)) return constant(value(a) + value(b));
        if (is_value(a, 0.0)) return b;
        if (is_value(b, 0.0)) return a;
        return intern({NodeKind::Add, std::min(a, b), std::max(a, b), 0, {}});
      case NodeKind::Sub:
        if (is_const(a) && is_const(b)) return constant(value(a) - value(b));
        if (is_value(b, 0.0)) return a;
        if (is_value(a, 0.0)) return negate(b);
        if (a == b) return constant(0.0);
        return intern({NodeKind::Sub, a, b, 0, {}});
      case NodeKind::Mul:
        if (is_const(a) && is_const(b)) return constant(value(a) * value(b));
        if (is_value(a, 0.0) || is_value(b, 0.0)) return constant(0.0);
        if (is_value(a, 1.0)) return b;
        if (is_value(b, 1.0)) return a;
        if (is_value(a, -1.0)) return negate(b);
        if (is_value(b, -1.0)) return negate(a);
        return intern({NodeKind::Mul, std::min(a, b), std::max(a, b), 0, {}});
      case NodeKind::Div:
        if (is_const(a) && is_const(b) && value(b) != Complex{}) return constant(value(a) / value(b));
        if (is_value(b, 1.0)) return a;
        return intern({NodeKind::Div, a, b, 0, {}});
      case NodeKind::Neg:
        return negate(a);
      case NodeKind::Pow: {
        if (n.index == 0) return constant(1.0);
        if (n.index == 1) return a;
        if (is_const(a)) {
          Complex r = 1.0;
          for (std::uint32_t i = 0; i < n.index; ++i) r *= value(a);
          return constant(r);
        }
        return intern({NodeKind::Pow, a, 0, n.index, {}});
      }
    }
    return a;
  }

  const ExprArena& arena() const { return arena_; }

private:
  using Key = std::tuple<NodeKind, NodeId, NodeId, std::uint32_t, std::uint64_t, std::uint64_t>;

  NodeId negate(NodeId a) {
    if (is_const(a)) return constant(-value(a));
    const ExprNode& n = arena_.nodes()[a];
    if (n.kind == NodeKind::Neg) return n.left;
    return intern({NodeKind::Neg, a, 0, 0, {}});
  }

  NodeId constant(Complex c) {
    // Fold -0.0 into 0.0 so equal constants share a node.
    if (c.real() == 0.0) c.real(0.0);
    if (c.imag() == 0.0) c.imag(0.0);
    return intern({NodeKind::Constant, 0, 0, 0, c});
  }

  NodeId intern(const ExprNode& n) {
    const Key key{n.kind,
                  n.left,
                  n.right,
                  n.index,
                  std::bit_cast<std::uint64_t>(n.value.real()),
                  std::bit_cast<std::uint64_t>(n.value.imag())};
    auto [it, inserted] = table_.try_emplace(key, 0);
    if (inserted) it->second = arena_.push(n);
    return it->second;
  }

  bool is_const(NodeId id) const { return arena_.nodes()[id].kind == NodeKind::Constant; }
  Complex value(NodeId id) const { return arena_.nodes()[id].value; }
  bool is_value(NodeId id, double v) const { return is_const(id) && value(id) == Complex(v, 0.0); }

  ExprArena arena_;
  std::map<Key, NodeId> table_;
};

}  // namespace

GateSystem compress(const GateSystem& sys) {
  Simplifier simp;
  const auto& nodes = sys.nodes();
  std::vector<NodeId> remap(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    remap[i] = simp.build(n, remap[n.left], remap[n.right]);
  }
  std::vector<NodeId> outputs;
  outputs.reserve(sys.num_outputs());
  for (NodeId o : sys.outputs()) outputs.push_back(remap[o]);
  return GateSystem(sys.parameter_names(), sys.unknown_names(), simp.arena(), std::move(outputs));
}

}  // namespace galmon
