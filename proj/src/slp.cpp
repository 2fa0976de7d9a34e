#include "galmon/slp.hpp"

#include <algorithm>
#include <set>

#include "galmon/errors.hpp"

namespace galmon {

namespace {

Complex ipow(Complex base, std::uint32_t e) {
  Complex result = 1.0;
  while (e > 0) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return result;
}

bool is_binary(NodeKind k) {
  return k == NodeKind::Add || k == NodeKind::Sub || k == NodeKind::Mul || k == NodeKind::Div;
}

bool is_unary(NodeKind k) { return k == NodeKind::Neg || k == NodeKind::Pow; }

}  // namespace

NodeId ExprArena::push(const ExprNode& node) {
  const auto n = static_cast<NodeId>(nodes_.size());
  if ((is_binary(node.kind) && (node.left >= n || node.right >= n)) || (is_unary(node.kind) && node.left >= n))
    throw InvalidSystem("expression node refers to a child that does not precede it");
  nodes_.push_back(node);
  return n;
}

NodeId ExprArena::constant(Complex c) { return push({NodeKind::Constant, 0, 0, 0, c}); }
NodeId ExprArena::unknown(std::size_t i) {
  return push({NodeKind::Unknown, 0, 0, static_cast<std::uint32_t>(i), {}});
}
NodeId ExprArena::parameter(std::size_t i) {
  return push({NodeKind::Parameter, 0, 0, static_cast<std::uint32_t>(i), {}});
}
NodeId ExprArena::add(NodeId a, NodeId b) { return push({NodeKind::Add, a, b, 0, {}}); }
NodeId ExprArena::sub(NodeId a, NodeId b) { return push({NodeKind::Sub, a, b, 0, {}}); }
NodeId ExprArena::mul(NodeId a, NodeId b) { return push({NodeKind::Mul, a, b, 0, {}}); }
NodeId ExprArena::div(NodeId a, NodeId b) { return push({NodeKind::Div, a, b, 0, {}}); }
NodeId ExprArena::neg(NodeId a) { return push({NodeKind::Neg, a, 0, 0, {}}); }
NodeId ExprArena::pow(NodeId a, std::uint32_t exponent) { return push({NodeKind::Pow, a, 0, exponent, {}}); }

GateSystem::GateSystem(std::vector<std::string> parameter_names, std::vector<std::string> unknown_names,
                       const ExprArena& arena, std::vector<NodeId> outputs)
    : parameter_names_(std::move(parameter_names)), unknown_names_(std::move(unknown_names)) {
  if (parameter_names_.empty()) throw InvalidSystem("system needs at least one parameter");
  if (unknown_names_.empty()) throw InvalidSystem("system needs at least one unknown");
  if (outputs.empty()) throw InvalidSystem("system needs at least one output");

  std::set<std::string> seen;
  for (const auto* names : {&parameter_names_, &unknown_names_})
    for (const auto& name : *names)
      if (!seen.insert(name).second) throw InvalidSystem("duplicate identifier '" + name + "'");

  const auto& src = arena.nodes();
  std::vector<char> live(src.size(), 0);
  for (NodeId o : outputs) {
    if (o >= src.size()) throw InvalidSystem("output refers to a missing node");
    live[o] = 1;
  }
  for (std::size_t i = src.size(); i-- > 0;) {
    if (!live[i]) continue;
    const auto& n = src[i];
    if (is_binary(n.kind)) live[n.left] = live[n.right] = 1;
    if (is_unary(n.kind)) live[n.left] = 1;
  }

  std::vector<NodeId> remap(src.size(), 0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (!live[i]) continue;
    ExprNode n = src[i];
    if (n.kind == NodeKind::Unknown && n.index >= unknown_names_.size())
      throw InvalidSystem("unknown index out of range");
    if (n.kind == NodeKind::Parameter && n.index >= parameter_names_.size())
      throw InvalidSystem("parameter index out of range");
    if (is_binary(n.kind)) {
      n.left = remap[n.left];
      n.right = remap[n.right];
    } else if (is_unary(n.kind)) {
      n.left = remap[n.left];
    }
    remap[i] = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(n);
  }
  outputs_.reserve(outputs.size());
  for (NodeId o : outputs) outputs_.push_back(remap[o]);
}

Evaluator::Evaluator(const GateSystem& sys) : sys_(&sys), values_(sys.node_count()) {}

void Evaluator::check_dims(std::span<const Complex> z, std::span<const Complex> x) const {
  if (z.size() != sys_->num_parameters()) throw InvalidArgument("parameter vector has wrong length");
  if (x.size() != sys_->num_unknowns()) throw InvalidArgument("unknown vector has wrong length");
}

void Evaluator::forward(std::span<const Complex> z, std::span<const Complex> x, std::size_t k,
                        std::span<const Complex> dx, std::span<const Complex> dz) {
  const auto& nodes = sys_->nodes();
  tangents_.assign(nodes.size() * k, Complex{});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const ExprNode& n = nodes[i];
    Complex* t = tangents_.data() + i * k;
    const Complex* ta = tangents_.data() + static_cast<std::size_t>(n.left) * k;
    const Complex* tb = tangents_.data() + static_cast<std::size_t>(n.right) * k;
    switch (n.kind) {
      case NodeKind::Constant:
        values_[i] = n.value;
        break;
      case NodeKind::Unknown:
        values_[i] = x[n.index];
        if (!dx.empty())
          for (std::size_t d = 0; d < k; ++d) t[d] = dx[n.index * k + d];
        break;
      case NodeKind::Parameter:
        values_[i] = z[n.index];
        if (!dz.empty())
          for (std::size_t d = 0; d < k; ++d) t[d] = dz[n.index * k + d];
        break;
      case NodeKind::Add:
        values_[i] = values_[n.left] + values_[n.right];
        for (std::size_t d = 0; d < k; ++d) t[d] = ta[d] + tb[d];
        break;
      case NodeKind::Sub:
        values_[i] = values_[n.left] - values_[n.right];
        for (std::size_t d = 0; d < k; ++d) t[d] = ta[d] - tb[d];
        break;
      case NodeKind::Mul: {
        const Complex a = values_[n.left], b = values_[n.right];
        values_[i] = a * b;
        for (std::size_t d = 0; d < k; ++d) t[d] = ta[d] * b + a * tb[d];
        break;
      }
      case NodeKind::Div: {
        const Complex a = values_[n.left], b = values_[n.right];
        if (std::abs(b) < 1e-14 * (1.0 + std::abs(a)))
          throw EvaluationSingular("division by a numerically vanishing denominator");
        const Complex q = a / b;
        values_[i] = q;
        for (std::size_t d = 0; d < k; ++d) t[d] = (ta[d] - q * tb[d]) / b;
        break;
      }
      case NodeKind::Neg:
        values_[i] = -values_[n.left];
        for (std::size_t d = 0; d < k; ++d) t[d] = -ta[d];
        break;
      case NodeKind::Pow: {
        const Complex a = values_[n.left];
        values_[i] = ipow(a, n.index);
        if (n.index > 0) {
          const Complex f = static_cast<double>(n.index) * ipow(a, n.index - 1);
          for (std::size_t d = 0; d < k; ++d) t[d] = f * ta[d];
        }
        break;
      }
    }
  }
}

void Evaluator::evaluate(std::span<const Complex> z, std::span<const Complex> x, std::span<Complex> out) {
  check_dims(z, x);
  if (out.size() != sys_->num_outputs()) throw InvalidArgument("output buffer has wrong length");
  forward(z, x, 0, {}, {});
  const auto& outs = sys_->outputs();
  for (std::size_t i = 0; i < outs.size(); ++i) out[i] = values_[outs[i]];
}

void Evaluator::linearize(std::span<const Complex> z, std::span<const Complex> x, std::span<const Complex> dz,
                          std::span<Complex> values, CMatrix& jac_x, std::span<Complex> dz_tangent) {
  check_dims(z, x);
  const std::size_t n = sys_->num_unknowns(), m = sys_->num_parameters(), k = n + 1;
  if (dz.size() != m) throw InvalidArgument("parameter direction has wrong length");
  seed_.assign((n + m) * k, Complex{});
  for (std::size_t i = 0; i < n; ++i) seed_[i * k + i] = 1.0;
  for (std::size_t j = 0; j < m; ++j) seed_[(n + j) * k + n] = dz[j];
  forward(z, x, k, std::span<const Complex>(seed_).first(n * k), std::span<const Complex>(seed_).subspan(n * k));

  const auto& outs = sys_->outputs();
  if (jac_x.rows() != outs.size() || jac_x.cols() != n) jac_x = CMatrix(outs.size(), n);
  for (std::size_t r = 0; r < outs.size(); ++r) {
    const Complex* t = tangents_.data() + static_cast<std::size_t>(outs[r]) * k;
    values[r] = values_[outs[r]];
    for (std::size_t c = 0; c < n; ++c) jac_x(r, c) = t[c];
    dz_tangent[r] = t[n];
  }
}

void Evaluator::jacobian_unknowns(std::span<const Complex> z, std::span<const Complex> x, CMatrix& jac) {
  check_dims(z, x);
  const std::size_t n = sys_->num_unknowns();
  seed_.assign(n * n, Complex{});
  for (std::size_t i = 0; i < n; ++i) seed_[i * n + i] = 1.0;
  forward(z, x, n, seed_, {});
  const auto& outs = sys_->outputs();
  jac = CMatrix(outs.size(), n);
  for (std::size_t r = 0; r < outs.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) jac(r, c) = tangents_[static_cast<std::size_t>(outs[r]) * n + c];
}

void Evaluator::jacobian_parameters(std::span<const Complex> z, std::span<const Complex> x, CMatrix& jac) {
  check_dims(z, x);
  const std::size_t m = sys_->num_parameters();
  seed_.assign(m * m, Complex{});
  for (std::size_t i = 0; i < m; ++i) seed_[i * m + i] = 1.0;
  forward(z, x, m, {}, seed_);
  const auto& outs = sys_->outputs();
  jac = CMatrix(outs.size(), m);
  for (std::size_t r = 0; r < outs.size(); ++r)
    for (std::size_t c = 0; c < m; ++c) jac(r, c) = tangents_[static_cast<std::size_t>(outs[r]) * m + c];
}

CVector evaluate(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x) {
  Evaluator ev(sys);
  CVector out(sys.num_outputs());
  ev.evaluate(z, x, out);
  return out;
}

CMatrix jacobian_unknowns(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x) {
  Evaluator ev(sys);
  CMatrix j;
  ev.jacobian_unknowns(z, x, j);
  return j;
}

CMatrix jacobian_parameters(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x) {
  Evaluator ev(sys);
  CMatrix j;
  ev.jacobian_parameters(z, x, j);
  return j;
}

SquaredUpSystem square_up(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x, Rng& rng) {
  const std::size_t n = sys.num_unknowns(), k = sys.num_outputs();
  if (k < n) throw RankDeficient("square_up: fewer outputs than unknowns");
  const CMatrix jac = jacobian_unknowns(sys, z, x);
  if (numerical_rank(jac) != n)
    throw RankDeficient("square_up: Jacobian at the seed pair has rank " + std::to_string(numerical_rank(jac)) +
                        " < " + std::to_string(n));
  if (k == n) return {sys, CMatrix::identity(n)};

  CMatrix coeffs(n, k);
  for (auto& c : coeffs.data()) c = random_unit_complex(rng);

  ExprArena arena;
  for (const auto& node : sys.nodes()) arena.push(node);
  std::vector<NodeId> outputs;
  outputs.reserve(n);
  for (std::size_t r = 0; r < n; ++r) {
    NodeId acc = arena.mul(arena.constant(coeffs(r, 0)), sys.outputs()[0]);
    for (std::size_t c = 1; c < k; ++c) acc = arena.add(acc, arena.mul(arena.constant(coeffs(r, c)), sys.outputs()[c]));
    outputs.push_back(acc);
  }
  GateSystem square = compress(GateSystem(sys.parameter_names(), sys.unknown_names(), arena, std::move(outputs)));
  if (numerical_rank(jacobian_unknowns(square, z, x)) != n)
    throw RankDeficient("square_up: random combination lost rank at the seed pair");
  return {std::move(square), std::move(coeffs)};
}

}  // namespace galmon
