#pragma once

// Straight-line programs: parametric systems f(x; z) stored as an expression
// DAG over complex numbers.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "galmon/linalg.hpp"
#include "galmon/random.hpp"

namespace galmon {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t { Constant, Unknown, Parameter, Add, Sub, Mul, Div, Neg, Pow };

/// One gate. `left`/`right` are child ids (unused ones are zero); `index` is
/// the unknown/parameter index for leaves and the exponent for Pow.
struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  NodeId left = 0;
  NodeId right = 0;
  std::uint32_t index = 0;
  Complex value{};
};

/// Append-only node storage. Children always precede their parents.
class ExprArena {
public:
  NodeId constant(Complex c);
  NodeId unknown(std::size_t i);
  NodeId parameter(std::size_t i);
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId div(NodeId a, NodeId b);
  NodeId neg(NodeId a);
  NodeId pow(NodeId a, std::uint32_t exponent);

  NodeId push(const ExprNode& node);
  const std::vector<ExprNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

private:
  std::vector<ExprNode> nodes_;
};

/// Arithmetic handle over an arena, for writing systems as formulas.
class Expr {
public:
  Expr(ExprArena& arena, NodeId id) : arena_(&arena), id_(id) {}
  NodeId id() const { return id_; }
  ExprArena& arena() const { return *arena_; }

  friend Expr operator+(const Expr& a, const Expr& b) { return {*a.arena_, a.arena_->add(a.id_, b.id_)}; }
  friend Expr operator-(const Expr& a, const Expr& b) { return {*a.arena_, a.arena_->sub(a.id_, b.id_)}; }
  friend Expr operator*(const Expr& a, const Expr& b) { return {*a.arena_, a.arena_->mul(a.id_, b.id_)}; }
  friend Expr operator/(const Expr& a, const Expr& b) { return {*a.arena_, a.arena_->div(a.id_, b.id_)}; }
  friend Expr operator-(const Expr& a) { return {*a.arena_, a.arena_->neg(a.id_)}; }
  friend Expr operator*(Complex c, const Expr& b) { return Expr(*b.arena_, b.arena_->constant(c)) * b; }
  friend Expr operator-(const Expr& a, Complex c) { return a - Expr(*a.arena_, a.arena_->constant(c)); }
  friend Expr operator+(const Expr& a, Complex c) { return a + Expr(*a.arena_, a.arena_->constant(c)); }
  Expr pow(std::uint32_t e) const { return {*arena_, arena_->pow(id_, e)}; }

private:
  ExprArena* arena_;
  NodeId id_;
};

/// An immutable parametric system: outputs f_1..f_k in unknowns x and
/// parameters z. Construction keeps only nodes reachable from the outputs.
class GateSystem {
public:
  GateSystem(std::vector<std::string> parameter_names, std::vector<std::string> unknown_names,
             const ExprArena& arena, std::vector<NodeId> outputs);

  std::size_t num_parameters() const { return parameter_names_.size(); }
  std::size_t num_unknowns() const { return unknown_names_.size(); }
  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t node_count() const { return nodes_.size(); }

  const std::vector<std::string>& parameter_names() const { return parameter_names_; }
  const std::vector<std::string>& unknown_names() const { return unknown_names_; }
  const std::vector<ExprNode>& nodes() const { return nodes_; }
  const std::vector<NodeId>& outputs() const { return outputs_; }

private:
  std::vector<std::string> parameter_names_;
  std::vector<std::string> unknown_names_;
  std::vector<ExprNode> nodes_;
  std::vector<NodeId> outputs_;
};

/// Forward-pass interpreter with its own scratch buffers. One evaluator per
/// thread; the system it refers to may be shared.
class Evaluator {
public:
  explicit Evaluator(const GateSystem& sys);

  const GateSystem& system() const { return *sys_; }

  void evaluate(std::span<const Complex> z, std::span<const Complex> x, std::span<Complex> out);

  /// Values, the unknowns Jacobian, and the parameter directional derivative
  /// (df/dz) * dz, from one batched forward-mode sweep.
  void linearize(std::span<const Complex> z, std::span<const Complex> x, std::span<const Complex> dz,
                 std::span<Complex> values, CMatrix& jac_x, std::span<Complex> dz_tangent);

  void jacobian_unknowns(std::span<const Complex> z, std::span<const Complex> x, CMatrix& jac);
  void jacobian_parameters(std::span<const Complex> z, std::span<const Complex> x, CMatrix& jac);

private:
  // Seeds: dx is num_unknowns x k, dz is num_parameters x k, both row-major;
  // an empty span means a zero seed.
  void forward(std::span<const Complex> z, std::span<const Complex> x, std::size_t k,
               std::span<const Complex> dx, std::span<const Complex> dz);
  void check_dims(std::span<const Complex> z, std::span<const Complex> x) const;

  const GateSystem* sys_;
  std::vector<Complex> values_;
  std::vector<Complex> tangents_;
  std::vector<Complex> seed_;
};

CVector evaluate(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x);
CMatrix jacobian_unknowns(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x);
CMatrix jacobian_parameters(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x);

/// Constant folding, identity elimination and common-subexpression sharing.
GateSystem compress(const GateSystem& sys);

/// A square system obtained from random combinations of the outputs of an
/// overdetermined one: square outputs = coefficients * original outputs.
struct SquaredUpSystem {
  GateSystem system;
  CMatrix coefficients;
};

/// Throws RankDeficient unless jacobian_unknowns(sys, z, x) has full column rank.
SquaredUpSystem square_up(const GateSystem& sys, std::span<const Complex> z, std::span<const Complex> x, Rng& rng);

/// Parses the system-source format:
///   params a, b; unknowns x, y; eqs x^2 - a; x*y - b;
GateSystem parse_system(std::string_view text);

/// Renders a system in the source format accepted by parse_system.
std::string print_system(const GateSystem& sys);

}  // namespace galmon
