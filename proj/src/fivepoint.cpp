#include <string>

#include "galmon/errors.hpp"
#include "galmon/problems.hpp"

namespace galmon {

CMatrix cayley(const CMatrix& s) {
  if (s.rows() != 3 || s.cols() != 3) throw InvalidArgument("cayley: expected a 3x3 matrix");
  const CMatrix i = CMatrix::identity(3);
  const CMatrix m = i - s;
  const Complex det = det3(m);
  if (std::abs(det) < 1e-12) throw SingularCayley("I - S is singular");
  return adjugate3(m) * (1.0 / det) * (i + s);
}

namespace {

std::string index_name(const char* prefix, std::initializer_list<int> idx) {
  std::string s = prefix;
  for (int i : idx) s += "_" + std::to_string(i);
  return s;
}

}  // namespace

GateSystem fivepoint_system() {
  ExprArena a;
  std::vector<std::string> unknowns{"t_1", "t_2"}, params;
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) unknowns.push_back(index_name("r", {r, c}));
  for (int v = 1; v <= 2; ++v)
    for (int j = 1; j <= 5; ++j)
      for (int k = 1; k <= 3; ++k) params.push_back(index_name("p", {v, j, k}));

  const Expr zero(a, a.constant(0.0)), one(a, a.constant(1.0));
  const Expr t[3] = {{a, a.unknown(0)}, {a, a.unknown(1)}, one};
  std::vector<Expr> r;
  for (std::size_t k = 0; k < 9; ++k) r.emplace_back(a, a.unknown(2 + k));
  const auto R = [&](int i, int j) { return r[static_cast<std::size_t>(3 * i + j)]; };

  std::vector<NodeId> outputs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Expr e = R(i, 0) * R(j, 0) + R(i, 1) * R(j, 1) + R(i, 2) * R(j, 2);
      if (i == j) e = e - Complex(1.0);
      outputs.push_back(e.id());
    }
  const Expr det = R(0, 0) * (R(1, 1) * R(2, 2) - R(1, 2) * R(2, 1)) - R(0, 1) * (R(1, 0) * R(2, 2) - R(1, 2) * R(2, 0)) +
                   R(0, 2) * (R(1, 0) * R(2, 1) - R(1, 1) * R(2, 0));
  outputs.push_back((det - Complex(1.0)).id());

  // [t]x with t = (t_1, t_2, 1)
  const Expr tx[3][3] = {{zero, -t[2], t[1]}, {t[2], zero, -t[0]}, {-t[1], t[0], zero}};
  std::vector<Expr> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e.push_back(tx[i][0] * R(0, j) + tx[i][1] * R(1, j) + tx[i][2] * R(2, j));

  for (std::size_t pt = 0; pt < 5; ++pt) {
    const auto p = [&](std::size_t view, std::size_t k) { return Expr(a, a.parameter(15 * view + 3 * pt + k)); };
    Expr sum = zero;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) sum = sum + p(1, i) * e[3 * i + j] * p(0, j);
    outputs.push_back(sum.id());
  }
  return compress(GateSystem(params, unknowns, a, outputs));
}

FivePointFabrication fivepoint_fabricate(Rng& rng) {
  static const GateSystem sys = fivepoint_system();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<CVector> p1(5);
    for (auto& p : p1) p = random_complex_vector(rng, 3);
    CMatrix a(3, 3);
    for (auto& v : a.data()) v = random_complex_gaussian(rng);
    CMatrix rot;
    try {
      rot = cayley(a - a.transpose());
    } catch (const SingularCayley&) {
      continue;
    }
    const CVector t{random_complex_gaussian(rng), random_complex_gaussian(rng), 1.0};

    FivePointFabrication f;
    for (const auto& p : p1) f.parameters.insert(f.parameters.end(), p.begin(), p.end());
    for (const auto& p : p1) {
      CVector q = rot * p;
      for (std::size_t k = 0; k < 3; ++k) f.parameters.push_back(q[k] + t[k]);
    }
    f.solution = {t[0], t[1]};
    f.solution.insert(f.solution.end(), rot.data().begin(), rot.data().end());
    if (norm2(evaluate(sys, f.parameters, f.solution)) > 1e-10) continue;
    if (numerical_rank(jacobian_unknowns(sys, f.parameters, f.solution)) < kFivePointUnknowns) continue;
    return f;
  }
  throw DegenerateSample("fivepoint_fabricate: 100 degenerate draws in a row");
}

CVector fivepoint_equivalencer(std::span<const Complex> x) {
  if (x.size() < 2) throw InvalidArgument("five-point solution too short");
  return {x[0], x[1]};
}

CVector twisted_pair(std::span<const Complex> x) {
  if (x.size() != kFivePointUnknowns) throw InvalidArgument("five-point solution must have 11 entries");
  const Complex t[3] = {x[0], x[1], 1.0};
  const Complex tt = t[0] * t[0] + t[1] * t[1] + t[2] * t[2];
  if (std::abs(tt) < 1e-12) throw IsotropicTranslation("t^T t vanishes");
  CVector out{x[0], x[1]};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const Complex h = 2.0 * t[i] * t[k] / tt - (i == k ? 1.0 : 0.0);
        s += h * x[2 + 3 * k + j];
      }
      out.push_back(s);
    }
  return out;
}

CMatrix essential_matrix(std::span<const Complex> x) {
  if (x.size() != kFivePointUnknowns) throw InvalidArgument("five-point solution must have 11 entries");
  CMatrix r(3, 3);
  for (std::size_t k = 0; k < 9; ++k) r.data()[k] = x[2 + k];
  const CVector t{x[0], x[1], 1.0};
  return cross_matrix(t) * r;
}

}  // namespace galmon
