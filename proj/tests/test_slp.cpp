#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "galmon/errors.hpp"
#include "galmon/problems.hpp"
#include "galmon/slp.hpp"
#include "oracles.hpp"

using namespace galmon;

namespace {

std::size_t count_kind(const GateSystem& sys, NodeKind kind) {
  return static_cast<std::size_t>(
      std::count_if(sys.nodes().begin(), sys.nodes().end(), [&](const ExprNode& n) { return n.kind == kind; }));
}

CVector eval1(const GateSystem& sys, CVector z, CVector x) { return evaluate(sys, z, x); }

}  // namespace

TEST_CASE("parse the smallest system") {
  const GateSystem sys = parse_system("params z; unknowns x; eqs x^2 - z;");
  CHECK(sys.num_parameters() == 1);
  CHECK(sys.num_unknowns() == 1);
  CHECK(sys.num_outputs() == 1);
  CHECK(std::abs(eval1(sys, {4.0}, {2.0})[0]) == 0.0);
  CHECK(std::abs(eval1(sys, {1.0}, {3.0})[0] - 8.0) < 1e-15);
}

TEST_CASE("parser grammar details") {
  SUBCASE("complex constants use the reserved unit i") {
    const GateSystem sys = parse_system("params a; unknowns x; eqs x - (2 + 3*i)*a;");
    const CVector f = eval1(sys, {1.0}, {0.0});
    CHECK(std::abs(f[0] - Complex(-2.0, -3.0)) < 1e-15);
  }
  SUBCASE("unary minus binds to the base") {
    const GateSystem sys = parse_system("params a; unknowns x; eqs -x^2 + a;");
    CHECK(std::abs(eval1(sys, {0.0}, {3.0})[0] - 9.0) < 1e-15);
  }
  SUBCASE("exponent notation and comments") {
    const GateSystem sys = parse_system("# header\nparams a; unknowns x;\neqs 1.5e2*x - a; # trailing\n");
    CHECK(std::abs(eval1(sys, {0.0}, {2.0})[0] - 300.0) < 1e-12);
  }
  SUBCASE("several equations and declarations") {
    const GateSystem sys = parse_system("params a, b; unknowns x; unknowns y; eqs x*y - a; x + y - b;");
    CHECK(sys.num_parameters() == 2);
    CHECK(sys.num_unknowns() == 2);
    const CVector f = eval1(sys, {6.0, 5.0}, {2.0, 3.0});
    CHECK(std::abs(f[0]) == 0.0);
    CHECK(std::abs(f[1]) == 0.0);
  }
  SUBCASE("identifiers are case sensitive") {
    const GateSystem sys = parse_system("params A, a; unknowns x; eqs x - A + a;");
    CHECK(std::abs(eval1(sys, {1.0, 5.0}, {0.0})[0] - 4.0) < 1e-15);
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_system("params a; eqs x;"), doctest::Contains("undeclared identifier 'x'"), ParseError);
  CHECK_THROWS_AS(parse_system("eqs x;"), ParseError);
  CHECK_THROWS_AS(parse_system("params i; unknowns x; eqs x;"), ParseError);
  CHECK_THROWS_AS(parse_system("params a, a; unknowns x; eqs x;"), ParseError);
  CHECK_THROWS_AS(parse_system("params a; unknowns x; eqs x +;"), ParseError);
  CHECK_THROWS_AS(parse_system("params a; unknowns x; eqs x^y;"), ParseError);
  CHECK_THROWS_AS(parse_system("params a; unknowns x; eqs x $ a;"), ParseError);
  CHECK_THROWS_AS(parse_system("unknowns x; eqs x;"), ParseError);
  try {
    parse_system("params a;\nunknowns x;\neqs x + y;");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 9);
  }
}

TEST_CASE("print and parse round trip") {
  const char* sources[] = {
      "params a, b; unknowns x, y; eqs x^3 - a*y/(b + 2); -(x - y)^2 + (1 - 2*i)*a;",
      "params z; unknowns x; eqs x^2 - z;",
      "params z; unknowns x; eqs (-1.5 + 2*i)*x - z*(0.25 - 3*i) + (-2)*i;",
  };
  Rng rng(4);
  for (const char* src : sources) {
    const GateSystem sys = parse_system(src);
    const GateSystem again = parse_system(print_system(sys));
    CHECK(print_system(again) == print_system(sys));
    const CVector z = random_complex_vector(rng, sys.num_parameters());
    const CVector x = random_complex_vector(rng, sys.num_unknowns());
    const CVector f = evaluate(sys, z, x), g = evaluate(again, z, x);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - g[i]) <= 1e-14 * (1.0 + std::abs(f[i])));
  }
}

TEST_CASE("evaluation errors") {
  const GateSystem sys = parse_system("params z; unknowns x; eqs x/z;");
  CHECK_THROWS_AS(eval1(sys, {0.0}, {1.0}), EvaluationSingular);
  CHECK_THROWS_AS(eval1(sys, {1.0, 2.0}, {1.0}), InvalidArgument);
}

TEST_CASE("system construction is validated") {
  ExprArena a;
  const NodeId x = a.unknown(0);
  CHECK_THROWS_AS(GateSystem({"z"}, {"x"}, a, {}), InvalidSystem);
  CHECK_THROWS_AS(GateSystem({}, {"x"}, a, {x}), InvalidSystem);
  CHECK_THROWS_AS(GateSystem({"z"}, {"x", "x"}, a, {x}), InvalidSystem);
  CHECK_THROWS_AS(GateSystem({"z"}, {"x"}, a, {x + 5}), InvalidSystem);
  ExprArena b;
  b.unknown(3);
  CHECK_THROWS_AS(GateSystem({"z"}, {"x"}, b, {0}), InvalidSystem);
}

TEST_CASE("jacobians on small systems") {
  const GateSystem sys = parse_system("params z; unknowns x; eqs x^2 - z;");
  const CMatrix jx = jacobian_unknowns(sys, CVector{1.0}, CVector{3.0});
  CHECK(std::abs(jx(0, 0) - 6.0) < 1e-15);
  const CMatrix jz = jacobian_parameters(sys, CVector{1.0}, CVector{3.0});
  CHECK(std::abs(jz(0, 0) + 1.0) < 1e-15);

  const GateSystem lin = parse_system("params a, b; unknowns x, y; eqs a*x + b*y^2; (a - 3*b)*x;");
  Rng rng(2);
  const CVector x = random_complex_vector(rng, 2);
  const CMatrix j1 = jacobian_parameters(lin, random_complex_vector(rng, 2), x);
  const CMatrix j2 = jacobian_parameters(lin, random_complex_vector(rng, 2), x);
  CHECK((j1 - j2).max_abs() < 1e-15);
}

TEST_CASE("forward-mode jacobians agree with central differences") {
  const GateSystem p3p = p3p_system(), five = fivepoint_system();
  const GateSystem rational = parse_system("params a, b; unknowns x, y; eqs x/(y + a) - b^3; (x*y - 1)^4/(a + 2);");
  Rng rng(17);
  for (const GateSystem* sys : {&p3p, &five, &rational})
    for (int trial = 0; trial < 10; ++trial) {
      const CVector z = random_complex_vector(rng, sys->num_parameters());
      const CVector x = random_complex_vector(rng, sys->num_unknowns());
      CHECK(oracle::relative_deviation(jacobian_unknowns(*sys, z, x), oracle::fd_jacobian_unknowns(*sys, z, x)) <= 1e-6);
      CHECK(oracle::relative_deviation(jacobian_parameters(*sys, z, x), oracle::fd_jacobian_parameters(*sys, z, x)) <=
            1e-6);
    }
}

TEST_CASE("linearize matches the separate derivatives") {
  const GateSystem sys = fivepoint_system();
  Rng rng(9);
  const CVector z = random_complex_vector(rng, sys.num_parameters());
  const CVector x = random_complex_vector(rng, sys.num_unknowns());
  const CVector dz = random_complex_vector(rng, sys.num_parameters());
  Evaluator ev(sys);
  CVector values(sys.num_outputs()), tangent(sys.num_outputs());
  CMatrix jx;
  ev.linearize(z, x, dz, values, jx, tangent);
  const CVector f = evaluate(sys, z, x);
  const CVector expect = jacobian_parameters(sys, z, x) * dz;
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(std::abs(values[i] - f[i]) < 1e-14 * (1.0 + std::abs(f[i])));
    CHECK(std::abs(tangent[i] - expect[i]) < 1e-12 * (1.0 + std::abs(expect[i])));
  }
  CHECK((jx - jacobian_unknowns(sys, z, x)).max_abs() < 1e-12);
}

TEST_CASE("compress") {
  SUBCASE("identity elimination") {
    const GateSystem sys = parse_system("params a; unknowns x, y; eqs 0*x + y; x*1 - a;");
    const GateSystem c = compress(sys);
    CHECK(c.node_count() < sys.node_count());
    CHECK(c.nodes()[c.outputs()[0]].kind == NodeKind::Unknown);
  }
  SUBCASE("common subexpressions are shared") {
    const GateSystem sys = parse_system("params a; unknowns x; eqs x*x + x*x;");
    CHECK(count_kind(sys, NodeKind::Mul) == 2);
    CHECK(count_kind(compress(sys), NodeKind::Mul) == 1);
  }
  SUBCASE("constant folding") {
    const GateSystem sys = parse_system("params a; unknowns x; eqs (2 + 3)*x - 4/2*a;");
    const GateSystem c = compress(sys);
    CHECK(count_kind(c, NodeKind::Add) == 0);
    CHECK(count_kind(c, NodeKind::Div) == 0);
  }
  SUBCASE("values are preserved on the five-point system") {
    const GateSystem sys = fivepoint_system();
    const GateSystem c = compress(sys);
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      const CVector z = random_complex_vector(rng, sys.num_parameters());
      const CVector x = random_complex_vector(rng, sys.num_unknowns());
      const CVector f = evaluate(sys, z, x), g = evaluate(c, z, x);
      for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(f[i] - g[i]) <= 1e-12 * (1.0 + std::abs(f[i])));
    }
  }
}

TEST_CASE("square_up") {
  Rng rng(2025);
  const GateSystem five = fivepoint_system();
  const auto fab = fivepoint_fabricate(rng);
  const SquaredUpSystem sq = square_up(five, fab.parameters, fab.solution, rng);
  CHECK(sq.system.num_outputs() == 11);
  CHECK(sq.coefficients.rows() == 11);
  CHECK(sq.coefficients.cols() == 15);
  CHECK(numerical_rank(jacobian_unknowns(sq.system, fab.parameters, fab.solution)) == 11);
  CHECK(norm2(evaluate(sq.system, fab.parameters, fab.solution)) < 1e-12);
  for (const Complex& c : sq.coefficients.data()) CHECK(std::abs(std::abs(c) - 1.0) < 1e-12);

  const GateSystem square = parse_system("params z; unknowns x; eqs x^2 - z;");
  const SquaredUpSystem same = square_up(square, CVector{4.0}, CVector{2.0}, rng);
  CHECK(same.system.num_outputs() == 1);
  CHECK(print_system(same.system) == print_system(square));

  const GateSystem deficient = parse_system("params a; unknowns x, y; eqs x - a; 2*x - 2*a; 3*x + a;");
  CHECK_THROWS_AS(square_up(deficient, CVector{1.0}, CVector{1.0, 0.0}, rng), RankDeficient);
}
