#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "galmon/errors.hpp"
#include "galmon/linalg.hpp"
#include "galmon/random.hpp"

using namespace galmon;

namespace {

CMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  CMatrix m(r, c);
  for (auto& v : m.data()) v = random_complex_gaussian(rng);
  return m;
}

// Expands prod (x - r_i) and returns the coefficients from the highest degree.
std::vector<Complex> from_roots(const std::vector<Complex>& roots) {
  std::vector<Complex> c{1.0};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = next;
  }
  return c;
}

bool contains_root(const std::vector<Complex>& roots, Complex r, double tol) {
  return std::any_of(roots.begin(), roots.end(), [&](Complex x) { return std::abs(x - r) <= tol; });
}

}  // namespace

TEST_CASE("lu_solve on small systems") {
  const CVector b{1.0, 2.0, 3.0};
  const CVector x = lu_solve(CMatrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-15);

  const CMatrix swap{{0.0, 1.0}, {1.0, 0.0}};
  const CVector y = lu_solve(swap, CVector{5.0, 7.0});
  CHECK(std::abs(y[0] - 7.0) < 1e-15);
  CHECK(std::abs(y[1] - 5.0) < 1e-15);

  CHECK_THROWS_AS(lu_solve(CMatrix(2, 2), CVector{1.0, 1.0}), SingularMatrix);
  CHECK_THROWS_AS(lu_solve(CMatrix(2, 3), CVector{1.0, 1.0}), InvalidArgument);
}

TEST_CASE("lu_solve residual on random complex systems") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    const CMatrix a = random_matrix(rng, n, n);
    const CVector b = random_complex_vector(rng, n);
    const CVector x = lu_solve(a, b);
    const CVector ax = a * x;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(ax[i] - b[i]));
    CHECK(r < 1e-10);
  }
}

TEST_CASE("numerical rank") {
  CHECK(numerical_rank(CMatrix::identity(3)) == 3);
  Rng rng(3);
  const CVector u = random_complex_vector(rng, 4), v = random_complex_vector(rng, 5);
  CMatrix outer(4, 5);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) outer(i, j) = u[i] * v[j];
  CHECK(numerical_rank(outer) == 1);
  CHECK(numerical_rank(CMatrix(3, 3)) == 0);
  const auto sv = singular_values(CMatrix{{3.0, 0.0}, {0.0, 4.0}});
  REQUIRE(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(4.0));
  CHECK(sv[1] == doctest::Approx(3.0));
}

TEST_CASE("det3 and adjugate3") {
  CHECK(adjugate3(CMatrix::identity(3)).max_abs() == doctest::Approx(1.0));
  const CMatrix diag{{2.0, 0.0, 0.0}, {0.0, 3.0, 0.0}, {0.0, 0.0, 4.0}};
  const CMatrix adj = adjugate3(diag);
  CHECK(std::abs(adj(0, 0) - 12.0) < 1e-14);
  CHECK(std::abs(adj(1, 1) - 8.0) < 1e-14);
  CHECK(std::abs(adj(2, 2) - 6.0) < 1e-14);
  CHECK(std::abs(det3(diag) - 24.0) < 1e-14);

  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_matrix(rng, 3, 3);
    const Complex d = det3(a);
    const CMatrix residual = a * adjugate3(a) - CMatrix::identity(3) * d;
    CHECK(residual.max_abs() <= 1e-10 * std::abs(d));
  }
}

TEST_CASE("cross_matrix") {
  const CMatrix e3 = cross_matrix(CVector{0.0, 0.0, 1.0});
  const CMatrix expect{{0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  CHECK((e3 - expect).max_abs() == 0.0);

  Rng rng(8);
  const CVector t = random_complex_vector(rng, 3);
  const CMatrix tx = cross_matrix(t);
  CHECK(norm_inf(tx * t) < 1e-14);
  CHECK((tx.transpose() + tx).max_abs() == 0.0);
}

TEST_CASE("roots_quadratic") {
  auto r = roots_quadratic(1.0, 0.0, -4.0);
  REQUIRE(r.size() == 2);
  CHECK(contains_root(r, 2.0, 1e-14));
  CHECK(contains_root(r, -2.0, 1e-14));

  r = roots_quadratic(1.0, 0.0, 1.0);
  CHECK(contains_root(r, Complex(0.0, 1.0), 1e-14));
  CHECK(contains_root(r, Complex(0.0, -1.0), 1e-14));

  CHECK(roots_quadratic(0.0, 2.0, -4.0).size() == 1);
  CHECK_THROWS_AS(roots_quadratic(0.0, 0.0, 0.0), DegeneratePolynomial);

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = random_complex_gaussian(rng), b = random_complex_gaussian(rng), c = random_complex_gaussian(rng);
    const auto roots = roots_quadratic(a, b, c);
    REQUIRE(roots.size() == 2);
    const auto coeffs = from_roots(roots);
    CHECK(std::abs(coeffs[1] - b / a) < 1e-10 * (1.0 + std::abs(b / a)));
    CHECK(std::abs(coeffs[2] - c / a) < 1e-10 * (1.0 + std::abs(c / a)));
  }
}

TEST_CASE("roots_cubic") {
  auto r = roots_cubic(1.0, 0.0, 0.0, -1.0);
  REQUIRE(r.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(contains_root(r, std::polar(1.0, 2.0 * M_PI * k / 3.0), 1e-12));

  r = roots_cubic(1.0, -6.0, 11.0, -6.0);
  for (double v : {1.0, 2.0, 3.0}) CHECK(contains_root(r, v, 1e-12));

  CHECK(roots_cubic(0.0, 1.0, 0.0, -4.0).size() == 2);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector c = random_complex_vector(rng, 3);
    const auto roots = roots_cubic(1.0, c[0], c[1], c[2]);
    REQUIRE(roots.size() == 3);
    const auto coeffs = from_roots(roots);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(coeffs[i + 1] - c[i]) < 1e-8);
  }
}
