#include <cmath>

#include "galmon/errors.hpp"
#include "galmon/problems.hpp"
#include "galmon/tracker.hpp"

namespace galmon {

Eigen::Matrix3d cayley(const Eigen::Matrix3d& s) {
  const Eigen::Matrix3d i = Eigen::Matrix3d::Identity();
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(i - s);
  if (!lu.isInvertible() || std::abs((i - s).determinant()) < 1e-12) throw SingularCayley("I - S is singular");
  return lu.solve(i + s);
}

P3PInstance P3PInstance::from_parameters(std::span<const Complex> z) {
  if (z.size() != 6) throw InvalidArgument("P3P instance needs 6 parameters");
  return {z[0], z[1], z[2], z[3], z[4], z[5]};
}

GateSystem p3p_system() {
  ExprArena a;
  const Expr l[3] = {{a, a.unknown(0)}, {a, a.unknown(1)}, {a, a.unknown(2)}};
  const Expr c[3] = {{a, a.parameter(0)}, {a, a.parameter(1)}, {a, a.parameter(2)}};
  const Expr d[3] = {{a, a.parameter(3)}, {a, a.parameter(4)}, {a, a.parameter(5)}};
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<NodeId> outputs;
  for (int k = 0; k < 3; ++k) {
    const Expr& li = l[pairs[k][0]];
    const Expr& lj = l[pairs[k][1]];
    outputs.push_back((li.pow(2) + lj.pow(2) - Complex(2.0) * c[k] * li * lj - d[k]).id());
  }
  return compress(GateSystem({"c12", "c13", "c23", "d12", "d13", "d23"}, {"l1", "l2", "l3"}, a, outputs));
}

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

Eigen::Vector3d gaussian3(Rng& rng) { return {random_gaussian(rng), random_gaussian(rng), random_gaussian(rng)}; }

}  // namespace

P3PFabrication p3p_fabricate(Rng& rng) {
  static const GateSystem sys = p3p_system();
  for (int attempt = 0; attempt < 100; ++attempt) {
    P3PFabrication f;
    try {
      f.pose.R = cayley(skew(gaussian3(rng)));
    } catch (const SingularCayley&) {
      continue;
    }
    f.pose.t = gaussian3(rng) + Eigen::Vector3d(0.0, 0.0, 6.0);
    for (auto& q : f.points) q = gaussian3(rng);

    if ((f.points[1] - f.points[0]).cross(f.points[2] - f.points[0]).norm() < 1e-3) continue;
    double depth[3];
    bool degenerate = false;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector3d x = f.pose.R * f.points[i] + f.pose.t;
      depth[i] = x.norm();
      degenerate = degenerate || depth[i] < 1e-3;
      f.directions[i] = x / depth[i];
    }
    if (degenerate) continue;

    f.instance = {f.directions[0].dot(f.directions[1]), f.directions[0].dot(f.directions[2]),
                  f.directions[1].dot(f.directions[2]), (f.points[0] - f.points[1]).squaredNorm(),
                  (f.points[0] - f.points[2]).squaredNorm(), (f.points[1] - f.points[2]).squaredNorm()};
    f.solution = {depth[0], depth[1], depth[2]};
    const CVector z = f.instance.parameters(), x = f.solution.unknowns();
    if (norm2(evaluate(sys, z, x)) > 1e-10) continue;
    if (numerical_rank(jacobian_unknowns(sys, z, x)) < 3) continue;
    return f;
  }
  throw DegenerateSample("p3p_fabricate: 100 degenerate draws in a row");
}

std::pair<CMatrix, CMatrix> p3p_conics(const P3PInstance& p) {
  CMatrix c1{{p.d13 - p.d12, -p.c12 * p.d13, p.c13 * p.d12},
             {-p.c12 * p.d13, p.d13, 0.0},
             {p.c13 * p.d12, 0.0, -p.d12}};
  CMatrix c2{{p.d23, -p.c12 * p.d23, 0.0},
             {-p.c12 * p.d23, p.d23 - p.d12, p.c23 * p.d12},
             {0.0, p.c23 * p.d12, -p.d12}};
  return {c1, c2};
}

namespace {

Complex trace_product(const CMatrix& a, const CMatrix& b) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += a(i, j) * b(j, i);
  return s;
}

Complex quadratic_form(const CMatrix& c, const CVector& u, const CVector& v) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s += u[i] * c(i, j) * v[j];
  return s;
}

// Degenerate member of the pencil with the clearest rank-2 gap.
CMatrix degenerate_member(const CMatrix& c1, const CMatrix& c2) {
  const CMatrix a = c2, b = c1 - c2;
  const auto roots = roots_cubic(det3(b), trace_product(adjugate3(b), a), trace_product(adjugate3(a), b), det3(a));
  if (roots.empty()) throw DegenerateInstance("conic pencil has no degenerate member");
  double best_score = -1.0;
  CMatrix best;
  std::vector<double> best_sv;
  for (const Complex& t : roots) {
    const CMatrix m = a + b * t;
    const auto sv = singular_values(m);
    if (sv[0] == 0.0) continue;
    const double score = sv[1] / sv[0];
    if (score > best_score) {
      best_score = score;
      best = m;
      best_sv = sv;
    }
  }
  if (best_score < 0.0 || best_sv[2] > 1e-8 * best_sv[0] || best_sv[1] < 1e-8 * best_sv[0])
    throw DegenerateInstance("degenerate pencil member is not of rank 2");
  return best;
}

// The two lines whose union is the rank-2 conic m.
std::pair<CVector, CVector> split_lines(const CMatrix& m) {
  const CMatrix adj = adjugate3(m);
  std::size_t i = 0;
  for (std::size_t k = 1; k < 3; ++k)
    if (std::abs(adj(k, k)) > std::abs(adj(i, i))) i = k;
  if (adj(i, i) == 0.0) throw DegenerateInstance("conic is a double line");
  const Complex scale = std::sqrt(-adj(i, i));
  CVector p = adj.column(i);
  for (auto& v : p) v /= scale;
  const CMatrix c = m + cross_matrix(p);
  std::size_t r = 0, s = 0;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b)
      if (std::abs(c(a, b)) > std::abs(c(r, s))) {
        r = a;
        s = b;
      }
  CVector row(c.row(r).begin(), c.row(r).end());
  return {row, c.column(s)};
}

// Affine points (rho1, rho2) on the line a rho1 + b rho2 + c = 0 and the conic.
std::vector<std::pair<Complex, Complex>> intersect(const CVector& line, const CMatrix& conic) {
  const Complex a = line[0], b = line[1], c = line[2];
  if (std::max(std::abs(a), std::abs(b)) <= 1e-14 * std::abs(c)) throw DegenerateInstance("line at infinity");
  const CVector v0 = std::abs(a) >= std::abs(b) ? CVector{-c / a, 0.0, 1.0} : CVector{0.0, -c / b, 1.0};
  const CVector d{-b, a, 0.0};
  const auto roots =
      roots_quadratic(quadratic_form(conic, d, d), 2.0 * quadratic_form(conic, d, v0), quadratic_form(conic, v0, v0));
  if (roots.size() != 2 || std::abs(roots[0] - roots[1]) <= 1e-10 * (1.0 + std::abs(roots[0])))
    throw DegenerateInstance("line is tangent to the conic");
  std::vector<std::pair<Complex, Complex>> out;
  for (const Complex& s : roots) out.emplace_back(v0[0] + s * d[0], v0[1] + s * d[1]);
  return out;
}

}  // namespace

std::vector<P3PSolution> p3p_conic_solve(const P3PInstance& inst) {
  static const GateSystem sys = p3p_system();
  const auto [c1, c2] = p3p_conics(inst);
  const CMatrix m = degenerate_member(c1, c2);
  const auto [l1, l2] = split_lines(m);
  const CVector z = inst.parameters();

  std::vector<P3PSolution> out;
  for (const CVector* line : {&l1, &l2})
    for (const auto& [rho1, rho2] : intersect(*line, c2)) {
      const Complex q = rho1 * rho1 + rho2 * rho2 - 2.0 * inst.c12 * rho1 * rho2;
      if (std::abs(q) < 1e-14) throw DegenerateInstance("depth ratio pair has vanishing distance form");
      const Complex l3 = std::sqrt(inst.d12 / q);
      for (const Complex s : {l3, -l3}) {
        const CVector x{rho1 * s, rho2 * s, s};
        const RefineResult r = refine(sys, z, x, 1);
        out.push_back({r.x[0], r.x[1], r.x[2]});
      }
    }
  return out;
}

CameraPose p3p_pose_from_depths(const P3PSolution& sol, const std::array<Eigen::Vector3d, 3>& directions,
                                const std::array<Eigen::Vector3d, 3>& points) {
  const Complex lambda[3] = {sol.lambda1, sol.lambda2, sol.lambda3};
  for (const Complex& l : lambda)
    if (std::abs(l.imag()) > 1e-8 * (1.0 + std::abs(l))) throw InvalidArgument("pose recovery needs real depths");
  const double scale = 1.0 + std::max({points[0].norm(), points[1].norm(), points[2].norm()});
  if ((points[1] - points[0]).cross(points[2] - points[0]).norm() < 1e-9 * scale * scale)
    throw DegenerateGeometry("world points are collinear");

  std::array<Eigen::Vector3d, 3> cam;
  for (int i = 0; i < 3; ++i) cam[i] = lambda[i].real() * directions[i];
  const Eigen::Vector3d qbar = (points[0] + points[1] + points[2]) / 3.0;
  const Eigen::Vector3d xbar = (cam[0] + cam[1] + cam[2]) / 3.0;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) h += (points[i] - qbar) * (cam[i] - xbar).transpose();
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  CameraPose pose;
  pose.R = svd.matrixV() * fix * svd.matrixU().transpose();
  pose.t = xbar - pose.R * qbar;
  return pose;
}

double p3p_pose_residual(const CameraPose& pose, const P3PSolution& sol,
                         const std::array<Eigen::Vector3d, 3>& directions,
                         const std::array<Eigen::Vector3d, 3>& points) {
  const Complex lambda[3] = {sol.lambda1, sol.lambda2, sol.lambda3};
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    r = std::max(r, (lambda[i].real() * directions[i] - (pose.R * points[i] + pose.t)).norm());
  return r;
}

}  // namespace galmon
