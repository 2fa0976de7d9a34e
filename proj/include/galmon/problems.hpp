#pragma once

// Built-in minimal problems: P3P (Grunert system and a conic-pencil solver)
// and five-point relative pose, plus the RanSaC trial count.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "galmon/linalg.hpp"
#include "galmon/random.hpp"
#include "galmon/slp.hpp"

namespace galmon {

/// (I - S)^{-1} (I + S); throws SingularCayley when I - S is singular.
CMatrix cayley(const CMatrix& s);
Eigen::Matrix3d cayley(const Eigen::Matrix3d& s);

// ---------------------------------------------------------------------------
// P3P

/// Cosines c_ij = p_i . p_j of unit image directions and squared distances
/// d_ij = |q_i - q_j|^2.
struct P3PInstance {
  Complex c12, c13, c23;
  Complex d12, d13, d23;

  /// Parameter order of p3p_system: c12, c13, c23, d12, d13, d23.
  CVector parameters() const { return {c12, c13, c23, d12, d13, d23}; }
  static P3PInstance from_parameters(std::span<const Complex> z);
};

struct P3PSolution {
  Complex lambda1, lambda2, lambda3;

  CVector unknowns() const { return {lambda1, lambda2, lambda3}; }
};

struct CameraPose {
  Eigen::Matrix3d R;
  Eigen::Vector3d t;
};

struct P3PFabrication {
  P3PInstance instance;
  P3PSolution solution;
  CameraPose pose;
  std::array<Eigen::Vector3d, 3> points;      // world points q_i
  std::array<Eigen::Vector3d, 3> directions;  // unit directions p_i
};

/// Unknowns l1, l2, l3; outputs l_i^2 + l_j^2 - 2 c_ij l_i l_j - d_ij for
/// (i, j) = (1,2), (1,3), (2,3).
GateSystem p3p_system();

/// Real random scene; resamples degenerate draws, DegenerateSample after 100.
P3PFabrication p3p_fabricate(Rng& rng);

/// Conics in (rho1, rho2, 1) with rho_i = lambda_i / lambda_3.
std::pair<CMatrix, CMatrix> p3p_conics(const P3PInstance& inst);

/// Up to 8 depth triples via the conic pencil; throws DegenerateInstance.
std::vector<P3PSolution> p3p_conic_solve(const P3PInstance& inst);

/// Procrustes alignment of q_i onto lambda_i p_i. Throws DegenerateGeometry
/// for collinear points and InvalidArgument for non-real depths.
CameraPose p3p_pose_from_depths(const P3PSolution& sol, const std::array<Eigen::Vector3d, 3>& directions,
                                const std::array<Eigen::Vector3d, 3>& points);

/// max_i |lambda_i p_i - (R q_i + t)|.
double p3p_pose_residual(const CameraPose& pose, const P3PSolution& sol,
                         const std::array<Eigen::Vector3d, 3>& directions,
                         const std::array<Eigen::Vector3d, 3>& points);

// ---------------------------------------------------------------------------
// Five-point relative pose
//
// Unknowns x = (t_1, t_2, r_1_1, ..., r_3_3) with R row-major; parameters
// p_i_j_k for view i, point j, coordinate k in that nesting order.

inline constexpr std::size_t kFivePointUnknowns = 11;
inline constexpr std::size_t kFivePointParameters = 30;

/// 15 outputs: entries of R R^T - I, det R - 1, and p2_j^T [t]x R p1_j.
GateSystem fivepoint_system();

struct FivePointFabrication {
  CVector parameters;
  CVector solution;
};

/// Complex random data through the Cayley map; residual at most 1e-10 and
/// Jacobian rank 11, resampling otherwise.
FivePointFabrication fivepoint_fabricate(Rng& rng);

/// Key (t_1, t_2).
CVector fivepoint_equivalencer(std::span<const Complex> x);

/// (t_1, t_2, (2 t t^T / t^T t - I) R); throws IsotropicTranslation.
CVector twisted_pair(std::span<const Complex> x);

/// [t]x R with t = (t_1, t_2, 1).
CMatrix essential_matrix(std::span<const Complex> x);

// ---------------------------------------------------------------------------
// RanSaC

/// Trials needed to draw an all-inlier k-sample with probability s when a
/// fraction p_inlier of n correspondences are inliers.
std::uint64_t ransac_trials(std::int64_t n, std::int64_t k, double p_inlier, double s);

/// CSV with header "n,k=3,k=4,k=5,k=6", one row per n; "inf" where no
/// all-inlier sample exists.
std::string ransac_table_csv(std::int64_t n_min, std::int64_t n_max, double p_inlier, double s);

}  // namespace galmon
