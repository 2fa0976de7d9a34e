#include <cmath>
#include <sstream>

#include "galmon/errors.hpp"
#include "galmon/problems.hpp"

namespace galmon {

namespace {

void check_probabilities(double p_inlier, double s) {
  if (!(p_inlier > 0.0 && p_inlier < 1.0)) throw InvalidProbability("inlier fraction must lie in (0, 1)");
  if (!(s > 0.0 && s < 1.0)) throw InvalidProbability("success probability must lie in (0, 1)");
}

}  // namespace

std::uint64_t ransac_trials(std::int64_t n, std::int64_t k, double p_inlier, double s) {
  check_probabilities(p_inlier, s);
  if (n < 1 || k < 1) throw InvalidArgument("ransac_trials: n and k must be positive");
  const auto m = static_cast<std::int64_t>(std::floor(p_inlier * static_cast<double>(n)));
  if (m < k) throw NoInlierSample("fewer inliers than the sample size");
  // C(m, k) / C(n, k) as a running product
  double p = 1.0;
  for (std::int64_t i = 0; i < k; ++i) p *= static_cast<double>(m - i) / static_cast<double>(n - i);
  if (p >= 1.0) return 1;
  return static_cast<std::uint64_t>(std::ceil(std::log(1.0 - s) / std::log1p(-p)));
}

std::string ransac_table_csv(std::int64_t n_min, std::int64_t n_max, double p_inlier, double s) {
  check_probabilities(p_inlier, s);
  if (n_min < 1 || n_max < n_min) throw InvalidArgument("ransac table: need 1 <= n_min <= n_max");
  std::ostringstream os;
  os << "n,k=3,k=4,k=5,k=6\n";
  for (std::int64_t n = n_min; n <= n_max; ++n) {
    os << n;
    for (std::int64_t k = 3; k <= 6; ++k) {
      os << ',';
      try {
        os << ransac_trials(n, k, p_inlier, s);
      } catch (const NoInlierSample&) {
        os << "inf";
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace galmon
