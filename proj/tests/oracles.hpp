#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls the library code under test beyond plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "galmon/linalg.hpp"
#include "galmon/slp.hpp"

namespace oracle {

using Images = std::vector<std::uint32_t>;

/// Finite group given by generators, with every element and the full
/// multiplication table. Intended for groups of order at most a few hundred.
class BruteGroup {
public:
  explicit BruteGroup(const std::vector<Images>& gens) {
    const std::size_t d = gens.empty() ? 0 : gens.front().size();
    Images id(d);
    for (std::size_t i = 0; i < d; ++i) id[i] = static_cast<std::uint32_t>(i);
    add(id);
    for (std::size_t q = 0; q < elems_.size(); ++q)
      for (const auto& g : gens) add(compose(elems_[q], g));
    const std::size_t n = elems_.size();
    mult_.assign(n, std::vector<int>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) mult_[a][b] = index_.at(compose(elems_[a], elems_[b]));
  }

  std::size_t order() const { return elems_.size(); }

  /// min over unrefinable chains of the largest index, by exhaustive
  /// enumeration of the subgroup lattice.
  std::size_t galois_width() {
    enumerate_subgroups();
    std::vector<bool> all(order(), true);
    return width(all);
  }

  std::size_t subgroup_count() {
    enumerate_subgroups();
    return subgroups_.size();
  }

private:
  using Subset = std::vector<bool>;

  static Images compose(const Images& p, const Images& q) {
    Images r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
    return r;
  }

  void add(const Images& p) {
    if (index_.count(p)) return;
    index_[p] = static_cast<int>(elems_.size());
    elems_.push_back(p);
  }

  static std::size_t count(const Subset& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), true)); }

  // Subgroup generated by the members of s plus element g.
  Subset closure(const Subset& s, int g) const {
    Subset out(order(), false);
    std::vector<int> gens, queue{0};
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i]) gens.push_back(static_cast<int>(i));
    gens.push_back(g);
    out[0] = true;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int h : gens) {
        const int e = mult_[static_cast<std::size_t>(queue[q])][static_cast<std::size_t>(h)];
        if (!out[static_cast<std::size_t>(e)]) {
          out[static_cast<std::size_t>(e)] = true;
          queue.push_back(e);
        }
      }
    return out;
  }

  void enumerate_subgroups() {
    if (!subgroups_.empty()) return;
    Subset trivial(order(), false);
    trivial[0] = true;
    std::vector<Subset> queue{trivial};
    subgroups_.insert(trivial);
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (std::size_t g = 0; g < order(); ++g) {
        if (queue[q][g]) continue;
        Subset h = closure(queue[q], static_cast<int>(g));
        if (subgroups_.insert(h).second) queue.push_back(h);
      }
  }

  static bool subset_of(const Subset& a, const Subset& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  }

  std::size_t width(const Subset& h) {
    if (auto it = memo_.find(h); it != memo_.end()) return it->second;
    const std::size_t n = count(h);
    if (n == 1) return memo_[h] = 1;
    std::vector<const Subset*> proper;
    for (const auto& k : subgroups_)
      if (k != h && subset_of(k, h)) proper.push_back(&k);
    std::size_t best = SIZE_MAX;
    for (const Subset* m : proper) {
      const bool maximal = std::none_of(proper.begin(), proper.end(), [&](const Subset* k) {
        return k != m && subset_of(*m, *k);
      });
      if (!maximal) continue;
      best = std::min(best, std::max(n / count(*m), width(*m)));
    }
    return memo_[h] = best;
  }

  std::vector<Images> elems_;
  std::map<Images, int> index_;
  std::vector<std::vector<int>> mult_;
  std::set<Subset> subgroups_;
  std::map<Subset, std::size_t> memo_;
};

/// Central differences with step h along the real axis of each coordinate.
inline galmon::CMatrix fd_jacobian_unknowns(const galmon::GateSystem& sys, const galmon::CVector& z,
                                            const galmon::CVector& x, double h = 1e-7) {
  galmon::CMatrix j(sys.num_outputs(), sys.num_unknowns());
  for (std::size_t c = 0; c < x.size(); ++c) {
    galmon::CVector xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto fp = galmon::evaluate(sys, z, xp), fm = galmon::evaluate(sys, z, xm);
    for (std::size_t r = 0; r < fp.size(); ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
  }
  return j;
}

inline galmon::CMatrix fd_jacobian_parameters(const galmon::GateSystem& sys, const galmon::CVector& z,
                                              const galmon::CVector& x, double h = 1e-7) {
  galmon::CMatrix j(sys.num_outputs(), sys.num_parameters());
  for (std::size_t c = 0; c < z.size(); ++c) {
    galmon::CVector zp = z, zm = z;
    zp[c] += h;
    zm[c] -= h;
    const auto fp = galmon::evaluate(sys, zp, x), fm = galmon::evaluate(sys, zm, x);
    for (std::size_t r = 0; r < fp.size(); ++r) j(r, c) = (fp[r] - fm[r]) / (2.0 * h);
  }
  return j;
}

/// max |a - b| / (1 + max |b|)
inline double relative_deviation(const galmon::CMatrix& a, const galmon::CMatrix& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    diff = std::max(diff, std::abs(a.data()[i] - b.data()[i]));
    scale = std::max(scale, std::abs(b.data()[i]));
  }
  return diff / (1.0 + scale);
}

/// Smallest N with (1 - P)^N <= 1 - s where P = C(m, k) / C(n, k), found by
/// counting rather than through logarithms.
inline std::uint64_t ransac_trials_by_counting(std::int64_t n, std::int64_t k, double p_inlier, double s) {
  using boost::multiprecision::cpp_int;
  const auto m = static_cast<std::int64_t>(std::floor(p_inlier * static_cast<double>(n)));
  const auto binom = [](std::int64_t a, std::int64_t b) {
    cpp_int r = 1;
    for (std::int64_t i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
  };
  const cpp_int num = binom(m, k), den = binom(n, k);
  const long double p = static_cast<long double>(num) / static_cast<long double>(den);
  if (p >= 1.0L) return 1;
  long double miss = 1.0L;
  std::uint64_t trials = 0;
  while (miss > 1.0L - static_cast<long double>(s)) {
    miss *= 1.0L - p;
    ++trials;
  }
  return trials;
}

}  // namespace oracle
