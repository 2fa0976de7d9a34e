#include <algorithm>

#include "galmon/errors.hpp"
#include "galmon/groups.hpp"

namespace galmon {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<char> hit(images_.size(), 0);
  for (Point p : images_) {
    if (p >= images_.size() || hit[p]) throw InvalidArgument("permutation images are not a bijection");
    hit[p] = 1;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Point> img(degree);
  for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<Point>(i);
  Permutation p;
  p.images_ = std::move(img);
  return p;
}

Permutation Permutation::from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> img = identity(degree).images_;
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= degree) throw InvalidArgument("cycle point out of range");
      img[c[i]] = c[(i + 1) % c.size()];
    }
  return Permutation(std::move(img));
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  if (degree() != rhs.degree()) throw MixedDegree("cannot compose permutations of different degree");
  Permutation out;
  out.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) out.images_[i] = rhs.images_[images_[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) out.images_[images_[i]] = static_cast<Point>(i);
  return out;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

bool Permutation::is_even() const {
  std::size_t transpositions = 0;
  for (const auto& c : cycles()) transpositions += c.size() - 1;
  return transpositions % 2 == 0;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
  std::vector<std::vector<Point>> out;
  std::vector<char> seen(images_.size(), 0);
  for (Point s = 0; s < images_.size(); ++s) {
    if (seen[s] || images_[s] == s) continue;
    std::vector<Point> c;
    for (Point p = s; !seen[p]; p = images_[p]) {
      seen[p] = 1;
      c.push_back(p);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Permutation& p) {
  const auto cs = p.cycles();
  if (cs.empty()) return os << "()";
  for (const auto& c : cs) {
    os << '(';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i] + 1;
    os << ')';
  }
  return os;
}

}  // namespace galmon
