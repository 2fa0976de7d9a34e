#pragma once

#include <vector>

#include "galmon/groups.hpp"

namespace testgroups {

struct NamedGroup {
  const char* name;
  galmon::PermGroup group;
};

inline galmon::PermGroup gen(std::size_t degree, std::vector<std::vector<std::vector<galmon::Point>>> gens) {
  std::vector<galmon::Permutation> perms;
  for (const auto& cycles : gens) perms.push_back(galmon::Permutation::from_cycles(degree, cycles));
  return galmon::PermGroup(degree, perms);
}

/// Every transitive group of degree at most 5 up to conjugacy, and a few of degree 6.
inline std::vector<NamedGroup> small_transitive_groups() {
  return {
      {"trivial", gen(1, {})},
      {"S2", gen(2, {{{0, 1}}})},
      {"A3", gen(3, {{{0, 1, 2}}})},
      {"S3", gen(3, {{{0, 1, 2}}, {{0, 1}}})},
      {"C4", gen(4, {{{0, 1, 2, 3}}})},
      {"V4", gen(4, {{{0, 1}, {2, 3}}, {{0, 2}, {1, 3}}})},
      {"D8", gen(4, {{{0, 1, 2, 3}}, {{0, 2}}})},
      {"A4", gen(4, {{{0, 1, 2}}, {{1, 2, 3}}})},
      {"S4", gen(4, {{{0, 1, 2, 3}}, {{0, 1}}})},
      {"C5", gen(5, {{{0, 1, 2, 3, 4}}})},
      {"D10", gen(5, {{{0, 1, 2, 3, 4}}, {{1, 4}, {2, 3}}})},
      {"F20", gen(5, {{{0, 1, 2, 3, 4}}, {{1, 2, 4, 3}}})},
      {"A5", gen(5, {{{0, 1, 2, 3, 4}}, {{0, 1, 2}}})},
      {"S5", gen(5, {{{0, 1, 2, 3, 4}}, {{0, 1}}})},
      {"C6", gen(6, {{{0, 1, 2, 3, 4, 5}}})},
      {"S3 regular", gen(6, {{{0, 1, 2}, {3, 4, 5}}, {{0, 3}, {1, 5}, {2, 4}}})},
      {"D12", gen(6, {{{0, 1, 2, 3, 4, 5}}, {{0, 5}, {1, 4}, {2, 3}}})},
      {"S2 wr S3", gen(6, {{{0, 1}}, {{0, 2, 4}, {1, 3, 5}}, {{0, 2}, {1, 3}}})},
      {"A4 on 6", gen(6, {{{0, 1}, {2, 3}}, {{0, 2, 4}, {1, 3, 5}}})},
  };
}

}  // namespace testgroups
