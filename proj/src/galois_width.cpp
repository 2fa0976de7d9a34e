#include <algorithm>

#include "galmon/errors.hpp"
#include "galmon/groups.hpp"

namespace galmon {

namespace {

// Every prime dividing |G| is at most the degree, so trial division suffices.
std::size_t largest_prime_factor(BigInt n, std::size_t degree) {
  std::size_t best = 1;
  for (std::size_t p = 2; p <= std::max<std::size_t>(degree, 2) && n > 1; ++p)
    while (n % p == 0) {
      n /= p;
      best = p;
    }
  return best;
}

}  // namespace

std::size_t galois_width(const PermGroup& g) {
  if (g.is_trivial()) return 1;

  const Partition orbs = orbits(g);
  if (orbs.size() > 1) {
    std::size_t width = 1;
    for (const auto& orbit : orbs)
      if (orbit.size() > 1) width = std::max(width, galois_width(restrict_to_orbit(g, orbit)));
    return width;
  }

  switch (is_natural_sym_or_alt(g)) {
    case NaturalKind::Sym:
    case NaturalKind::Alt:
      return g.degree() == 4 ? 3 : g.degree();
    case NaturalKind::Neither:
      break;
  }

  if (is_solvable(g)) return largest_prime_factor(g.order(), g.degree());

  if (auto blocks = minimal_block_system(g)) {
    const BlockAction action = block_action(g, *blocks);
    return std::max(galois_width(action.kernel), galois_width(action.image));
  }

  throw UnsupportedGroup(g.order().str(), g.degree());
}

}  // namespace galmon
