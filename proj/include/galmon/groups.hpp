#pragma once

// Permutation groups given by generators: stabilizer chains, orbits, block
// systems, and the Galois width recursion.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace galmon {

using BigInt = boost::multiprecision::cpp_int;
using Point = std::uint32_t;

/// Bijection of {0, ..., d-1}. Composition follows the right-action
/// convention: (p * q)(i) = q(p(i)), i.e. apply p first.
class Permutation {
public:
  Permutation() = default;
  /// Throws InvalidArgument unless `images` is a bijection.
  explicit Permutation(std::vector<Point> images);
  static Permutation identity(std::size_t degree);
  /// Builds a permutation from 0-based disjoint cycles.
  static Permutation from_cycles(std::size_t degree, const std::vector<std::vector<Point>>& cycles);

  std::size_t degree() const { return images_.size(); }
  Point operator[](Point i) const { return images_[i]; }
  Point image(Point i) const { return images_[i]; }
  const std::vector<Point>& images() const { return images_; }

  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  bool is_identity() const;
  bool is_even() const;
  std::vector<std::vector<Point>> cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
  std::vector<Point> images_;
};

std::ostream& operator<<(std::ostream& os, const Permutation& p);

/// Base and strong generating set built by deterministic Schreier-Sims.
class StabilizerChain {
public:
  /// `base_prefix` points are used first, in order, as base points.
  StabilizerChain(std::size_t degree, const std::vector<Permutation>& generators,
                  const std::vector<Point>& base_prefix = {});

  std::size_t degree() const { return degree_; }
  const std::vector<Point>& base() const { return base_; }
  std::size_t levels() const { return levels_.size(); }
  BigInt order() const;
  bool contains(const Permutation& g) const;
  /// Extends the chain by g unless g is already a member; returns whether it grew.
  bool add_generator(const Permutation& g);
  /// Strong generators fixing base points 0..level-1.
  const std::vector<Permutation>& strong_generators(std::size_t level) const { return levels_[level].gens; }
  std::vector<Point> orbit(std::size_t level) const;

private:
  struct Level {
    Point point;
    std::vector<Permutation> gens;
    std::vector<std::optional<Permutation>> transversal;  // u with point^u == key
    std::vector<std::optional<Permutation>> inverse;
  };

  void rebuild_transversal(Level& lvl) const;
  // Sifts from `start`; returns the residue and the level where sifting stopped.
  std::pair<Permutation, std::size_t> strip(const Permutation& g, std::size_t start) const;
  void build(std::ptrdiff_t from);

  std::size_t degree_;
  std::vector<Point> base_;
  std::vector<Level> levels_;
};

class PermGroup {
public:
  /// Throws MixedDegree when generators disagree on the degree.
  PermGroup(std::size_t degree, std::vector<Permutation> generators);
  explicit PermGroup(std::vector<Permutation> generators);

  std::size_t degree() const { return degree_; }
  const std::vector<Permutation>& generators() const { return generators_; }
  bool is_trivial() const;

  const StabilizerChain& chain() const;
  BigInt order() const { return chain().order(); }
  bool contains(const Permutation& g) const { return chain().contains(g); }

private:
  std::size_t degree_;
  std::vector<Permutation> generators_;
  mutable std::optional<StabilizerChain> chain_;
};

using Partition = std::vector<std::vector<Point>>;

/// Orbit partition; cells sorted, ordered by minimal element.
Partition orbits(const PermGroup& g);
bool is_transitive(const PermGroup& g);

struct BlockSystem {
  Partition cells;  // each sorted, ordered by minimal element
  std::size_t block_size() const { return cells.empty() ? 0 : cells.front().size(); }
  std::size_t block_count() const { return cells.size(); }
};

/// Minimal block system in which points a and b share a cell; nullopt when
/// that system has a single cell containing every point.
std::optional<BlockSystem> minimal_blocks(const PermGroup& g, Point a, Point b);
/// Minimal nontrivial block system (smallest blocks, ties broken by the cell
/// containing point 0); nullopt for primitive groups. Throws NotTransitive.
std::optional<BlockSystem> minimal_block_system(const PermGroup& g);

struct BlockAction {
  PermGroup image;   // on cells
  PermGroup kernel;  // on points
};

/// Throws InvalidBlocks unless `blocks` is a G-invariant partition of all points.
BlockAction block_action(const PermGroup& g, const BlockSystem& blocks);

/// Action of G on one orbit, relabelled to 0..|orbit|-1 in sorted order.
PermGroup restrict_to_orbit(const PermGroup& g, std::span<const Point> orbit);

enum class NaturalKind { Sym, Alt, Neither };
NaturalKind is_natural_sym_or_alt(const PermGroup& g);

bool is_solvable(const PermGroup& g);
bool is_even_subgroup(const PermGroup& g);

/// Normal closure of `gens` in G.
PermGroup normal_closure(const PermGroup& g, const std::vector<Permutation>& gens);
PermGroup derived_subgroup(const PermGroup& g);

/// Throws UnsupportedGroup for primitive non-solvable groups other than the
/// natural symmetric and alternating groups.
std::size_t galois_width(const PermGroup& g);

/// `p<k>:= PermList([...]);` lines followed by `<name>:=Group(p0, ...);`,
/// 1-based, with no trailing newline. Throws MixedDegree.
std::string export_perm_script(const std::vector<Permutation>& perms, std::string_view group_name = "G");
void export_perm_script(const std::vector<Permutation>& perms, std::string_view group_name, std::ostream& sink);

/// Reads every PermList in the text; throws ParseError on syntax errors and
/// InvalidArgument for image lists that are not bijections.
std::vector<Permutation> parse_perm_script(std::string_view text);

std::string format_partition_1based(const Partition& p);

}  // namespace galmon
