#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hypercalc {

/// The four vector-field families: boosts L_a, partials d_alpha, adapted
/// fields (s/t) d_alpha and hyperbolic fields (x^a/t) d_t + d_a.
enum class Family { Boost, Partial, Adapted, Hyperbolic };

struct Generator {
  Family family = Family::Partial;
  int index = 0;  // boost/hyperbolic: 1..n, partial/adapted: 0..n

  static Generator boost(int a) { return {Family::Boost, a}; }
  static Generator partial(int alpha) { return {Family::Partial, alpha}; }
  static Generator adapted(int alpha) { return {Family::Adapted, alpha}; }
  static Generator hyperbolic(int a) { return {Family::Hyperbolic, a}; }

  /// Flat id in 1..4n+2: boosts 1..n, partials n+1..2n+1, adapted
  /// 2n+2..3n+2, hyperbolic 3n+3..4n+2.
  int flat_id(int dim) const;
  static Generator from_flat(int id, int dim);
  bool valid(int dim) const;

  /// "L1", "dt", "d2", "a0", "h1".
  std::string to_string() const;
  static Generator parse(std::string_view token, int dim);

  auto operator<=>(const Generator&) const = default;
};

/// Operator word Z^I = Z_{i1} ... Z_{iN}; the last letter acts first.
struct MultiIndex {
  std::vector<Generator> word;

  std::size_t order() const { return word.size(); }
  bool empty() const { return word.empty(); }
  std::string to_string() const;
  MultiIndex operator+(const MultiIndex& o) const;  // concatenation
  bool operator==(const MultiIndex&) const = default;
};

/// Whitespace-separated generators, e.g. "L1 dt h2". Throws
/// std::invalid_argument on unknown tokens and std::out_of_range on indices
/// that exceed dim.
MultiIndex parse_word(std::string_view text, int dim);
/// Every generator of size n (4n+2 letters) in flat-id order.
std::vector<Generator> alphabet(int dim);

struct OperatorType {
  int j = 0;  // boosts
  int i = 0;  // partials
  int k = 0;  // adapted
  int l = 0;  // hyperbolic
  int total() const { return j + i + k + l; }
  OperatorType& operator+=(const OperatorType& o);
  bool operator==(const OperatorType&) const = default;
};

OperatorType classify(const MultiIndex& I);

/// Graph of a word: a set of (position, generator) pairs with distinct
/// positions.
using GraphSet = std::map<int, Generator>;

/// G(I) with positions 1..N.
GraphSet graph(const MultiIndex& I);
/// Reads the generators in increasing position order; the empty set gives
/// the identity word.
MultiIndex realization(const GraphSet& A);
int min_position(const GraphSet& A);

/// Element of D_m(I): an ordered m-tuple of disjoint parts, empties allowed.
struct Partition {
  std::vector<GraphSet> parts;
  bool operator==(const Partition&) const = default;
  auto operator<=>(const Partition& o) const { return compare(o); }
  std::strong_ordering compare(const Partition& o) const;
};

/// Element of D*_m(I): m non-empty disjoint parts ordered by minimum
/// position.
struct StarPartition {
  std::vector<GraphSet> parts;
  bool operator==(const StarPartition&) const = default;
  auto operator<=>(const StarPartition& o) const { return compare(o); }
  std::strong_ordering compare(const StarPartition& o) const;
  /// Sorts parts into the canonical min-position order.
  void canonicalize();
  bool is_canonical() const;
};

/// All of D_m(A) in base-m counting order: the assignment vector over
/// positions (ascending) counts with the last position fastest.
std::vector<Partition> enumerate_partitions(const GraphSet& A, int m);
std::vector<Partition> enumerate_partitions(const MultiIndex& I, int m);
/// All of D*_m(A) via restricted growth strings in lexicographic order.
std::vector<StarPartition> enumerate_star_partitions(const GraphSet& A, int m);
std::vector<StarPartition> enumerate_star_partitions(const MultiIndex& I, int m);

/// The map p_l for ordered partitions: puts (position, g) into part l
/// (1-based). Throws std::out_of_range for l outside 1..m and
/// std::invalid_argument when the position is already used.
Partition insert_extend(const Partition& p, int position, const Generator& g, int l);
/// The map p*_l: l = 0 creates a new singleton part, 1 <= l <= m adds to
/// the l-th part.
StarPartition insert_extend(const StarPartition& p, int position, const Generator& g, int l);

/// Inverses: remove the element at `position`. For star partitions the
/// emptied part (if any) is dropped and the result re-canonicalized.
Partition remove_position(const Partition& p, int position);
StarPartition remove_position(const StarPartition& p, int position);

/// Index of the part holding `position` (0-based), or -1.
int part_containing(const std::vector<GraphSet>& parts, int position);

std::string to_string(const GraphSet& A);
std::string to_string(const Partition& p);
std::string to_string(const StarPartition& p);

/// Stirling number of the second kind S(n, k) by the usual recurrence.
long long stirling2(int n, int k);

}  // namespace hypercalc
