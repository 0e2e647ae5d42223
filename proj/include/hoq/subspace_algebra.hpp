#pragma once

#include "hoq/type_ast.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hoq {

/// One bitstring b_1...b_l packed with b_1 in the most significant of the l
/// low bits, so numeric order equals lexicographic order of the 0/1 text.
using Bits = std::uint64_t;

/// Positions are a bijection: factor i moves to position perm[i].
using Permutation = std::vector<std::size_t>;

inline constexpr std::size_t kMaxStringLength = 64;
/// Largest set that may be materialised (e.g. W^(l) for l <= 26).
inline constexpr std::size_t kMaxSetSize = std::size_t{1} << 26;

/// A sorted, duplicate-free set of equal-length bitstrings: the index set J
/// of a direct sum of L_b spaces.
class StringSet {
 public:
  explicit StringSet(std::size_t length = 0);
  StringSet(std::size_t length, std::vector<Bits> strings);

  static StringSet from_strings(const std::vector<std::string>& strings, std::size_t length);
  static StringSet singleton(std::size_t length, Bits b);

  std::size_t length() const noexcept { return length_; }
  std::size_t size() const noexcept { return strings_.size(); }
  bool empty() const noexcept { return strings_.empty(); }
  bool contains(Bits b) const;
  const std::vector<Bits>& strings() const noexcept { return strings_; }

  std::vector<std::string> to_strings() const;

  friend bool operator==(const StringSet&, const StringSet&) = default;

 private:
  std::size_t length_;
  std::vector<Bits> strings_;
};

std::string bits_to_string(Bits b, std::size_t length);
/// Bit at position `pos` (0-based, left to right).
inline int bit_at(Bits b, std::size_t length, std::size_t pos) {
  return static_cast<int>((b >> (length - 1 - pos)) & 1u);
}
inline Bits all_ones(std::size_t length) {
  return length == 0 ? 0 : (length == 64 ? ~Bits{0} : ((Bits{1} << length) - 1));
}

struct FullSets {
  StringSet all;            // W
  StringSet traceless;      // T = W \ {e}
  Bits identity_string = 0; // e = 1...1 (the null string when l = 0)
};
FullSets full_sets(std::size_t length);

StringSet complement_in_T(const StringSet& j);
StringSet perp_in_W(const StringSet& j);
StringSet concat(const StringSet& a, const StringSet& b);
/// J^k (k-fold concatenation); J^0 = {ε}.
StringSet power(const StringSet& j, std::size_t k);
StringSet set_union(const StringSet& a, const StringSet& b);
StringSet set_intersection(const StringSet& a, const StringSet& b);

struct ReducedSet {
  StringSet set;
  FactorProfile dims;
};

/// Drops every position with dimension 1, keeping only strings that carry a 1 there.
ReducedSet normal_form(const StringSet& j, const FactorProfile& dims);

/// D_x over the factor positions of x (not normal-formed). Elementary groups
/// contribute the traceless strings that are 1 on every trivial atom, so a
/// bare I yields the empty set. Results are memoised per canonical print.
StringSet delta_of_type(const TypeExpr& x);

/// sum over b in J of prod_{i: b_i = 0} (d_i^2 - 1)
std::uint64_t dim_of_delta(const StringSet& j, const FactorProfile& dims);

/// Scatter: bit i of every string moves to position perm[i].
StringSet permute(const StringSet& j, std::span<const std::size_t> perm);
Permutation invert(std::span<const std::size_t> perm);
bool is_permutation(std::span<const std::size_t> perm, std::size_t arity);
/// Dimension list under the same scatter convention.
FactorProfile permute_dims(const FactorProfile& dims, std::span<const std::size_t> perm);

/// Drops all memoised delta_of_type results.
void clear_delta_cache();
std::size_t delta_cache_size();

}  // namespace hoq
