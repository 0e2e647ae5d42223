#pragma once

#include "hoq/rational.hpp"
#include "hoq/subspace_algebra.hpp"
#include "hoq/type_ast.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hoq {

inline constexpr std::uint64_t kDefaultEnumerationCap = 5'000'000;

/// Bounded inverse problem: which types over the given factors have Δ equal
/// to `target`? Factor i is the atom labelled atom_label(i) with dims[i].
struct SearchSpec {
  FactorProfile dims;
  StringSet target;
  int max_depth = 3;
  int max_trivial_leaves = 2;
  /// Match up to any dimension-respecting factor reordering instead of by label.
  bool allow_permutations = false;
  std::optional<Rational> target_lambda;
  /// Skip subtrees whose Δ dimension cannot reach the target's.
  bool prune = true;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

struct SearchResult {
  std::vector<std::string> matches;  // canonical prints, sorted
  bool exhausted = false;
  std::uint64_t total = 0;    // size of the bounded space
  std::uint64_t checked = 0;  // candidates whose semantics were evaluated
  std::uint64_t pruned_count = 0;
};

/// A, B, C, ... skipping I.
std::string atom_label(std::size_t i);

/// Number of types in the bounded space (saturating at UINT64_MAX).
std::uint64_t count_types(const SearchSpec& spec);

/// Every type of depth <= max_depth whose non-trivial leaves are groups
/// partitioning the atoms (each group in label order), plus up to
/// max_trivial_leaves standalone I leaves; sorted by canonical print.
/// Throws CapacityError above spec.enumeration_cap.
std::vector<TypeExpr> enumerate_types(const SearchSpec& spec);

using SearchProgress = std::function<void(std::uint64_t done, std::uint64_t total)>;

SearchResult inverse_search(const SearchSpec& spec, const SearchProgress& progress = {});

}  // namespace hoq
