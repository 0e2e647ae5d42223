#pragma once

#include "hoq/rational.hpp"
#include "hoq/subspace_algebra.hpp"
#include "hoq/type_ast.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hoq {

/// Υ(x): the identity coefficient λ_x and the index set of Δ_x, both over
/// the non-trivial factors of x (normal form).
struct TypeSemantics {
  Rational lambda;
  StringSet delta;
  FactorProfile dims;
  Integer total_dim;

  friend bool operator==(const TypeSemantics&, const TypeSemantics&) = default;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  /// Scatter permutation: factor i of x sits at position permutation[i] of y
  /// (normal-form positions). Present whenever `equivalent` is true.
  std::optional<Permutation> permutation;
};

inline constexpr std::size_t kDefaultPermutationSearchCap = 8;

/// λ_E = 1/d_E, λ_{x->y} = λ_y / (d_x λ_x).
Rational lambda_recursive(const TypeExpr& x);
/// prod_i d_i^{-k_i} with k from k_exponents.
Rational lambda_closed_form(const TypeExpr& x);

TypeSemantics upsilon(const TypeExpr& x);

/// x ≡ y iff λ and Δ agree once y's factors are aligned to x's.
/// With `perm`, only that alignment is tried. Without it the identity is
/// tried first, then every dimension-respecting alignment in lexicographic
/// order; more than `search_cap` non-trivial factors raises CapacityError.
EquivalenceVerdict check_equiv(const TypeExpr& x, const TypeExpr& y,
                               const std::optional<Permutation>& perm = std::nullopt,
                               std::size_t search_cap = kDefaultPermutationSearchCap);

/// Same test on already-computed semantics.
EquivalenceVerdict check_equiv(const TypeSemantics& x, const TypeSemantics& y,
                               const std::optional<Permutation>& perm = std::nullopt,
                               std::size_t search_cap = kDefaultPermutationSearchCap);

/// Lexicographically least scatter permutation p with dims_from[i] ==
/// dims_to[p[i]] and permute(from, p) == to, if any.
std::optional<Permutation> find_alignment(const StringSet& from, const FactorProfile& dims_from,
                                          const StringSet& to, const FactorProfile& dims_to,
                                          std::size_t search_cap = kDefaultPermutationSearchCap);

enum class Identity { Involution, Uncurry, TensorComm, TensorAssoc, TensorElem, FunctionalDual };

Identity parse_identity(const std::string& name);
std::string identity_name(Identity id);
std::size_t identity_arity(Identity id);

/// Evaluates both sides of a named type identity and compares them.
///   involution(x):          bar(bar(x)) ≡ x
///   uncurry(x, y, z):       x -> (y -> z) ≡ (x ⊗ y) -> z
///   tensor_comm(x, y):      x ⊗ y ≡ y ⊗ x (block-swap alignment)
///   tensor_assoc(x, y, z):  (x ⊗ y) ⊗ z ≡ x ⊗ (y ⊗ z)
///   tensor_elem(A, B):      A ⊗ B ≡ AB (A, B elementary)
///   functional_dual(x):     λ_bar(x) = 1/(λ_x d_x) and Δ_bar(x) = complement of Δ_x
bool check_identity(Identity id, std::span<const TypeExpr> args);

}  // namespace hoq
