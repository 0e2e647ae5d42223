#pragma once

#include "hoq/choi_numeric.hpp"
#include "hoq/rational.hpp"
#include "hoq/subspace_algebra.hpp"
#include "hoq/type_ast.hpp"

#include <string>
#include <vector>

namespace hoq {

/// An n-comb ((x_1 -> x_2) -> ...) -> x_n given by its teeth.
struct CombSpec {
  std::vector<TypeExpr> teeth;

  std::size_t n() const noexcept { return teeth.size(); }
  TypeExpr derived() const { return make_comb(teeth); }
  /// Throws InvalidArgument unless all teeth share one natural structure.
  void require_uniform() const;
};

/// Copies of `base` with every non-trivial atom label suffixed by its tooth
/// index: teeth start, start+1, ... For base A->B: A1->B1, A2->B2, ...
std::vector<TypeExpr> comb_teeth(const TypeExpr& base, std::size_t n, std::size_t start = 1);
CombSpec comb_over(const TypeExpr& base, std::size_t n);

/// D_n from the odd/even closed-form unions, one block per tooth, over the
/// raw factor positions of spec.derived(). Blocks use each tooth's own W, D,
/// complement and perp sets, so teeth may differ in dimension.
StringSet comb_delta_closed(const CombSpec& spec);

/// λ_n from the odd/even product formula.
Rational comb_lambda_closed(const CombSpec& spec);

/// The 2n elementary teeth E_1..E_2n of a comb whose teeth are A_i -> B_i
/// with elementary A_i, B_i: E_i = A_{n-i+1} for i <= n, else B_{i-n}.
CombSpec comb_elementary_layout(const CombSpec& spec);

/// Telescoping normalisation check on R laid out as E_1, ..., E_m (elementary
/// teeth). For k = m/2 down to 1: Tr_{E_2k} R^(k) = R^(k-1) ⊗ I_{E_2k-1},
/// with R^(0) = 1, plus R ⪰ -tol. An odd m is read with a trivial E_0 in front.
bool check_comb_normalization(const HermOp& r, const CombSpec& spec, double tol = 1e-8);

/// Scatter permutation taking (A1,B1,...,An,Bn) to (An,...,A1,B1,...,Bn).
Permutation comb_equiv_permutation(std::size_t n);

/// Network reading of a tooth list: an A -> B tooth is the channel A then B,
/// an elementary tooth stays as is; an odd count gets a trivial tooth in front.
std::vector<TypeExpr> sequence_teeth(const std::vector<TypeExpr>& teeth);
/// make_comb(sequence_teeth(teeth)), the comb realised by channels in that order.
TypeExpr sequence_comb(const std::vector<TypeExpr>& teeth);

/// Δ of sequence_comb(left) ⊗ sequence_comb(right) as D_{left+right} ∩
/// σ(D_{right+left}), in the normal-form layout [left factors, right factors].
StringSet comb_tensor_delta(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right);
TypeExpr comb_tensor_type(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right);
StringSet comb_tensor_delta(std::size_t m, std::size_t n, const TypeExpr& base);

/// D of sequence_comb(left) -> sequence_comb(right) as the union of
/// D_{(left + right') -> y} and σ(D_{(right' + left) -> y}), where y is the
/// last channel of right and right' the rest. Layout [left, right].
StringSet comb_arrow_delta(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right);
/// The type whose D comb_arrow_delta computes:
/// sequence_comb(left) -> (sequence_comb(right') -> y).
TypeExpr comb_arrow_type(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right);
StringSet comb_arrow_delta(std::size_t n, std::size_t m, const TypeExpr& base);

}  // namespace hoq
