#pragma once

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hoq {

/// Positive tensor-factor dimensions, one per string position / matrix factor.
using FactorProfile = std::vector<int>;

/// An elementary system: a label and its Hilbert-space dimension.
/// The trivial system is the atom labelled "I" with dimension 1.
struct Atom {
  std::string label;
  int dim = 2;

  static Atom trivial() { return {"I", 1}; }
  bool is_trivial() const noexcept { return dim == 1; }

  auto operator<=>(const Atom&) const = default;
};

/// A type term: either an elementary group of atoms (the composite AB... of
/// one or more systems) or an arrow x -> y. Immutable; copies share subtrees.
class TypeExpr {
 public:
  static TypeExpr elementary(std::vector<Atom> atoms);
  static TypeExpr atom(std::string label, int dim = 2);
  static TypeExpr trivial();
  static TypeExpr arrow(TypeExpr tail, TypeExpr head);

  bool is_elementary() const noexcept { return std::holds_alternative<std::vector<Atom>>(node_); }
  bool is_arrow() const noexcept { return !is_elementary(); }

  /// Atoms of an elementary node. Throws InvalidArgument on an arrow.
  const std::vector<Atom>& atoms() const;
  /// Children of an arrow node. Throw InvalidArgument on an elementary node.
  const TypeExpr& tail() const;
  const TypeExpr& head() const;

  /// Every elementary group is trivial (the whole term acts on C).
  bool is_all_trivial_leaf() const;

  friend bool operator==(const TypeExpr& a, const TypeExpr& b);

 private:
  struct ArrowNode;
  explicit TypeExpr(std::vector<Atom> atoms) : node_(std::move(atoms)) {}
  explicit TypeExpr(std::shared_ptr<const ArrowNode> node) : node_(std::move(node)) {}

  std::variant<std::vector<Atom>, std::shared_ptr<const ArrowNode>> node_;
};

struct TypeExpr::ArrowNode {
  TypeExpr tail;
  TypeExpr head;
};

/// Dimension-agnostic skeleton of a type: leaves are `*` or `I`.
class TypeStructure {
 public:
  enum class Leaf { Star, Trivial };

  static TypeStructure leaf(Leaf kind);
  static TypeStructure arrow(TypeStructure tail, TypeStructure head);

  bool is_leaf() const noexcept { return !children_; }
  Leaf leaf_kind() const;
  const TypeStructure& tail() const;
  const TypeStructure& head() const;

  std::string to_string() const;
  /// True when `x` is obtained from this structure by substituting elementary
  /// types (possibly trivial) for every `*`.
  bool admits(const TypeExpr& x) const;

  friend bool operator==(const TypeStructure& a, const TypeStructure& b);

 private:
  struct Children;
  Leaf kind_ = Leaf::Star;
  std::shared_ptr<const Children> children_;
};

struct TypeStructure::Children {
  TypeStructure tail;
  TypeStructure head;
};

/// Parses the type grammar:
///   type := term ("->" type)? ; term := atomgroup | "(" type ")"
///   atomgroup := atom ("*" atom)* ; atom := IDENT (":" INT)? | "I"
/// `->` associates to the right; unannotated atoms get dimension 2.
/// An atom written with dimension 1 is normalised to the trivial atom I.
TypeExpr parse_type(std::string_view text);

/// Fully parenthesised form without the outermost pair and without spaces,
/// e.g. "(A:2->B:2)->C:2". parse_type(print_canonical(x)) == x.
std::string print_canonical(const TypeExpr& x);

/// Every atom occurrence, left to right.
std::vector<Atom> factor_atoms(const TypeExpr& x);
/// Dimensions of every atom occurrence, left to right (trivial atoms included).
FactorProfile factor_dims(const TypeExpr& x);

TypeExpr extend_by(const TypeExpr& x, const Atom& e);
/// x̄ := x -> I
TypeExpr bar(const TypeExpr& x);
/// x ⊗ y := bar(x -> bar(y)), literally.
TypeExpr tensor(const TypeExpr& x, const TypeExpr& y);
/// ((x1 -> x2) -> x3) ... -> xn. Throws InvalidArgument on an empty list.
TypeExpr make_comb(const std::vector<TypeExpr>& bases);

/// x ≼ y: x is a proper arrow-subterm of y (transitive closure of "is a parent of").
bool precedes(const TypeExpr& x, const TypeExpr& y);

TypeStructure natural_structure(const TypeExpr& x);

/// Arrow-tree depth; an elementary group has depth 1.
int depth(const TypeExpr& x);

/// Identity-coefficient exponents, one per atom occurrence (aligned with
/// factor_dims): (#"->" + #"(" to the right of the atom in the canonical
/// print + 1) mod 2. The product of d_i^{-k_i} equals lambda_recursive(x).
std::vector<int> k_exponents(const TypeExpr& x);

}  // namespace hoq
