#include "hoq/semantics.hpp"

#include "hoq/error.hpp"

#include <algorithm>
#include <numeric>

namespace hoq {

namespace {

Integer dim_product(const FactorProfile& dims) {
  Integer d = 1;
  for (int v : dims) d *= v;
  return d;
}

}  // namespace

Rational lambda_recursive(const TypeExpr& x) {
  if (x.is_elementary()) return Rational(Integer(1), dim_product(factor_dims(x)));
  const Rational lx = lambda_recursive(x.tail());
  const Rational ly = lambda_recursive(x.head());
  return ly / (Rational(dim_product(factor_dims(x.tail()))) * lx);
}

Rational lambda_closed_form(const TypeExpr& x) {
  const auto dims = factor_dims(x);
  const auto k = k_exponents(x);
  Integer denominator = 1;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (k[i] == 1) denominator *= dims[i];
  return Rational(Integer(1), denominator);
}

TypeSemantics upsilon(const TypeExpr& x) {
  const auto dims = factor_dims(x);
  ReducedSet reduced = normal_form(delta_of_type(x), dims);
  return {lambda_recursive(x), std::move(reduced.set), std::move(reduced.dims), dim_product(dims)};
}

std::optional<Permutation> find_alignment(const StringSet& from, const FactorProfile& dims_from,
                                          const StringSet& to, const FactorProfile& dims_to,
                                          std::size_t search_cap) {
  const std::size_t k = dims_from.size();
  if (dims_to.size() != k || from.length() != k || to.length() != k) return std::nullopt;
  if (from.size() != to.size()) return std::nullopt;
  {
    auto a = dims_from, b = dims_to;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) return std::nullopt;
  }
  if (from == to && dims_from == dims_to) {
    Permutation id(k);
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (k > search_cap)
    throw CapacityError("permutation search over " + std::to_string(k) + " factors exceeds the cap of " +
                        std::to_string(search_cap) + "; supply an explicit permutation");

  // Invariant per position: number of member strings with a 1 there.
  auto ones_profile = [](const StringSet& s) {
    std::vector<std::size_t> count(s.length(), 0);
    for (Bits b : s.strings())
      for (std::size_t i = 0; i < s.length(); ++i) count[i] += bit_at(b, s.length(), i);
    return count;
  };
  const auto ones_from = ones_profile(from);
  const auto ones_to = ones_profile(to);

  Permutation perm(k);
  std::vector<bool> used(k, false);
  std::optional<Permutation> found;
  // Depth-first in lexicographic order; the first complete hit is the least.
  auto search = [&](auto&& self, std::size_t i) -> bool {
    if (i == k) {
      if (permute(from, perm) == to) {
        found = perm;
        return true;
      }
      return false;
    }
    for (std::size_t j = 0; j < k; ++j) {
      if (used[j] || dims_from[i] != dims_to[j] || ones_from[i] != ones_to[j]) continue;
      used[j] = true;
      perm[i] = j;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  search(search, 0);
  return found;
}

EquivalenceVerdict check_equiv(const TypeSemantics& x, const TypeSemantics& y, const std::optional<Permutation>& perm,
                               std::size_t search_cap) {
  const std::size_t k = x.dims.size();
  if (perm) {
    if (perm->size() != k || y.dims.size() != k)
      throw DimensionError("permutation arity " + std::to_string(perm->size()) + " does not match " +
                           std::to_string(k) + " and " + std::to_string(y.dims.size()) + " non-trivial factors");
    if (!is_permutation(*perm, k)) throw InvalidArgument("supplied permutation is not a bijection");
    const bool ok = x.lambda == y.lambda && permute_dims(x.dims, *perm) == y.dims && permute(x.delta, *perm) == y.delta;
    return {ok, ok ? perm : std::nullopt};
  }
  if (x.lambda != y.lambda || k != y.dims.size()) return {false, std::nullopt};
  auto found = find_alignment(x.delta, x.dims, y.delta, y.dims, search_cap);
  return {found.has_value(), found};
}

EquivalenceVerdict check_equiv(const TypeExpr& x, const TypeExpr& y, const std::optional<Permutation>& perm,
                               std::size_t search_cap) {
  return check_equiv(upsilon(x), upsilon(y), perm, search_cap);
}

// ---------------------------------------------------------------------------
// Named identities

Identity parse_identity(const std::string& name) {
  if (name == "involution") return Identity::Involution;
  if (name == "uncurry") return Identity::Uncurry;
  if (name == "tensor_comm") return Identity::TensorComm;
  if (name == "tensor_assoc") return Identity::TensorAssoc;
  if (name == "tensor_elem") return Identity::TensorElem;
  if (name == "functional_dual") return Identity::FunctionalDual;
  throw InvalidArgument("unknown identity '" + name + "'");
}

std::string identity_name(Identity id) {
  switch (id) {
    case Identity::Involution: return "involution";
    case Identity::Uncurry: return "uncurry";
    case Identity::TensorComm: return "tensor_comm";
    case Identity::TensorAssoc: return "tensor_assoc";
    case Identity::TensorElem: return "tensor_elem";
    case Identity::FunctionalDual: return "functional_dual";
  }
  return "?";
}

std::size_t identity_arity(Identity id) {
  switch (id) {
    case Identity::Involution:
    case Identity::FunctionalDual: return 1;
    case Identity::TensorComm:
    case Identity::TensorElem: return 2;
    case Identity::Uncurry:
    case Identity::TensorAssoc: return 3;
  }
  return 0;
}

namespace {

std::size_t nontrivial_count(const TypeExpr& x) {
  std::size_t n = 0;
  for (int d : factor_dims(x)) n += d != 1;
  return n;
}

Permutation identity_perm(std::size_t k) {
  Permutation p(k);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

}  // namespace

bool check_identity(Identity id, std::span<const TypeExpr> args) {
  if (args.size() != identity_arity(id))
    throw InvalidArgument(identity_name(id) + " takes " + std::to_string(identity_arity(id)) + " argument(s), got " +
                          std::to_string(args.size()));
  auto equiv_identity_layout = [](const TypeExpr& a, const TypeExpr& b) {
    const auto sa = upsilon(a);
    const auto sb = upsilon(b);
    if (sa.dims.size() != sb.dims.size()) return false;
    return check_equiv(sa, sb, identity_perm(sa.dims.size())).equivalent;
  };

  switch (id) {
    case Identity::Involution:
      return equiv_identity_layout(bar(bar(args[0])), args[0]);
    case Identity::Uncurry:
      return equiv_identity_layout(TypeExpr::arrow(args[0], TypeExpr::arrow(args[1], args[2])),
                                   TypeExpr::arrow(tensor(args[0], args[1]), args[2]));
    case Identity::TensorAssoc:
      return equiv_identity_layout(tensor(tensor(args[0], args[1]), args[2]),
                                   tensor(args[0], tensor(args[1], args[2])));
    case Identity::TensorElem: {
      if (!args[0].is_elementary() || !args[1].is_elementary())
        throw InvalidArgument("tensor_elem needs two elementary types");
      auto atoms = args[0].atoms();
      atoms.insert(atoms.end(), args[1].atoms().begin(), args[1].atoms().end());
      return equiv_identity_layout(tensor(args[0], args[1]), TypeExpr::elementary(std::move(atoms)));
    }
    case Identity::TensorComm: {
      // x's block moves behind y's block.
      const std::size_t nx = nontrivial_count(args[0]);
      const std::size_t ny = nontrivial_count(args[1]);
      Permutation swap(nx + ny);
      for (std::size_t i = 0; i < nx; ++i) swap[i] = ny + i;
      for (std::size_t i = 0; i < ny; ++i) swap[nx + i] = i;
      return check_equiv(tensor(args[0], args[1]), tensor(args[1], args[0]), swap).equivalent;
    }
    case Identity::FunctionalDual: {
      const auto sx = upsilon(args[0]);
      const auto sbar = upsilon(bar(args[0]));
      const Rational expected_lambda = Rational(1) / (sx.lambda * Rational(sx.total_dim));
      return sbar.lambda == expected_lambda && sbar.dims == sx.dims && sbar.delta == complement_in_T(sx.delta);
    }
  }
  return false;
}

}  // namespace hoq
