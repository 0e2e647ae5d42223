#include "hoq/comb_toolkit.hpp"

#include "hoq/error.hpp"
#include "hoq/semantics.hpp"

#include <numeric>

namespace hoq {

namespace {

TypeExpr relabel(const TypeExpr& x, const std::string& suffix) {
  if (x.is_arrow()) return TypeExpr::arrow(relabel(x.tail(), suffix), relabel(x.head(), suffix));
  std::vector<Atom> atoms = x.atoms();
  for (auto& a : atoms)
    if (!a.is_trivial()) a.label += suffix;
  return TypeExpr::elementary(std::move(atoms));
}

struct ToothSets {
  StringSet w, d, dbar, dperp;
  Bits e = 0;
  std::size_t length = 0;
};

ToothSets tooth_sets(const TypeExpr& tooth) {
  ToothSets s;
  s.d = delta_of_type(tooth);
  s.length = s.d.length();
  s.w = full_sets(s.length).all;
  s.dbar = complement_in_T(s.d);
  s.dperp = perp_in_W(s.d);
  s.e = all_ones(s.length);
  return s;
}

enum class Block { W, D, DBar, DPerp, E };

// Concatenation of one block per tooth.
StringSet block_product(const std::vector<ToothSets>& sets, const std::vector<Block>& blocks) {
  StringSet out = StringSet::singleton(0, 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const ToothSets& s = sets[i];
    switch (blocks[i]) {
      case Block::W: out = concat(out, s.w); break;
      case Block::D: out = concat(out, s.d); break;
      case Block::DBar: out = concat(out, s.dbar); break;
      case Block::DPerp: out = concat(out, s.dperp); break;
      case Block::E: out = concat(out, StringSet::singleton(s.length, s.e)); break;
    }
  }
  return out;
}

std::vector<Block> blocks(std::size_t a, Block first, Block mid, std::size_t b, Block rest) {
  std::vector<Block> out(a, first);
  out.push_back(mid);
  out.insert(out.end(), b, rest);
  return out;
}

Integer dim_product(const FactorProfile& dims) {
  Integer d = 1;
  for (int v : dims) d *= v;
  return d;
}

std::size_t nontrivial_factors(const std::vector<TypeExpr>& teeth) {
  std::size_t n = 0;
  for (const auto& t : teeth)
    for (int d : factor_dims(t)) n += d != 1;
  return n;
}

std::vector<TypeExpr> join(const std::vector<TypeExpr>& a, const std::vector<TypeExpr>& b) {
  std::vector<TypeExpr> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

// Scatter moving a leading block of `lead` positions behind the next `follow` ones.
Permutation block_swap(std::size_t lead, std::size_t follow, std::size_t total) {
  Permutation p(total);
  for (std::size_t i = 0; i < lead; ++i) p[i] = follow + i;
  for (std::size_t i = lead; i < lead + follow; ++i) p[i] = i - lead;
  for (std::size_t i = lead + follow; i < total; ++i) p[i] = i;
  return p;
}

void require_nonempty(const std::vector<TypeExpr>& teeth, const char* what) {
  if (teeth.empty()) throw InvalidArgument(std::string(what) + " needs at least one tooth");
}

}  // namespace

void CombSpec::require_uniform() const {
  if (teeth.empty()) throw InvalidArgument("comb needs at least one tooth");
  const TypeStructure s = natural_structure(teeth.front());
  for (std::size_t i = 1; i < teeth.size(); ++i)
    if (!(natural_structure(teeth[i]) == s))
      throw InvalidArgument("comb teeth have mixed base structures: " + s.to_string() + " vs " +
                            natural_structure(teeth[i]).to_string());
}

std::vector<TypeExpr> comb_teeth(const TypeExpr& base, std::size_t n, std::size_t start) {
  std::vector<TypeExpr> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(relabel(base, std::to_string(start + i)));
  return out;
}

CombSpec comb_over(const TypeExpr& base, std::size_t n) { return {comb_teeth(base, n)}; }

StringSet comb_delta_closed(const CombSpec& spec) {
  spec.require_uniform();
  const std::size_t n = spec.n();
  std::vector<ToothSets> sets;
  sets.reserve(n);
  for (const auto& t : spec.teeth) sets.push_back(tooth_sets(t));
  std::size_t length = 0;
  for (const auto& s : sets) length += s.length;

  StringSet out(length);
  if (n % 2 == 1) {
    for (std::size_t l = 1; l <= (n + 1) / 2; ++l)
      out = set_union(out, block_product(sets, blocks(n - 2 * l + 1, Block::W, Block::D, 2 * l - 2, Block::DPerp)));
    for (std::size_t l = 1; l <= (n - 1) / 2; ++l)
      out = set_union(out, block_product(sets, blocks(2 * l - 1, Block::E, Block::DBar, n - 2 * l, Block::DPerp)));
  } else {
    for (std::size_t l = 1; l <= n / 2; ++l) {
      out = set_union(out, block_product(sets, blocks(n - 2 * l + 1, Block::W, Block::D, 2 * l - 2, Block::DPerp)));
      out = set_union(out, block_product(sets, blocks(2 * l - 2, Block::E, Block::DBar, n - 2 * l + 1, Block::DPerp)));
    }
  }
  return out;
}

Rational comb_lambda_closed(const CombSpec& spec) {
  const std::size_t n = spec.n();
  require_nonempty(spec.teeth, "comb_lambda_closed");
  auto lam = [&](std::size_t i) { return lambda_recursive(spec.teeth[i - 1]); };  // 1-based
  auto dim = [&](std::size_t i) { return Rational(dim_product(factor_dims(spec.teeth[i - 1]))); };
  Rational out(1);
  if (n % 2 == 1) {
    out = lam(n);
    for (std::size_t i = 1; i <= (n - 1) / 2; ++i) out *= lam(2 * i - 1) / (lam(2 * i) * dim(2 * i));
  } else {
    for (std::size_t i = 1; i <= n / 2; ++i) out *= lam(2 * i) / (lam(2 * i - 1) * dim(2 * i - 1));
  }
  return out;
}

CombSpec comb_elementary_layout(const CombSpec& spec) {
  const std::size_t n = spec.n();
  require_nonempty(spec.teeth, "comb_elementary_layout");
  std::vector<TypeExpr> e(2 * n, TypeExpr::trivial());
  for (std::size_t i = 0; i < n; ++i) {
    const TypeExpr& t = spec.teeth[i];
    if (!t.is_arrow() || !t.tail().is_elementary() || !t.head().is_elementary())
      throw InvalidArgument("tooth " + print_canonical(t) + " is not of the form A -> B with elementary A, B");
    e[n - 1 - i] = t.tail();
    e[n + i] = t.head();
  }
  return {std::move(e)};
}

bool check_comb_normalization(const HermOp& r, const CombSpec& spec, double tol) {
  require_nonempty(spec.teeth, "check_comb_normalization");
  std::vector<TypeExpr> teeth = spec.teeth;
  for (const auto& t : teeth)
    if (!t.is_elementary())
      throw InvalidArgument("normalisation check needs elementary teeth; got " + print_canonical(t));
  if (teeth.size() % 2 == 1) teeth.insert(teeth.begin(), TypeExpr::trivial());

  std::vector<FactorProfile> tooth_dims;
  FactorProfile all;
  for (const auto& t : teeth) {
    tooth_dims.push_back(factor_dims(t));
    all.insert(all.end(), tooth_dims.back().begin(), tooth_dims.back().end());
  }
  if (strip_trivial(all) != strip_trivial(r.dims()))
    throw DimensionError("operator dims do not match the comb teeth");
  if (r.min_eigenvalue() < -tol) return false;

  HermOp cur = HermOp::trusted(all, r.matrix());
  std::size_t teeth_left = teeth.size();
  auto last_tooth_positions = [&](const HermOp& op) {
    const std::size_t f = tooth_dims[teeth_left - 1].size();
    std::vector<std::size_t> pos(f);
    std::iota(pos.begin(), pos.end(), op.dims().size() - f);
    return pos;
  };
  while (teeth_left > 0) {
    const HermOp p = partial_trace(cur, last_tooth_positions(cur));
    --teeth_left;
    const auto in_dims = tooth_dims[teeth_left - 1];
    const double d_in = static_cast<double>(dim_product(in_dims).convert_to<long long>());
    const HermOp prev = (1.0 / d_in) * partial_trace(p, last_tooth_positions(p));
    --teeth_left;
    const HermOp expected = kron(prev, HermOp::identity(in_dims));
    if ((p.matrix() - expected.matrix()).norm() > tol * std::max(1.0, p.frobenius())) return false;
    cur = prev;
  }
  return std::abs(cur.matrix()(0, 0) - std::complex<double>(1, 0)) <= tol;
}

Permutation comb_equiv_permutation(std::size_t n) {
  if (n == 0) throw InvalidArgument("comb_equiv_permutation needs n >= 1");
  Permutation p(2 * n);
  for (std::size_t i = 1; i <= n; ++i) {
    p[2 * (i - 1)] = n - i;      // A_i
    p[2 * i - 1] = n + i - 1;    // B_i
  }
  return p;
}

std::vector<TypeExpr> sequence_teeth(const std::vector<TypeExpr>& teeth) {
  std::vector<TypeExpr> out;
  for (const auto& t : teeth) {
    if (t.is_elementary()) {
      out.push_back(t);
    } else if (t.tail().is_elementary() && t.head().is_elementary()) {
      out.push_back(t.tail());
      out.push_back(t.head());
    } else {
      throw InvalidArgument("tooth " + print_canonical(t) + " is neither elementary nor A -> B with elementary A, B");
    }
  }
  if (out.size() % 2 == 1) out.insert(out.begin(), TypeExpr::trivial());
  return out;
}

TypeExpr sequence_comb(const std::vector<TypeExpr>& teeth) {
  require_nonempty(teeth, "sequence_comb");
  return make_comb(sequence_teeth(teeth));
}

StringSet comb_tensor_delta(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right) {
  require_nonempty(left, "comb_tensor_delta");
  require_nonempty(right, "comb_tensor_delta");
  const auto l = sequence_teeth(left), r = sequence_teeth(right);
  const std::size_t nl = nontrivial_factors(l), nr = nontrivial_factors(r);
  const StringSet forward = upsilon(make_comb(join(l, r))).delta;
  const StringSet swapped = upsilon(make_comb(join(r, l))).delta;
  return set_intersection(forward, permute(swapped, block_swap(nr, nl, nl + nr)));
}

TypeExpr comb_tensor_type(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right) {
  return tensor(sequence_comb(left), sequence_comb(right));
}

TypeExpr comb_arrow_type(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right) {
  const auto r = sequence_teeth(right);
  const TypeExpr last = make_comb(std::vector<TypeExpr>(r.end() - 2, r.end()));
  if (r.size() == 2) return TypeExpr::arrow(sequence_comb(left), last);
  const std::vector<TypeExpr> front(r.begin(), r.end() - 2);
  return TypeExpr::arrow(sequence_comb(left), TypeExpr::arrow(make_comb(front), last));
}

StringSet comb_tensor_delta(std::size_t m, std::size_t n, const TypeExpr& base) {
  return comb_tensor_delta(comb_teeth(base, m, 1), comb_teeth(base, n, m + 1));
}

StringSet comb_arrow_delta(const std::vector<TypeExpr>& left, const std::vector<TypeExpr>& right) {
  require_nonempty(left, "comb_arrow_delta");
  require_nonempty(right, "comb_arrow_delta");
  const auto l = sequence_teeth(left), r = sequence_teeth(right);
  // The last two elementary teeth of the right comb form the final channel.
  const std::vector<TypeExpr> front(r.begin(), r.end() - 2);
  const TypeExpr last = make_comb(std::vector<TypeExpr>(r.end() - 2, r.end()));
  const std::size_t nl = nontrivial_factors(l), nf = nontrivial_factors(front);
  const std::size_t total = nl + nontrivial_factors(r);
  const StringSet forward = upsilon(TypeExpr::arrow(make_comb(join(l, front)), last)).delta;
  if (front.empty()) return forward;
  const StringSet swapped = upsilon(TypeExpr::arrow(make_comb(join(front, l)), last)).delta;
  return set_union(forward, permute(swapped, block_swap(nf, nl, total)));
}

StringSet comb_arrow_delta(std::size_t n, std::size_t m, const TypeExpr& base) {
  return comb_arrow_delta(comb_teeth(base, n, 1), comb_teeth(base, m, n + 1));
}

}  // namespace hoq
