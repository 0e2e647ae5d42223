#include "hoq/inverse_search.hpp"

#include "hoq/error.hpp"
#include "hoq/semantics.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace hoq {

std::string atom_label(std::size_t i) {
  // 25 single letters (no I), then A1, B1, ...
  static const std::string letters = "ABCDEFGHJKLMNOPQRSTUVWXYZ";
  if (i < letters.size()) return std::string(1, letters[i]);
  return std::string(1, letters[i % letters.size()]) + std::to_string(i / letters.size());
}

namespace {

using Mask = std::uint32_t;
using DimSet = std::set<std::uint64_t>;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

class Enumerator {
 public:
  explicit Enumerator(const SearchSpec& spec) : spec_(spec) {
    if (spec.dims.empty()) throw InvalidArgument("inverse search needs at least one factor");
    if (spec.dims.size() > 20) throw CapacityError("inverse search supports at most 20 factors");
    if (spec.max_depth < 1) throw InvalidArgument("max_depth must be >= 1");
    if (spec.max_trivial_leaves < 0) throw InvalidArgument("max_trivial_leaves must be >= 0");
    for (int d : spec.dims)
      if (d < 2) throw InvalidArgument("search dims must be non-trivial (>= 2)");
    full_ = static_cast<Mask>((std::uint64_t{1} << spec.dims.size()) - 1);
  }

  Mask full() const { return full_; }

  std::uint64_t hilbert_dim(Mask s) const {
    std::uint64_t d = 1;
    for (std::size_t i = 0; i < spec_.dims.size(); ++i)
      if (s >> i & 1u) d *= static_cast<std::uint64_t>(spec_.dims[i]);
    return d;
  }

  std::uint64_t count(Mask s, int t, int depth) {
    const auto key = std::make_tuple(s, t, depth);
    if (auto it = counts_.find(key); it != counts_.end()) return it->second;
    std::uint64_t c = leaf_ok(s, t) ? 1 : 0;
    if (depth >= 2)
      for_each_split(s, t, [&](Mask s1, int t1, Mask s2, int t2) {
        c = sat_add(c, sat_mul(count(s1, t1, depth - 1), count(s2, t2, depth - 1)));
      });
    counts_[key] = c;
    return c;
  }

  // Achievable dim Δ values over the (s, t, depth) space.
  const DimSet& achievable(Mask s, int t, int depth) {
    const auto key = std::make_tuple(s, t, depth);
    if (auto it = achievable_.find(key); it != achievable_.end()) return it->second;
    DimSet out;
    if (leaf_ok(s, t)) out.insert(leaf_dim(s));
    if (depth >= 2)
      for_each_split(s, t, [&](Mask s1, int t1, Mask s2, int t2) {
        const DimSet& ax = achievable(s1, t1, depth - 1);
        const DimSet& ay = achievable(s2, t2, depth - 1);
        const auto dx = hilbert_dim(s1), dy = hilbert_dim(s2);
        for (auto a : ax)
          for (auto b : ay) out.insert(arrow_dim(dx, a, dy, b));
      });
    return achievable_[key] = std::move(out);
  }

  // Types over (s, t, depth) whose dim Δ lies in `allowed` (nullopt: all).
  const std::vector<TypeExpr>& generate(Mask s, int t, int depth, const std::optional<DimSet>& allowed) {
    const auto key = std::make_tuple(s, t, depth, allowed);
    if (auto it = generated_.find(key); it != generated_.end()) return it->second;
    std::vector<TypeExpr> out;
    auto admits = [&](std::uint64_t a) { return !allowed || allowed->count(a) > 0; };
    if (leaf_ok(s, t) && admits(leaf_dim(s))) out.push_back(leaf(s));
    if (depth >= 2)
      for_each_split(s, t, [&](Mask s1, int t1, Mask s2, int t2) {
        if (!allowed) {
          const auto& xs = generate(s1, t1, depth - 1, std::nullopt);
          const auto& ys = generate(s2, t2, depth - 1, std::nullopt);
          for (const auto& x : xs)
            for (const auto& y : ys) out.push_back(TypeExpr::arrow(x, y));
          return;
        }
        const auto dx = hilbert_dim(s1), dy = hilbert_dim(s2);
        const DimSet ax = achievable(s1, t1, depth - 1);
        const DimSet ay = achievable(s2, t2, depth - 1);
        for (auto a : ax) {
          DimSet ys_allowed;
          for (auto b : ay)
            if (allowed->count(arrow_dim(dx, a, dy, b))) ys_allowed.insert(b);
          if (ys_allowed.empty()) continue;
          const auto xs = generate(s1, t1, depth - 1, DimSet{a});
          const auto ys = generate(s2, t2, depth - 1, ys_allowed);
          for (const auto& x : xs)
            for (const auto& y : ys) out.push_back(TypeExpr::arrow(x, y));
        }
      });
    return generated_[key] = std::move(out);
  }

  static std::uint64_t arrow_dim(std::uint64_t dx, std::uint64_t ax, std::uint64_t dy, std::uint64_t ay) {
    return dy * dy * (dx * dx - 1 - ax) + ay * (1 + ax);
  }

 private:
  bool leaf_ok(Mask s, int t) const { return (s != 0 && t == 0) || (s == 0 && t == 1); }

  std::uint64_t leaf_dim(Mask s) const {
    if (s == 0) return 0;
    const auto d = hilbert_dim(s);
    return d * d - 1;
  }

  TypeExpr leaf(Mask s) const {
    if (s == 0) return TypeExpr::trivial();
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < spec_.dims.size(); ++i)
      if (s >> i & 1u) atoms.push_back({atom_label(i), spec_.dims[i]});
    return TypeExpr::elementary(std::move(atoms));
  }

  // Ordered splits into non-empty tail and head.
  template <class F>
  void for_each_split(Mask s, int t, F&& f) const {
    for (Mask s1 = s;; s1 = (s1 - 1) & s) {
      const Mask s2 = s & ~s1;
      for (int t1 = 0; t1 <= t; ++t1) {
        const int t2 = t - t1;
        if ((s1 == 0 && t1 == 0) || (s2 == 0 && t2 == 0)) continue;
        f(s1, t1, s2, t2);
      }
      if (s1 == 0) break;
    }
  }

  const SearchSpec& spec_;
  Mask full_ = 0;
  std::map<std::tuple<Mask, int, int>, std::uint64_t> counts_;
  std::map<std::tuple<Mask, int, int>, DimSet> achievable_;
  std::map<std::tuple<Mask, int, int, std::optional<DimSet>>, std::vector<TypeExpr>> generated_;
};

void sort_canonical(std::vector<TypeExpr>& types) {
  std::vector<std::pair<std::string, TypeExpr>> keyed;
  keyed.reserve(types.size());
  for (auto& t : types) keyed.emplace_back(print_canonical(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  types.clear();
  for (auto& [k, t] : keyed) types.push_back(std::move(t));
}

std::uint64_t total_count(Enumerator& en, const SearchSpec& spec) {
  std::uint64_t total = 0;
  for (int t = 0; t <= spec.max_trivial_leaves; ++t) total = sat_add(total, en.count(en.full(), t, spec.max_depth));
  return total;
}

void check_cap(std::uint64_t total, const SearchSpec& spec) {
  if (total > spec.enumeration_cap)
    throw CapacityError("bounded type space has " + std::to_string(total) + " members, above the cap of " +
                        std::to_string(spec.enumeration_cap));
}

}  // namespace

std::uint64_t count_types(const SearchSpec& spec) {
  Enumerator en(spec);
  return total_count(en, spec);
}

std::vector<TypeExpr> enumerate_types(const SearchSpec& spec) {
  Enumerator en(spec);
  check_cap(total_count(en, spec), spec);
  std::vector<TypeExpr> out;
  for (int t = 0; t <= spec.max_trivial_leaves; ++t) {
    const auto& part = en.generate(en.full(), t, spec.max_depth, std::nullopt);
    out.insert(out.end(), part.begin(), part.end());
  }
  sort_canonical(out);
  return out;
}

SearchResult inverse_search(const SearchSpec& spec, const SearchProgress& progress) {
  Enumerator en(spec);
  const std::size_t k = spec.dims.size();
  if (spec.target.length() != k)
    throw DimensionError("target strings have length " + std::to_string(spec.target.length()) + " for " +
                         std::to_string(k) + " factors");
  if (spec.target.contains(all_ones(k))) throw InvalidArgument("target contains the identity string e");

  SearchResult result;
  result.total = total_count(en, spec);
  check_cap(result.total, spec);

  std::optional<DimSet> allowed;
  if (spec.prune) allowed = DimSet{dim_of_delta(spec.target, spec.dims)};
  std::vector<TypeExpr> candidates;
  for (int t = 0; t <= spec.max_trivial_leaves; ++t) {
    const auto& part = en.generate(en.full(), t, spec.max_depth, allowed);
    candidates.insert(candidates.end(), part.begin(), part.end());
  }
  result.checked = candidates.size();
  result.pruned_count = result.total - result.checked;

  std::vector<char> hit(candidates.size(), 0);
  std::atomic<std::uint64_t> done{0};
  const long n = static_cast<long>(candidates.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < n; ++i) {
    const TypeExpr& x = candidates[static_cast<std::size_t>(i)];
    const TypeSemantics sem = upsilon(x);
    bool ok = !spec.target_lambda || sem.lambda == *spec.target_lambda;
    if (ok) {
      if (spec.allow_permutations) {
        ok = find_alignment(sem.delta, sem.dims, spec.target, spec.dims).has_value();
      } else {
        // Candidate position -> caller's factor index, by atom label.
        Permutation perm;
        for (const Atom& a : factor_atoms(x)) {
          if (a.is_trivial()) continue;
          std::size_t idx = 0;
          while (atom_label(idx) != a.label) ++idx;
          perm.push_back(idx);
        }
        ok = permute(sem.delta, perm) == spec.target;
      }
    }
    hit[static_cast<std::size_t>(i)] = ok;
    const auto d = ++done;
    if (progress && (d % 4096 == 0 || d == static_cast<std::uint64_t>(n))) {
#pragma omp critical(hoq_search_progress)
      progress(d, static_cast<std::uint64_t>(n));
    }
  }
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (hit[i]) result.matches.push_back(print_canonical(candidates[i]));
  std::sort(result.matches.begin(), result.matches.end());
  result.exhausted = true;
  return result;
}

}  // namespace hoq
