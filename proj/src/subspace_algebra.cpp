#include "hoq/subspace_algebra.hpp"

#include "hoq/error.hpp"

#include <algorithm>
#include <iterator>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace hoq {

namespace {

void check_length(std::size_t length) {
  if (length > kMaxStringLength)
    throw CapacityError("bitstrings longer than " + std::to_string(kMaxStringLength) + " positions");
}

void check_size(std::size_t size) {
  if (size > kMaxSetSize) throw CapacityError("string set would exceed " + std::to_string(kMaxSetSize) + " members");
}

}  // namespace

StringSet::StringSet(std::size_t length) : length_(length) { check_length(length); }

StringSet::StringSet(std::size_t length, std::vector<Bits> strings) : length_(length), strings_(std::move(strings)) {
  check_length(length);
  const Bits mask = all_ones(length);
  for (Bits b : strings_)
    if ((b & ~mask) != 0) throw InvalidArgument("bitstring wider than the set length");
  if (!std::is_sorted(strings_.begin(), strings_.end())) std::sort(strings_.begin(), strings_.end());
  strings_.erase(std::unique(strings_.begin(), strings_.end()), strings_.end());
}

StringSet StringSet::from_strings(const std::vector<std::string>& strings, std::size_t length) {
  std::vector<Bits> out;
  out.reserve(strings.size());
  for (const auto& s : strings) {
    if (s.size() != length)
      throw DimensionError("string '" + s + "' has length " + std::to_string(s.size()) + ", expected " +
                           std::to_string(length));
    Bits b = 0;
    for (char c : s) {
      if (c != '0' && c != '1') throw InvalidArgument("string '" + s + "' is not binary");
      b = (b << 1) | Bits(c == '1');
    }
    out.push_back(b);
  }
  return StringSet(length, std::move(out));
}

StringSet StringSet::singleton(std::size_t length, Bits b) { return StringSet(length, {b}); }

bool StringSet::contains(Bits b) const { return std::binary_search(strings_.begin(), strings_.end(), b); }

std::vector<std::string> StringSet::to_strings() const {
  std::vector<std::string> out;
  out.reserve(strings_.size());
  for (Bits b : strings_) out.push_back(bits_to_string(b, length_));
  return out;
}

std::string bits_to_string(Bits b, std::size_t length) {
  std::string s(length, '0');
  for (std::size_t i = 0; i < length; ++i) s[i] = bit_at(b, length, i) ? '1' : '0';
  return s;
}

FullSets full_sets(std::size_t length) {
  check_length(length);
  if (length >= 63 || (std::size_t{1} << length) > kMaxSetSize)
    throw CapacityError("W^(" + std::to_string(length) + ") is too large to materialise");
  const std::size_t n = std::size_t{1} << length;
  std::vector<Bits> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  std::vector<Bits> traceless(all.begin(), all.end() - 1);
  FullSets out{StringSet(length, std::move(all)), StringSet(length, std::move(traceless)), all_ones(length)};
  return out;
}

StringSet complement_in_T(const StringSet& j) {
  const Bits e = all_ones(j.length());
  if (j.contains(e)) throw InvalidArgument("complement_in_T: the identity string e is in the set");
  StringSet perp = perp_in_W(j);
  std::vector<Bits> out(perp.strings());
  out.erase(std::remove(out.begin(), out.end(), e), out.end());
  return StringSet(j.length(), std::move(out));
}

StringSet perp_in_W(const StringSet& j) {
  check_length(j.length());
  const std::size_t length = j.length();
  if (length >= 63 || (std::size_t{1} << length) > kMaxSetSize) throw CapacityError("W is too large to materialise");
  const std::size_t n = std::size_t{1} << length;
  std::vector<Bits> out;
  out.reserve(n - j.size());
  auto it = j.strings().begin();
  for (Bits b = 0; b < n; ++b) {
    if (it != j.strings().end() && *it == b) {
      ++it;
      continue;
    }
    out.push_back(b);
  }
  return StringSet(length, std::move(out));
}

StringSet concat(const StringSet& a, const StringSet& b) {
  const std::size_t length = a.length() + b.length();
  check_length(length);
  check_size(a.size() * b.size());
  std::vector<Bits> out;
  out.reserve(a.size() * b.size());
  // Prefix-major order of sorted inputs is already sorted.
  for (Bits x : a.strings())
    for (Bits y : b.strings()) out.push_back((b.length() == 64 ? 0 : (x << b.length())) | y);
  return StringSet(length, std::move(out));
}

StringSet power(const StringSet& j, std::size_t k) {
  StringSet out = StringSet::singleton(0, 0);
  for (std::size_t i = 0; i < k; ++i) out = concat(out, j);
  return out;
}

StringSet set_union(const StringSet& a, const StringSet& b) {
  if (a.length() != b.length()) throw DimensionError("union of string sets of different lengths");
  std::vector<Bits> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.strings().begin(), a.strings().end(), b.strings().begin(), b.strings().end(),
                 std::back_inserter(out));
  return StringSet(a.length(), std::move(out));
}

StringSet set_intersection(const StringSet& a, const StringSet& b) {
  if (a.length() != b.length()) throw DimensionError("intersection of string sets of different lengths");
  std::vector<Bits> out;
  std::set_intersection(a.strings().begin(), a.strings().end(), b.strings().begin(), b.strings().end(),
                        std::back_inserter(out));
  return StringSet(a.length(), std::move(out));
}

ReducedSet normal_form(const StringSet& j, const FactorProfile& dims) {
  if (dims.size() != j.length())
    throw DimensionError("normal_form: " + std::to_string(dims.size()) + " dims for strings of length " +
                         std::to_string(j.length()));
  std::vector<std::size_t> keep;
  Bits trivial_mask = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1) throw InvalidArgument("factor dimension < 1");
    if (dims[i] == 1)
      trivial_mask |= Bits{1} << (j.length() - 1 - i);
    else
      keep.push_back(i);
  }
  FactorProfile reduced_dims;
  for (auto i : keep) reduced_dims.push_back(dims[i]);
  if (trivial_mask == 0) return {j, reduced_dims};

  std::vector<Bits> out;
  for (Bits b : j.strings()) {
    if ((b & trivial_mask) != trivial_mask) continue;
    Bits r = 0;
    for (auto i : keep) r = (r << 1) | Bits(bit_at(b, j.length(), i));
    out.push_back(r);
  }
  return {StringSet(keep.size(), std::move(out)), reduced_dims};
}

// ---------------------------------------------------------------------------
// D_x recursion with a shared memo table.

namespace {

class DeltaCache {
 public:
  std::shared_ptr<const StringSet> find(const std::string& key) {
    std::lock_guard lock(mutex_);
    auto it = table_.find(key);
    return it == table_.end() ? nullptr : it->second;
  }

  void insert(const std::string& key, std::shared_ptr<const StringSet> value) {
    std::lock_guard lock(mutex_);
    table_.emplace(key, std::move(value));  // racing inserts carry equal values
  }

  void clear() {
    std::lock_guard lock(mutex_);
    table_.clear();
  }

  std::size_t size() {
    std::lock_guard lock(mutex_);
    return table_.size();
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<const StringSet>> table_;
};

DeltaCache& delta_cache() {
  static DeltaCache cache;
  return cache;
}

StringSet elementary_delta(const std::vector<Atom>& atoms) {
  const std::size_t length = atoms.size();
  Bits trivial_mask = 0;
  for (std::size_t i = 0; i < length; ++i)
    if (atoms[i].is_trivial()) trivial_mask |= Bits{1} << (length - 1 - i);
  const FullSets sets = full_sets(length);
  std::vector<Bits> out;
  for (Bits b : sets.traceless.strings())
    if ((b & trivial_mask) == trivial_mask) out.push_back(b);
  return StringSet(length, std::move(out));
}

std::shared_ptr<const StringSet> delta_shared(const TypeExpr& x) {
  const std::string key = print_canonical(x);
  if (auto hit = delta_cache().find(key)) return hit;

  std::shared_ptr<const StringSet> result;
  if (x.is_elementary()) {
    result = std::make_shared<const StringSet>(elementary_delta(x.atoms()));
  } else {
    const auto dx = delta_shared(x.tail());
    const auto dy = delta_shared(x.head());
    const FullSets wx = full_sets(dx->length());
    StringSet left = concat(wx.all, *dy);
    StringSet right = concat(complement_in_T(*dx), perp_in_W(*dy));
    result = std::make_shared<const StringSet>(set_union(left, right));
  }
  delta_cache().insert(key, result);
  return result;
}

}  // namespace

StringSet delta_of_type(const TypeExpr& x) { return *delta_shared(x); }

void clear_delta_cache() { delta_cache().clear(); }
std::size_t delta_cache_size() { return delta_cache().size(); }

std::uint64_t dim_of_delta(const StringSet& j, const FactorProfile& dims) {
  if (dims.size() != j.length()) throw DimensionError("dim_of_delta: dims and string length differ");
  std::uint64_t total = 0;
  for (Bits b : j.strings()) {
    std::uint64_t term = 1;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (bit_at(b, j.length(), i)) continue;
      const std::uint64_t d = static_cast<std::uint64_t>(dims[i]);
      const std::uint64_t f = d * d - 1;
      if (f != 0 && term > UINT64_MAX / f) throw CapacityError("dim_of_delta overflow");
      term *= f;
    }
    if (total > UINT64_MAX - term) throw CapacityError("dim_of_delta overflow");
    total += term;
  }
  return total;
}

bool is_permutation(std::span<const std::size_t> perm, std::size_t arity) {
  if (perm.size() != arity) return false;
  std::vector<bool> seen(arity, false);
  for (auto p : perm) {
    if (p >= arity || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

Permutation invert(std::span<const std::size_t> perm) {
  if (!is_permutation(perm, perm.size())) throw InvalidArgument("not a permutation");
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

StringSet permute(const StringSet& j, std::span<const std::size_t> perm) {
  if (!is_permutation(perm, j.length()))
    throw InvalidArgument("permute: not a bijection on " + std::to_string(j.length()) + " positions");
  const std::size_t l = j.length();
  std::vector<Bits> out;
  out.reserve(j.size());
  for (Bits b : j.strings()) {
    Bits r = 0;
    for (std::size_t i = 0; i < l; ++i)
      if (bit_at(b, l, i)) r |= Bits{1} << (l - 1 - perm[i]);
    out.push_back(r);
  }
  return StringSet(l, std::move(out));
}

FactorProfile permute_dims(const FactorProfile& dims, std::span<const std::size_t> perm) {
  if (!is_permutation(perm, dims.size())) throw InvalidArgument("permute_dims: not a bijection");
  FactorProfile out(dims.size());
  for (std::size_t i = 0; i < dims.size(); ++i) out[perm[i]] = dims[i];
  return out;
}

}  // namespace hoq
