#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hoq/choi_numeric.hpp"
#include "hoq/error.hpp"
#include "hoq/subspace_algebra.hpp"

#include "test_support.hpp"

#include <omp.h>

using namespace hoq;

namespace {

StringSet S(std::vector<std::string> s, std::size_t len) { return StringSet::from_strings(s, len); }
StringSet S(std::vector<std::string> s) { return S(s, s.empty() ? 0 : s.front().size()); }

std::size_t total_factors(const TypeExpr& x) { return factor_dims(x).size(); }

}  // namespace

TEST_CASE("full_sets") {
  const auto f1 = full_sets(1);
  CHECK(f1.all == S({"0", "1"}));
  CHECK(f1.traceless == S({"0"}));
  CHECK(f1.identity_string == 1);
  const auto f2 = full_sets(2);
  CHECK(f2.all == S({"00", "01", "10", "11"}));
  CHECK(f2.traceless == S({"00", "01", "10"}));
  const auto f0 = full_sets(0);
  CHECK(f0.all.size() == 1);
  CHECK(f0.traceless.empty());
}

TEST_CASE("complement_in_T and perp_in_W") {
  CHECK(complement_in_T(S({"0"})).empty());
  CHECK(complement_in_T(S({"10", "00"})) == S({"01"}));
  CHECK(complement_in_T(StringSet(2)) == S({"00", "01", "10"}));
  CHECK_THROWS_AS(complement_in_T(S({"11"})), InvalidArgument);
  CHECK(perp_in_W(S({"10", "00"})) == S({"11", "01"}));
  CHECK(perp_in_W(S({"0"})) == S({"1"}));
  CHECK(perp_in_W(full_sets(3).all).empty());
}

TEST_CASE("concat") {
  CHECK(concat(S({"0", "1"}), S({"0"})) == S({"00", "10"}));
  CHECK(concat(S({"0", "1"}), StringSet(3)).empty());
  const StringSet eps = StringSet::singleton(0, 0);
  CHECK(concat(eps, S({"01", "10"})) == S({"01", "10"}));
  CHECK(concat(S({"01", "10"}), eps) == S({"01", "10"}));
  CHECK(power(S({"0"}), 3) == S({"000"}));
  CHECK(power(S({"0"}), 0) == eps);
}

TEST_CASE("set algebra invariants on random sets") {
  testing::Rng rng(7);
  auto random_set = [&](std::size_t len, bool allow_e) {
    std::vector<Bits> out;
    for (Bits b = 0; b < (Bits{1} << len); ++b)
      if ((rng() & 1u) && (allow_e || b != all_ones(len))) out.push_back(b);
    return StringSet(len, out);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t l1 = 1 + rng() % 4, l2 = 1 + rng() % 4, l3 = rng() % 3;
    const StringSet a = random_set(l1, false), b = random_set(l2, true), c = random_set(l3, true);
    CHECK(complement_in_T(complement_in_T(a)) == a);
    CHECK(perp_in_W(perp_in_W(b)) == b);
    CHECK(concat(concat(a, b), c) == concat(a, concat(b, c)));
    if (!a.empty() && !b.empty()) CHECK(concat(a, b).size() == a.size() * b.size());
  }
}

TEST_CASE("normal_form") {
  const auto r1 = normal_form(S({"01", "11"}), {1, 2});
  CHECK(r1.set == S({"1"}));
  CHECK(r1.dims == FactorProfile{2});
  const auto r2 = normal_form(S({"0", "1"}), {2});
  CHECK(r2.set == S({"0", "1"}));
  const auto r3 = normal_form(delta_of_type(parse_type("A->I")), {2, 1});
  CHECK(r3.set.empty());
  CHECK(r3.set.length() == 1);
  CHECK_THROWS_AS(normal_form(S({"0"}), {2, 2}), DimensionError);
  // idempotent
  const auto again = normal_form(r1.set, r1.dims);
  CHECK(again.set == r1.set);
}

TEST_CASE("delta_of_type examples") {
  CHECK(delta_of_type(parse_type("A->B")) == S({"00", "10"}));
  CHECK(delta_of_type(parse_type("(A->B)->C")) == S({"000", "010", "100", "110", "011"}));
  CHECK(delta_of_type(parse_type("I")).empty());
  CHECK(delta_of_type(parse_type("A")) == S({"0"}));
  // A trivial atom inside a group keeps its 1 bit.
  CHECK(delta_of_type(extend_by(parse_type("A"), Atom::trivial())) == S({"01"}));
}

TEST_CASE("delta_of_type agrees with the numeric affine-hull oracle") {
  testing::TypeGen gen(21, {1, 2, 3});
  int compared = 0;
  for (int i = 0; i < 400 && compared < 120; ++i) {
    const TypeExpr x = gen.type(4);
    std::size_t side = 1;
    for (int d : factor_dims(x)) side *= static_cast<std::size_t>(d);
    if (side > 12) continue;
    ++compared;
    const StringSet d = delta_of_type(x);
    const auto basis = testing::numeric_delta_basis(x);
    CAPTURE(print_canonical(x));
    REQUIRE(static_cast<std::uint64_t>(basis.cols()) == dim_of_delta(d, factor_dims(x)));
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      const Matrix h = testing::vec_to_herm(basis.col(c), static_cast<Eigen::Index>(side));
      const HermOp op = HermOp::trusted(factor_dims(x), h);
      CHECK((project_delta(op, d).matrix() - h).norm() < 1e-8);
    }
  }
  CHECK(compared >= 100);
}

TEST_CASE("delta of bar(x) is the complement of delta of x") {
  testing::TypeGen gen(12, {1, 2, 3});
  for (int i = 0; i < 500; ++i) {
    const TypeExpr x = gen.bounded(4, 14);
    const auto dims = factor_dims(x);
    auto bar_dims = dims;
    bar_dims.push_back(1);
    const auto lhs = normal_form(delta_of_type(bar(x)), bar_dims).set;
    const auto rhs = complement_in_T(normal_form(delta_of_type(x), dims).set);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("dim_of_delta examples and the arrow counting identity") {
  CHECK(dim_of_delta(S({"00", "10"}), {2, 2}) == 12);
  CHECK(dim_of_delta(StringSet(2), {2, 2}) == 0);
  CHECK(dim_of_delta(S({"111"}), {3, 2, 5}) == 1);
  CHECK_THROWS_AS(dim_of_delta(S({"0"}), {2, 2}), DimensionError);

  testing::TypeGen gen(4, {1, 2, 3});
  for (int i = 0; i < 300; ++i) {
    const TypeExpr x = gen.bounded(3, 6), y = gen.bounded(3, 6);
    auto dims_of = [](const TypeExpr& t) {
      std::uint64_t d = 1;
      for (int v : factor_dims(t)) d *= static_cast<std::uint64_t>(v);
      return d;
    };
    const std::uint64_t dx = dims_of(x), dy = dims_of(y);
    const std::uint64_t ax = dim_of_delta(delta_of_type(x), factor_dims(x));
    const std::uint64_t ay = dim_of_delta(delta_of_type(y), factor_dims(y));
    const TypeExpr z = TypeExpr::arrow(x, y);
    CHECK(dim_of_delta(delta_of_type(z), factor_dims(z)) == dy * dy * (dx * dx - 1 - ax) + ay * (1 + ax));
  }
}

TEST_CASE("permute") {
  const Permutation swap{1, 0};
  CHECK(permute(S({"01"}), swap) == S({"10"}));
  CHECK(permute(S({"00", "10"}), Permutation{0, 1}) == S({"00", "10"}));
  CHECK_THROWS_AS(permute(S({"01"}), Permutation{0, 0}), InvalidArgument);
  CHECK(invert(Permutation{2, 0, 1}) == Permutation{1, 2, 0});
  CHECK(permute_dims({2, 3, 5}, Permutation{2, 0, 1}) == FactorProfile{3, 5, 2});
  // Single-bit strings track the scatter direction.
  CHECK(permute(S({"100"}), Permutation{2, 0, 1}) == S({"001"}));
}

TEST_CASE("capacity errors") {
  CHECK_THROWS_AS(StringSet(65), CapacityError);
  CHECK_THROWS_AS(full_sets(40), CapacityError);
}

TEST_CASE("delta cache under concurrent use") {
  testing::TypeGen gen(99, {2, 3});
  std::vector<TypeExpr> types;
  for (int i = 0; i < 64; ++i) types.push_back(gen.bounded(4, 10));
  std::vector<StringSet> serial;
  clear_delta_cache();
  for (const auto& t : types) serial.push_back(delta_of_type(t));
  clear_delta_cache();
  std::vector<StringSet> parallel(types.size());
#pragma omp parallel for num_threads(4)
  for (int i = 0; i < static_cast<int>(types.size()); ++i) parallel[i] = delta_of_type(types[i]);
  CHECK(serial == parallel);
  CHECK(delta_cache_size() > 0);
  (void)total_factors;
}
