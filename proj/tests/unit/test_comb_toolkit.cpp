#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hoq/comb_toolkit.hpp"
#include "hoq/error.hpp"
#include "hoq/semantics.hpp"

#include "test_support.hpp"

#include <string>

using namespace hoq;

namespace {

TypeExpr T(const std::string& s) { return parse_type(s); }
Rational R(long p, long q) { return Rational(Integer(p), Integer(q)); }

// All dimension assignments over {1,2,3} for the three base structures.
std::vector<TypeExpr> all_bases() {
  std::vector<TypeExpr> out;
  const int ds[] = {1, 2, 3};
  for (int a : ds) {
    const std::string sa = "A:" + std::to_string(a);
    out.push_back(T(sa));
    for (int b : ds) {
      const std::string sb = "B:" + std::to_string(b);
      out.push_back(T(sa + "->" + sb));
      for (int c : ds) out.push_back(T("(" + sa + "->" + sb + ")->C:" + std::to_string(c)));
    }
  }
  return out;
}

std::vector<TypeExpr> elementary_teeth(std::size_t count) {
  std::vector<TypeExpr> e;
  for (std::size_t i = 1; i <= count; ++i) e.push_back(TypeExpr::atom("E" + std::to_string(i), 2));
  return e;
}

}  // namespace

TEST_CASE("comb_teeth and comb_over") {
  const auto teeth = comb_teeth(T("A->B"), 3);
  REQUIRE(teeth.size() == 3);
  CHECK(teeth[0] == T("A1->B1"));
  CHECK(teeth[2] == T("A3->B3"));
  CHECK(comb_over(T("A->I"), 2).derived() == T("(A1->I)->(A2->I)"));
  CHECK_THROWS_AS((CombSpec{{T("A->B"), T("C")}}.require_uniform()), InvalidArgument);
  CHECK_THROWS_AS(comb_delta_closed(CombSpec{{T("A->B"), T("C")}}), InvalidArgument);
}

TEST_CASE("closed forms agree with the recursion") {
  const auto bases = all_bases();
  int compared = 0;
  for (const auto& base : bases)
    for (std::size_t n = 1; n <= 6; ++n) {
      if (factor_dims(base).size() * n > 18) continue;
      const CombSpec spec = comb_over(base, n);
      CAPTURE(print_canonical(spec.derived()));
      CHECK(comb_delta_closed(spec) == delta_of_type(spec.derived()));
      CHECK(comb_lambda_closed(spec) == lambda_recursive(spec.derived()));
      ++compared;
    }
  CHECK(compared > 150);
}

TEST_CASE("closed-form examples") {
  const TypeExpr base = T("A->B");
  CHECK(comb_delta_closed(comb_over(base, 1)) == delta_of_type(base));
  CHECK(comb_lambda_closed(comb_over(base, 1)) == lambda_recursive(base));
  CHECK(comb_lambda_closed(comb_over(base, 2)) == R(1, 4));

  // Three channel teeth, assembled by hand from per-tooth blocks.
  const StringSet d = delta_of_type(base);
  const StringSet w = full_sets(2).all;
  const StringSet dbar = complement_in_T(d), dperp = perp_in_W(d);
  const StringSet e = StringSet::singleton(2, 0b11);
  const StringSet expected =
      set_union(set_union(concat(power(w, 2), d), concat(d, power(dperp, 2))), concat(concat(e, dbar), dperp));
  CHECK(comb_delta_closed(comb_over(base, 3)) == expected);

  // Elementary teeth and even n: λ = ∏ 1/d of the even teeth.
  const CombSpec elem{{TypeExpr::atom("E1", 2), TypeExpr::atom("E2", 3), TypeExpr::atom("E3", 5),
                       TypeExpr::atom("E4", 7)}};
  CHECK(comb_lambda_closed(elem) == R(1, 21));
}

TEST_CASE("elementary base: even run of trailing 1s") {
  for (std::size_t n = 1; n <= 8; ++n) {
    const StringSet d = comb_delta_closed(comb_over(T("A"), n));
    std::vector<Bits> expected;
    for (Bits b = 0; b < all_ones(n); ++b) {
      std::size_t run = 0;
      while (run < n && ((b >> run) & 1u)) ++run;
      if (run % 2 == 0) expected.push_back(b);
    }
    CHECK(d == StringSet(n, expected));
  }
}

TEST_CASE("comb_equiv_permutation") {
  CHECK(comb_equiv_permutation(1) == Permutation{0, 1});
  CHECK(comb_equiv_permutation(2) == Permutation{1, 2, 0, 3});
  CHECK(comb_equiv_permutation(3) == Permutation{2, 3, 1, 4, 0, 5});
  CHECK_THROWS(comb_equiv_permutation(0));
  for (std::size_t n = 1; n <= 4; ++n) {
    const TypeExpr x = comb_over(T("A->B"), n).derived();
    const TypeExpr e = make_comb(elementary_teeth(2 * n));
    const auto v = check_equiv(x, e, comb_equiv_permutation(n));
    CHECK(v.equivalent);
    CHECK(lambda_recursive(x) == lambda_recursive(e));
    CHECK(permute(upsilon(x).delta, comb_equiv_permutation(n)) == upsilon(e).delta);
  }
}

TEST_CASE("elementary layout") {
  const CombSpec spec = comb_over(T("A->B"), 2);
  const CombSpec e = comb_elementary_layout(spec);
  REQUIRE(e.n() == 4);
  CHECK(e.teeth[0] == T("A2"));
  CHECK(e.teeth[1] == T("A1"));
  CHECK(e.teeth[2] == T("B1"));
  CHECK(e.teeth[3] == T("B2"));
  CHECK_THROWS_AS(comb_elementary_layout(comb_over(T("(A->B)->C"), 2)), InvalidArgument);
}

TEST_CASE("check_comb_normalization examples") {
  const CombSpec three{elementary_teeth(3)};
  const TypeExpr x3 = three.derived();
  const double l3 = lambda_recursive(x3).convert_to<double>();
  CHECK(check_comb_normalization(HermOp::identity({2, 2, 2}, l3), three));
  CHECK_FALSE(check_comb_normalization(HermOp::identity({2, 2, 2}, 2 * l3), three));

  const CombSpec chan{{T("A"), T("B")}};
  CHECK(check_comb_normalization(HermOp::identity({2, 2}, 0.5), chan));
  CHECK_FALSE(check_comb_normalization(HermOp::identity({2, 2}, 0.25), chan));
  CHECK_THROWS_AS(check_comb_normalization(HermOp::identity({2, 3}), chan), DimensionError);

  // Mixed dims: λ I on a (2,3,5,7) elementary comb.
  const CombSpec mixed{{TypeExpr::atom("E1", 2), TypeExpr::atom("E2", 3), TypeExpr::atom("E3", 5),
                        TypeExpr::atom("E4", 7)}};
  const double lm = lambda_recursive(mixed.derived()).convert_to<double>();
  CHECK(check_comb_normalization(HermOp::identity({2, 3, 5, 7}, lm), mixed));
  CHECK_FALSE(check_comb_normalization(HermOp::identity({2, 3, 5, 7}, 1.0 / 210), mixed));

  testing::Rng rng(1);
  for (std::size_t n = 1; n <= 3; ++n) {
    const Matrix c = testing::network_comb_choi(n, 2, 2, rng);
    const CombSpec spec{elementary_teeth(2 * n)};
    const HermOp r(FactorProfile(2 * n, 2), c);
    CHECK(check_comb_normalization(r, spec));
    CHECK(check_deterministic(r, spec.derived()).verdict);
  }
}

TEST_CASE("normalization bridge") {
  for (std::size_t n = 1; n <= 3; ++n) {
    const CombSpec spec = comb_over(T("A->B"), n);
    const CombSpec layout = comb_elementary_layout(spec);
    const Permutation p = comb_equiv_permutation(n);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const HermOp r = sample_deterministic(spec.derived(), seed);
      CHECK(check_comb_normalization(reorder_factors(r, p), layout));
      // Break the trace recursion at the outermost tooth.
      Matrix bumped = r.matrix();
      bumped(0, 0) += 0.05;
      bumped(bumped.rows() - 1, bumped.rows() - 1) -= 0.05;
      const HermOp broken = HermOp::trusted(r.dims(), bumped);
      CHECK(check_comb_normalization(reorder_factors(broken, p), layout) ==
            check_deterministic(broken, spec.derived()).verdict);
    }
    testing::Rng rng(n);
    for (int i = 0; i < 4; ++i) {
      const HermOp e(FactorProfile(2 * n, 2), testing::network_comb_choi(n, 2, 2, rng));
      CHECK(check_deterministic(reorder_factors(e, invert(p)), spec.derived()).verdict);
    }
  }
}

TEST_CASE("comb tensor delta") {
  for (const char* b : {"A", "A->B", "A:3->B:2"})
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t n = 1; n <= 3; ++n) {
        const TypeExpr base = T(b);
        if (factor_dims(base).size() * (m + n) > 12) continue;
        const auto left = comb_teeth(base, m, 1), right = comb_teeth(base, n, m + 1);
        const TypeExpr tensor_type = comb_tensor_type(left, right);
        CHECK(tensor_type == tensor(sequence_comb(left), sequence_comb(right)));
        CAPTURE(print_canonical(tensor_type));
        CHECK(comb_tensor_delta(m, n, base) == upsilon(tensor_type).delta);
      }
  // A trivial side drops out.
  CHECK(comb_tensor_delta({T("A->B")}, {T("I")}) == upsilon(T("A->B")).delta);
}

TEST_CASE("comb arrow delta") {
  for (const char* b : {"A", "A->B"})
    for (std::size_t n = 1; n <= 3; ++n)
      for (std::size_t m = 1; m <= 3; ++m) {
        const TypeExpr base = T(b);
        if (factor_dims(base).size() * (m + n) > 12) continue;
        const TypeExpr arrow = comb_arrow_type(comb_teeth(base, n, 1), comb_teeth(base, m, n + 1));
        CAPTURE(print_canonical(arrow));
        CHECK(comb_arrow_delta(n, m, base) == upsilon(arrow).delta);
      }
  // One input channel into a 2-comb is the uncurried bipartite supermap.
  const TypeExpr lhs = T("(A1->B1)->((A2->B2)->(A3->B3))");
  const TypeExpr rhs = TypeExpr::arrow(tensor(T("A1->B1"), T("A2->B2")), T("A3->B3"));
  CHECK(comb_arrow_delta(1, 2, T("A->B")) == upsilon(lhs).delta);
  CHECK(check_equiv(lhs, rhs, Permutation{0, 1, 2, 3, 4, 5}).equivalent);
}

TEST_CASE("non-signalling channels pass and SWAP fails") {
  const TypeExpr x = tensor(T("A->B"), T("C->D"));
  testing::Rng rng(2);
  const std::vector<std::size_t> acbd_to_abcd{0, 2, 1, 3};
  for (int i = 0; i < 20; ++i) {
    const Matrix j1 = testing::choi(testing::random_channel(2, 2, 1 + rng() % 4, rng), 2);
    const Matrix j2 = testing::choi(testing::random_channel(2, 2, 1 + rng() % 4, rng), 2);
    CHECK(check_deterministic(HermOp({2, 2, 2, 2}, testing::naive_kron(j1, j2)), x).verdict);
  }
  // SWAP from (A,C) to (B,D): B receives C and D receives A.
  const std::vector<Matrix> swap{[] {
    Matrix s = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) s(c * 2 + a, a * 2 + c) = 1;
    return s;
  }()};
  const HermOp j_acbd({2, 2, 2, 2}, testing::choi(swap, 4));
  const HermOp j = reorder_factors(j_acbd, acbd_to_abcd);
  CHECK(check_deterministic(j_acbd, T("A*C->B*D")).verdict);
  CHECK_FALSE(check_deterministic(j, x).verdict);
}

TEST_CASE("PR box is deterministic yet outside the hull of product channels") {
  const TypeExpr x = tensor(T("A->B"), T("C->D"));
  // Classical channels, factor order (A,B,C,D).
  auto index = [](int a, int b, int c, int d) { return ((a * 2 + b) * 2 + c) * 2 + d; };
  Matrix pr = Matrix::Zero(16, 16), witness = Matrix::Zero(16, 16);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const int i = index(a, b, c, d);
          if ((b ^ d) == (a & c)) pr(i, i) = 0.5;
          witness(i, i) = ((b ^ d ^ (a & c)) == 0) ? 1.0 : -1.0;
        }
  const HermOp r({2, 2, 2, 2}, pr);
  REQUIRE(check_deterministic(r, x).verdict);
  const double pr_value = (witness * pr).trace().real();
  CHECK(pr_value == doctest::Approx(4.0));

  testing::Rng rng(3);
  double best = -1e9;
  for (int i = 0; i < 1000; ++i) {
    const Matrix j1 = testing::choi(testing::random_channel(2, 2, 1 + rng() % 4, rng), 2);
    const Matrix j2 = testing::choi(testing::random_channel(2, 2, 1 + rng() % 4, rng), 2);
    Matrix prod = testing::naive_kron(j1, j2);
    // (A,B,C,D) already: j1 on (A,B), j2 on (C,D).
    best = std::max(best, (witness * prod).trace().real());
  }
  CHECK(best <= 2.0 + 1e-9);
  // Any hull point H has Tr[W H] ≤ best, so ‖R − H‖_F ≥ (Tr[W R] − best)/‖W‖_F.
  const double distance_bound = (pr_value - best) / witness.norm();
  CHECK(distance_bound > 0.4);
}
