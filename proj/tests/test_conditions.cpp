#include <doctest.h>

#include <random>

#include "pentsum/conditions.hpp"
#include "pentsum/errors.hpp"
#include "pentsum/goodsets.hpp"

using namespace pentsum;

namespace {

// n = p^(2c) (m d + r) for some c, d >= 0.
bool has_excluded_form(i64 n, i64 p, i64 m, i64 r) {
  while (n > 0) {
    if (n % m == r % m) return true;
    if (n % (p * p) != 0) return false;
    n /= p * p;
  }
  return false;
}

}  // namespace

TEST_CASE("condition examples") {
  CHECK(sufficient_condition("(1,1,1,4)", 6, 2));
  CHECK(sufficient_condition("(1,1,1,4)", 2, 0));
  CHECK_FALSE(sufficient_condition("(1,1,1,4)", 4, 2));
  CHECK_FALSE(sufficient_condition("(1,2,2,2)", 2, 0));  // 14
  CHECK_FALSE(sufficient_condition("(1,2,2,2)", 8, 0));  // 4 * 14
  CHECK(sufficient_condition("(1,2,2,2)", 4, 0));        // 28
  for (i64 a = 1; a < 40; ++a)
    for (i64 b = a % 2; b * b < 13 * a; b += 2) CHECK(sufficient_condition("(1,2,3,7)", a, b));
  CHECK(condition_for("(1,2,3,7)").str() == "any a', b'");
  CHECK_THROWS_AS(sufficient_condition("(9,9,9,9)", 1, 1), NotFound);
  CHECK_THROWS_AS(sufficient_condition("(1,1,1,4)", 2, 1), ContractViolation);
  CHECK_THROWS_AS(sufficient_condition("(1,1,1,4)", 1, 3), ContractViolation);
  CHECK(condition_ids().size() == 35);
}

TEST_CASE("excluded forms against direct stripping") {
  struct Row {
    const char* id;
    i64 k, p, m, r;
  };
  const Row rows[] = {{"(1,2,2,2)", 7, 2, 16, 14}, {"(1,2,2,4)", 9, 2, 8, 7},  {"(1,2,3,3)", 9, 3, 3, 1},
                      {"(1,2,3,6)", 12, 2, 8, 7},  {"(1,2,4,5)", 12, 2, 16, 6}, {"(1,2,4,6)", 13, 2, 8, 5},
                      {"(1,2,4,8)", 15, 2, 8, 7},  {"(1,2,4,12)", 19, 2, 16, 10}};
  for (const auto& row : rows)
    for (i64 a = 1; a < 300; ++a)
      for (i64 b = a % 2; b * b < row.k * a; b += 2)
        CHECK_MESSAGE(sufficient_condition(row.id, a, b) == !has_excluded_form(row.k * a - b * b, row.p, row.m, row.r),
                      row.id, " a'=", a, " b'=", b);
}

TEST_CASE("residue evaluation agrees with exact evaluation") {
  std::mt19937_64 rng(3);
  int violations = 0, decided = 0;
  for (const auto& id : condition_ids()) {
    const Condition& c = condition_for(id);
    const i64 P = c.modulus();
    for (int t = 0; t < 2000; ++t) {
      const i64 a = 1 + static_cast<i64>(rng() % 1'000'000);
      const i64 bmax = static_cast<i64>(std::sqrt(static_cast<double>(c.A) * a));
      i64 b = static_cast<i64>(rng() % (bmax + 1));
      if ((a - b) % 2 != 0) b = b > 0 ? b - 1 : b + 1;
      if (c.A * a - b * b <= 0) continue;
      const Tri r = c.eval_mod(mod(a, P), mod(b, P), P);
      if (r == Tri::Unknown) continue;
      ++decided;
      if ((r == Tri::True) != c.eval(a, b)) ++violations;
    }
  }
  CHECK(violations == 0);
  CHECK(decided > 0);
}

TEST_CASE("window claims quoted in the case arguments") {
  // a_k = a_0 + k hits 2 mod 4 for some k < 4.
  for (i64 a0 = 0; a0 < 4; ++a0) {
    bool hit = false;
    for (i64 k = 0; k < 4; ++k) hit |= mod(a0 + k, 4) == 2;
    CHECK(hit);
  }

  // A = 9: D_k = 9 a_k - b_k^2 is nonzero mod 5 for some k in {0, 6, 12}.
  for (i64 a0 = 0; a0 < 5; ++a0)
    for (i64 b0 = 0; b0 < 5; ++b0) {
      bool hit = false;
      for (i64 k : {0, 6, 12}) hit |= mod(9 * (a0 + k) - (b0 + 3 * k) * (b0 + 3 * k), 5) != 0;
      CHECK(hit);
    }

  // A = 12, N = 4 (mod 12): along the progression of S^(4), some D_i with
  // i in {0, 4, 8, 12} is admissible. The residues D_i mod 64 only take two
  // values, {0, 32}, not the four residues {0, 16, 32, 48}.
  const GoodSet s4(24, {{0, 16}, {4, 4}, {8, 16}, {12, 4}, {16, 16}, {20, 4}});
  const Condition& c1245 = condition_for("(1,2,4,5)");
  for (i64 N = 4; N < 4 + 12 * 96; N += 12)
    for (const auto& p : s4.pairs()) {
      const i64 r = choose_r(N, s4, p);
      for (i64 m = 0; m < 64; ++m) {
        const i64 b0 = r + 72 * m;
        std::set<i64> ds;
        bool hit = false;
        for (i64 i : {0, 4, 8, 12}) {
          const i64 b = b0 + 3 * i, a = (2 * N + b) / 3;
          ds.insert(mod(12 * a - b * b, 64));
          CHECK(s4.contains(a, b));
          hit |= c1245.eval(a, b);
        }
        CHECK(hit);
        CHECK(ds == std::set<i64>{0, 32});
      }
    }
}
