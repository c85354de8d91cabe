#include <doctest.h>

#include <random>

#include "pentsum/intmath.hpp"

using namespace pentsum;

TEST_CASE("isqrt and is_square") {
  for (u64 n = 0; n < 5000; ++n) {
    u64 r = isqrt(n);
    CHECK(r * r <= n);
    CHECK((r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(UINT64_MAX) == 4294967295ULL);
  i64 root = 0;
  CHECK(is_square(144, &root));
  CHECK(root == 12);
  CHECK_FALSE(is_square(-4));
  CHECK_FALSE(is_square(145));
}

TEST_CASE("ext_gcd and mod") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    i64 a = static_cast<i64>(rng() % 2001) - 1000, b = static_cast<i64>(rng() % 2001) - 1000;
    i64 x, y;
    i64 g = ext_gcd(a, b, x, y);
    CHECK(g >= 0);
    CHECK(x * a + y * b == g);
    if (g) {
      CHECK(a % g == 0);
      CHECK(b % g == 0);
    }
  }
  CHECK(mod(-7, 3) == 2);
  CHECK(floor_div(-7, 2) == -4);
  CHECK(lcm(4, 6) == 12);
  CHECK_THROWS_AS(narrow(static_cast<i128>(INT64_MAX) + 1), RangeError);
}

TEST_CASE("determinant and adjugate") {
  IntMatrix k{{2, 1, 1, 0}, {1, 3, 1, 1}, {1, 1, 3, 1}, {0, 1, 1, 4}};
  i64 d = determinant(k);
  CHECK(d == 40);
  CHECK(adjugate(k) * k == IntMatrix::identity(4).scaled(d));
  CHECK(determinant(IntMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(determinant(IntMatrix{{1, 2}, {2, 4}}) == 0);
}

TEST_CASE("solve_integer_system agrees with brute force") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 2), n = 3;
    IntMatrix c(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) c(i, j) = static_cast<i64>(rng() % 9) - 4;
    std::vector<i64> rhs(m);
    for (auto& r : rhs) r = static_cast<i64>(rng() % 11) - 5;
    auto sol = solve_integer_system(c, rhs);
    bool brute = false;
    for (i64 a = -12; a <= 12 && !brute; ++a)
      for (i64 b = -12; b <= 12 && !brute; ++b)
        for (i64 e = -12; e <= 12 && !brute; ++e) brute = c * std::vector<i64>{a, b, e} == rhs;
    if (brute) CHECK(sol.has_value());
    if (!sol) continue;
    CHECK(c * sol->particular == rhs);
    for (int k = 0; k < sol->kernel.cols(); ++k) CHECK(c * sol->kernel.column(k) == std::vector<i64>(m, 0));
  }
}

TEST_CASE("kernel basis spans the full integer kernel") {
  IntMatrix c{{2, 4, 6}};
  auto sol = solve_integer_system(c, {2});
  REQUIRE(sol);
  CHECK(sol->kernel.cols() == 2);
  // (1,1,-1) is in the kernel and must be an integer combination.
  auto s2 = solve_integer_system(sol->kernel, {1, 1, -1});
  CHECK(s2.has_value());
  CHECK_FALSE(solve_integer_system(c, {3}).has_value());
}

TEST_CASE("hermite_rows") {
  IntMatrix rows{{2, 0}, {0, 2}, {1, 1}};
  IntMatrix h = hermite_rows(rows);
  CHECK(h == IntMatrix{{1, 1}, {0, 2}});
}

TEST_CASE("lll keeps the lattice and shortens") {
  IntMatrix g = IntMatrix::identity(3);
  IntMatrix b{{1, 100, 37}, {0, 1, 5}, {0, 0, 1}};
  IntMatrix r = lll_reduce(b, g);
  CHECK(std::abs(determinant(r)) == 1);
  for (int j = 0; j < 3; ++j) CHECK(bilinear(g, r.column(j), r.column(j)) == 1);
}
