#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "pentsum/lattice.hpp"

using namespace pentsum;

namespace {

std::vector<Vec> box_vectors(const ZLattice& L, i64 n) {
  // Bound |x_i| via the inverse Gram diagonal: x_i^2 <= n * (G^-1)_ii.
  const int r = L.rank();
  const IntMatrix adj = adjugate(L.gram());
  const i64 det = L.det();
  std::vector<i64> bound(r);
  for (int i = 0; i < r; ++i)
    bound[i] = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(n) * adj(i, i) / det))) + 1;
  std::vector<Vec> out;
  Vec x(r);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == r) {
      if (L.Q(x) == n) out.push_back(x);
      return;
    }
    for (i64 v = -bound[i]; v <= bound[i]; ++v) {
      x[i] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

ZLattice case7_k2() { return ZLattice(IntMatrix{{2, 1, 1, 0}, {1, 3, 1, 1}, {1, 1, 3, 1}, {0, 1, 1, 4}}); }

}  // namespace

TEST_CASE("ZLattice validation") {
  CHECK_THROWS_AS(ZLattice(IntMatrix{{1, 2}, {2, 1}}), ContractViolation);
  CHECK_THROWS_AS(ZLattice(IntMatrix{{1, 0}, {1, 1}}), ContractViolation);
  ZLattice k = case7_k2();
  CHECK(k.det() == 40);
  CHECK(ZLattice::from_json(k.to_json()) == k);
  CHECK(k.hash() == case7_k2().hash());
  CHECK(k.hash() != ZLattice::diagonal({1, 1, 2, 20}).hash());
  CHECK_THROWS_AS(BinaryForm(2, 2, 2), ContractViolation);
  CHECK(BinaryForm(7, 5, 4).discriminant() == 3);
}

TEST_CASE("vectors_of_norm examples") {
  CHECK(vectors_of_norm(ZLattice::diagonal({1, 1, 1, 4}), 1).size() == 6);
  auto r9 = vectors_of_norm(ZLattice::diagonal({1, 1, 2, 5}), 9);
  for (Vec v : {Vec{1, 1, 1, 1}, Vec{3, 0, 0, 0}, Vec{2, 0, 0, 1}, Vec{1, 0, 2, 0}})
    CHECK(std::binary_search(r9.begin(), r9.end(), v));
  CHECK(vectors_of_norm(ZLattice::diagonal({1, 1, 2, 28}), 14).empty());
}

TEST_CASE("vectors_of_norm matches box enumeration") {
  std::vector<ZLattice> lats{ZLattice::diagonal({1, 1, 1, 1}), ZLattice::diagonal({1, 2, 3, 5}), case7_k2(),
                             ZLattice(IntMatrix{{2, 1, 1}, {1, 2, 0}, {1, 0, 4}}), ZLattice(IntMatrix{{2, 1}, {1, 3}}),
                             ZLattice(IntMatrix{{3, 1, 1, 0}, {1, 3, 1, 0}, {1, 1, 4, 0}, {0, 0, 0, 2}})};
  for (const auto& L : lats)
    for (i64 n = 1; n <= 50; ++n) CHECK(vectors_of_norm(L, n) == box_vectors(L, n));
}

TEST_CASE("automorphism groups") {
  auto g = automorphism_group(ZLattice::diagonal({1, 1, 1, 1}));
  CHECK(g.size() == 384);
  auto g2 = automorphism_group(ZLattice::diagonal({1, 2, 3, 5}));
  CHECK(g2.size() == 16);
  // Brute force over signed unit columns of matching norm.
  size_t brute = 0;
  {
    ZLattice L = ZLattice::diagonal({1, 2, 3, 5});
    std::vector<std::vector<Vec>> cand(4);
    for (int i = 0; i < 4; ++i) cand[i] = box_vectors(L, L.gram()(i, i));
    for (auto& a : cand[0])
      for (auto& b : cand[1])
        for (auto& c : cand[2])
          for (auto& d : cand[3]) {
            IntMatrix u = IntMatrix::from_columns({a, b, c, d});
            if (u.transpose() * L.gram() * u == L.gram()) ++brute;
          }
  }
  CHECK(brute == 16);
  const auto& id = IntMatrix::identity(4);
  CHECK(std::binary_search(g.begin(), g.end(), id));
  CHECK(std::binary_search(g.begin(), g.end(), id.scaled(-1)));
}

TEST_CASE("orbit representatives") {
  auto r = orbits(ZLattice::diagonal({1, 1, 1, 4}), 7);
  REQUIRE(r.size() == 1);
  CHECK(std::binary_search(r[0].members.begin(), r[0].members.end(), Vec{1, 1, 1, 1}));

  auto reps = orbit_representatives(ZLattice::diagonal({1, 2, 2, 3}), 8);
  REQUIRE(reps.size() == 3);
  std::set<Vec> got(reps.begin(), reps.end());
  CHECK(got == std::set<Vec>{{1, 1, 1, 1}, {2, 1, 1, 0}, {0, 2, 0, 0}});
  CHECK(orbit_representatives(ZLattice::diagonal({1, 1, 2, 5}), 9).size() == 4);
}

TEST_CASE("isometry testing") {
  ZLattice L = ZLattice::diagonal({1, 2, 4, 5});
  auto self = is_isometric(L, L);
  REQUIRE(self);
  CHECK(self->transpose() * L.gram() * *self == L.gram());
  CHECK_FALSE(is_isometric(L, ZLattice::diagonal({1, 1, 2, 20})).has_value());
  CHECK_FALSE(is_isometric(L, case7_k2()).has_value());
  auto perm = is_isometric(ZLattice::diagonal({1, 1, 1, 4}), ZLattice::diagonal({1, 1, 4, 1}));
  REQUIRE(perm);
  CHECK(perm->transpose() * IntMatrix::diagonal({1, 1, 1, 4}) * *perm == IntMatrix::diagonal({1, 1, 4, 1}));
}

TEST_CASE("pinned systems") {
  auto s = solve_pinned_system({1, 1, 1, 1}, 4, 4);
  CHECK(std::binary_search(s.begin(), s.end(), Vec{1, 1, 1, 1}));
  auto z = solve_pinned_system({1, 1, 1, 1}, 4, 0);
  CHECK(std::binary_search(z.begin(), z.end(), Vec{1, 1, -1, -1}));
  CHECK(std::binary_search(z.begin(), z.end(), Vec{-1, 1, -1, 1}));
  auto t = solve_pinned_system({1, 2, 2, 3}, 8, 8);
  CHECK(std::binary_search(t.begin(), t.end(), Vec{1, 1, 1, 1}));

  std::mt19937_64 rng(5);
  const CoefficientVector a{1, 2, 3, 7};
  for (int trial = 0; trial < 300; ++trial) {
    i64 aval = static_cast<i64>(rng() % 60), bval = static_cast<i64>(rng() % 61) - 30;
    auto sols = solve_pinned_system(a, aval, bval);
    std::vector<Vec> brute;
    for (i64 x1 = -8; x1 <= 8; ++x1)
      for (i64 x2 = -6; x2 <= 6; ++x2)
        for (i64 x3 = -5; x3 <= 5; ++x3)
          for (i64 x4 = -3; x4 <= 3; ++x4)
            if (x1 * x1 + 2 * x2 * x2 + 3 * x3 * x3 + 7 * x4 * x4 == aval && x1 + 2 * x2 + 3 * x3 + 7 * x4 == bval)
              brute.push_back({x1, x2, x3, x4});
    CHECK(sols == brute);
    if (a.sum() * aval - bval * bval < 0) CHECK(sols.empty());
  }
}

TEST_CASE("non-negative filter") {
  auto s = solve_pinned_system({1, 1, 1, 1}, 4, 4);
  auto f = nonneg_filter_and_N(s, 5, {1, 1, 1, 1}, 4, 4);
  REQUIRE(f.size() == 1);
  CHECK(f[0].N == 4);
  CHECK(f[0].x == Vec{1, 1, 1, 1});
  auto z = solve_pinned_system({1, 1, 1, 1}, 4, 0);
  CHECK_FALSE(z.empty());
  CHECK(nonneg_filter_and_N(z, 5, {1, 1, 1, 1}, 4, 0).empty());
  CHECK_THROWS_AS(nonneg_filter_and_N(z, 5, {1, 1, 1, 1}, 4, 1), ContractViolation);
  CHECK(polygonal_target(5, 9, 9) == 9);
}
