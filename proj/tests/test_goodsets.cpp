#include <doctest.h>

#include <cmath>
#include <random>

#include "pentsum/genusdata.hpp"
#include "pentsum/goodsets.hpp"

using namespace pentsum;

namespace {

using Pairs = std::set<ResiduePair>;

const ZLattice kL1223 = ZLattice::diagonal({1, 2, 2, 3});
const ZLattice kL1125 = ZLattice::diagonal({1, 1, 2, 5});
ZLattice case3_k() { return ZLattice::orthogonal_sum(ZLattice::diagonal({1}), ZLattice(IntMatrix{{2, 1, 1}, {1, 2, 0}, {1, 0, 4}})); }

// Numerators (2T) of the printed maps; column j is the image of the j-th basis vector.
const IntMatrix kT{{1, 0, 0, 3}, {0, 0, 2, 0}, {0, 2, 0, 0}, {1, 0, 0, -1}};
const IntMatrix kT1{{2, 0, 0, 0}, {0, 1, 0, 4}, {0, 1, 2, 0}, {0, 1, 0, 0}};
const IntMatrix kT2{{2, 0, 0, 0}, {0, 0, 1, 3}, {0, 2, 1, 1}, {0, 0, 1, -1}};
const IntMatrix kT3{{2, 0, 0, 0}, {0, 1, 1, -3}, {0, 1, -1, 1}, {0, 1, 1, 1}};

ScaledIsometry scaled(const IntMatrix& m, const ZLattice& K, const ZLattice& L, const Vec& v) {
  return ScaledIsometry{m, 2, K, L, v};
}

}  // namespace

TEST_CASE("printed scaled isometries") {
  const Vec w1{2, 1, 1, 0};
  auto t = scaled(kT, kL1223, kL1223, w1);
  CHECK(t.preserves_form());
  CHECK(t.image(w1) == Vec{1, 1, 1, 1});

  const Vec v{1, 2, 0, 0};
  auto t1 = scaled(kT1, case3_k(), kL1125, v);
  auto t2 = scaled(kT2, case3_k(), kL1125, v);
  auto t3 = scaled(kT3, case3_k(), kL1125, v);
  for (const auto* m : {&t1, &t2, &t3}) CHECK(m->preserves_form());
  CHECK(t1.image(v) == Vec{1, 1, 1, 1});
  CHECK(t3.image(v) == Vec{1, 1, 1, 1});
  CHECK(t2.image(v) == Vec{1, 0, 2, 0});

  // Which map covers u depends on y2 and y3 + y4 mod 2.
  for (i64 y1 = 0; y1 < 2; ++y1)
    for (i64 y2 = 0; y2 < 2; ++y2)
      for (i64 y3 = 0; y3 < 2; ++y3)
        for (i64 y4 = 0; y4 < 2; ++y4) {
          Vec u{y1, y2, y3, y4};
          if (y2 == 0) CHECK(t1.maps_into_target(u));
          else if ((y3 + y4) % 2 == 0) CHECK(t2.maps_into_target(u));
          else CHECK(t3.maps_into_target(u));
        }

  // The search finds the printed matrices when seeded and recognises them.
  auto found = find_scaled_isometries(case3_k(), kL1125, 2, v, 100000, std::nullopt, {kT1, kT2, kT3}, 3);
  REQUIRE(found.found.size() == 3);
  CHECK(found.found[0].numerator == kT1);
  CHECK(find_scaled_isometries(kL1223, kL1223, 1, w1, 1000).found.size() > 0);
  auto id = find_scaled_isometries(kL1223, kL1223, 1, w1, 100000);
  bool has_identity = false;
  for (const auto& m : id.found) has_identity |= m.numerator == IntMatrix::identity(4);
  CHECK(has_identity);
}

TEST_CASE("coset profiles") {
  const ZLattice K = ZLattice::diagonal({1, 1, 1, 1});
  CHECK(coset_profile(K, {1, 1, 1, 1}, 2, CosetClass({1, 0, 0, 0}, 2)) == ResiduePair{1, 1});
  CHECK(coset_profile(kL1223, {2, 1, 1, 0}, 2, CosetClass({0, 0, 0, 0}, 2)) == ResiduePair{0, 0});
  // With v = w', the (0, 0) cosets are those with y1 = y4 (mod 2).
  for (i64 y1 = 0; y1 < 2; ++y1)
    for (i64 y2 = 0; y2 < 2; ++y2)
      for (i64 y3 = 0; y3 < 2; ++y3)
        for (i64 y4 = 0; y4 < 2; ++y4) {
          auto p = coset_profile(kL1223, {2, 1, 1, 0}, 2, CosetClass({y1, y2, y3, y4}, 2));
          if (p.second == 0) CHECK((p.first == 0) == (y1 == y4));
        }
}

TEST_CASE("coset profile well-defined on random cosets") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> c(-20, 20), sd(1, 66);
  const auto& certs = certificates();
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const auto& K = certs[rng() % certs.size()].genus[0];
    const i64 s = sd(rng);
    Vec u(4), w(4), v(4);
    for (int i = 0; i < 4; ++i) u[i] = c(rng), w[i] = c(rng), v[i] = c(rng);
    Vec u2(4);
    for (int i = 0; i < 4; ++i) u2[i] = u[i] + s * w[i];
    if (mod(K.Q(u2) - K.Q(u), s) != 0 || mod(K.B(u2, v) - K.B(u, v), s) != 0) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("Case 2 per-orbit good pairs") {
  const Vec wa{1, 1, 1, 1};
  CHECK(good_pairs_for_vector(kL1223, kL1223, 2, wa, wa).good == Pairs{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(good_pairs_for_vector(kL1223, kL1223, 2, {2, 1, 1, 0}, wa).good == Pairs{{0, 0}, {0, 1}, {1, 1}});
  CHECK(good_pairs_for_vector(kL1223, kL1223, 2, {0, 2, 0, 0}, wa).good == Pairs{{0, 1}, {1, 1}});

  // Coverage by the printed map alone: T handles every (0, 0) coset of w'.
  auto cov = good_coset_closure(kL1223, kL1223, 2, {2, 1, 1, 0}, {scaled(kT, kL1223, kL1223, {2, 1, 1, 0})});
  CHECK(cov.at({0, 0}).fully_good());

  auto r = compute_S({1, 2, 2, 3}, 2, {kL1223});
  CHECK(r.set.pairs() == Pairs{{0, 1}, {1, 1}});
  auto img = residue_image(r.set);
  CHECK(img.modulus == 1);
  CHECK(img.residues == std::set<i64>{0});
  CHECK(img.complete());
}

TEST_CASE("Case 3 per-orbit good pairs") {
  const ZLattice K = case3_k();
  const Pairs all{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  CHECK(good_pairs_for_vector(K, kL1125, 2, {3, 0, 0, 0}, std::nullopt).good == all);
  CHECK(good_pairs_for_vector(K, kL1125, 2, {1, 2, 0, 0}, std::nullopt).good == all);
  CHECK(good_pairs_for_vector(K, kL1125, 2, {1, 2, 0, -1}, std::nullopt).good == Pairs{{0, 0}, {1, 1}});

  // The three printed orbits are the orbits of R(9, K).
  auto reps = orbit_representatives(K, 9);
  CHECK(reps.size() == 3);
  const auto orb = orbits(K, 9);
  for (const Vec& v : {Vec{3, 0, 0, 0}, Vec{1, 2, 0, 0}, Vec{1, 2, 0, -1}}) {
    int hits = 0;
    for (const auto& o : orb) hits += std::count(o.members.begin(), o.members.end(), v) > 0;
    CHECK(hits == 1);
  }

  auto r = compute_S({1, 1, 2, 5}, 2, {kL1125, K});
  REQUIRE(r.lattices.size() == 2);
  CHECK(r.lattices[1].set.pairs() == Pairs{{0, 0}, {1, 1}});
}

TEST_CASE("lifting a certified set") {
  GoodSet s2(2, {{0, 0}, {1, 1}});
  GoodSet s24 = s2.lift(24);
  CHECK(s24.modulus() == 24);
  CHECK(s24.size() == 288);
  for (const auto& [a, b] : s24.pairs()) CHECK((a - b) % 2 == 0);
  CHECK_THROWS(s2.lift(5));

  // Good at s = 2 stays good at s = 4 for the Case 3 class: sampled.
  const ZLattice K = case3_k();
  const Vec v{1, 2, 0, -1};
  GoodPairOptions o;
  o.interesting = [](i64 a, i64 b) { return (a - b) % 2 == 0 && a < 2; };
  auto g4 = good_pairs_for_vector(K, kL1125, 4, v, std::nullopt, o);
  for (i64 a = 0; a < 2; ++a)
    for (i64 b = a; b < 4; b += 2) CHECK(g4.good.count({a, b}));
}

TEST_CASE("residue image and choose_r") {
  GoodSet s(2, {{1, 1}});
  i64 r = choose_r(10, s, {1, 1});
  CHECK(r == 1);
  const i64 b = 7, a = 2 * (10 - b) / 3 + b;
  CHECK(a == 9);

  // N = alpha = beta: r = alpha (mod s).
  GoodSet s12(12, {{5, 5}});
  CHECK(mod(choose_r(5, s12, {5, 5}), 12) == 5);
  CHECK_THROWS(choose_r(5, s12, {1, 1}));

  GoodSet s24(24, {{0, 16}, {4, 4}, {8, 16}, {12, 4}, {16, 16}, {20, 4}});
  for (i64 N = 4; N < 400; N += 12) {
    i64 rr = choose_r(N, s24, {4, 4});
    CHECK(rr == mod(12 - 2 * N, 72));
    i64 bb = rr + 72 * 5, aa = 2 * (N - bb) / 3 + bb;
    CHECK(mod(bb - N, 3) == 0);
    CHECK(mod(aa, 24) == 4);
    CHECK(mod(bb, 24) == 4);
  }
  GoodSet bad(24, {{4, 16}});
  CHECK_THROWS(choose_r(4, bad, {4, 16}));
  CHECK(!pair_for(4, bad));
  CHECK(pair_for(4, s24) == ResiduePair{0, 16});
}

TEST_CASE("interval examples") {
  CHECK(interval(5453, 7).width() >= 12);
  for (const auto& c : certificates()) {
    if (c.sieve_only()) continue;
    CHECK_MESSAGE(interval(c.N_a, c.A()).width() >= 3 * c.s_a * c.B_a, c.a.str());
  }
  for (i64 N = 1; N < 3000; N += 7) CHECK(interval(N + 1, 9).width() >= interval(N, 9).width());
}

TEST_CASE("interval lemma on random (N, A)") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> nd(1, 50'000'000), ad(4, 40);
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const i64 N = nd(rng), A = ad(rng);
    const Interval I = interval(N, A);
    for (i64 b = I.first - 2; b <= I.last + 2; ++b) {
      if (b <= 0) continue;
      const bool exact = in_interval(N, A, b);
      if (exact != (b >= I.first && b <= I.last)) ++violations;
      if (!exact || mod(N - b, 3) != 0) continue;
      const i64 a = 2 * (N - b) / 3 + b;
      if (A * a - b * b <= 0) ++violations;
      if (static_cast<i128>(b) * b < static_cast<i128>(A - 1) * a) ++violations;
    }
  }
  CHECK(violations == 0);
}
