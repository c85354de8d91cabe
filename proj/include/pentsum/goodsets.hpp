// Good cosets, scaled isometries and the sets of good residue pairs.
//
// Notation: K and L are lattices on the same quadratic space, v is a vector
// of K with Q(v) = A, s is the modulus. A scaled isometry is stored as an
// integer matrix M with tau = M / s, so tau(sK) lies in L automatically and
// tau(u) lies in L iff M u = 0 (mod s).

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pentsum/lattice.hpp"

namespace pentsum {

using ResiduePair = std::pair<i64, i64>;  // (alpha, beta)

struct ScaledIsometry {
  IntMatrix numerator;  // M, in target coordinates
  i64 denom = 1;        // s
  ZLattice source;      // K
  ZLattice target;      // L
  Vec pinned;           // v (may be empty)

  /// M^T G_L M = s^2 G_K.
  bool preserves_form() const;
  /// M u = 0 (mod s), i.e. tau(u) lies in L.
  bool maps_into_target(const Vec& u) const;
  bool pinned_in_target() const { return !pinned.empty() && maps_into_target(pinned); }
  /// tau(u) when it lies in L.
  std::optional<Vec> image(const Vec& u) const;
  nlohmann::json to_json() const;
};

class GoodSet {
 public:
  GoodSet() = default;
  explicit GoodSet(i64 modulus, std::set<ResiduePair> pairs = {});

  i64 modulus() const { return s_; }
  const std::set<ResiduePair>& pairs() const { return pairs_; }
  bool contains(i64 alpha, i64 beta) const;
  void insert(i64 alpha, i64 beta);
  size_t size() const { return pairs_.size(); }

  GoodSet intersect(const GoodSet& o) const;
  /// Pairs mod a multiple t of s whose reduction mod s lies in this set.
  GoodSet lift(i64 t) const;
  /// Pairs (alpha, beta) with (3/2)(alpha - beta) + beta = n (mod s/2), alpha = beta (mod 2).
  GoodSet with_residue(i64 n) const;

  nlohmann::json to_json() const;
  static GoodSet from_json(const nlohmann::json& j);
  bool operator==(const GoodSet& o) const = default;

 private:
  i64 s_ = 1;
  std::set<ResiduePair> pairs_;
};

struct CosetClass {
  CosetClass(Vec coords, i64 modulus);
  Vec coords;
  i64 modulus;
};

/// (Q(u) mod s, B(u, v) mod s).
ResiduePair coset_profile(const ZLattice& K, const Vec& v, i64 s, const CosetClass& u);

struct IsometrySearch {
  std::vector<ScaledIsometry> found;
  bool exhausted_budget = false;
  /// True when the budget ran out before anything was found.
  bool inconclusive() const { return found.empty() && exhausted_budget; }
};

/// Elements of R_v(K, L, s) found by backtracking over the columns of M
/// (norms s^2 G_K[j][j], pairwise products s^2 G_K[i][j], and M v = 0 mod s).
/// With `pinned_image`, only tau with tau(v) = pinned_image are returned.
/// Seeds are validated and returned first; the search then continues until
/// `max_results` maps were found or the budget is spent.
IsometrySearch find_scaled_isometries(const ZLattice& K, const ZLattice& L, i64 s, const Vec& v, std::uint64_t budget,
                                      const std::optional<Vec>& pinned_image = std::nullopt,
                                      const std::vector<IntMatrix>& seeds = {}, size_t max_results = SIZE_MAX);

struct CoverageCount {
  std::uint64_t covered = 0;
  std::uint64_t total = 0;
  bool fully_good() const { return covered == total; }
};

/// Per-profile coverage of K/sK by the given maps.
std::map<ResiduePair, CoverageCount> good_coset_closure(const ZLattice& K, const ZLattice& L, i64 s, const Vec& v,
                                                        const std::vector<ScaledIsometry>& taus);

/// Options for the exact good-pair computation.
struct GoodPairOptions {
  /// Only these pairs are decided; all others are reported as not good.
  std::function<bool(i64, i64)> interesting;
  /// Pairs already known to be good (e.g. lifted from a divisor of s).
  std::set<ResiduePair> certified;
  /// Node budget for a single coset search.
  std::uint64_t budget_per_coset = 2'000'000;
};

struct OrbitGoodPairs {
  Vec v;
  std::set<ResiduePair> good;
  std::set<ResiduePair> inconclusive;  // budget exhausted, treated as not good
  std::uint64_t coset_searches = 0;
  std::uint64_t maps_found = 0;
};

/// The pairs (alpha, beta) for which every coset u of K/sK with profile
/// (alpha, beta) is good with respect to v: some tau in R_v(K, L, s) has
/// tau(u) in L, and tau(v) = pinned_image when that is given (the K = L
/// case). A coset is tested by searching for a representation of
/// Zv + Zu + sK by L; a found tau also covers the cosets of
/// K cap tau^-1(L) and their images under the stabiliser of v in O(K).
OrbitGoodPairs good_pairs_for_vector(const ZLattice& K, const ZLattice& L, i64 s, const Vec& v,
                                     const std::optional<Vec>& pinned_image, const GoodPairOptions& opts = {});

struct GoodSetReport {
  GoodSet set;
  struct PerLattice {
    int genus_index;
    GoodSet set;
    std::vector<OrbitGoodPairs> orbits;
    std::vector<Vec> skipped;
  };
  std::vector<PerLattice> lattices;
  bool budget_limited = false;
};

struct ComputeSOptions {
  /// Only these pairs are decided (default: all).
  std::function<bool(i64, i64)> interesting;
  /// Primes p for which the caller only uses b with b != 0 (mod p). Vectors v
  /// with p | gcd(G_K v) force p | b and are skipped.
  std::vector<i64> b_nonzero_mod;
  /// Lift good pairs from this divisor of s before searching (0 = none).
  i64 lift_from = 0;
  std::uint64_t budget_per_coset = 2'000'000;
};

/// The intersection over the genus and over R(A, K)/O(K) of the good pairs;
/// genus[0] must be the diagonal lattice <a_1, ..., a_4>, where tau(v) is
/// pinned to w_a = (1,1,1,1).
GoodSetReport compute_S(const CoefficientVector& a, i64 s, const std::vector<ZLattice>& genus,
                        const ComputeSOptions& opts = {});

/// N(S) and whether it is a complete residue system mod s/2.
struct ResidueImage {
  i64 modulus;  // s/2 (1 when s = 1)
  std::set<i64> residues;
  bool complete() const { return static_cast<i64>(residues.size()) == modulus; }
};
ResidueImage residue_image(const GoodSet& S);

/// (3 alpha - 2N) mod 3s for a pair of S matching N.
i64 choose_r(i64 N, const GoodSet& S, const ResiduePair& pair);
/// Lexicographically least pair of S matching N, if any.
std::optional<ResiduePair> pair_for(i64 N, const GoodSet& S);

/// I_{N,A} = [lo, hi) together with its exact integer content.
struct Interval {
  long double lo;
  long double hi;
  i64 first;  // least integer b in I
  i64 last;   // greatest integer b in I (first > last if empty)
  long double width() const { return hi - lo; }
  i64 integer_count() const { return last >= first ? last - first + 1 : 0; }
};
Interval interval(i64 N, i64 A);
/// Exact membership: A(2N + b) > 3b^2 and (A - 1)(2N + b) <= 3b^2.
bool in_interval(i64 N, i64 A, i64 b);

}  // namespace pentsum
