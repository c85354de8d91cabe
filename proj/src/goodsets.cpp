#include "pentsum/goodsets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pentsum {

namespace {

i64 ipow(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r = narrow(static_cast<i128>(r) * b);
  return r;
}

// M = s X P^-1 = s X adj(P) / det(P), exactly.
IntMatrix scaled_inverse_product(const IntMatrix& x, const IntMatrix& p, i64 s) {
  const i64 d = determinant(p);
  const IntMatrix num = x * adjugate(p);
  IntMatrix m(num.rows(), num.cols());
  for (int i = 0; i < num.rows(); ++i)
    for (int j = 0; j < num.cols(); ++j) {
      const i128 t = static_cast<i128>(num(i, j)) * s;
      if (t % d != 0) throw InternalError("scaled isometry is not integral on sK");
      m(i, j) = narrow(t / d);
    }
  return m;
}

// Upper triangular basis (rows) of {u in Z^n : M u = 0 (mod s)}.
IntMatrix kernel_mod(const IntMatrix& m, i64 s) {
  const int rows = m.rows(), n = m.cols();
  IntMatrix c(rows, n + rows);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = mod(m(i, j), s);
    c(i, n + i) = s;
  }
  auto sol = solve_integer_system(c, Vec(rows, 0));
  if (!sol) throw InternalError("homogeneous system without solution");
  const int k = sol->kernel.cols();
  IntMatrix gens(k + n, n);
  for (int t = 0; t < k; ++t)
    for (int j = 0; j < n; ++j) gens(t, j) = sol->kernel(j, t);
  for (int j = 0; j < n; ++j) gens(k + j, j) = s;
  return hermite_rows(gens);
}

// Calls f on every element of (lattice spanned by the rows of h) / sZ^n,
// reduced to [0, s)^n. h must be upper triangular with pivots dividing s.
template <class F>
void for_each_coset(const IntMatrix& h, i64 s, F&& f) {
  const int n = h.cols();
  Vec acc(n, 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      f(acc);
      return;
    }
    const i64 steps = s / h(i, i);
    Vec saved = acc;
    for (i64 c = 0; c < steps; ++c) {
      self(self, i + 1);
      for (int j = 0; j < n; ++j) acc[j] = mod(acc[j] + h(i, j), s);
    }
    acc = saved;
  };
  rec(rec, 0);
}

i64 content(const Vec& x) {
  i64 g = 0;
  for (i64 c : x) g = std::gcd(g, c);
  return g;
}

}  // namespace

bool ScaledIsometry::preserves_form() const {
  return numerator.transpose() * target.gram() * numerator == source.gram().scaled(denom * denom);
}

bool ScaledIsometry::maps_into_target(const Vec& u) const {
  for (i64 c : numerator * u)
    if (mod(c, denom) != 0) return false;
  return true;
}

std::optional<Vec> ScaledIsometry::image(const Vec& u) const {
  if (!maps_into_target(u)) return std::nullopt;
  Vec y = numerator * u;
  for (auto& c : y) c /= denom;
  return y;
}

nlohmann::json ScaledIsometry::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < numerator.rows(); ++i) rows.push_back(numerator.row(i));
  return {{"numerator", rows},
          {"denom", denom},
          {"source", source.to_json()},
          {"target", target.to_json()},
          {"pinned", pinned},
          {"pinned_in_target", pinned_in_target()}};
}

GoodSet::GoodSet(i64 modulus, std::set<ResiduePair> pairs) : s_(modulus) {
  if (modulus < 1) throw ContractViolation("GoodSet modulus must be positive");
  for (auto [a, b] : pairs) insert(a, b);
}

bool GoodSet::contains(i64 alpha, i64 beta) const { return pairs_.count({mod(alpha, s_), mod(beta, s_)}) > 0; }

void GoodSet::insert(i64 alpha, i64 beta) { pairs_.insert({mod(alpha, s_), mod(beta, s_)}); }

GoodSet GoodSet::intersect(const GoodSet& o) const {
  if (o.s_ != s_) throw ContractViolation("GoodSet intersection with different moduli");
  GoodSet r(s_);
  std::set_intersection(pairs_.begin(), pairs_.end(), o.pairs_.begin(), o.pairs_.end(),
                        std::inserter(r.pairs_, r.pairs_.end()));
  return r;
}

GoodSet GoodSet::lift(i64 t) const {
  if (t % s_ != 0) throw ContractViolation("lift target must be a multiple of the modulus");
  GoodSet r(t);
  const i64 k = t / s_;
  for (auto [a, b] : pairs_)
    for (i64 i = 0; i < k; ++i)
      for (i64 j = 0; j < k; ++j) r.pairs_.insert({a + i * s_, b + j * s_});
  return r;
}

GoodSet GoodSet::with_residue(i64 n) const {
  GoodSet r(s_);
  const i64 half = s_ % 2 == 0 ? s_ / 2 : 1;
  for (auto [a, b] : pairs_) {
    if ((a - b) % 2 != 0) continue;
    if (mod(3 * (a - b) / 2 + b, half) == mod(n, half)) r.pairs_.insert({a, b});
  }
  return r;
}

nlohmann::json GoodSet::to_json() const {
  nlohmann::json p = nlohmann::json::array();
  for (auto [a, b] : pairs_) p.push_back({a, b});
  return {{"modulus", s_}, {"pairs", p}};
}

GoodSet GoodSet::from_json(const nlohmann::json& j) {
  GoodSet g(j.at("modulus").get<i64>());
  for (const auto& p : j.at("pairs")) {
    const i64 a = p.at(0).get<i64>(), b = p.at(1).get<i64>();
    if (a < 0 || b < 0 || a >= g.s_ || b >= g.s_) throw ContractViolation("GoodSet pair out of range");
    g.pairs_.insert({a, b});
  }
  return g;
}

CosetClass::CosetClass(Vec c, i64 m) : coords(std::move(c)), modulus(m) {
  if (m < 1) throw ContractViolation("coset modulus must be positive");
  for (i64 x : coords)
    if (x < 0 || x >= m) throw ContractViolation("coset coordinates must lie in [0, s)");
}

ResiduePair coset_profile(const ZLattice& K, const Vec& v, i64 s, const CosetClass& u) {
  if (u.modulus != s) throw ContractViolation("coset modulus mismatch");
  return {mod(K.Q(u.coords), s), mod(K.B(u.coords, v), s)};
}

IsometrySearch find_scaled_isometries(const ZLattice& K, const ZLattice& L, i64 s, const Vec& v, std::uint64_t budget,
                                      const std::optional<Vec>& pinned_image, const std::vector<IntMatrix>& seeds,
                                      size_t max_results) {
  if (K.rank() != L.rank()) throw ContractViolation("find_scaled_isometries: rank mismatch");
  if (s < 1 || budget < 1) throw ContractViolation("find_scaled_isometries: s and budget must be positive");
  IsometrySearch out;
  std::set<IntMatrix> seen;
  auto accept = [&](const IntMatrix& m) {
    ScaledIsometry t{m, s, K, L, v};
    if (!t.preserves_form() || !t.pinned_in_target()) return false;
    if (pinned_image && t.image(v) != *pinned_image) return false;
    if (!seen.insert(m).second) return false;
    out.found.push_back(std::move(t));
    return true;
  };
  for (const auto& m : seeds) {
    if (out.found.size() >= max_results) return out;
    accept(m);
  }
  if (out.found.size() >= max_results) return out;

  PinCondition pins;
  if (pinned_image) {
    pins.targets.push_back(*pinned_image);
    pins.values = IntMatrix(1, K.rank());
    const Vec gv = K.gram() * v;
    for (int j = 0; j < K.rank(); ++j) pins.values(0, j) = s * gv[j];
  }
  SearchBudget b(budget);
  enumerate_representations(
      L, K.gram().scaled(s * s), pins,
      [&](const IntMatrix& m) {
        accept(m);
        return out.found.size() < max_results;
      },
      &b);
  out.exhausted_budget = b.exhausted;
  return out;
}

std::map<ResiduePair, CoverageCount> good_coset_closure(const ZLattice& K, const ZLattice&, i64 s, const Vec& v,
                                                        const std::vector<ScaledIsometry>& taus) {
  const int n = K.rank();
  const i64 total = ipow(s, n);
  std::map<ResiduePair, CoverageCount> out;
  Vec u(n);
  for (i64 idx = 0; idx < total; ++idx) {
    i64 r = idx;
    for (int i = n - 1; i >= 0; --i) {
      u[i] = r % s;
      r /= s;
    }
    auto& c = out[{mod(K.Q(u), s), mod(K.B(u, v), s)}];
    ++c.total;
    for (const auto& t : taus)
      if (t.maps_into_target(u)) {
        ++c.covered;
        break;
      }
  }
  return out;
}

OrbitGoodPairs good_pairs_for_vector(const ZLattice& K, const ZLattice& L, i64 s, const Vec& v,
                                     const std::optional<Vec>& pinned_image, const GoodPairOptions& opts) {
  const int n = K.rank();
  if (L.rank() != n) throw ContractViolation("good_pairs_for_vector: rank mismatch");
  if (s < 1) throw ContractViolation("modulus must be positive");
  const i64 total = ipow(s, n);
  if (total > (i64{1} << 32)) throw ResourceError("too many cosets");

  OrbitGoodPairs res;
  res.v = v;
  const auto pidx = [s](i64 a, i64 b) { return static_cast<size_t>(a * s + b); };
  enum : std::uint8_t { kOpen, kSkip, kBad, kInconclusive };
  std::vector<std::uint8_t> state(static_cast<size_t>(s * s), kOpen);
  for (i64 a = 0; a < s; ++a)
    for (i64 b = 0; b < s; ++b) {
      if (opts.interesting && !opts.interesting(a, b)) state[pidx(a, b)] = kSkip;
      if (opts.certified.count({a, b})) state[pidx(a, b)] = kSkip;
    }

  const Vec gv = K.gram() * v;
  const IntMatrix& g = K.gram();
  std::vector<IntMatrix> stab = stabilizer(K, v);
  std::vector<bool> covered(static_cast<size_t>(total), false);

  auto index_of = [&](const Vec& u) {
    i64 r = 0;
    for (int i = 0; i < n; ++i) r = r * s + u[i];
    return r;
  };

  auto cover = [&](const IntMatrix& m) {
    const IntMatrix h = kernel_mod(m, s);
    std::set<IntMatrix> lattices;
    for (const auto& st : stab) {
      IntMatrix rows(n + n, n);
      for (int i = 0; i < n; ++i) {
        const Vec img = st * h.row(i);
        for (int j = 0; j < n; ++j) rows(i, j) = img[j];
        rows(n + i, i) = s;
      }
      lattices.insert(hermite_rows(rows));
    }
    for (const auto& lat : lattices) for_each_coset(lat, s, [&](const Vec& u) { covered[index_of(u)] = true; });
  };

  PinCondition pins;
  if (pinned_image) pins.targets.push_back(*pinned_image);

  Vec u(n);
  for (i64 idx = 0; idx < total; ++idx) {
    if (covered[idx]) continue;
    i64 r = idx;
    for (int i = n - 1; i >= 0; --i) {
      u[i] = r % s;
      r /= s;
    }
    i64 q = 0, bv = 0;
    for (int i = 0; i < n; ++i) {
      bv += u[i] * gv[i];
      for (int j = 0; j < n; ++j) q += u[i] * g(i, j) * u[j];
    }
    const i64 alpha = mod(q, s), beta = mod(bv, s);
    if (state[pidx(alpha, beta)] != kOpen) continue;

    // Basis of Zv + Zu + sK.
    IntMatrix gens(n + 2, n);
    for (int j = 0; j < n; ++j) {
      gens(0, j) = v[j];
      gens(1, j) = u[j];
      gens(2 + j, j) = s;
    }
    IntMatrix p = hermite_rows(gens).transpose();
    p = lll_reduce(p, g);
    const IntMatrix gp = p.transpose() * g * p;
    if (pinned_image) {
      const Vec pv = p.transpose() * gv;
      pins.values = IntMatrix(1, n);
      for (int j = 0; j < n; ++j) pins.values(0, j) = pv[j];
    }

    std::optional<IntMatrix> x;
    SearchBudget budget(opts.budget_per_coset);
    ++res.coset_searches;
    enumerate_representations(
        L, gp, pins,
        [&](const IntMatrix& found) {
          x = found;
          return false;
        },
        &budget);
    if (!x) {
      state[pidx(alpha, beta)] = budget.exhausted ? kInconclusive : kBad;
      continue;
    }
    ++res.maps_found;
    const IntMatrix m = scaled_inverse_product(*x, p, s);
    cover(m);
    if (!covered[idx]) throw InternalError("found map does not cover its own coset");
  }

  for (i64 a = 0; a < s; ++a)
    for (i64 b = 0; b < s; ++b) {
      const auto st = state[pidx(a, b)];
      if (st == kOpen || opts.certified.count({a, b})) res.good.insert({a, b});
      if (st == kInconclusive) res.inconclusive.insert({a, b});
    }
  return res;
}

GoodSetReport compute_S(const CoefficientVector& a, i64 s, const std::vector<ZLattice>& genus,
                        const ComputeSOptions& opts) {
  if (genus.empty() || !(genus[0] == ZLattice::diagonal(a.coeffs())))
    throw ContractViolation("compute_S: genus[0] must be the diagonal lattice");
  if (opts.lift_from != 0 && (opts.lift_from < 1 || s % opts.lift_from != 0))
    throw ContractViolation("compute_S: lift_from must divide s");
  const i64 A = a.sum();
  const ZLattice& L = genus[0];
  const Vec wa(a.size(), 1);

  GoodSetReport rep;
  std::set<ResiduePair> all;
  for (i64 x = 0; x < s; ++x)
    for (i64 y = 0; y < s; ++y)
      if (!opts.interesting || opts.interesting(x, y)) all.insert({x, y});
  rep.set = GoodSet(s, all);

  for (size_t gi = 0; gi < genus.size(); ++gi) {
    const ZLattice& K = genus[gi];
    GoodSetReport::PerLattice per{static_cast<int>(gi), GoodSet(s, all), {}, {}};
    for (const Vec& v : orbit_representatives(K, A)) {
      const i64 c = content(K.gram() * v);
      if (std::any_of(opts.b_nonzero_mod.begin(), opts.b_nonzero_mod.end(), [c](i64 p) { return c % p == 0; })) {
        per.skipped.push_back(v);
        continue;
      }
      const std::optional<Vec> pin = gi == 0 ? std::optional<Vec>(wa) : std::nullopt;
      GoodPairOptions po;
      po.interesting = opts.interesting;
      po.budget_per_coset = opts.budget_per_coset;
      if (opts.lift_from > 1) {
        GoodPairOptions lo;
        lo.budget_per_coset = opts.budget_per_coset;
        auto small = good_pairs_for_vector(K, L, opts.lift_from, v, pin, lo);
        po.certified = GoodSet(opts.lift_from, small.good).lift(s).pairs();
      }
      auto og = good_pairs_for_vector(K, L, s, v, pin, po);
      if (!og.inconclusive.empty()) rep.budget_limited = true;
      per.set = per.set.intersect(GoodSet(s, og.good).intersect(GoodSet(s, all)));
      per.orbits.push_back(std::move(og));
    }
    rep.set = rep.set.intersect(per.set);
    rep.lattices.push_back(std::move(per));
  }
  return rep;
}

ResidueImage residue_image(const GoodSet& S) {
  const i64 s = S.modulus();
  if (s != 1 && s % 2 != 0) throw ContractViolation("residue_image: modulus must be even or 1");
  ResidueImage r{s == 1 ? 1 : s / 2, {}};
  for (auto [a, b] : S.pairs()) {
    if ((a - b) % 2 != 0) continue;
    r.residues.insert(mod(3 * (a - b) / 2 + b, r.modulus));
  }
  return r;
}

i64 choose_r(i64 N, const GoodSet& S, const ResiduePair& pair) {
  const i64 s = S.modulus();
  auto [a, b] = pair;
  if (!S.contains(a, b)) throw ContractViolation("choose_r: pair not in S");
  if ((a - b) % 2 != 0) throw ContractViolation("choose_r: alpha and beta differ in parity");
  const i64 half = s % 2 == 0 ? s / 2 : 1;
  if (mod(3 * (a - b) / 2 + b, half) != mod(N, half)) throw ContractViolation("choose_r: pair does not match N");
  return mod(3 * a - 2 * mod(N, 3 * s), 3 * s);
}

std::optional<ResiduePair> pair_for(i64 N, const GoodSet& S) {
  const i64 s = S.modulus();
  const i64 half = s % 2 == 0 ? s / 2 : 1;
  for (auto [a, b] : S.pairs())
    if ((a - b) % 2 == 0 && mod(3 * (a - b) / 2 + b, half) == mod(N, half)) return ResiduePair{a, b};
  return std::nullopt;
}

bool in_interval(i64 N, i64 A, i64 b) {
  if (b < 0) return false;
  const i128 t = 2 * static_cast<i128>(N) + b;
  const i128 b2 = 3 * static_cast<i128>(b) * b;
  return A * t > b2 && (A - 1) * t <= b2;
}

Interval interval(i64 N, i64 A) {
  if (N < 1 || A < 1) throw ContractViolation("interval: N and A must be positive");
  using R = long double;
  auto endpoint = [N](i64 c) {
    const R k = static_cast<R>(c) / 6;
    return std::sqrt(2 * static_cast<R>(c) * static_cast<R>(N) / 3 + k * k) + k;
  };
  Interval I{endpoint(A - 1), endpoint(A), 0, -1};
  i64 first = std::max<i64>(0, static_cast<i64>(std::floor(I.lo)) - 2);
  while (first <= static_cast<i64>(I.hi) + 2 && !in_interval(N, A, first)) ++first;
  i64 last = static_cast<i64>(std::ceil(I.hi)) + 2;
  while (last >= first && !in_interval(N, A, last)) --last;
  if (last >= first) {
    I.first = first;
    I.last = last;
  }
  return I;
}

}  // namespace pentsum
