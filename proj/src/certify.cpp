#include "pentsum/certify.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <map>
#include <mutex>
#include <sstream>

namespace pentsum {

namespace {

// Residue bookkeeping shared by the two window checks.
struct Residues {
  const GoodSet& S;
  const Condition& cond;
  const CertBranch& br;
  i64 s, P, T;
  std::vector<char> in_s;

  Residues(const GoodSet& S_, const Condition& c, const CertBranch& b) : S(S_), cond(c), br(b), s(S_.modulus()) {
    if (s != br.s) throw ContractViolation("good set modulus does not match the branch");
    P = lcm(s, cond.modulus());
    for (i64 p : br.b_nonzero_mod) P = lcm(P, p);
    P = lcm(P, br.N_mod);
    T = 3 * P;
    in_s.assign(static_cast<size_t>(s * s), 0);
    for (auto [x, y] : S.pairs())
      if (br.pair_allowed(x, y)) in_s[static_cast<size_t>(x * s + y)] = 1;
  }

  bool covered(i64 n) const {
    return std::find(br.N_residues.begin(), br.N_residues.end(), mod(n, br.N_mod)) != br.N_residues.end();
  }

  // b and n are residues mod T with b = n (mod 3).
  bool admissible(i64 n, i64 b) const {
    const i64 a = mod(2 * n + b, T) / 3;
    if (!in_s[static_cast<size_t>(mod(a, s) * s + mod(b, s))]) return false;
    for (i64 p : br.b_nonzero_mod)
      if (b % p == 0) return false;
    return cond.eval_mod(a, b, P) == Tri::True;
  }
};

std::string pairs_str(const std::set<i64>& xs) {
  std::string out = "{";
  for (i64 x : xs) out += (out.size() > 1 ? "," : "") + std::to_string(x);
  return out + "}";
}

std::mutex cache_mu;
std::map<std::string, GoodSet> goodset_cache;
std::optional<std::filesystem::path> goodset_dir;

std::string branch_key(const Certificate& cert, const CertBranch& br) {
  std::ostringstream os;
  os << "goodset" << cert.a.str() << "-s" << br.s << "-" << br.pairs;
  for (i64 p : br.b_nonzero_mod) os << "-b" << p;
  for (const auto& K : cert.genus) os << "-" << K.hash().substr(0, 6);
  return os.str();
}

}  // namespace

WindowCheck window_check(const GoodSet& S, const Condition& cond, const CertBranch& branch) {
  Residues R(S, cond, branch);
  WindowCheck out;
  out.period = R.T;
  for (i64 n = 0; n < R.T; ++n) {
    if (!R.covered(n)) continue;
    i64 first = -1, prev = -1, gap = 0;
    for (i64 b = mod(n, 3); b < R.T; b += 3) {
      if (!R.admissible(n, b)) continue;
      if (first < 0) first = b;
      if (prev >= 0) gap = std::max(gap, b - prev);
      prev = b;
    }
    if (first < 0) {
      out.failure = "no admissible b for N = " + std::to_string(n) + " (mod " + std::to_string(R.T) + ")";
      return out;
    }
    gap = std::max(gap, first + R.T - prev);
    out.max_gap = std::max(out.max_gap, gap);
    if (gap > branch.window) {
      out.failure = "gap " + std::to_string(gap) + " > " + std::to_string(branch.window) + " for N = " +
                    std::to_string(n) + " (mod " + std::to_string(R.T) + ")";
      return out;
    }
  }
  out.ok = true;
  return out;
}

ProgressionCheck progression_check(const GoodSet& S, const Condition& cond, const CertBranch& branch, i64 B) {
  Residues R(S, cond, branch);
  ProgressionCheck out;
  out.period = R.T;
  const i64 s = R.s, step = 3 * s;
  const i64 half = s % 2 == 0 ? s / 2 : 1;
  for (i64 n = 0; n < R.T; ++n) {
    if (!R.covered(n)) continue;
    bool found = false, least = true;
    for (auto [x, y] : S.pairs()) {
      if (!branch.pair_allowed(x, y) || (x - y) % 2 != 0 || mod(3 * (x - y) / 2 + y, half) != mod(n, half)) continue;
      const i64 r = mod(3 * x - 2 * n, step);
      bool all = true;
      for (i64 b0 = r; b0 < R.T && all; b0 += step) {
        bool any = false;
        for (i64 k = 0; k < B && !any; ++k) any = R.admissible(n, mod(b0 + step * k, R.T));
        all = any;
      }
      if (all) {
        found = true;
        break;
      }
      least = false;
    }
    if (!found) {
      out.failure = "no pair with a good progression for N = " + std::to_string(n) + " (mod " +
                    std::to_string(R.T) + ")";
      return out;
    }
    if (!least) ++out.fallbacks;
  }
  out.ok = true;
  return out;
}

void set_goodset_cache_dir(std::optional<std::filesystem::path> dir) {
  std::lock_guard lock(cache_mu);
  goodset_dir = std::move(dir);
}

const GoodSet& branch_good_set(const Certificate& cert, size_t branch, std::uint64_t budget_per_coset) {
  if (branch >= cert.branches.size()) throw ContractViolation("branch index out of range");
  const CertBranch& br = cert.branches[branch];
  const std::string key = branch_key(cert, br);
  std::lock_guard lock(cache_mu);
  auto it = goodset_cache.find(key);
  if (it != goodset_cache.end()) return it->second;

  std::filesystem::path file;
  if (goodset_dir) {
    file = *goodset_dir / (key + ".json");
    std::ifstream in(file);
    if (in) {
      try {
        auto j = nlohmann::json::parse(in);
        if (j.at("key") == key) return goodset_cache.emplace(key, GoodSet::from_json(j.at("set"))).first->second;
      } catch (const std::exception&) {
        // unreadable cache entries are recomputed
      }
    }
  }
  ComputeSOptions o;
  o.interesting = [&br](i64 x, i64 y) { return br.pair_allowed(x, y); };
  o.b_nonzero_mod = br.b_nonzero_mod;
  o.budget_per_coset = budget_per_coset;
  GoodSet S = compute_S(cert.a, br.s, cert.genus, o).set;
  if (goodset_dir) {
    std::filesystem::create_directories(*goodset_dir);
    auto tmp = file;
    tmp += "." + std::to_string(std::random_device{}()) + ".tmp";
    {
      std::ofstream out(tmp);
      out << nlohmann::json{{"key", key}, {"set", S.to_json()}}.dump();
    }
    std::filesystem::rename(tmp, file);
  }
  return goodset_cache.emplace(key, std::move(S)).first->second;
}

std::string CertificateReport::failure() const {
  for (const auto& s : steps)
    if (!s.ok) return s.name + ": " + s.detail;
  return "";
}

nlohmann::json CertificateReport::to_json() const {
  nlohmann::json st = nlohmann::json::array();
  for (const auto& s : steps) st.push_back({{"name", s.name}, {"ok", s.ok}, {"detail", s.detail}});
  return {{"a", a}, {"ok", ok}, {"restricted", restricted}, {"steps", st}};
}

std::vector<std::pair<i64, i64>> condition_counterexamples(const Certificate& cert, i64 a_max) {
  const Condition& cond = condition_for(cert.cond_id);
  const i64 A = cert.A();
  struct Rep {
    const ZLattice* K;
    std::vector<Vec> gv;  // G_K v over orbit representatives v of R(A, K)
  };
  std::vector<Rep> reps;
  for (const auto& K : cert.genus) {
    Rep r{&K, {}};
    for (const auto& v : orbit_representatives(K, A)) r.gv.push_back(K.gram() * v);
    reps.push_back(std::move(r));
  }
  auto represented = [&](i64 av, i64 b) {
    for (const auto& r : reps)
      for (const auto& gv : r.gv) {
        IntMatrix c(1, r.K->rank());
        for (int i = 0; i < r.K->rank(); ++i) c(0, i) = gv[i];
        bool hit = false;
        enumerate_norm_affine(r.K->gram(), av, c, {b}, [&](const Vec&) {
          hit = true;
          return false;
        });
        if (hit) return true;
      }
    return false;
  };
  // Only binaries some branch can use: b' > 0, (a', b') mod s an allowed
  // good pair and b' != 0 modulo the branch primes.
  auto used = [&](i64 av, i64 b) {
    for (size_t bi = 0; bi < cert.branches.size(); ++bi) {
      const CertBranch& br = cert.branches[bi];
      if (!br.pair_allowed(av, b)) continue;
      if (std::any_of(br.b_nonzero_mod.begin(), br.b_nonzero_mod.end(), [&](i64 p) { return b % p == 0; })) continue;
      if (branch_good_set(cert, bi).contains(mod(av, br.s), mod(b, br.s))) return true;
    }
    return false;
  };
  std::vector<std::pair<i64, i64>> out;
  for (i64 av = 1; av <= a_max; ++av)
    for (i64 b = 2 - mod(av, 2); b * b < A * av; b += 2)
      if (cond.eval(av, b) && used(av, b) && !represented(av, b)) out.push_back({av, b});
  return out;
}

CertificateReport verify_certificate(const Certificate& cert, const VerifyOptions& opts) {
  CertificateReport rep;
  rep.a = cert.a.str();
  auto add = [&](std::string name, bool ok, std::string detail) {
    rep.steps.push_back({std::move(name), ok, std::move(detail)});
  };
  if (cert.sieve_only()) {
    rep.restricted = true;
    const bool e_ok = exceptional_set(cert.a, cert.N_a) == cert.E_expected;
    add("E below N_a (sieve)", e_ok, "no genus certificate claimed for this tuple");
    rep.ok = e_ok;
    return rep;
  }
  const Condition& cond = condition_for(cert.cond_id);
  const i64 A = cert.A();
  const bool bespoke = cert.type_class == 4;

  if (opts.condition_bound > 0) {
    const auto bad = condition_counterexamples(cert, opts.condition_bound);
    std::string detail = "[" + std::to_string(A) + ",b',a'] -> gen(L) whenever " + cond.str() +
                         " on the good classes, a' <= " + std::to_string(opts.condition_bound);
    if (!bad.empty()) {
      detail += ": " + std::to_string(bad.size()) + " binaries represented by no class, first [" +
                std::to_string(A) + "," + std::to_string(bad.front().second) + "," +
                std::to_string(bad.front().first) + "]";
    }
    add("condition", bad.empty(), detail);
  }

  for (size_t bi = 0; bi < cert.branches.size(); ++bi) {
    const CertBranch& br = cert.branches[bi];
    const std::string tag = cert.branches.size() > 1 ? " [N mod " + std::to_string(br.N_mod) + " in " +
                                                           pairs_str({br.N_residues.begin(), br.N_residues.end()}) + "]"
                                                     : "";
    const GoodSet& S = branch_good_set(cert, bi, opts.budget_per_coset);
    const ResidueImage img = residue_image(S);
    std::set<i64> needed;
    for (i64 n = 0; n < lcm(br.N_mod, img.modulus); ++n)
      if (std::find(br.N_residues.begin(), br.N_residues.end(), mod(n, br.N_mod)) != br.N_residues.end())
        needed.insert(mod(n, img.modulus));
    bool ok = std::includes(img.residues.begin(), img.residues.end(), needed.begin(), needed.end());
    std::string detail = "s=" + std::to_string(br.s) + ", |S|=" + std::to_string(S.size()) + ", N(S)=" +
                         pairs_str(img.residues) + " mod " + std::to_string(img.modulus);
    if (cert.a == CoefficientVector{1, 2, 4, 5}) {
      const bool exact = img.residues == std::set<i64>{0, 3, 4, 6, 7, 8, 9, 11};
      ok = ok && exact;
      if (!exact) detail += ", expected {0,3,4,6,7,8,9,11}";
    }
    if (cert.a == CoefficientVector{1, 2, 3, 3} && br.s == 6) {
      const bool exact = S.pairs() == std::set<ResiduePair>{{0, 0}, {3, 3}};
      ok = ok && exact;
      if (!exact) detail += ", expected {(0,0),(3,3)}";
    }
    add("good set" + tag, ok, detail);

    const Interval I = interval(br.N_min, A);
    bool wide = I.width() >= static_cast<long double>(br.window) && I.integer_count() >= br.window;
    std::ostringstream wd;
    wd.precision(6);
    wd << std::fixed << "width(I_{" << br.N_min << "," << A << "})=" << static_cast<double>(I.width()) << " >= "
       << br.window;
    if (opts.check_minimal && br.N_min == cert.N_a) {
      const Interval prev = interval(br.N_min - 1, A);
      const bool minimal = prev.width() < static_cast<long double>(br.window);
      wd << (minimal ? ", minimal" : ", not minimal");
      wide = wide && minimal;
    }
    add("interval" + tag, wide, wd.str());

    if (bespoke) {
      const WindowCheck w = window_check(S, cond, br);
      add("window" + tag, w.ok,
          w.ok ? "max gap " + std::to_string(w.max_gap) + " <= " + std::to_string(br.window) + " (period " +
                     std::to_string(w.period) + ")"
               : w.failure);
    } else {
      const ProgressionCheck p = progression_check(S, cond, br, cert.B_a);
      add("window" + tag, p.ok,
          p.ok ? "B=" + std::to_string(cert.B_a) + " progression holds (period " + std::to_string(p.period) + ", " +
                     std::to_string(p.fallbacks) + " classes use a non-least pair)"
               : p.failure);
    }
  }
  rep.ok = std::all_of(rep.steps.begin(), rep.steps.end(), [](const StepResult& s) { return s.ok; });
  return rep;
}

std::vector<i64> constructive_represent(const CoefficientVector& a, i64 N, const Certificate& cert) {
  if (!(cert.a == a)) throw ContractViolation("certificate belongs to a different tuple");
  if (cert.sieve_only()) throw ContractViolation("no certificate for " + a.str());
  size_t bi = cert.branches.size();
  for (size_t i = 0; i < cert.branches.size(); ++i)
    if (cert.branches[i].covers(N)) {
      bi = i;
      break;
    }
  if (bi == cert.branches.size()) throw ContractViolation("N is not covered by the certificate for " + a.str());
  const CertBranch& br = cert.branches[bi];
  const GoodSet& S = branch_good_set(cert, bi);
  const Condition& cond = condition_for(cert.cond_id);
  const i64 A = a.sum(), s = br.s;
  const Interval I = interval(N, A);

  auto admissible = [&](i64 b) {
    if (mod(b - N, 3) != 0) return false;
    const i64 av = (2 * N + b) / 3;
    if (!S.contains(av, b) || !br.pair_allowed(av, b)) return false;
    for (i64 p : br.b_nonzero_mod)
      if (b % p == 0) return false;
    return cond.eval(av, b);
  };
  auto attempt = [&](i64 b) {
    const i64 av = (2 * N + b) / 3;
    auto x = first_pinned_solution(a, av, b);
    auto sols = nonneg_filter_and_N(x ? std::vector<Vec>{*x} : std::vector<Vec>{}, 5, a, av, b);
    if (sols.empty()) throw InternalError("admissible b = " + std::to_string(b) + " has no solution for N = " +
                                          std::to_string(N) + ", " + a.str());
    if (pentagonal_sum(a, sols.front().x) != N) throw InternalError("witness does not sum to N");
    return sols.front().x;
  };

  // Least matching pair first, then any admissible b in I.
  if (auto pair = pair_for(N, GoodSet(s, [&] {
        std::set<ResiduePair> allowed;
        for (auto [x, y] : S.pairs())
          if (br.pair_allowed(x, y)) allowed.insert({x, y});
        return allowed;
      }()))) {
    const i64 r = mod(3 * pair->first - 2 * N, 3 * s);
    for (i64 b = I.first + mod(r - I.first, 3 * s); b <= I.last; b += 3 * s)
      if (admissible(b)) return attempt(b);
  }
  for (i64 b = I.first; b <= I.last; ++b)
    if (admissible(b)) return attempt(b);
  throw InternalError("no admissible b in I for N = " + std::to_string(N) + ", " + a.str());
}

}  // namespace pentsum
