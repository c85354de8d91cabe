#include "pentsum/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unistd.h>

namespace pentsum {

ZLattice::ZLattice(IntMatrix gram) : gram_(std::move(gram)) {
  const int n = gram_.rows();
  if (n < 1 || n != gram_.cols()) throw ContractViolation("Gram matrix must be square and non-empty");
  if (n > 4) throw ContractViolation("lattice rank is capped at 4");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (gram_(i, j) != gram_(j, i)) throw ContractViolation("Gram matrix must be symmetric");
  for (int k = 1; k <= n; ++k) {
    IntMatrix lead(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead(i, j) = gram_(i, j);
    if (determinant(lead) <= 0) throw ContractViolation("Gram matrix must be positive definite");
  }
}

ZLattice ZLattice::diagonal(const std::vector<i64>& d) { return ZLattice(IntMatrix::diagonal(d)); }

ZLattice ZLattice::orthogonal_sum(const ZLattice& x, const ZLattice& y) {
  const int a = x.rank(), b = y.rank();
  IntMatrix g(a + b, a + b);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) g(i, j) = x.gram()(i, j);
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) g(a + i, a + j) = y.gram()(i, j);
  return ZLattice(g);
}

std::string ZLattice::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](i64 v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<std::uint64_t>(v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(rank());
  for (i64 v : gram_.data()) mix(v);
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

nlohmann::json ZLattice::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < rank(); ++i) rows.push_back(gram_.row(i));
  return {{"rank", rank()}, {"gram", rows}};
}

ZLattice ZLattice::from_json(const nlohmann::json& j) {
  const auto& g = j.at("gram");
  const int n = j.contains("rank") ? j.at("rank").get<int>() : static_cast<int>(g.size());
  IntMatrix m(n, n);
  if (!g.empty() && g[0].is_array()) {
    if (static_cast<int>(g.size()) != n) throw ContractViolation("gram rows do not match rank");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(g[i].size()) != n) throw ContractViolation("gram row has wrong length");
      for (int k = 0; k < n; ++k) m(i, k) = g[i][k].get<i64>();
    }
  } else {
    if (static_cast<int>(g.size()) != n * n) throw ContractViolation("flat gram has wrong length");
    for (int i = 0; i < n * n; ++i) m(i / n, i % n) = g[i].get<i64>();
  }
  return ZLattice(m);
}

BinaryForm::BinaryForm(i64 A_, i64 b_, i64 a_) : A(A_), b(b_), a(a_) {
  if (A < 1 || a < 1) throw ContractViolation("binary form needs positive diagonal");
  if (narrow(static_cast<i128>(A) * a - static_cast<i128>(b) * b) <= 0)
    throw ContractViolation("binary form must be positive definite");
}

namespace {

using Real = long double;

// q[i][i] and q[i][j] (j > i) with x^T G x = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
std::vector<std::vector<Real>> cholesky(const IntMatrix& g) {
  const int d = g.rows();
  std::vector<std::vector<Real>> q(d, std::vector<Real>(d, 0));
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) q[i][j] = static_cast<Real>(g(i, j));
  for (int i = 0; i < d; ++i) {
    if (q[i][i] <= 0) throw ContractViolation("form is not positive definite");
    for (int j = i + 1; j < d; ++j) {
      q[j][i] = q[i][j];
      q[i][j] /= q[i][i];
    }
    for (int k = i + 1; k < d; ++k)
      for (int l = k; l < d; ++l) q[k][l] -= q[k][i] * q[i][l];
  }
  return q;
}

// Solves g c = rhs over the reals (g positive definite).
std::vector<Real> solve_real(const IntMatrix& g, const std::vector<Real>& rhs) {
  const int d = g.rows();
  std::vector<std::vector<Real>> m(d, std::vector<Real>(d + 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m[i][j] = static_cast<Real>(g(i, j));
    m[i][d] = rhs[i];
  }
  for (int c = 0; c < d; ++c) {
    int p = c;
    for (int r = c + 1; r < d; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[p][c])) p = r;
    std::swap(m[p], m[c]);
    for (int r = 0; r < d; ++r) {
      if (r == c) continue;
      Real f = m[r][c] / m[c][c];
      for (int k = c; k <= d; ++k) m[r][k] -= f * m[c][k];
    }
  }
  std::vector<Real> x(d);
  for (int i = 0; i < d; ++i) x[i] = m[i][d] / m[i][i];
  return x;
}

}  // namespace

bool enumerate_norm_affine(const IntMatrix& gram, i64 norm, const IntMatrix& constraints, const Vec& rhs,
                           const std::function<bool(const Vec&)>& visit) {
  const int n = gram.rows();
  if (norm < 0) return true;
  IntMatrix c = constraints.rows() == 0 ? IntMatrix(0, n) : constraints;
  auto sol = solve_integer_system(c, rhs);
  if (!sol) return true;
  const Vec& x0 = sol->particular;
  const int d = sol->kernel.cols();
  if (d == 0) return bilinear(gram, x0, x0) != norm || visit(x0);

  const IntMatrix w = lll_reduce(sol->kernel, gram);
  const IntMatrix gw = gram * w;
  const IntMatrix gp = w.transpose() * gw;
  const Vec h = gw.transpose() * x0;
  const i64 q0 = bilinear(gram, x0, x0);

  std::vector<Real> neg_h(d);
  for (int i = 0; i < d; ++i) neg_h[i] = -static_cast<Real>(h[i]);
  const std::vector<Real> center = solve_real(gp, neg_h);
  Real radius = static_cast<Real>(norm - q0);
  for (int i = 0; i < d; ++i) radius -= static_cast<Real>(h[i]) * center[i];
  const Real eps = 1e-7L * (1 + std::fabs(radius));
  if (radius < -eps) return true;

  const auto q = cholesky(gp);
  Vec t(d, 0);
  std::vector<Real> y(d, 0);
  Vec x(n);
  bool keep_going = true;

  std::function<void(int, Real)> level = [&](int i, Real remaining) {
    Real shift = 0;
    for (int j = i + 1; j < d; ++j) shift += q[i][j] * y[j];
    const Real mid = center[i] - shift;
    const Real span = std::sqrt(std::max<Real>(remaining, 0) / q[i][i]);
    const i64 lo = static_cast<i64>(std::ceil(mid - span - 1e-6L));
    const i64 hi = static_cast<i64>(std::floor(mid + span + 1e-6L));
    if (i == 0 && hi - lo > 6) {
      // Exact norm: only the integers next to the two roots can hit it.
      const i64 r1 = static_cast<i64>(std::llround(mid - span)), r2 = static_cast<i64>(std::llround(mid + span));
      const i64 cands[] = {r1 - 1, r1, r1 + 1, r2 - 1, r2, r2 + 1};
      for (i64 ti : cands) {
        if (!keep_going) break;
        if (ti < lo || ti > hi) continue;
        t[0] = ti;
        for (int r = 0; r < n; ++r) {
          i128 acc = x0[r];
          for (int k = 0; k < d; ++k) acc += static_cast<i128>(w(r, k)) * t[k];
          x[r] = narrow(acc);
        }
        if (bilinear(gram, x, x) == norm && !visit(x)) keep_going = false;
      }
      return;
    }
    for (i64 ti = lo; ti <= hi && keep_going; ++ti) {
      t[i] = ti;
      y[i] = static_cast<Real>(ti) - center[i];
      const Real z = y[i] + shift;
      const Real rest = remaining - q[i][i] * z * z;
      if (rest < -eps) continue;
      if (i > 0) {
        level(i - 1, rest);
        continue;
      }
      for (int r = 0; r < n; ++r) {
        i128 acc = x0[r];
        for (int k = 0; k < d; ++k) acc += static_cast<i128>(w(r, k)) * t[k];
        x[r] = narrow(acc);
      }
      if (bilinear(gram, x, x) == norm && !visit(x)) keep_going = false;
    }
  };
  level(d - 1, radius);
  return keep_going;
}

std::vector<Vec> vectors_of_norm(const ZLattice& L, i64 n) {
  std::vector<Vec> out;
  if (n < 1) return out;
  enumerate_norm_affine(L.gram(), n, IntMatrix(0, L.rank()), {}, [&](const Vec& v) {
    out.push_back(v);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool enumerate_representations(const ZLattice& L, const IntMatrix& h, const PinCondition& pins,
                               const std::function<bool(const IntMatrix&)>& visit, SearchBudget* budget) {
  const int n = L.rank(), m = h.rows();
  if (m > n) return true;
  std::vector<int> order(m);
  for (int j = 0; j < m; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return h(a, a) < h(b, b); });

  const int np = static_cast<int>(pins.targets.size());
  std::vector<Vec> pin_rows;
  for (const auto& t : pins.targets) pin_rows.push_back(L.gram() * t);

  IntMatrix x(n, m);
  std::vector<Vec> chosen_rows(m);
  bool keep_going = true;

  std::function<void(int)> place = [&](int depth) {
    if (depth == m) {
      if (!visit(x)) keep_going = false;
      return;
    }
    const int j = order[depth];
    IntMatrix c(depth + np, n);
    Vec rhs(depth + np);
    for (int k = 0; k < depth; ++k) {
      for (int r = 0; r < n; ++r) c(k, r) = chosen_rows[order[k]][r];
      rhs[k] = h(order[k], j);
    }
    for (int k = 0; k < np; ++k) {
      for (int r = 0; r < n; ++r) c(depth + k, r) = pin_rows[k][r];
      rhs[depth + k] = pins.values(k, j);
    }
    enumerate_norm_affine(L.gram(), h(j, j), c, rhs, [&](const Vec& col) {
      if (budget && !budget->spend()) {
        keep_going = false;
        return false;
      }
      x.set_column(j, col);
      chosen_rows[j] = L.gram() * col;
      place(depth + 1);
      return keep_going;
    });
  };
  place(0);
  return keep_going;
}

std::vector<IntMatrix> automorphism_group(const ZLattice& L) {
  std::vector<IntMatrix> group;
  enumerate_representations(L, L.gram(), {}, [&](const IntMatrix& u) {
    group.push_back(u);
    return true;
  });
  std::sort(group.begin(), group.end());
  return group;
}

AutomorphismCache& AutomorphismCache::global() {
  static AutomorphismCache cache;
  return cache;
}

void AutomorphismCache::set_directory(std::optional<std::filesystem::path> dir) {
  std::lock_guard lock(mu_);
  dir_ = std::move(dir);
}

const std::vector<IntMatrix>& AutomorphismCache::get(const ZLattice& L) {
  std::lock_guard lock(mu_);
  const std::string key = L.hash();
  auto it = groups_.find(key);
  if (it != groups_.end()) return it->second;

  std::vector<IntMatrix> group;
  std::filesystem::path file;
  if (dir_) {
    file = *dir_ / ("aut-" + key + ".json");
    std::ifstream in(file);
    if (in) {
      try {
        auto j = nlohmann::json::parse(in);
        if (ZLattice::from_json(j.at("lattice")) == L) {
          const int n = L.rank();
          for (const auto& flat : j.at("group")) {
            IntMatrix u(n, n);
            for (int i = 0; i < n * n; ++i) u(i / n, i % n) = flat.at(i).get<i64>();
            if (u.transpose() * L.gram() * u != L.gram()) throw InternalError("cached automorphism is invalid");
            group.push_back(u);
          }
        }
      } catch (const nlohmann::json::exception&) {
        group.clear();
      } catch (const InternalError&) {
        group.clear();
      }
    }
  }
  if (group.empty()) {
    group = automorphism_group(L);
    if (dir_) {
      std::filesystem::create_directories(*dir_);
      nlohmann::json j{{"lattice", L.to_json()}, {"group", nlohmann::json::array()}};
      for (const auto& u : group) j["group"].push_back(u.data());
      auto tmp = file;
      tmp += ".tmp" + std::to_string(::getpid());
      {
        std::ofstream out(tmp);
        out << j.dump();
      }
      std::filesystem::rename(tmp, file);
    }
  }
  return groups_.emplace(key, std::move(group)).first->second;
}

std::vector<Orbit> orbits(const ZLattice& L, i64 A) {
  const auto& group = AutomorphismCache::global().get(L);
  std::set<Vec> seen;
  std::vector<Orbit> out;
  for (const Vec& v : vectors_of_norm(L, A)) {
    if (seen.count(v)) continue;
    std::set<Vec> members;
    for (const auto& u : group) members.insert(u * v);
    seen.insert(members.begin(), members.end());
    Orbit o;
    o.members.assign(members.begin(), members.end());
    o.representative = o.members.back();
    out.push_back(std::move(o));
  }
  std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) { return a.representative < b.representative; });
  return out;
}

std::vector<Vec> orbit_representatives(const ZLattice& L, i64 A) {
  std::vector<Vec> reps;
  for (const auto& o : orbits(L, A)) reps.push_back(o.representative);
  return reps;
}

std::vector<IntMatrix> stabilizer(const ZLattice& L, const Vec& v) {
  std::vector<IntMatrix> out;
  for (const auto& u : AutomorphismCache::global().get(L))
    if (u * v == v) out.push_back(u);
  return out;
}

std::optional<IntMatrix> is_isometric(const ZLattice& L, const ZLattice& K) {
  if (L.rank() != K.rank()) throw ContractViolation("is_isometric: rank mismatch");
  if (L.det() != K.det()) return std::nullopt;
  i64 top = 0;
  for (int i = 0; i < K.rank(); ++i) top = std::max({top, K.gram()(i, i), L.gram()(i, i)});
  for (i64 n = 1; n <= top; ++n)
    if (vectors_of_norm(L, n).size() != vectors_of_norm(K, n).size()) return std::nullopt;
  std::optional<IntMatrix> found;
  enumerate_representations(L, K.gram(), {}, [&](const IntMatrix& u) {
    found = u;
    return false;
  });
  return found;
}

std::vector<Vec> solve_pinned_system(const CoefficientVector& a, i64 aval, i64 bval) {
  const int n = static_cast<int>(a.size());
  if (n > 4) throw ContractViolation("solve_pinned_system: at most 4 coefficients");
  std::vector<Vec> out;
  if (aval < 0) return out;
  IntMatrix c(1, n);
  for (int i = 0; i < n; ++i) c(0, i) = a[i];
  enumerate_norm_affine(IntMatrix::diagonal(a.coeffs()), aval, c, {bval}, [&](const Vec& x) {
    out.push_back(x);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Vec> first_pinned_solution(const CoefficientVector& a, i64 aval, i64 bval) {
  const int n = static_cast<int>(a.size());
  if (n > 4) throw ContractViolation("first_pinned_solution: at most 4 coefficients");
  std::optional<Vec> out;
  if (aval < 0) return out;
  IntMatrix c(1, n);
  for (int i = 0; i < n; ++i) c(0, i) = a[i];
  enumerate_norm_affine(IntMatrix::diagonal(a.coeffs()), aval, c, {bval}, [&](const Vec& x) {
    out = x;
    return false;
  });
  return out;
}

i64 polygonal_target(int m, i64 aval, i64 bval) {
  if (m < 3) throw ContractViolation("polygonal order must be >= 3");
  i128 num = static_cast<i128>(m - 2) * (aval - bval);
  if (num % 2 != 0) throw ContractViolation("N_{m,a,b} is not integral");
  return narrow(num / 2 + bval);
}

std::vector<PinnedSolution> nonneg_filter_and_N(const std::vector<Vec>& solutions, int m, const CoefficientVector& a,
                                                i64 aval, i64 bval) {
  const i64 target = polygonal_target(m, aval, bval);
  // b >= sqrt(A - a_1) sqrt(a) forces every solution to be non-negative.
  const bool forced = bval >= 0 && static_cast<i128>(bval) * bval >= static_cast<i128>(a.sum() - a[0]) * aval;
  std::vector<PinnedSolution> out;
  for (const auto& x : solutions) {
    bool nonneg = std::all_of(x.begin(), x.end(), [](i64 v) { return v >= 0; });
    if (!nonneg) {
      if (forced) throw InternalError("negative solution although b^2 >= (A - a_1) a");
      continue;
    }
    out.push_back({x, target});
  }
  return out;
}

namespace {

// Discriminant form of L(2), realised on Z^n / 2G Z^n: y stands for
// (2G)^-1 y, so q(y) = y^T adj(2G) y / det (mod 2) and b likewise (mod 1).
struct DiscriminantForm {
  IntMatrix h;    // row HNF of 2G
  IntMatrix adj;  // adj(2G)
  i64 det;
  std::vector<Vec> elems;

  explicit DiscriminantForm(const ZLattice& L) {
    const IntMatrix e = L.gram().scaled(2);
    h = hermite_rows(e);
    adj = adjugate(e);
    det = determinant(e);
    const int n = L.rank();
    Vec y(n, 0);
    std::function<void(int)> fill = [&](int i) {
      if (i == n) {
        elems.push_back(y);
        return;
      }
      for (i64 c = 0; c < h(i, i); ++c) {
        y[i] = c;
        fill(i + 1);
      }
    };
    fill(0);
  }
  Vec reduce(Vec y) const {
    for (int r = 0; r < h.rows(); ++r) {
      const i64 k = floor_div(y[r], h(r, r));
      if (k == 0) continue;
      for (int c = r; c < h.cols(); ++c) y[c] -= k * h(r, c);
    }
    return y;
  }
  i64 q(const Vec& y) const { return mod(bilinear(adj, y, y), 2 * det); }
  i64 b(const Vec& y, const Vec& z) const { return mod(bilinear(adj, y, z), det); }
};

}  // namespace

bool same_genus(const ZLattice& L, const ZLattice& K) {
  if (L.rank() != K.rank() || L.det() != K.det()) return false;
  const DiscriminantForm d1(L), d2(K);
  if (d1.elems.size() != d2.elems.size()) return false;
  const int n = L.rank();
  std::vector<int> gens;
  for (int i = 0; i < n; ++i)
    if (d1.h(i, i) > 1) gens.push_back(i);
  auto unit = [&](int i) {
    Vec e(n, 0);
    e[i] = 1;
    return e;
  };
  std::vector<Vec> image(n, Vec(n, 0));  // images of e_i
  // Relations of D1 are the rows of its HNF. A row with pivot 1 expresses e_r
  // through later coordinates and fixes its image; the others must vanish.
  auto relations_hold = [&]() {
    for (int r = n - 1; r >= 0; --r) {
      if (d1.h(r, r) != 1) continue;
      Vec acc(n, 0);
      for (int c = r + 1; c < n; ++c)
        for (int k = 0; k < n; ++k) acc[k] -= d1.h(r, c) * image[c][k];
      image[r] = d2.reduce(acc);
    }
    for (int r = 0; r < n; ++r) {
      Vec acc(n, 0);
      for (int c = 0; c < n; ++c)
        for (int k = 0; k < n; ++k) acc[k] += d1.h(r, c) * image[c][k];
      if (d2.reduce(acc) != Vec(n, 0)) return false;
    }
    return true;
  };
  std::function<bool(size_t)> assign = [&](size_t k) {
    if (k == gens.size()) return relations_hold();
    const int g = gens[k];
    const Vec eg = unit(g);
    for (const auto& cand : d2.elems) {
      if (d2.q(cand) != d1.q(eg)) continue;
      bool ok = true;
      for (size_t j = 0; j < k && ok; ++j) ok = d2.b(cand, image[gens[j]]) == d1.b(eg, unit(gens[j]));
      if (!ok) continue;
      image[g] = cand;
      if (assign(k + 1)) return true;
    }
    image[g] = Vec(n, 0);
    return false;
  };
  return assign(0);
}

}  // namespace pentsum
