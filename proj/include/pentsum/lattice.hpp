// Positive definite integral Z-lattices of rank <= 4.
//
// Vectors are coordinate vectors with respect to the lattice's own basis.
// Short-vector enumeration is Fincke-Pohst on an LLL-reduced parametrisation;
// floating point only prunes, every reported vector is rechecked exactly.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentsum/intmath.hpp"
#include "pentsum/pentcore.hpp"

namespace pentsum {

using Vec = std::vector<i64>;

class ZLattice {
 public:
  ZLattice() = default;
  /// Validates symmetry, integrality (trivially) and positive definiteness.
  explicit ZLattice(IntMatrix gram);
  static ZLattice diagonal(const std::vector<i64>& d);
  /// Orthogonal sum of two lattices.
  static ZLattice orthogonal_sum(const ZLattice& x, const ZLattice& y);

  int rank() const { return gram_.rows(); }
  const IntMatrix& gram() const { return gram_; }
  i64 Q(const Vec& v) const { return bilinear(gram_, v, v); }
  i64 B(const Vec& u, const Vec& v) const { return bilinear(gram_, u, v); }
  i64 det() const { return determinant(gram_); }

  /// Hex digest of the Gram matrix, stable across runs.
  std::string hash() const;
  nlohmann::json to_json() const;
  static ZLattice from_json(const nlohmann::json& j);

  bool operator==(const ZLattice& o) const { return gram_ == o.gram_; }

 private:
  IntMatrix gram_;
};

/// [A, b, a]: the binary form A x^2 + 2 b x y + a y^2.
struct BinaryForm {
  BinaryForm(i64 A, i64 b, i64 a);
  i64 A, b, a;
  i64 discriminant() const { return A * a - b * b; }
};

/// Budget for backtracking searches; counts visited nodes.
struct SearchBudget {
  explicit SearchBudget(std::uint64_t limit = UINT64_MAX) : remaining(limit) {}
  std::uint64_t remaining;
  bool exhausted = false;
  bool spend() {
    if (remaining == 0) {
      exhausted = true;
      return false;
    }
    --remaining;
    return true;
  }
};

/// Calls visit(x) for every x in Z^n with x^T G x = norm and C x = rhs
/// (C may have zero rows). Stops early if visit returns false; the return
/// value is false iff the enumeration was stopped early.
bool enumerate_norm_affine(const IntMatrix& gram, i64 norm, const IntMatrix& constraints, const Vec& rhs,
                           const std::function<bool(const Vec&)>& visit);

/// R(n, L), sorted lexicographically.
std::vector<Vec> vectors_of_norm(const ZLattice& L, i64 n);

/// Enumerates integer matrices X (rank(L) x rank(H)) with X^T G_L X = H, i.e.
/// representations of the lattice with Gram H by L. Extra linear conditions
/// G_L-pair each column with a fixed target: t_i^T G_L X_j = pin_values(i, j).
/// Columns are chosen in increasing order of H's diagonal. Returns false iff
/// stopped early by visit or by the budget.
struct PinCondition {
  std::vector<Vec> targets;  // vectors of L
  IntMatrix values;          // targets.size() x rank(H)
};
bool enumerate_representations(const ZLattice& L, const IntMatrix& h, const PinCondition& pins,
                               const std::function<bool(const IntMatrix&)>& visit, SearchBudget* budget = nullptr);

/// O(L) as a list of matrices U with U^T G U = G, sorted.
std::vector<IntMatrix> automorphism_group(const ZLattice& L);

/// Cached automorphism groups keyed by Gram hash; optionally persisted to a
/// directory with atomic file replacement.
class AutomorphismCache {
 public:
  explicit AutomorphismCache(std::optional<std::filesystem::path> dir = std::nullopt) : dir_(std::move(dir)) {}
  const std::vector<IntMatrix>& get(const ZLattice& L);
  static AutomorphismCache& global();
  void set_directory(std::optional<std::filesystem::path> dir);

 private:
  std::mutex mu_;
  std::optional<std::filesystem::path> dir_;
  std::map<std::string, std::vector<IntMatrix>> groups_;
};

struct Orbit {
  Vec representative;
  std::vector<Vec> members;  // sorted
};

/// Orbits of O(L) on R(A, L), ordered by representative. The representative
/// of an orbit is its lexicographically greatest member.
std::vector<Orbit> orbits(const ZLattice& L, i64 A);
std::vector<Vec> orbit_representatives(const ZLattice& L, i64 A);

/// Stabiliser of v in O(L).
std::vector<IntMatrix> stabilizer(const ZLattice& L, const Vec& v);

/// U with U^T G_L U = G_K, if L and K are isometric.
std::optional<IntMatrix> is_isometric(const ZLattice& L, const ZLattice& K);

/// Genus equality: the even lattices L(2) and K(2) have the same rank and
/// isomorphic discriminant quadratic forms.
bool same_genus(const ZLattice& L, const ZLattice& K);

/// All integer x with sum a_i x_i^2 = aval and sum a_i x_i = bval, sorted.
std::vector<Vec> solve_pinned_system(const CoefficientVector& a, i64 aval, i64 bval);
/// The first solution found, if any.
std::optional<Vec> first_pinned_solution(const CoefficientVector& a, i64 aval, i64 bval);

struct PinnedSolution {
  Vec x;
  i64 N;
};

/// N_{m,a,b} = ((m-2)/2)(a - b) + b.
i64 polygonal_target(int m, i64 aval, i64 bval);

/// Non-negative solutions with their N. Throws ContractViolation if N is not
/// integral, and InternalError if b >= sqrt((A - a_1) a) but some solution
/// has a negative coordinate.
std::vector<PinnedSolution> nonneg_filter_and_N(const std::vector<Vec>& solutions, int m, const CoefficientVector& a,
                                                i64 aval, i64 bval);

}  // namespace pentsum
