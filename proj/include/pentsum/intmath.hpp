// Small exact integer linear algebra used by the lattice code.
//
// Everything here works on tiny matrices (at most 4 rows for Gram matrices,
// 8 columns for kernel computations), so the implementations favour
// clarity over asymptotics. Intermediate products go through __int128 and
// overflow of the 64-bit storage type raises pentsum::RangeError.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <vector>

#include "pentsum/errors.hpp"

namespace pentsum {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

/// floor(sqrt(n)) for n >= 0.
u64 isqrt(u64 n);

/// True iff n is a perfect square; writes the root into *root when non-null.
bool is_square(i64 n, i64* root = nullptr);

/// Non-negative residue of a modulo m (m > 0).
inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Narrow a 128-bit intermediate, throwing on overflow.
i64 narrow(i128 v);

/// Returns g = gcd(a, b) >= 0 with x*a + y*b = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);

i64 lcm(i64 a, i64 b);

/// Dense row-major integer matrix.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<i64>> rows);

  static IntMatrix identity(int n);
  static IntMatrix diagonal(const std::vector<i64>& d);
  /// Matrix whose columns are the given vectors.
  static IntMatrix from_columns(const std::vector<std::vector<i64>>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  i64& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  i64 operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  std::vector<i64> column(int c) const;
  std::vector<i64> row(int r) const;
  void set_column(int c, const std::vector<i64>& v);

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& o) const;
  std::vector<i64> operator*(const std::vector<i64>& v) const;
  IntMatrix scaled(i64 k) const;

  bool operator==(const IntMatrix& o) const = default;
  auto operator<=>(const IntMatrix& o) const = default;

  const std::vector<i64>& data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<i64> data_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// Exact determinant (Bareiss fraction-free elimination) of a square matrix.
i64 determinant(const IntMatrix& m);

/// Adjugate of a square matrix: adj(m) * m = det(m) * I.
IntMatrix adjugate(const IntMatrix& m);

/// u^T G v.
i64 bilinear(const IntMatrix& gram, const std::vector<i64>& u, const std::vector<i64>& v);

/// Integer solutions of C x = rhs, written as x0 + W t for t in Z^free.
struct AffineSolution {
  std::vector<i64> particular;  ///< x0
  IntMatrix kernel;             ///< columns span {x : C x = 0} over Z
};

/// Solves the linear Diophantine system C x = rhs. Returns nullopt when no
/// integer solution exists. Handles rank-deficient C.
std::optional<AffineSolution> solve_integer_system(const IntMatrix& c, const std::vector<i64>& rhs);

/// Row-style Hermite normal form of the lattice spanned by the given rows:
/// returns a basis (as rows) in upper-triangular form with positive pivots.
/// Input rows may be linearly dependent; zero rows are dropped.
IntMatrix hermite_rows(const IntMatrix& rows);

/// LLL-reduces the columns of `basis` with respect to the quadratic form
/// `gram` (column j is a coordinate vector). Returns the reduced basis; the
/// lattice spanned is unchanged.
IntMatrix lll_reduce(const IntMatrix& basis, const IntMatrix& gram, double delta = 0.99);

}  // namespace pentsum
