#include "pentsum/intmath.hpp"

#include <cmath>
#include <ostream>
#include <utility>

namespace pentsum {

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

bool is_square(i64 n, i64* root) {
  if (n < 0) return false;
  u64 r = isqrt(static_cast<u64>(n));
  if (r * r != static_cast<u64>(n)) return false;
  if (root) *root = static_cast<i64>(r);
  return true;
}

i64 narrow(i128 v) {
  if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
    throw RangeError("integer overflow in 64-bit lattice arithmetic");
  return static_cast<i64>(v);
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    old_r = std::exchange(r, old_r - q * r);
    old_s = std::exchange(s, old_s - q * s);
    old_t = std::exchange(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

i64 lcm(i64 a, i64 b) {
  i64 x, y;
  i64 g = ext_gcd(a, b, x, y);
  return g == 0 ? 0 : narrow(static_cast<i128>(a / g) * b);
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<i64>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  data_.reserve(static_cast<size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw ContractViolation("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::diagonal(const std::vector<i64>& d) {
  const int n = static_cast<int>(d.size());
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<i64>>& cols) {
  const int c = static_cast<int>(cols.size());
  const int r = c == 0 ? 0 : static_cast<int>(cols[0].size());
  IntMatrix m(r, c);
  for (int j = 0; j < c; ++j) m.set_column(j, cols[j]);
  return m;
}

std::vector<i64> IntMatrix::column(int c) const {
  std::vector<i64> v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

std::vector<i64> IntMatrix::row(int r) const {
  return {data_.begin() + static_cast<long>(r) * cols_, data_.begin() + static_cast<long>(r + 1) * cols_};
}

void IntMatrix::set_column(int c, const std::vector<i64>& v) {
  for (int i = 0; i < rows_; ++i) (*this)(i, c) = v[i];
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw ContractViolation("matrix shape mismatch");
  IntMatrix p(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < o.cols_; ++j) {
      i128 acc = 0;
      for (int k = 0; k < cols_; ++k) acc += static_cast<i128>((*this)(i, k)) * o(k, j);
      p(i, j) = narrow(acc);
    }
  return p;
}

std::vector<i64> IntMatrix::operator*(const std::vector<i64>& v) const {
  if (cols_ != static_cast<int>(v.size())) throw ContractViolation("matrix/vector shape mismatch");
  std::vector<i64> out(rows_);
  for (int i = 0; i < rows_; ++i) {
    i128 acc = 0;
    for (int k = 0; k < cols_; ++k) acc += static_cast<i128>((*this)(i, k)) * v[k];
    out[i] = narrow(acc);
  }
  return out;
}

IntMatrix IntMatrix::scaled(i64 k) const {
  IntMatrix m = *this;
  for (auto& x : m.data_) x = narrow(static_cast<i128>(x) * k);
  return m;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  os << '[';
  for (int i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

i64 determinant(const IntMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw ContractViolation("determinant of non-square matrix");
  if (n == 0) return 1;
  std::vector<i128> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  i128 sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k * n + k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i * n + k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[swap * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return narrow(sign * a[(n - 1) * n + (n - 1)]);
}

IntMatrix adjugate(const IntMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw ContractViolation("adjugate of non-square matrix");
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMatrix minor(n - 1, n - 1);
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = m(r, c);
        }
        ++mr;
      }
      i64 cof = determinant(minor);
      adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

i64 bilinear(const IntMatrix& gram, const std::vector<i64>& u, const std::vector<i64>& v) {
  const int n = gram.rows();
  i128 acc = 0;
  for (int i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    i128 row = 0;
    for (int j = 0; j < n; ++j) row += static_cast<i128>(gram(i, j)) * v[j];
    acc += row * u[i];
  }
  return narrow(acc);
}

namespace {

// Column operation on (h, u): [col_p, col_q] <- [col_p, col_q] * [[x, y'], [y, x']].
void combine_columns(IntMatrix& h, IntMatrix& u, int p, int q, i64 x, i64 y, i64 xp, i64 yp) {
  for (IntMatrix* mat : {&h, &u}) {
    IntMatrix& m = *mat;
    for (int r = 0; r < m.rows(); ++r) {
      i128 a = m(r, p), b = m(r, q);
      m(r, p) = narrow(a * x + b * y);
      m(r, q) = narrow(a * yp + b * xp);
    }
  }
}

}  // namespace

std::optional<AffineSolution> solve_integer_system(const IntMatrix& c, const std::vector<i64>& rhs) {
  const int m = c.rows(), n = c.cols();
  IntMatrix h = c;
  IntMatrix u = IntMatrix::identity(n);
  std::vector<int> pivot_col(m, -1);
  int piv = 0;
  for (int i = 0; i < m && piv < n; ++i) {
    for (int j = piv + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      i64 a = h(i, piv), b = h(i, j), x, y;
      i64 g = ext_gcd(a, b, x, y);
      // [x, -b/g; y, a/g] has determinant one.
      combine_columns(h, u, piv, j, x, y, a / g, -b / g);
    }
    if (h(i, piv) == 0) continue;
    if (h(i, piv) < 0)
      for (IntMatrix* mat : {&h, &u})
        for (int r = 0; r < mat->rows(); ++r) (*mat)(r, piv) = -(*mat)(r, piv);
    pivot_col[i] = piv++;
  }
  std::vector<i64> z(n, 0);
  for (int i = 0; i < m; ++i) {
    if (pivot_col[i] < 0) continue;
    const int p = pivot_col[i];
    i128 acc = rhs[i];
    for (int j = 0; j < p; ++j) acc -= static_cast<i128>(h(i, j)) * z[j];
    if (acc % h(i, p) != 0) return std::nullopt;
    z[p] = narrow(acc / h(i, p));
  }
  for (int i = 0; i < m; ++i) {
    i128 acc = 0;
    for (int j = 0; j < n; ++j) acc += static_cast<i128>(h(i, j)) * z[j];
    if (acc != rhs[i]) return std::nullopt;
  }
  AffineSolution sol;
  sol.particular = u * z;
  sol.kernel = IntMatrix(n, n - piv);
  for (int j = piv; j < n; ++j) sol.kernel.set_column(j - piv, u.column(j));
  return sol;
}

IntMatrix hermite_rows(const IntMatrix& rows) {
  IntMatrix a = rows;
  const int m = a.rows(), n = a.cols();
  int r = 0;
  auto row_op = [&](int p, int q, i64 x, i64 y, i64 xp, i64 yp) {
    for (int c = 0; c < n; ++c) {
      i128 s = a(p, c), t = a(q, c);
      a(p, c) = narrow(s * x + t * y);
      a(q, c) = narrow(s * yp + t * xp);
    }
  };
  for (int col = 0; col < n && r < m; ++col) {
    for (int i = r + 1; i < m; ++i) {
      if (a(i, col) == 0) continue;
      i64 p = a(r, col), q = a(i, col), x, y;
      i64 g = ext_gcd(p, q, x, y);
      row_op(r, i, x, y, p / g, -q / g);
    }
    if (a(r, col) == 0) continue;
    if (a(r, col) < 0)
      for (int c = 0; c < n; ++c) a(r, c) = -a(r, c);
    for (int i = 0; i < r; ++i) {
      i64 q = floor_div(a(i, col), a(r, col));
      if (q != 0)
        for (int c = 0; c < n; ++c) a(i, c) = narrow(a(i, c) - static_cast<i128>(q) * a(r, c));
    }
    ++r;
  }
  IntMatrix out(r, n);
  for (int i = 0; i < r; ++i)
    for (int c = 0; c < n; ++c) out(i, c) = a(i, c);
  return out;
}

IntMatrix lll_reduce(const IntMatrix& basis, const IntMatrix& gram, double delta) {
  IntMatrix b = basis;
  const int n = b.cols();
  if (n <= 1) return b;
  auto ip = [&](int i, int j) { return static_cast<double>(bilinear(gram, b.column(i), b.column(j))); };
  std::vector<double> mu(static_cast<size_t>(n) * n), bstar(n);
  auto gram_schmidt = [&]() {
    for (int i = 0; i < n; ++i) {
      double bi = ip(i, i);
      for (int j = 0; j < i; ++j) {
        double m = ip(i, j);
        for (int k = 0; k < j; ++k) m -= mu[j * n + k] * mu[i * n + k] * bstar[k];
        mu[i * n + j] = m / bstar[j];
        bi -= mu[i * n + j] * mu[i * n + j] * bstar[j];
      }
      bstar[i] = bi;
    }
  };
  int k = 1;
  int guard = 0;
  gram_schmidt();
  while (k < n) {
    if (++guard > 100000) throw ResourceError("LLL failed to converge");
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu[k * n + j]);
      if (q == 0) continue;
      const i64 qi = static_cast<i64>(q);
      for (int r = 0; r < b.rows(); ++r) b(r, k) = narrow(b(r, k) - static_cast<i128>(qi) * b(r, j));
      gram_schmidt();
    }
    if (bstar[k] >= (delta - mu[k * n + k - 1] * mu[k * n + k - 1]) * bstar[k - 1]) {
      ++k;
    } else {
      for (int r = 0; r < b.rows(); ++r) std::swap(b(r, k), b(r, k - 1));
      gram_schmidt();
      k = std::max(k - 1, 1);
    }
  }
  return b;
}

}  // namespace pentsum
