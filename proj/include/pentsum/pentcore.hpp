// Pentagonal numbers and representability by weighted pentagonal sums.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentsum/intmath.hpp"

namespace pentsum {

/// Non-decreasing tuple of positive coefficients (a_1 <= ... <= a_k).
class CoefficientVector {
 public:
  explicit CoefficientVector(std::vector<i64> coeffs);
  CoefficientVector(std::initializer_list<i64> coeffs) : CoefficientVector(std::vector<i64>(coeffs)) {}

  /// Accepts "1,2,4,5", "(1,2,4,5)" or "1 2 4 5".
  static CoefficientVector parse(const std::string& text);

  size_t size() const { return coeffs_.size(); }
  i64 operator[](size_t i) const { return coeffs_[i]; }
  const std::vector<i64>& coeffs() const { return coeffs_; }
  i64 sum() const;

  CoefficientVector appended(i64 a) const;
  /// "(1,2,4,5)"
  std::string str() const;

  auto operator<=>(const CoefficientVector&) const = default;

 private:
  std::vector<i64> coeffs_;
};

std::ostream& operator<<(std::ostream& os, const CoefficientVector& a);

/// (3x^2 - x) / 2.
i64 pentagonal(i64 x);
bool is_pentagonal(i64 n);
std::vector<i64> pentagonal_values_upto(i64 limit);

/// Value of sum a_i P5(x_i).
i64 pentagonal_sum(const CoefficientVector& a, const std::vector<i64>& x);

class RepresentabilityTable {
 public:
  RepresentabilityTable(CoefficientVector a, i64 limit);

  const CoefficientVector& coeffs() const { return coeffs_; }
  i64 limit() const { return limit_; }
  bool test(i64 n) const { return (words_[static_cast<size_t>(n) >> 6] >> (n & 63)) & 1; }
  bool operator[](i64 n) const { return test(n); }

  std::vector<i64> exceptional() const;
  std::optional<i64> first_gap(i64 from = 1) const;
  size_t count() const;

  /// Raw bits, little-endian, bit N of the dump is N's representability.
  void write_bits(std::ostream& os) const;
  nlohmann::json to_json() const;

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  CoefficientVector coeffs_;
  i64 limit_;
  std::vector<std::uint64_t> words_;
};

RepresentabilityTable build_table(const CoefficientVector& a, i64 limit);

/// Point query. Uses a cached (a_1, a_2) table up to `cache_size`.
bool is_representable(const CoefficientVector& a, i64 n, i64 cache_size = i64{1} << 20);

/// Some x >= 0 with sum a_i P5(x_i) = n, if one exists.
std::optional<std::vector<i64>> find_representation(const CoefficientVector& a, i64 n);

std::vector<i64> exceptional_set(const CoefficientVector& a, i64 limit);
std::optional<i64> truant(const CoefficientVector& a, i64 search_limit);

}  // namespace pentsum
