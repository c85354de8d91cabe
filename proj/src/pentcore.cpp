#include "pentsum/pentcore.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <regex>
#include <sstream>
#include <tuple>

namespace pentsum {

namespace {

constexpr i64 kMaxInput = i64{1} << 62;

}  // namespace

CoefficientVector::CoefficientVector(std::vector<i64> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw ContractViolation("coefficient vector must be non-empty");
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] < 1) throw ContractViolation("coefficients must be positive");
    if (coeffs_[i] > kMaxInput) throw RangeError("coefficient out of range");
    if (i > 0 && coeffs_[i] < coeffs_[i - 1]) throw ContractViolation("coefficients must be non-decreasing");
  }
}

CoefficientVector CoefficientVector::parse(const std::string& text) {
  static const std::regex number("[0-9]+");
  std::vector<i64> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number); it != std::sregex_iterator(); ++it)
    out.push_back(std::stoll(it->str()));
  if (text.find('-') != std::string::npos) throw ContractViolation("coefficients must be positive: " + text);
  return CoefficientVector(std::move(out));
}

i64 CoefficientVector::sum() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), i64{0}); }

CoefficientVector CoefficientVector::appended(i64 a) const {
  auto c = coeffs_;
  c.push_back(a);
  return CoefficientVector(std::move(c));
}

std::string CoefficientVector::str() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
  os << ')';
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CoefficientVector& a) { return os << a.str(); }

i64 pentagonal(i64 x) {
  if (x < 0) throw ContractViolation("pentagonal: negative argument");
  if (x > 2'000'000'000) throw RangeError("pentagonal: argument too large");
  return (3 * x * x - x) / 2;
}

bool is_pentagonal(i64 n) {
  if (n < 0) return false;
  if (n == 0) return true;
  // n = P5(x) iff 24n + 1 = (6x - 1)^2.
  i64 r;
  if (n > (kMaxInput - 1) / 24 || !is_square(24 * n + 1, &r)) return false;
  return r % 6 == 5;
}

std::vector<i64> pentagonal_values_upto(i64 limit) {
  std::vector<i64> out;
  for (i64 x = 0;; ++x) {
    i64 p = pentagonal(x);
    if (p > limit) break;
    out.push_back(p);
  }
  return out;
}

i64 pentagonal_sum(const CoefficientVector& a, const std::vector<i64>& x) {
  if (x.size() != a.size()) throw ContractViolation("pentagonal_sum: length mismatch");
  i128 acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += static_cast<i128>(a[i]) * pentagonal(x[i]);
  return narrow(acc);
}

RepresentabilityTable::RepresentabilityTable(CoefficientVector a, i64 limit) : coeffs_(std::move(a)), limit_(limit) {
  if (limit < 0) throw ContractViolation("table limit must be non-negative");
  if (limit > (i64{1} << 40)) throw ResourceError("table limit too large");
  try {
    words_.assign(static_cast<size_t>(limit / 64 + 1), 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate representability table");
  }
}

std::vector<i64> RepresentabilityTable::exceptional() const {
  std::vector<i64> out;
  for (size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t missing = ~words_[w];
    while (missing) {
      i64 n = static_cast<i64>(w * 64) + std::countr_zero(missing);
      if (n > limit_) return out;
      out.push_back(n);
      missing &= missing - 1;
    }
  }
  return out;
}

std::optional<i64> RepresentabilityTable::first_gap(i64 from) const {
  for (i64 n = from; n <= limit_; ++n)
    if (!test(n)) return n;
  return std::nullopt;
}

size_t RepresentabilityTable::count() const {
  size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

void RepresentabilityTable::write_bits(std::ostream& os) const {
  const size_t nbytes = static_cast<size_t>(limit_ / 8 + 1);
  std::string buf(nbytes, '\0');
  for (size_t i = 0; i < nbytes; ++i) buf[i] = static_cast<char>((words_[i / 8] >> (8 * (i % 8))) & 0xff);
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

nlohmann::json RepresentabilityTable::to_json() const {
  return {{"coeffs", coeffs_.coeffs()}, {"limit", limit_}, {"exceptional_list", exceptional()}};
}

namespace {

// dst |= src << shift, restricted to the first `nwords` words.
void shift_or(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src, i64 shift) {
  const size_t nwords = dst.size();
  const size_t q = static_cast<size_t>(shift >> 6);
  const unsigned r = static_cast<unsigned>(shift & 63);
  if (q >= nwords) return;
  std::uint64_t* d = dst.data();
  const std::uint64_t* s = src.data();
  if (r == 0) {
    for (size_t w = q; w < nwords; ++w) d[w] |= s[w - q];
    return;
  }
  d[q] |= s[0] << r;
  for (size_t w = q + 1; w < nwords; ++w) d[w] |= (s[w - q] << r) | (s[w - q - 1] >> (64 - r));
}

void mask_tail(std::vector<std::uint64_t>& words, i64 limit) {
  const unsigned used = static_cast<unsigned>(limit % 64) + 1;
  if (used < 64) words.back() &= (std::uint64_t{1} << used) - 1;
}

}  // namespace

RepresentabilityTable build_table(const CoefficientVector& a, i64 limit) {
  RepresentabilityTable t(a, limit);
  auto& bits = t.words();
  for (i64 p : pentagonal_values_upto(limit / a[0])) {
    i64 v = a[0] * p;
    bits[static_cast<size_t>(v >> 6)] |= std::uint64_t{1} << (v & 63);
  }
  for (size_t i = 1; i < a.size(); ++i) {
    const std::vector<std::uint64_t> prev = bits;
    for (i64 p : pentagonal_values_upto(limit / a[i]))
      if (p > 0) shift_or(bits, prev, a[i] * p);
    mask_tail(bits, limit);
  }
  return t;
}

namespace {

class PairTableCache {
 public:
  std::shared_ptr<const RepresentabilityTable> get(i64 a1, i64 a2, i64 size) {
    std::lock_guard lock(mu_);
    auto key = std::make_tuple(a1, a2, size);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    auto t = std::make_shared<const RepresentabilityTable>(build_table(CoefficientVector{a1, a2}, size));
    tables_.emplace(key, t);
    return t;
  }

 private:
  std::mutex mu_;
  std::map<std::tuple<i64, i64, i64>, std::shared_ptr<const RepresentabilityTable>> tables_;
};

PairTableCache& pair_cache() {
  static PairTableCache cache;
  return cache;
}

i64 max_arg(i64 n, i64 coeff) {
  // Largest x with coeff * P5(x) <= n.
  i64 m = n / coeff;
  i64 x = static_cast<i64>((1 + std::sqrt(1.0L + 24.0L * static_cast<long double>(m))) / 6) + 1;
  while (x > 0 && pentagonal(x) > m) --x;
  return x;
}

class Searcher {
 public:
  Searcher(const CoefficientVector& a, i64 cache_size, bool want_witness)
      : a_(a), cache_size_(cache_size), want_(want_witness), x_(a.size(), 0) {
    if (a.size() >= 3 && cache_size > 0) pair_ = pair_cache().get(a[0], a[1], cache_size);
  }

  bool run(i64 n) { return descend(static_cast<int>(a_.size()) - 1, n); }
  const std::vector<i64>& witness() const { return x_; }

 private:
  bool single(i64 r) {
    if (r % a_[0] != 0) return false;
    i64 m = r / a_[0];
    if (!is_pentagonal(m)) return false;
    if (want_) x_[0] = static_cast<i64>((1 + isqrt(static_cast<u64>(24 * m + 1))) / 6);
    return true;
  }

  bool descend(int k, i64 r) {
    if (k == 0) return single(r);
    if (k == 1 && pair_ && r <= cache_size_ && !pair_->test(r)) return false;
    for (i64 x = max_arg(r, a_[k]); x >= 0; --x) {
      if (want_) x_[k] = x;
      if (descend(k - 1, r - a_[k] * pentagonal(x))) return true;
    }
    return false;
  }

  const CoefficientVector& a_;
  i64 cache_size_;
  bool want_;
  std::vector<i64> x_;
  std::shared_ptr<const RepresentabilityTable> pair_;
};

}  // namespace

bool is_representable(const CoefficientVector& a, i64 n, i64 cache_size) {
  if (n < 0) return false;
  if (n > kMaxInput) throw RangeError("is_representable: argument out of range");
  Searcher s(a, cache_size, false);
  return s.run(n);
}

std::optional<std::vector<i64>> find_representation(const CoefficientVector& a, i64 n) {
  if (n < 0) return std::nullopt;
  Searcher s(a, i64{1} << 20, true);
  if (!s.run(n)) return std::nullopt;
  return s.witness();
}

std::vector<i64> exceptional_set(const CoefficientVector& a, i64 limit) { return build_table(a, limit).exceptional(); }

std::optional<i64> truant(const CoefficientVector& a, i64 search_limit) {
  if (search_limit < 1) throw ContractViolation("truant: search_limit must be >= 1");
  return build_table(a, search_limit).first_gap(1);
}

}  // namespace pentsum
