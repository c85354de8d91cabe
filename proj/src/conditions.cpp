#include "pentsum/conditions.hpp"

#include <map>
#include <sstream>

#include "pentsum/pentcore.hpp"

namespace pentsum {

namespace {

using K = ConditionAtom::Kind;

// Known precision for excluded-form atoms: D is tracked modulo p^e.
int precision(i64 p) { return p == 2 ? 8 : 5; }

i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int log_p(i64 m, i64 p) {
  int e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  if (m != 1) throw ContractViolation("excluded-form modulus must be a power of p");
  return e;
}

ConditionAtom odd_pair() { return {K::OddPair}; }
ConditionAtom a_cong(i64 m, i64 r) { return {K::ACong, 0, m, r}; }
ConditionAtom b_nonzero(i64 m) { return {K::BNonzero, 0, m, 0}; }
ConditionAtom form_cong(i64 k, i64 m, i64 r) { return {K::FormCong, k, m, r}; }
ConditionAtom form_not_cong(i64 k, i64 m, i64 r) { return {K::FormNotCong, k, m, r}; }
ConditionAtom excluded(i64 k, i64 p, i64 m, i64 r, bool even_powers = true) {
  return {K::Excluded, k, m, r, p, even_powers};
}
ConditionAtom implication(i64 bm, i64 br, i64 m, i64 r) { return {K::Implication, 0, m, r, 0, true, bm, br}; }

const std::map<std::string, Condition>& table() {
  static const std::map<std::string, Condition> t = [] {
    const std::vector<std::pair<CoefficientVector, std::vector<ConditionAtom>>> rows{
        {{1, 1, 1, 1}, {odd_pair()}},
        {{1, 1, 1, 2}, {b_nonzero(5)}},
        {{1, 1, 1, 3}, {a_cong(3, 2)}},
        {{1, 1, 1, 4}, {a_cong(4, 2)}},
        {{1, 1, 2, 2}, {odd_pair()}},
        {{1, 1, 2, 3}, {b_nonzero(7)}},
        {{1, 1, 2, 4}, {odd_pair()}},
        {{1, 1, 2, 5}, {form_not_cong(9, 5, 0)}},
        {{1, 1, 2, 6}, {b_nonzero(5)}},
        {{1, 1, 2, 7}, {}},
        {{1, 1, 2, 8}, {odd_pair()}},
        {{1, 1, 2, 9}, {b_nonzero(13)}},
        {{1, 1, 3, 3}, {form_cong(8, 3, 1), odd_pair()}},
        {{1, 1, 3, 4}, {implication(3, 0, 3, 2)}},
        {{1, 1, 3, 5}, {b_nonzero(5)}},
        {{1, 1, 3, 6}, {form_not_cong(11, 3, 2), b_nonzero(11)}},
        {{1, 1, 3, 7}, {form_not_cong(12, 7, 0)}},
        {{1, 2, 2, 2}, {excluded(7, 2, 16, 14)}},
        {{1, 2, 2, 3}, {odd_pair()}},
        {{1, 2, 2, 4}, {excluded(9, 2, 8, 7)}},
        {{1, 2, 2, 5}, {}},
        {{1, 2, 2, 6}, {b_nonzero(11)}},
        {{1, 2, 3, 3}, {excluded(9, 3, 3, 1)}},
        {{1, 2, 3, 4}, {odd_pair()}},
        {{1, 2, 3, 5}, {b_nonzero(11)}},
        {{1, 2, 3, 6}, {excluded(12, 2, 8, 7)}},
        {{1, 2, 3, 7}, {}},
        {{1, 2, 3, 8}, {odd_pair()}},
        {{1, 2, 3, 9}, {implication(3, 0, 3, 0)}},
        {{1, 2, 4, 4}, {excluded(11, 2, 16, 6, false), b_nonzero(11)}},
        {{1, 2, 4, 5}, {excluded(12, 2, 16, 6)}},
        {{1, 2, 4, 6}, {excluded(13, 2, 8, 5)}},
        {{1, 2, 4, 7}, {}},
        {{1, 2, 4, 8}, {excluded(15, 2, 8, 7)}},
        {{1, 2, 4, 12}, {excluded(19, 2, 16, 10)}},
    };
    std::map<std::string, Condition> out;
    for (const auto& [a, atoms] : rows) out[a.str()] = Condition{a.str(), a.sum(), atoms};
    return out;
  }();
  return t;
}

}  // namespace

i64 ConditionAtom::modulus() const {
  switch (kind) {
    case K::OddPair:
      return 2;
    case K::ACong:
    case K::BNonzero:
    case K::FormCong:
    case K::FormNotCong:
      return m;
    case K::Excluded:
      return ipow(p, precision(p));
    case K::Implication:
      return lcm(m, bm);
  }
  return 1;
}

bool ConditionAtom::eval(i64 a, i64 b) const {
  const i128 d128 = static_cast<i128>(k) * a - static_cast<i128>(b) * b;
  switch (kind) {
    case K::OddPair:
      return mod(a, 2) == 1 && mod(b, 2) == 1;
    case K::ACong:
      return mod(a, m) == r;
    case K::BNonzero:
      return mod(b, m) != 0;
    case K::FormCong:
      return mod(narrow(d128 % m), m) == r;
    case K::FormNotCong:
      return mod(narrow(d128 % m), m) != r;
    case K::Excluded: {
      i64 d = narrow(d128);
      if (d <= 0) return true;
      for (;;) {
        if (d % m == r) return false;
        if (!even_powers || d % (p * p) != 0) return true;
        d /= p * p;
      }
    }
    case K::Implication:
      return mod(b, bm) != br || mod(a, m) == r;
  }
  return false;
}

Tri ConditionAtom::eval_mod(i64 a, i64 b, i64 P) const {
  const i64 q = modulus();
  if (P % q != 0) throw ContractViolation("residue modulus does not determine the condition");
  a = mod(a, q);
  b = mod(b, q);
  if (kind != K::Excluded) return eval(a, b) ? Tri::True : Tri::False;

  const int e = precision(p), em = log_p(m, p);
  const i64 d = mod(narrow((static_cast<i128>(k) * a - static_cast<i128>(b) * b) % q), q);
  for (int c = 0;; ++c) {
    if (2 * c > e) return Tri::Unknown;
    if (d % ipow(p, 2 * c) != 0) return Tri::True;
    const int rest = e - 2 * c;
    const int t = std::min(rest, em);
    const i64 pt = ipow(p, t);
    const i64 dc = d / ipow(p, 2 * c);
    if (mod(dc, pt) == mod(r, pt)) return t == em ? Tri::False : Tri::Unknown;
    if (!even_powers) return Tri::True;
  }
}

std::string ConditionAtom::str() const {
  std::ostringstream os;
  const std::string form = std::to_string(k) + "a'-b'^2";
  switch (kind) {
    case K::OddPair:
      os << "a'=b'=1 mod 2";
      break;
    case K::ACong:
      os << "a'=" << r << " mod " << m;
      break;
    case K::BNonzero:
      os << "b'!=0 mod " << m;
      break;
    case K::FormCong:
      os << form << "=" << r << " mod " << m;
      break;
    case K::FormNotCong:
      os << form << "!=" << r << " mod " << m;
      break;
    case K::Excluded:
      os << form << "!=" << (even_powers ? std::to_string(p) + "^2c(" : "(") << m << "d+" << r << ")";
      break;
    case K::Implication:
      os << "a'=" << r << " mod " << m << " if b'=" << br << " mod " << bm;
      break;
  }
  return os.str();
}

i64 Condition::modulus() const {
  i64 q = 1;
  for (const auto& at : atoms) q = lcm(q, at.modulus());
  return q;
}

bool Condition::eval(i64 a, i64 b) const {
  for (const auto& at : atoms)
    if (!at.eval(a, b)) return false;
  return true;
}

Tri Condition::eval_mod(i64 a, i64 b, i64 P) const {
  Tri out = Tri::True;
  for (const auto& at : atoms) {
    const Tri t = at.eval_mod(a, b, P);
    if (t == Tri::False) return Tri::False;
    if (t == Tri::Unknown) out = Tri::Unknown;
  }
  return out;
}

std::string Condition::str() const {
  if (atoms.empty()) return "any a', b'";
  std::string s;
  for (const auto& at : atoms) s += (s.empty() ? "" : " and ") + at.str();
  return s;
}

const Condition& condition_for(const std::string& cond_id) {
  auto it = table().find(cond_id);
  if (it == table().end()) throw NotFound("unknown condition id " + cond_id);
  return it->second;
}

std::vector<std::string> condition_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, c] : table()) ids.push_back(id);
  return ids;
}

bool sufficient_condition(const std::string& cond_id, i64 a, i64 b) {
  const Condition& c = condition_for(cond_id);
  if (mod(a - b, 2) != 0) throw ContractViolation("sufficient_condition: a' and b' must have the same parity");
  if (a < 1 || static_cast<i128>(c.A) * a - static_cast<i128>(b) * b <= 0)
    throw ContractViolation("sufficient_condition: need a' >= 1 and A a' - b'^2 > 0");
  return c.eval(a, b);
}

}  // namespace pentsum
