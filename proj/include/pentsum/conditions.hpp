// Per-tuple sufficient conditions for [A, b', a'] to be represented by the
// genus of L_a, and their evaluation on residues.

#pragma once

#include <string>
#include <vector>

#include "pentsum/intmath.hpp"

namespace pentsum {

/// Three-valued result for evaluation on residues.
enum class Tri { False, True, Unknown };

struct ConditionAtom {
  enum class Kind {
    OddPair,      // a' = b' = 1 (mod 2)
    ACong,        // a' = r (mod m)
    BNonzero,     // b' != 0 (mod m)
    FormCong,     // k a' - b'^2 = r (mod m)
    FormNotCong,  // k a' - b'^2 != r (mod m)
    Excluded,     // k a' - b'^2 != p^(2c) (m d + r), c >= 0 (c = 0 only unless even_powers)
    Implication,  // b' = br (mod bm)  implies  a' = r (mod m)
  };
  Kind kind;
  i64 k = 0, m = 1, r = 0;
  i64 p = 0;
  bool even_powers = true;
  i64 bm = 1, br = 0;

  /// Residue modulus needed to decide the atom (a prime power for Excluded).
  i64 modulus() const;
  bool eval(i64 a, i64 b) const;
  /// a and b are known modulo P, a multiple of modulus().
  Tri eval_mod(i64 a, i64 b, i64 P) const;
  std::string str() const;
};

/// Conjunction of atoms, keyed by the tuple it belongs to, e.g. "(1,2,4,5)".
struct Condition {
  std::string id;
  i64 A = 0;
  std::vector<ConditionAtom> atoms;

  i64 modulus() const;
  bool eval(i64 a, i64 b) const;
  Tri eval_mod(i64 a, i64 b, i64 P) const;
  std::string str() const;
};

/// The condition for a tuple of Tables 1-2; throws NotFound for unknown ids.
const Condition& condition_for(const std::string& cond_id);
std::vector<std::string> condition_ids();

/// Evaluates the condition exactly. Requires a' = b' (mod 2) and A a' - b'^2 > 0.
bool sufficient_condition(const std::string& cond_id, i64 a, i64 b);

}  // namespace pentsum
