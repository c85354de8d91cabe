// Certificate verification and constructive representations.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentsum/conditions.hpp"
#include "pentsum/genusdata.hpp"
#include "pentsum/goodsets.hpp"

namespace pentsum {

/// Every `window` consecutive b contain an admissible one, for each N class
/// covered by the branch. Admissible: b = N (mod 3), (a, b) mod s in S and
/// allowed by the branch, b != 0 modulo the branch primes, and the condition
/// decided true on residues, where a = (2N + b)/3. Classes are taken modulo
/// 3P with P = lcm(s, condition modulus, branch moduli).
struct WindowCheck {
  bool ok = false;
  i64 period = 0;   // 3P
  i64 max_gap = 0;  // largest gap between admissible b over all N classes
  std::string failure;
};
WindowCheck window_check(const GoodSet& S, const Condition& cond, const CertBranch& branch);

/// For each N class: some pair of S matching N whose progression
/// b0 = r (mod 3s), r = 3 alpha - 2N, has an admissible b among
/// b0 + 3sk, 0 <= k < B, for every b0. Pairs are tried in lexicographic
/// order; `fallbacks` counts classes where the least pair did not work.
struct ProgressionCheck {
  bool ok = false;
  i64 period = 0;
  i64 fallbacks = 0;
  std::string failure;
};
ProgressionCheck progression_check(const GoodSet& S, const Condition& cond, const CertBranch& branch, i64 B);

/// Binaries [A, b', a'] with a' <= a_max and b' > 0 that some branch would
/// use (a' = b' mod 2, A a' - b'^2 > 0, (a', b') mod s an allowed good pair,
/// b' != 0 modulo the branch primes), satisfy the tuple's sufficient
/// condition, and are represented by no class of the genus. As (a', b').
std::vector<std::pair<i64, i64>> condition_counterexamples(const Certificate& cert, i64 a_max);

struct VerifyOptions {
  std::uint64_t budget_per_coset = 2'000'000;
  bool check_minimal = true;
  i64 condition_bound = 240;  // a' range of the condition check, 0 skips it
};

struct StepResult {
  std::string name;
  bool ok;
  std::string detail;
};

struct CertificateReport {
  std::string a;
  bool ok = false;
  bool restricted = false;  // no certificate claimed (sieve-only rows)
  std::vector<StepResult> steps;
  std::string failure() const;
  nlohmann::json to_json() const;
};

/// Checks the sufficient condition against the genus on small binaries,
/// then per branch (i) the good sets and their residue images, (ii) the
/// interval width at the bound and its minimality, (iii) the window property.
CertificateReport verify_certificate(const Certificate& cert, const VerifyOptions& opts = {});

/// The certified good set of a branch, memoised per process and optionally
/// persisted in the given directory.
const GoodSet& branch_good_set(const Certificate& cert, size_t branch, std::uint64_t budget_per_coset = 2'000'000);
void set_goodset_cache_dir(std::optional<std::filesystem::path> dir);

/// A witness x >= 0 with sum a_i P5(x_i) = N obtained through the certificate.
/// Requires a certificate branch covering N.
std::vector<i64> constructive_represent(const CoefficientVector& a, i64 N, const Certificate& cert);

}  // namespace pentsum
