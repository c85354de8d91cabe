// Per-tuple certificate data for the 35 quaternary tuples of Tables 1-2.
//
// The dataset is data/certificates.json, compiled into the library. Schema of
// one record:
//   a            coefficient tuple
//   type         1..4
//   N_a, s, B    bound, modulus and window multiplier
//   E            exceptional set below N_a
//   cond_id      key of the sufficient condition (see conditions.hpp)
//   genus        Gram matrices of the classes in the genus, genus[0] = <a>
//   genus_source "paper" or "computed"
//   branches     optional; residue classes of N argued separately (below)
//   E_limit      optional; E is checked only up to this bound
//   conjectural  optional; E beyond E_limit is conjectural
//   restriction  optional; "sieve-only" when no certificate is claimed
// A branch is {N_mod, N_residues, s, window, N_min, pairs, b_nonzero_mod}:
// for N >= N_min with N mod N_mod in N_residues, every `window` consecutive
// b contain an admissible one. `pairs` is "parity" (alpha = beta mod 2) or
// "even" (alpha = beta = 0 mod 2); b_nonzero_mod lists primes p with b != 0
// (mod p) imposed on b.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentsum/lattice.hpp"

namespace pentsum {

struct CertBranch {
  i64 N_mod = 1;
  std::vector<i64> N_residues{0};
  i64 s = 1;
  i64 window = 3;
  i64 N_min = 0;
  std::string pairs = "parity";
  std::vector<i64> b_nonzero_mod;

  bool covers(i64 N) const;
  bool pair_allowed(i64 alpha, i64 beta) const;
  nlohmann::json to_json() const;
};

struct Certificate {
  CoefficientVector a{1};
  int type_class = 0;
  i64 N_a = 0, s_a = 1, B_a = 1;
  std::string cond_id;
  std::vector<ZLattice> genus;
  std::string genus_source;
  std::vector<i64> E_expected;
  i64 E_limit = 0;  // 0: N_a
  bool conjectural = false;
  std::string restriction;
  std::vector<CertBranch> branches;  // never empty after parsing

  i64 A() const { return a.sum(); }
  bool sieve_only() const { return restriction == "sieve-only"; }
  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
};

/// The embedded dataset.
const std::vector<Certificate>& certificates();
std::vector<Certificate> load_certificates(const std::filesystem::path& file);
std::vector<Certificate> parse_certificates(const std::string& text);

/// Throws NotFound when a is not one of the 35 tuples.
const Certificate& load(const CoefficientVector& a);

/// FNV-1a digest over the tabulated fields (a, type, N_a, s, B, E, cond_id).
std::string dataset_checksum(const std::vector<Certificate>& certs);

struct ValidationRow {
  std::string a;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};
struct ValidationReport {
  std::vector<ValidationRow> rows;
  bool ok() const;
};

/// Necessary consistency checks: genus shape, determinants, discriminant
/// forms, pairwise non-isometry, class number against the type, quoted orbit counts and,
/// when check_E is set, E reproduced by the sieve.
ValidationReport validate_all(const std::vector<Certificate>& certs = certificates(), bool check_E = true);

}  // namespace pentsum
