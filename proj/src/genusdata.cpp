#include "pentsum/genusdata.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pentsum {

extern const char* const kCertificateData;

namespace {

constexpr size_t kUnquoted = SIZE_MAX;

// Orbit counts |R(A, K)/O(K)| quoted in the worked cases, per genus index.
const std::map<std::string, std::vector<size_t>>& quoted_orbits() {
  static const std::map<std::string, std::vector<size_t>> q{
      {"(1,1,1,4)", {1}},
      {"(1,2,2,3)", {3}},
      {"(1,1,2,5)", {4, 3}},
      {"(1,2,4,7)", {1, 2, 0, kUnquoted, 3}},
  };
  return q;
}

}  // namespace

bool CertBranch::covers(i64 N) const {
  return N >= N_min && std::find(N_residues.begin(), N_residues.end(), mod(N, N_mod)) != N_residues.end();
}

bool CertBranch::pair_allowed(i64 alpha, i64 beta) const {
  if (pairs == "even") return mod(alpha, 2) == 0 && mod(beta, 2) == 0;
  return mod(alpha - beta, 2) == 0;
}

nlohmann::json CertBranch::to_json() const {
  return {{"N_mod", N_mod},   {"N_residues", N_residues}, {"s", s},
          {"window", window}, {"N_min", N_min},           {"pairs", pairs},
          {"b_nonzero_mod", b_nonzero_mod}};
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json g = nlohmann::json::array();
  for (const auto& K : genus) g.push_back(K.to_json()["gram"]);
  nlohmann::json br = nlohmann::json::array();
  for (const auto& b : branches) br.push_back(b.to_json());
  nlohmann::json j{{"a", a.coeffs()},  {"type", type_class},       {"N_a", N_a},    {"s", s_a},
                   {"B", B_a},         {"E", E_expected},          {"cond_id", cond_id},
                   {"genus", g},       {"genus_source", genus_source}, {"branches", br}};
  if (E_limit) j["E_limit"] = E_limit;
  if (conjectural) j["conjectural"] = true;
  if (!restriction.empty()) j["restriction"] = restriction;
  return j;
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  Certificate c;
  c.a = CoefficientVector(j.at("a").get<std::vector<i64>>());
  c.type_class = j.at("type").get<int>();
  c.N_a = j.at("N_a").get<i64>();
  c.s_a = j.at("s").get<i64>();
  c.B_a = j.at("B").get<i64>();
  c.E_expected = j.at("E").get<std::vector<i64>>();
  c.cond_id = j.at("cond_id").get<std::string>();
  for (const auto& g : j.at("genus")) c.genus.push_back(ZLattice::from_json(nlohmann::json{{"gram", g}}));
  c.genus_source = j.value("genus_source", "paper");
  c.E_limit = j.value("E_limit", i64{0});
  c.conjectural = j.value("conjectural", false);
  c.restriction = j.value("restriction", "");
  if (c.type_class < 1 || c.type_class > 4) throw ContractViolation("certificate type must be 1..4");
  if (c.N_a < 1 || c.s_a < 1 || c.B_a < 1) throw ContractViolation("certificate N_a, s, B must be positive");
  if (!std::is_sorted(c.E_expected.begin(), c.E_expected.end()))
    throw ContractViolation("certificate E must be sorted");
  if (j.contains("branches")) {
    for (const auto& b : j.at("branches")) {
      CertBranch br;
      br.N_mod = b.at("N_mod").get<i64>();
      br.N_residues = b.at("N_residues").get<std::vector<i64>>();
      br.s = b.at("s").get<i64>();
      br.window = b.at("window").get<i64>();
      br.N_min = b.at("N_min").get<i64>();
      br.pairs = b.value("pairs", "parity");
      br.b_nonzero_mod = b.value("b_nonzero_mod", std::vector<i64>{});
      if (br.pairs != "parity" && br.pairs != "even") throw ContractViolation("unknown pair filter " + br.pairs);
      c.branches.push_back(std::move(br));
    }
  } else {
    CertBranch br;
    br.s = c.s_a;
    br.window = 3 * c.s_a * c.B_a;
    br.N_min = c.N_a;
    c.branches.push_back(br);
  }
  return c;
}

std::vector<Certificate> parse_certificates(const std::string& text) {
  std::vector<Certificate> out;
  try {
    for (const auto& r : nlohmann::json::parse(text)) out.push_back(Certificate::from_json(r));
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("malformed certificate data: ") + e.what());
  }
  return out;
}

std::vector<Certificate> load_certificates(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw NotFound("cannot open " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificates(ss.str());
}

const std::vector<Certificate>& certificates() {
  static const std::vector<Certificate> certs = parse_certificates(kCertificateData);
  return certs;
}

const Certificate& load(const CoefficientVector& a) {
  for (const auto& c : certificates())
    if (c.a == a) return c;
  throw NotFound("no certificate for " + a.str());
}

std::string dataset_checksum(const std::vector<Certificate>& certs) {
  std::ostringstream os;
  for (const auto& c : certs) {
    os << c.a.str() << '|' << c.type_class << '|' << c.N_a << '|' << c.s_a << '|' << c.B_a << '|';
    for (i64 e : c.E_expected) os << e << ',';
    os << '|' << c.cond_id << '\n';
  }
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

bool ValidationReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ValidationRow& r) { return r.ok(); });
}

ValidationReport validate_all(const std::vector<Certificate>& certs, bool check_E) {
  ValidationReport rep;
  for (const auto& c : certs) {
    ValidationRow row{c.a.str(), {}};
    auto fail = [&](std::string m) { row.problems.push_back(std::move(m)); };
    if (c.a.size() != 4) fail("tuple must have four entries");
    if (c.genus.empty() || !(c.genus[0] == ZLattice::diagonal(c.a.coeffs())))
      fail("genus[0] is not the diagonal lattice");
    if (c.cond_id != c.a.str()) fail("cond_id does not match the tuple");
    const i64 det = c.genus.empty() ? 0 : c.genus[0].det();
    for (size_t i = 0; i < c.genus.size(); ++i) {
      if (c.genus[i].rank() != 4) fail("genus member " + std::to_string(i) + " has rank != 4");
      if (c.genus[i].det() != det) fail("genus member " + std::to_string(i) + " has a different determinant");
      else if (i > 0 && c.genus[i].rank() == 4 && !same_genus(c.genus[0], c.genus[i]))
        fail("genus member " + std::to_string(i) + " is not in the genus of genus[0]");
      for (size_t j = 0; j < i; ++j)
        if (c.genus[i].rank() == c.genus[j].rank() && is_isometric(c.genus[j], c.genus[i]))
          fail("genus members " + std::to_string(j) + " and " + std::to_string(i) + " are isometric");
    }
    const bool single_class = c.genus.size() == 1;
    if ((c.type_class <= 2) != single_class) fail("class number does not match type " + std::to_string(c.type_class));
    if (!c.genus.empty() && c.type_class <= 2) {
      const size_t n = orbits(c.genus[0], c.A()).size();
      if ((c.type_class == 1) != (n == 1)) fail("orbit count " + std::to_string(n) + " does not match type");
    }
    auto q = quoted_orbits().find(c.a.str());
    if (q != quoted_orbits().end()) {
      if (q->second.size() != c.genus.size()) fail("quoted orbit data has a different class number");
      for (size_t i = 0; i < std::min(q->second.size(), c.genus.size()); ++i) {
        if (q->second[i] == kUnquoted) continue;
        const size_t n = orbits(c.genus[i], c.A()).size();
        if (n != q->second[i])
          fail("genus member " + std::to_string(i) + " has " + std::to_string(n) + " orbits, expected " +
               std::to_string(q->second[i]));
      }
    }
    if (check_E) {
      const i64 limit = c.E_limit ? c.E_limit : c.N_a;
      if (exceptional_set(c.a, limit) != c.E_expected) fail("sieve does not reproduce E up to " + std::to_string(limit));
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace pentsum
