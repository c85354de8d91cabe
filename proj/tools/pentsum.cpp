// pentsum: reproduce the tables and checks of the pentagonal-sum certificates.
//
// Exit codes: 0 pass, 1 mismatch, 2 usage, 3 resource.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "pentsum/certify.hpp"
#include "pentsum/errors.hpp"
#include "pentsum/escalate.hpp"
#include "pentsum/genusdata.hpp"
#include "pentsum/goodsets.hpp"

using namespace pentsum;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kUsage = 2, kResource = 3 };

struct RunConfig {
  int threads = std::max(1u, std::thread::hardware_concurrency());
  std::string cache_dir;
  std::vector<std::string> limit_args;
  std::map<CoefficientVector, i64> limits;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::string data_file;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<i64>& v, const char* sep = ",") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::string set_str(const std::vector<i64>& v) { return "{" + join(v) + "}"; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

CoefficientVector parse_tuple(const std::string& s) {
  try {
    return CoefficientVector::parse(s);
  } catch (const std::exception& e) {
    throw UsageError("bad tuple '" + s + "': " + e.what());
  }
}

void parse_limits(RunConfig& cfg) {
  for (const auto& arg : cfg.limit_args) {
    auto eq = arg.rfind('=');
    if (eq == std::string::npos) throw UsageError("--limit expects <tuple>=<N>, got '" + arg + "'");
    i64 n = 0;
    try {
      n = std::stoll(arg.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad limit in '" + arg + "'");
    }
    if (n < 1) throw UsageError("limit must be positive in '" + arg + "'");
    cfg.limits[parse_tuple(arg.substr(0, eq))] = n;
  }
}

const std::vector<Certificate>& dataset(const RunConfig& cfg) {
  static std::vector<Certificate> custom;
  if (cfg.data_file.empty()) return certificates();
  if (custom.empty()) custom = load_certificates(cfg.data_file);
  return custom;
}

// Tables 1-2 --------------------------------------------------------------

struct Table12Row {
  const Certificate* cert;
  i64 limit = 0;
  bool scaled = false;
  std::vector<i64> computed, expected;
  bool ok() const { return computed == expected; }
};

int cmd_table12(const RunConfig& cfg) {
  const auto& certs = dataset(cfg);
  std::vector<Table12Row> rows(certs.size());
  for (size_t i = 0; i < certs.size(); ++i) {
    const Certificate& c = certs[i];
    Table12Row& r = rows[i];
    r.cert = &c;
    r.limit = c.E_limit ? c.E_limit : c.N_a;
    if (auto it = cfg.limits.find(c.a); it != cfg.limits.end()) {
      if (it->second > r.limit)
        throw UsageError("--limit for " + c.a.str() + " exceeds its bound " + std::to_string(r.limit));
      r.scaled = it->second < r.limit;
      r.limit = it->second;
    }
    for (i64 e : c.E_expected)
      if (e <= r.limit) r.expected.push_back(e);
  }
  for (const auto& [a, n] : cfg.limits) {
    bool known = false;
    for (const auto& c : certs) known |= c.a == a;
    if (!known) throw UsageError("--limit names " + a.str() + ", which is not a table row");
  }

  // Largest rows first so the long sieve overlaps the short ones.
  std::vector<size_t> order(rows.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return rows[x].limit > rows[y].limit; });
  std::atomic<size_t> next{0}, done{0};
  auto work = [&] {
    for (size_t k; (k = next++) < order.size();) {
      Table12Row& r = rows[order[k]];
      r.computed = exceptional_set(r.cert->a, r.limit);
      std::cerr << "\r[table12] " << ++done << "/" << rows.size() << std::flush;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min<int>(cfg.threads, static_cast<int>(rows.size())); ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  std::cerr << "\n";

  bool all = true;
  auto status = [](const Table12Row& r) {
    return std::string(r.ok() ? "PASS" : "FAIL") + (r.scaled ? "-scaled" : "");
  };
  if (cfg.format == "csv") std::cout << "tuple,type,N_a,s_a,B_a,E_set,status\n";
  json out = json::array();
  for (const auto& r : rows) {
    const Certificate& c = *r.cert;
    all &= r.ok();
    if (cfg.format == "csv") {
      std::cout << csv_quote(c.a.str()) << "," << c.type_class << "," << c.N_a << "," << c.s_a << "," << c.B_a << ","
                << csv_quote(set_str(r.computed)) << "," << status(r) << "\n";
    } else if (cfg.format == "json") {
      out.push_back({{"tuple", c.a.coeffs()}, {"type", c.type_class}, {"N_a", c.N_a}, {"s_a", c.s_a},
                     {"B_a", c.B_a}, {"E_set", r.computed}, {"E_expected", r.expected}, {"limit", r.limit},
                     {"scaled", r.scaled}, {"status", status(r)}});
    } else {
      std::cout << std::left << std::setw(12) << c.a.str() << " type " << c.type_class << "  N_a " << std::setw(9)
                << c.N_a << " s " << std::setw(3) << c.s_a << " B " << std::setw(2) << c.B_a << " E "
                << std::setw(28) << set_str(r.computed) << " " << (r.ok() ? "PASS" : "FAIL");
      if (r.scaled) std::cout << " (scaled to " << r.limit << ")";
      if (!r.ok()) std::cout << "  expected " << set_str(r.expected);
      std::cout << "\n";
    }
  }
  if (cfg.format == "json") std::cout << out.dump(2) << "\n";
  if (cfg.format == "text") std::cout << (all ? "all rows PASS" : "MISMATCH") << "\n";
  return all ? kPass : kMismatch;
}

// Table 3 and the tree ----------------------------------------------------

int cmd_table3(const RunConfig& cfg) {
  std::cerr << "[table3] building escalation tree\n";
  const EscalationTree tree = build_tree(dataset_oracle(), 10, cfg.threads);
  const auto rows = table3_rows(tree);
  const auto& published = published_table3();
  bool all = tree.fully_decided() && rows.size() == published.size();

  json out = json::array();
  if (cfg.format == "csv") std::cout << "block,prefix,condition,published,status\n";
  size_t prev_len = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const std::string pre = r.prefix_str(), cond = r.condition_str();
    const std::string pub = i < published.size() && published[i].first == pre ? published[i].second : "";
    const bool ok = cond == pub;
    all &= ok;
    const size_t len = r.prefix.size() + 1;
    if (cfg.format == "csv") {
      std::cout << len << "," << csv_quote(pre) << "," << csv_quote(cond) << "," << csv_quote(pub) << ","
                << (ok ? "PASS" : "FAIL") << "\n";
    } else if (cfg.format == "json") {
      out.push_back({{"block", len}, {"prefix", pre}, {"condition", cond}, {"published", pub}, {"values", r.values},
                     {"status", ok ? "PASS" : "FAIL"}});
    } else {
      if (len != prev_len) std::cout << (len == 4 ? "quaternary" : len == 5 ? "quinary" : "senary") << "\n";
      std::cout << "  " << std::left << std::setw(18) << pre << std::setw(24) << cond << (ok ? "PASS" : "FAIL");
      if (!ok) std::cout << "  published " << pub;
      std::cout << "\n";
    }
    prev_len = len;
  }
  const auto leaves = escalation_leaves(tree);
  json counts = json::object();
  for (size_t d = 4; d < tree.candidates.size(); ++d)
    counts[std::to_string(d)] = {{"candidates", tree.candidates[d]}, {"universal", tree.universal[d]}};
  if (cfg.format == "json") {
    std::cout << json{{"rows", out}, {"counts", counts}, {"leaves", leaves.size()}, {"ok", all}}.dump(2) << "\n";
  } else if (cfg.format == "text") {
    for (size_t d = 4; d < tree.candidates.size(); ++d)
      std::cout << "length " << d << ": " << tree.candidates[d] << " candidates, " << tree.universal[d]
                << " universal\n";
    std::cout << (all ? "all rows PASS" : "MISMATCH") << "\n";
  }
  return all ? kPass : kMismatch;
}

int cmd_tree(const RunConfig& cfg, int depth) {
  const EscalationTree tree = build_tree(dataset_oracle(), depth, cfg.threads);
  if (cfg.format == "csv") {
    tree.write_csv(std::cout);
  } else if (cfg.format == "json") {
    std::cout << tree.to_json().dump(2) << "\n";
  } else {
    tree.for_each([](const EscalationNode& n, const EscalationNode*) {
      std::cout << std::string(2 * n.coeffs.size(), ' ') << n.tuple() << " " << to_string(n.status);
      if (n.truant) std::cout << " t=" << *n.truant;
      for (const auto& note : n.notes) std::cout << " [" << note << "]";
      std::cout << "\n";
    });
  }
  return tree.fully_decided() || depth < 6 ? kPass : kMismatch;
}

// Critical set ------------------------------------------------------------

int cmd_verify63(const RunConfig& cfg, const std::string& tuple) {
  if (!tuple.empty()) {
    const CoefficientVector a = parse_tuple(tuple);
    const auto table = build_table(a, 63);
    std::vector<i64> missing;
    for (i64 n : critical_integers())
      if (!table.test(n)) missing.push_back(n);
    const bool universal = missing.empty();
    if (cfg.format == "json")
      std::cout << json{{"tuple", a.coeffs()}, {"universal", universal}, {"missing", missing}}.dump(2) << "\n";
    else if (cfg.format == "csv")
      std::cout << "tuple,universal,missing\n" << csv_quote(a.str()) << "," << universal << ","
                << csv_quote(set_str(missing)) << "\n";
    else
      std::cout << a.str() << (universal ? " is universal" : " is not universal, misses " + set_str(missing)) << "\n";
    return kPass;
  }
  const EscalationTree tree = build_tree(dataset_oracle(), 10, cfg.threads);
  const auto cs = critical_set(tree);
  const std::vector<i64> got(cs.begin(), cs.end());
  const bool ok = tree.fully_decided() && got == critical_integers();
  if (cfg.format == "json")
    std::cout << json{{"critical_set", got}, {"max", got.empty() ? 0 : got.back()}, {"ok", ok}}.dump(2) << "\n";
  else if (cfg.format == "csv")
    std::cout << "critical_set,max,status\n" << csv_quote(set_str(got)) << "," << (got.empty() ? 0 : got.back())
              << "," << (ok ? "PASS" : "FAIL") << "\n";
  else
    std::cout << "critical set " << set_str(got) << " (" << got.size() << " integers, max "
              << (got.empty() ? 0 : got.back()) << ") " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kPass : kMismatch;
}

// Certificates ------------------------------------------------------------

int cmd_certify(const RunConfig& cfg, const std::vector<std::string>& tuples, bool all_rows) {
  std::vector<const Certificate*> todo;
  const auto& certs = dataset(cfg);
  if (all_rows) {
    for (const auto& c : certs) todo.push_back(&c);
  } else {
    if (tuples.empty()) throw UsageError("certify needs a tuple or --all");
    for (const auto& t : tuples) {
      const auto a = parse_tuple(t);
      const Certificate* found = nullptr;
      for (const auto& c : certs)
        if (c.a == a) found = &c;
      if (!found) throw UsageError(a.str() + " is not a table row");
      todo.push_back(found);
    }
  }
  bool all = true;
  json out = json::array();
  if (cfg.format == "csv") std::cout << "tuple,step,ok,detail\n";
  for (const Certificate* c : todo) {
    std::cerr << "[certify] " << c->a.str() << "\n";
    const auto rep = verify_certificate(*c);
    all &= rep.ok;
    if (cfg.format == "json") {
      out.push_back(rep.to_json());
    } else if (cfg.format == "csv") {
      for (const auto& s : rep.steps)
        std::cout << csv_quote(rep.a) << "," << csv_quote(s.name) << "," << s.ok << "," << csv_quote(s.detail) << "\n";
    } else {
      std::cout << rep.a << ": " << (rep.ok ? "PASS" : "FAIL") << (rep.restricted ? " (sieve-only)" : "") << "\n";
      for (const auto& s : rep.steps) std::cout << "  " << (s.ok ? "ok  " : "FAIL") << " " << s.name << ": " << s.detail << "\n";
    }
  }
  if (cfg.format == "json") std::cout << out.dump(2) << "\n";
  return all ? kPass : kMismatch;
}

int cmd_goodset(const RunConfig& cfg, const std::string& tuple, i64 s) {
  const CoefficientVector a = parse_tuple(tuple);
  if (s < 1) throw UsageError("modulus must be positive");
  const Certificate* cert = nullptr;
  for (const auto& c : dataset(cfg))
    if (c.a == a) cert = &c;
  if (!cert) throw UsageError(a.str() + " is not a table row");
  const auto rep = compute_S(a, s, cert->genus);
  if (rep.budget_limited) {
    std::cerr << "search budget exhausted; the set is a lower bound\n";
    return kResource;
  }
  const auto img = residue_image(rep.set);
  std::vector<i64> residues(img.residues.begin(), img.residues.end());
  if (cfg.format == "json") {
    json per = json::array();
    for (const auto& l : rep.lattices) per.push_back({{"genus_index", l.genus_index}, {"set", l.set.to_json()}});
    std::cout << json{{"tuple", a.coeffs()}, {"s", s}, {"set", rep.set.to_json()}, {"per_lattice", per},
                      {"residues", residues}, {"residue_modulus", img.modulus}, {"complete", img.complete()}}
                     .dump(2)
              << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "alpha,beta\n";
    for (const auto& [x, y] : rep.set.pairs()) std::cout << x << "," << y << "\n";
  } else {
    std::cout << "S_" << s << " for " << a.str() << ": {";
    bool first = true;
    for (const auto& [x, y] : rep.set.pairs()) {
      std::cout << (first ? "" : ",") << "(" << x << "," << y << ")";
      first = false;
    }
    std::cout << "}\nN(S) mod " << img.modulus << ": " << set_str(residues) << (img.complete() ? " complete" : "")
              << "\n";
  }
  return kPass;
}

// Witnesses ---------------------------------------------------------------

struct Witness {
  i64 N;
  std::vector<i64> x;
  std::string method;
  bool ok = false;
};

Witness witness_for(const CoefficientVector& a, i64 N, const Certificate* cert) {
  Witness w{N, {}, "", false};
  if (cert && !cert->sieve_only())
    for (const auto& br : cert->branches)
      if (br.covers(N)) {
        w.x = constructive_represent(a, N, *cert);
        w.method = "certificate";
        break;
      }
  if (w.method.empty()) {
    if (auto x = find_representation(a, N)) w.x = *x;
    w.method = "search";
  }
  w.ok = !w.x.empty() && pentagonal_sum(a, w.x) == N;
  for (i64 v : w.x) w.ok &= v >= 0;
  // Cross-check against the sieve where it is cheap.
  if (N <= 20'000'000 && build_table(a, N).test(N) != w.ok) w.ok = false;
  return w;
}

int cmd_witness(const RunConfig& cfg, const std::string& tuple, std::vector<i64> Ns, int samples) {
  const CoefficientVector a = parse_tuple(tuple);
  const Certificate* cert = nullptr;
  for (const auto& c : dataset(cfg))
    if (c.a == a) cert = &c;
  if (Ns.empty()) {
    if (!cert || cert->sieve_only()) throw UsageError("sampling needs a certified tuple; give N explicitly");
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<i64> d(cert->N_a, 10 * cert->N_a);
    while (static_cast<int>(Ns.size()) < samples) {
      const i64 N = d(rng);
      for (const auto& br : cert->branches)
        if (br.covers(N)) {
          Ns.push_back(N);
          break;
        }
    }
  }
  bool all = true;
  json out = json::array();
  if (cfg.format == "csv") std::cout << "tuple,N,x,method,status\n";
  for (i64 N : Ns) {
    if (N < 0) throw UsageError("N must be non-negative");
    Witness w;
    try {
      w = witness_for(a, N, cert);
    } catch (const ResourceError&) {
      throw;
    } catch (const std::exception& e) {
      w = {N, {}, std::string("certificate: ") + e.what(), false};
    }
    all &= w.ok;
    if (cfg.format == "json")
      out.push_back({{"tuple", a.coeffs()}, {"N", N}, {"x", w.x}, {"method", w.method}, {"ok", w.ok}});
    else if (cfg.format == "csv")
      std::cout << csv_quote(a.str()) << "," << N << "," << csv_quote(join(w.x, " ")) << "," << csv_quote(w.method)
                << "," << (w.ok ? "PASS" : "FAIL") << "\n";
    else
      std::cout << a.str() << " N=" << N << " x=(" << join(w.x) << ") via " << w.method << " "
                << (w.ok ? "PASS" : "FAIL") << "\n";
  }
  if (cfg.format == "json") std::cout << out.dump(2) << "\n";
  return all ? kPass : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pentagonal-sum universality: tables, certificates and witnesses"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cfg.cache_dir, "Directory for computed good sets");
  app.add_option("--limit", cfg.limit_args, "Lower the sieve bound of a row, e.g. 1,1,2,5=1000 (marked scaled)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--seed", cfg.seed, "Seed for sampled N");
  app.add_option("--data", cfg.data_file, "Certificate dataset to use instead of the built-in one")
      ->check(CLI::ExistingFile);

  auto* t12 = app.add_subcommand("table12", "Recompute every exceptional set and compare");
  auto* t3 = app.add_subcommand("table3", "Escalate and compare the classification of proper sums");
  int depth = 6;
  auto* tree = app.add_subcommand("tree", "Export the escalation tree");
  tree->add_option("--depth", depth, "Maximal tuple length")->check(CLI::Range(0, 10));
  std::string v63_tuple;
  auto* v63 = app.add_subcommand("verify63", "Critical set, or the criterion for one tuple");
  v63->add_option("tuple", v63_tuple, "Tuple to test, e.g. 1,1,2,4");
  std::vector<std::string> cert_tuples;
  bool cert_all = false;
  auto* cert = app.add_subcommand("certify", "Verify certificates");
  cert->add_option("tuple", cert_tuples, "Table rows");
  cert->add_flag("--all", cert_all, "Every row");
  std::string gs_tuple;
  i64 gs_s = 0;
  auto* gs = app.add_subcommand("goodset", "Compute the good set S_s");
  gs->add_option("tuple", gs_tuple)->required();
  gs->add_option("s", gs_s)->required();
  std::string w_tuple;
  std::vector<i64> w_N;
  int w_samples = 10;
  auto* wit = app.add_subcommand("witness", "Representations of N, or of sampled N >= N_a");
  wit->add_option("tuple", w_tuple)->required();
  wit->add_option("N", w_N);
  wit->add_option("--samples", w_samples, "Sample size when no N is given")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  try {
    parse_limits(cfg);
    if (!cfg.cache_dir.empty()) set_goodset_cache_dir(std::filesystem::path(cfg.cache_dir));
    if (*t12) return cmd_table12(cfg);
    if (*t3) return cmd_table3(cfg);
    if (*tree) return cmd_tree(cfg, depth);
    if (*v63) return cmd_verify63(cfg, v63_tuple);
    if (*cert) return cmd_certify(cfg, cert_tuples, cert_all);
    if (*gs) return cmd_goodset(cfg, gs_tuple, gs_s);
    if (*wit) return cmd_witness(cfg, w_tuple, w_N, w_samples);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const NotFound& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource: " << e.what() << "\n";
    return kResource;
  } catch (const std::bad_alloc&) {
    std::cerr << "resource: out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  }
  return kUsage;
}
