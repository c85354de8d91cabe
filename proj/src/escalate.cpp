#include "pentsum/escalate.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <thread>

#include "pentsum/errors.hpp"
#include "pentsum/genusdata.hpp"

namespace pentsum {

namespace {

std::string tuple_str(const std::vector<i64>& a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
  return s + ")";
}

const Certificate* find_certificate(const std::vector<i64>& prefix) {
  for (const auto& c : certificates())
    if (c.a.coeffs() == prefix) return &c;
  return nullptr;
}

bool is_sub_multiset(const std::vector<i64>& small, const std::vector<i64>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Verdict for a (length >= 4) from the dataset row q, a sub-multiset of a.
// Undecided when q leaves residue classes open and a cannot close them.
Verdict verdict_from_row(const std::vector<i64>& a, const Certificate& c, bool prefix) {
  Verdict v;
  std::vector<i64> missed;
  if (!c.E_expected.empty()) {
    const RepresentabilityTable t = build_table(CoefficientVector(a), c.E_expected.back());
    for (i64 n : c.E_expected)
      if (!t.test(n)) missed.push_back(n);
  }
  if (!prefix) v.notes.push_back("via the sub-sum " + c.a.str());
  if (c.sieve_only()) v.notes.push_back("E" + c.a.str() + " taken from the dataset, no certificate");

  // Residue classes of N that the certificate leaves open above E_limit.
  std::vector<i64> bad;
  i64 M = 1;
  if (c.E_limit) {
    M = c.branches.front().N_mod;
    for (i64 r = 0; r < M; ++r) {
      bool covered = false;
      for (const auto& br : c.branches)
        covered |= br.N_mod == M && std::count(br.N_residues.begin(), br.N_residues.end(), r) > 0;
      if (!covered) bad.push_back(r);
    }
    v.notes.push_back("E" + c.a.str() + " up to " + std::to_string(c.E_limit) + " from the sieve");
  }

  if (!missed.empty()) {
    v.status = NodeStatus::NonUniversal;
    v.truant = missed.front();
    if (!bad.empty() && a.size() == 4) v.notes.push_back("E beyond " + std::to_string(c.E_limit) + " is conjectural");
    return v;
  }
  if (bad.empty()) {
    v.status = NodeStatus::Universal;
    return v;
  }
  // N - a_j P5(x) must leave the bad classes and stay above the bound, for
  // one coefficient a_j outside q.
  std::vector<i64> extra;
  std::set_difference(a.begin(), a.end(), c.a.coeffs().begin(), c.a.coeffs().end(), std::back_inserter(extra));
  i64 n_min = 0;
  for (const auto& br : c.branches) n_min = std::max(n_min, br.N_min);
  for (i64 aj : extra) {
    if (c.E_limit - aj * pentagonal(4) < n_min) continue;
    bool ok = true;
    for (i64 r : bad) {
      bool escapes = false;
      for (i64 x = 0; x <= 4 && !escapes; ++x)
        escapes = !std::binary_search(bad.begin(), bad.end(), mod(r - aj * pentagonal(x), M));
      ok &= escapes;
    }
    if (ok) {
      v.status = NodeStatus::Universal;
      v.notes.push_back("N = " + std::to_string(aj) + " P5(x) + m with m outside the open classes mod " +
                        std::to_string(M));
      return v;
    }
  }
  v.notes.push_back("open residue classes mod " + std::to_string(M) + " not eliminated");
  return v;
}

}  // namespace

std::string to_string(NodeStatus s) {
  switch (s) {
    case NodeStatus::Universal:
      return "universal";
    case NodeStatus::NonUniversal:
      return "non-universal";
    case NodeStatus::Frontier:
      return "frontier";
    case NodeStatus::Undecided:
      return "undecided";
  }
  return "?";
}

UniversalityOracle dataset_oracle(i64 sieve_limit) {
  return [sieve_limit](const std::vector<i64>& a) {
    Verdict v;
    if (a.empty()) {
      v.status = NodeStatus::NonUniversal;
      v.truant = 1;
      return v;
    }
    if (a.size() >= 4) {
      // The prefix first, then any other quaternary sub-multiset in the dataset.
      std::vector<const Certificate*> rows;
      if (const Certificate* c = find_certificate({a.begin(), a.begin() + 4}); c && !c->sieve_only()) rows.push_back(c);
      for (const auto& c : certificates())
        if (std::find(rows.begin(), rows.end(), &c) == rows.end() && is_sub_multiset(c.a.coeffs(), a))
          rows.push_back(&c);
      std::vector<std::string> tried;
      for (const Certificate* c : rows) {
        Verdict r = verdict_from_row(a, *c, c->a.coeffs() == std::vector<i64>(a.begin(), a.begin() + 4));
        if (r.status != NodeStatus::Undecided) return r;
        tried.insert(tried.end(), r.notes.begin(), r.notes.end());
      }
      v.notes = tried;
    }
    if (auto t = truant(CoefficientVector(a), sieve_limit)) {
      v.status = NodeStatus::NonUniversal;
      v.truant = t;
      v.notes.clear();
    } else {
      v.notes.push_back("no gap up to " + std::to_string(sieve_limit));
    }
    return v;
  };
}

std::string EscalationNode::tuple() const { return tuple_str(coeffs); }

nlohmann::json EscalationNode::to_json() const {
  nlohmann::json j{{"tuple", coeffs}, {"status", to_string(status)}};
  if (truant) j["truant"] = *truant;
  if (!notes.empty()) j["notes"] = notes;
  if (!children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& c : children) j["children"].push_back(c.to_json());
  }
  return j;
}

std::vector<std::vector<i64>> children_of(const EscalationNode& node) {
  if (node.status == NodeStatus::Universal) throw ContractViolation("children_of: node " + node.tuple() + " is universal");
  if (!node.truant) throw ContractViolation("children_of: node " + node.tuple() + " has no truant");
  std::vector<std::vector<i64>> out;
  const i64 lo = node.coeffs.empty() ? 1 : node.coeffs.back();
  for (i64 x = lo; x <= *node.truant; ++x) {
    auto c = node.coeffs;
    c.push_back(x);
    out.push_back(std::move(c));
  }
  return out;
}

bool EscalationTree::fully_decided() const {
  bool ok = true;
  for_each([&](const EscalationNode& n, const EscalationNode*) {
    ok &= n.status == NodeStatus::Universal || n.status == NodeStatus::NonUniversal;
  });
  return ok;
}

void EscalationTree::for_each(const std::function<void(const EscalationNode&, const EscalationNode*)>& f) const {
  auto rec = [&](auto&& self, const EscalationNode& n, const EscalationNode* parent) -> void {
    f(n, parent);
    for (const auto& c : n.children) self(self, c, &n);
  };
  rec(rec, root, nullptr);
}

nlohmann::json EscalationTree::to_json() const {
  return {{"max_depth", max_depth}, {"candidates", candidates}, {"universal", universal}, {"root", root.to_json()}};
}

void EscalationTree::write_csv(std::ostream& os) const {
  os << "tuple,status,truant\n";
  for_each([&](const EscalationNode& n, const EscalationNode*) {
    os << '"' << n.tuple() << "\"," << to_string(n.status) << ',';
    if (n.truant) os << *n.truant;
    os << '\n';
  });
}

EscalationTree build_tree(const UniversalityOracle& oracle, int max_depth, int threads) {
  if (max_depth < 0) throw ContractViolation("build_tree: max_depth must be >= 0");
  threads = std::max(1, threads);
  EscalationTree tree;
  tree.max_depth = max_depth;
  tree.root.coeffs = {};

  auto apply = [](EscalationNode& n, Verdict v) {
    n.status = v.status;
    n.truant = v.truant;
    n.notes = std::move(v.notes);
  };
  apply(tree.root, oracle({}));

  std::vector<EscalationNode*> level{&tree.root};
  for (int depth = 0;; ++depth) {
    tree.candidates.push_back(level.size());
    tree.universal.push_back(std::count_if(level.begin(), level.end(), [](auto* n) {
      return n->status == NodeStatus::Universal;
    }));
    if (depth == max_depth) {
      for (auto* n : level)
        if (n->status == NodeStatus::NonUniversal) n->status = NodeStatus::Frontier;
      break;
    }
    std::vector<EscalationNode*> next;
    for (auto* n : level) {
      if (n->status != NodeStatus::NonUniversal) continue;
      for (auto& c : children_of(*n)) n->children.push_back(EscalationNode{std::move(c), {}, {}, {}, {}});
    }
    for (auto* n : level)
      for (auto& c : n->children) next.push_back(&c);
    if (next.empty()) break;

    std::vector<Verdict> verdicts(next.size());
    auto work = [&](size_t t) {
      for (size_t i = t; i < next.size(); i += threads) verdicts[i] = oracle(next[i]->coeffs);
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (size_t i = 0; i < next.size(); ++i) apply(*next[i], std::move(verdicts[i]));
    level = std::move(next);
  }
  return tree;
}

std::vector<std::vector<i64>> escalation_leaves(const EscalationTree& tree) {
  std::vector<std::vector<i64>> out;
  tree.for_each([&](const EscalationNode& n, const EscalationNode* parent) {
    if (n.status == NodeStatus::Universal && parent && parent->status != NodeStatus::Universal) out.push_back(n.coeffs);
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<bool> known_universal(const EscalationTree& tree, std::vector<i64> a, i64 sieve_limit) {
  std::sort(a.begin(), a.end());
  if (a.empty()) return false;
  if (truant(CoefficientVector(a), sieve_limit)) return false;
  bool found = false;
  tree.for_each([&](const EscalationNode& n, const EscalationNode*) {
    found |= n.status == NodeStatus::Universal && is_sub_multiset(n.coeffs, a);
  });
  if (found) return true;
  return std::nullopt;
}

std::vector<std::vector<i64>> proper_universal_sums(const EscalationTree& tree) {
  std::vector<std::vector<i64>> out;
  for (const auto& a : escalation_leaves(tree)) {
    bool proper = true;
    for (size_t i = 0; i < a.size() && proper; ++i) {
      auto sub = a;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
      proper = known_universal(tree, sub) == false;
    }
    if (proper) out.push_back(a);
  }
  return out;
}

std::set<i64> critical_set(const EscalationTree& tree) {
  std::set<i64> out;
  tree.for_each([&](const EscalationNode& n, const EscalationNode*) {
    if ((n.status == NodeStatus::NonUniversal || n.status == NodeStatus::Frontier) && n.truant) out.insert(*n.truant);
  });
  return out;
}

const std::vector<i64>& critical_integers() {
  static const std::vector<i64> v{1, 2, 3, 4, 6, 7, 8, 9, 11, 13, 14, 17, 18, 19, 23, 28, 31, 33, 34, 39, 42, 63};
  return v;
}

bool universality_check_63(const CoefficientVector& a) {
  const RepresentabilityTable t = build_table(a, 63);
  return std::all_of(critical_integers().begin(), critical_integers().end(), [&](i64 n) { return t.test(n); });
}

std::string Table3Row::prefix_str() const {
  std::string s = "(";
  for (i64 x : prefix) s += std::to_string(x) + ",";
  return s + "a_" + std::to_string(prefix.size() + 1) + ")";
}

std::string Table3Row::condition_str() const {
  const std::string var = "a_" + std::to_string(prefix.size() + 1);
  if (values.empty()) return "none";
  const i64 lo = values.front(), hi = values.back();
  const i64 span = hi - lo + 1, n = static_cast<i64>(values.size());
  std::ostringstream os;
  if (n >= 4 && span == n) {
    os << lo << "<=" << var << "<=" << hi;
  } else if (n >= 4 && span == n + 1) {
    i64 hole = lo;
    while (std::binary_search(values.begin(), values.end(), hole)) ++hole;
    os << lo << "<=" << var << "<=" << hi << ", " << var << "!=" << hole;
  } else {
    os << var << "=";
    for (size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  }
  return os.str();
}

std::vector<Table3Row> table3_rows(const EscalationTree& tree) {
  std::vector<Table3Row> rows;
  for (const auto& leaf : escalation_leaves(tree)) {
    std::vector<i64> prefix(leaf.begin(), leaf.end() - 1);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Table3Row& r) { return r.prefix == prefix; });
    if (it == rows.end()) rows.push_back({prefix, {leaf.back()}});
    else it->values.push_back(leaf.back());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Table3Row& x, const Table3Row& y) {
    if (x.prefix.size() != y.prefix.size()) return x.prefix.size() < y.prefix.size();
    return x.prefix < y.prefix;
  });
  for (auto& r : rows) std::sort(r.values.begin(), r.values.end());
  return rows;
}

const std::vector<std::pair<std::string, std::string>>& published_table3() {
  static const std::vector<std::pair<std::string, std::string>> rows{
      {"(1,1,1,a_4)", "a_4=2"},
      {"(1,1,2,a_4)", "2<=a_4<=6"},
      {"(1,1,3,a_4)", "a_4=6"},
      {"(1,2,2,a_4)", "a_4=4,6"},
      {"(1,2,3,a_4)", "a_4=4,5,7"},
      {"(1,2,4,a_4)", "a_4=6,7,8"},
      {"(1,1,1,1,a_5)", "1<=a_5<=9"},
      {"(1,1,1,3,a_5)", "3<=a_5<=19"},
      {"(1,1,1,4,a_5)", "4<=a_5<=8"},
      {"(1,1,2,7,a_5)", "7<=a_5<=28"},
      {"(1,1,2,8,a_5)", "8<=a_5<=39"},
      {"(1,1,2,9,a_5)", "9<=a_5<=18"},
      {"(1,1,3,3,a_5)", "3<=a_5<=14"},
      {"(1,1,3,4,a_5)", "4<=a_5<=18, a_5!=7"},
      {"(1,1,3,5,a_5)", "5<=a_5<=19"},
      {"(1,1,3,7,a_5)", "7<=a_5<=14"},
      {"(1,2,2,2,a_5)", "2<=a_5<=8"},
      {"(1,2,2,3,a_5)", "3<=a_5<=33"},
      {"(1,2,2,5,a_5)", "5<=a_5<=23, a_5!=10"},
      {"(1,2,3,3,a_5)", "3<=a_5<=34"},
      {"(1,2,3,6,a_5)", "6<=a_5<=63"},
      {"(1,2,3,8,a_5)", "8<=a_5<=31"},
      {"(1,2,3,9,a_5)", "9<=a_5<=42"},
      {"(1,2,4,4,a_5)", "4<=a_5<=17"},
      {"(1,2,4,5,a_5)", "5<=a_5<=13"},
      {"(1,1,3,4,7,a_6)", "7<=a_6<=18"},
      {"(1,2,2,5,10,a_6)", "10<=a_6<=33"},
  };
  return rows;
}

}  // namespace pentsum
