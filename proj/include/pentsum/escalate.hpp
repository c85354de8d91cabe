// Escalation tree of universal pentagonal sums, its leaves and truants.

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pentsum/pentcore.hpp"

namespace pentsum {

enum class NodeStatus { Universal, NonUniversal, Frontier, Undecided };
std::string to_string(NodeStatus s);

struct Verdict {
  NodeStatus status = NodeStatus::Undecided;
  std::optional<i64> truant;
  std::vector<std::string> notes;  // assumptions the verdict rests on
};

/// Decides universality of a sorted tuple met during escalation.
using UniversalityOracle = std::function<Verdict(const std::vector<i64>&)>;

/// Tuples of length <= 3 by the sieve up to `sieve_limit`; longer tuples
/// through the quaternary dataset: E(a) is the part of E(a_4) that a misses.
/// When E(a_4) is only known up to a bound outside some residue classes
/// (the (1,2,4,5) row), a longer sum is universal if subtracting a_j P5(x),
/// 0 <= x <= 4, for one extra coefficient a_j moves every bad class of N into
/// a covered one; otherwise the verdict is Undecided.
UniversalityOracle dataset_oracle(i64 sieve_limit = 10'000);

struct EscalationNode {
  std::vector<i64> coeffs;  // empty at the root
  NodeStatus status = NodeStatus::Undecided;
  std::optional<i64> truant;
  std::vector<std::string> notes;
  std::vector<EscalationNode> children;

  std::string tuple() const;
  nlohmann::json to_json() const;
};

/// coeffs extended by each a with a_k <= a <= truant (a >= 1 at the root).
std::vector<std::vector<i64>> children_of(const EscalationNode& node);

struct EscalationTree {
  EscalationNode root;
  int max_depth = 0;
  std::vector<size_t> candidates;  // nodes per depth
  std::vector<size_t> universal;   // universal nodes per depth

  bool fully_decided() const;
  /// Depth-first, children in increasing order.
  void for_each(const std::function<void(const EscalationNode&, const EscalationNode*)>& f) const;
  nlohmann::json to_json() const;
  /// tuple,status,truant
  void write_csv(std::ostream& os) const;
};

/// Full tree below the empty tuple, truncated at max_depth; non-universal
/// nodes at max_depth become Frontier. Nodes of one depth are evaluated on
/// `threads` threads; the result does not depend on the thread count.
EscalationTree build_tree(const UniversalityOracle& oracle, int max_depth, int threads = 1);

/// Universal nodes whose parent is non-universal, sorted lexicographically.
std::vector<std::vector<i64>> escalation_leaves(const EscalationTree& tree);
/// Leaves none of whose one-entry deletions is universal.
std::vector<std::vector<i64>> proper_universal_sums(const EscalationTree& tree);
/// Union of truants over the non-universal nodes.
std::set<i64> critical_set(const EscalationTree& tree);

/// Universality of an arbitrary tuple from the escalation: universal if it
/// contains a universal node of the tree as a sub-multiset, non-universal if
/// the sieve finds a gap up to sieve_limit; nullopt otherwise.
std::optional<bool> known_universal(const EscalationTree& tree, std::vector<i64> a, i64 sieve_limit = 10'000);

/// The 22 critical integers.
const std::vector<i64>& critical_integers();
/// True iff every critical integer is represented.
bool universality_check_63(const CoefficientVector& a);

/// One row of the classification table: a prefix and the admissible last entries.
struct Table3Row {
  std::vector<i64> prefix;
  std::vector<i64> values;
  std::string prefix_str() const;      // "(1,1,2,a_4)"
  std::string condition_str() const;   // "2<=a_4<=6", "a_5=4,6", "5<=a_5<=23, a_5!=10"
};
/// Leaves grouped by parent, parents in lexicographic order within each length.
std::vector<Table3Row> table3_rows(const EscalationTree& tree);
/// The published table, as (prefix, condition) strings in the same format.
const std::vector<std::pair<std::string, std::string>>& published_table3();

}  // namespace pentsum
