#include <doctest.h>

#include <sstream>

#include "pentsum/errors.hpp"
#include "pentsum/escalate.hpp"
#include "pentsum/genusdata.hpp"

using namespace pentsum;

namespace {

const EscalationTree& full_tree() {
  static const EscalationTree t = build_tree(dataset_oracle(), 10);
  return t;
}

}  // namespace

TEST_CASE("children_of examples") {
  EscalationNode n{{1}, NodeStatus::NonUniversal, 2, {}, {}};
  CHECK(children_of(n) == std::vector<std::vector<i64>>{{1, 1}, {1, 2}});
  n = {{1, 2}, NodeStatus::NonUniversal, 4, {}, {}};
  CHECK(children_of(n) == std::vector<std::vector<i64>>{{1, 2, 2}, {1, 2, 3}, {1, 2, 4}});
  n = {{1, 1, 1}, NodeStatus::NonUniversal, 4, {}, {}};
  CHECK(children_of(n).size() == 4);
  CHECK(children_of(n).back() == std::vector<i64>{1, 1, 1, 4});
  n.status = NodeStatus::Universal;
  CHECK_THROWS_AS(children_of(n), ContractViolation);
}

TEST_CASE("escalation counts") {
  const auto& t = full_tree();
  CHECK(t.fully_decided());
  REQUIRE(t.candidates.size() == 7);
  CHECK(t.candidates[3] == 6);
  CHECK(t.universal[3] == 0);
  CHECK(t.candidates[4] == 34);
  CHECK(t.universal[4] == 15);
  // Lemma bound with t(1,1,3,4) = 11.
  CHECK(t.candidates[5] == 366);
  CHECK(t.universal[5] == 364);
  CHECK(t.candidates[6] == 36);
  CHECK(t.universal[6] == 36);

  // The quaternary level agrees with the dataset.
  int nonuniversal = 0;
  t.for_each([&](const EscalationNode& n, const EscalationNode*) {
    if (n.coeffs.size() != 4) return;
    const Certificate& c = load(CoefficientVector(n.coeffs));
    CHECK((n.status == NodeStatus::Universal) == c.E_expected.empty());
    if (n.truant) CHECK(*n.truant == c.E_expected.front());
    nonuniversal += n.status == NodeStatus::NonUniversal;
  });
  CHECK(nonuniversal == 19);
}

TEST_CASE("critical set") {
  const auto& t = full_tree();
  const auto cs = critical_set(t);
  CHECK(std::vector<i64>(cs.begin(), cs.end()) == critical_integers());
  CHECK(*cs.rbegin() == 63);
  auto t3 = build_tree(dataset_oracle(), 3);
  auto c3 = critical_set(t3);
  for (i64 x : {2, 4, 9, 7, 6, 8}) CHECK(c3.count(x));
  t3.for_each([](const EscalationNode& n, const EscalationNode*) {
    if (n.coeffs.size() == 3) CHECK(n.status == NodeStatus::Frontier);
  });
}

TEST_CASE("truants agree with the sieve") {
  full_tree().for_each([](const EscalationNode& n, const EscalationNode*) {
    if (!n.truant || n.coeffs.empty()) return;
    CHECK(exceptional_set(CoefficientVector(n.coeffs), *n.truant).front() == *n.truant);
  });
}

TEST_CASE("criterion of 63 on the tree") {
  CHECK(universality_check_63({1, 1, 2, 4}));
  CHECK_FALSE(universality_check_63({1, 2, 3, 6}));
  CHECK_FALSE(build_table({1, 2, 3, 6}, 63).test(63));
  CHECK_FALSE(universality_check_63({1}));
  full_tree().for_each([](const EscalationNode& n, const EscalationNode*) {
    if (n.coeffs.empty()) return;
    CHECK_MESSAGE(universality_check_63(CoefficientVector(n.coeffs)) == (n.status == NodeStatus::Universal), n.tuple());
  });
}

TEST_CASE("leaves, proper sums and the table") {
  const auto& t = full_tree();
  const auto leaves = escalation_leaves(t);
  CHECK(leaves.size() == 15 + 364 + 36);
  const auto proper = proper_universal_sums(t);
  for (const auto& a : proper)
    for (size_t i = 0; i < a.size(); ++i) {
      auto sub = a;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
      CHECK(known_universal(t, sub) == false);
    }
  // (1,1,1,1,2) is a leaf but contains the universal (1,1,1,2).
  CHECK(std::count(leaves.begin(), leaves.end(), std::vector<i64>{1, 1, 1, 1, 2}) == 1);
  CHECK(std::count(proper.begin(), proper.end(), std::vector<i64>{1, 1, 1, 1, 2}) == 0);

  const auto rows = table3_rows(t);
  REQUIRE(rows.size() == published_table3().size());
  int same = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].prefix_str() == published_table3()[i].first);
    same += rows[i].condition_str() == published_table3()[i].second;
  }
  CHECK(same == 26);
  CHECK(rows[13].condition_str() == "4<=a_5<=11, a_5!=7");
  CHECK(rows[18].condition_str() == "5<=a_5<=23, a_5!=10");
  CHECK(rows[3].condition_str() == "a_4=4,6");
  CHECK(rows[26].condition_str() == "10<=a_6<=33");
}

TEST_CASE("(1,2,4,5) extensions") {
  const auto& t = full_tree();
  t.for_each([](const EscalationNode& n, const EscalationNode*) {
    if (n.coeffs.size() == 5 && std::vector<i64>(n.coeffs.begin(), n.coeffs.begin() + 4) == std::vector<i64>{1, 2, 4, 5})
      CHECK(n.status == NodeStatus::Universal);
  });
  auto v = dataset_oracle()({1, 2, 4, 5, 12});
  CHECK(v.status == NodeStatus::Universal);
  CHECK(v.notes.front() == "via the sub-sum (1,2,4,12)");
}

TEST_CASE("export and thread independence") {
  const auto& t = full_tree();
  auto t4 = build_tree(dataset_oracle(), 10, 4);
  CHECK(t4.to_json() == t.to_json());
  std::ostringstream csv;
  t.write_csv(csv);
  const std::string s = csv.str();
  CHECK(s.rfind("tuple,status,truant\n\"()\",non-universal,1\n\"(1)\",non-universal,2\n", 0) == 0);
  CHECK(static_cast<size_t>(std::count(s.begin(), s.end(), '\n')) == 1 + 1 + 1 + 2 + 6 + 34 + 366 + 36);
}
