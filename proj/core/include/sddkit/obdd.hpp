#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "sddkit/boolfn.hpp"

namespace sddkit {

enum class ObddOp : std::uint8_t { And, Or };

/// Reduced ordered BDD over an explicit variable ordering. Stores exactly
/// the nodes reachable from the root; immutable after construction.
///
/// Size is reported two ways: raw node counts (used by the classical
/// product and conditioning bounds, terminals included) and arcs under the
/// six-wires-per-decision circuit convention.
class Obdd {
public:
  using Ref = std::uint32_t;
  static constexpr Ref kFalse = 0;
  static constexpr Ref kTrue = 1;

  struct Node {
    std::uint32_t level;  // index into the ordering; terminals sit at |ordering|
    Ref lo;
    Ref hi;
  };

  const std::vector<VarId>& ordering() const { return order_; }
  Ref root() const { return root_; }

  static bool is_terminal(Ref r) { return r < 2; }
  std::uint32_t level_of(Ref r) const {
    return is_terminal(r) ? static_cast<std::uint32_t>(order_.size())
                          : nodes_[r - 2].level;
  }
  const Node& node(Ref r) const { return nodes_[r - 2]; }

  std::uint64_t internal_node_count() const { return nodes_.size(); }
  /// Reachable nodes including terminals.
  std::uint64_t node_count() const;
  /// 6 wires per decision node, terminals contribute none.
  std::uint64_t arc_count() const { return 6 * internal_node_count(); }

  bool evaluate(const Assignment& a) const;

  /// Checks the reduction invariants (no redundant tests, no duplicate
  /// nodes, strictly increasing levels); throws std::logic_error otherwise.
  void validate_reduced() const;

  friend class ObddBuilder;

private:
  std::vector<VarId> order_;
  std::vector<Node> nodes_;  // children precede parents
  Ref root_ = kFalse;
  bool false_reachable_ = false;
  bool true_reachable_ = false;
};

/// Unique-table construction of reduced OBDDs. Single writer; finish()
/// compacts to the nodes reachable from the chosen root.
class ObddBuilder {
public:
  explicit ObddBuilder(std::vector<VarId> ordering);

  Obdd::Ref constant(bool value) const { return value ? Obdd::kTrue : Obdd::kFalse; }
  /// Reduced node; returns the child when lo == hi.
  Obdd::Ref make_node(std::uint32_t level, Obdd::Ref lo, Obdd::Ref hi);
  Obdd::Ref literal(VarId var, bool positive);

  std::uint32_t level_of_var(VarId var) const;
  const std::vector<VarId>& ordering() const { return order_; }

  std::uint32_t level_of(Obdd::Ref r) const;
  Obdd::Node node(Obdd::Ref r) const;

  Obdd finish(Obdd::Ref root) const;

private:
  struct NodeKey {
    std::uint32_t level;
    Obdd::Ref lo;
    Obdd::Ref hi;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const {
      std::uint64_t h = k.level;
      h = h * 0x9e3779b97f4a7c15ull + k.lo;
      h = h * 0x9e3779b97f4a7c15ull + k.hi;
      return static_cast<std::size_t>(h ^ (h >> 32));
    }
  };

  std::vector<VarId> order_;
  std::vector<Obdd::Node> nodes_;
  std::unordered_map<NodeKey, Obdd::Ref, NodeKeyHash> unique_;
};

/// Canonical reduced OBDD of `f` under `sigma` (a permutation of the
/// scope). Enumerates the truth table; requires |scope| <= kEnumerationCap.
Obdd from_oracle(const FunctionOracle& f, const std::vector<VarId>& sigma);

/// Reduced OBDD of E^i_n built from the running-count automaton; at most
/// n(n+1)/2 decision nodes for every ordering. No enumeration cap.
Obdd build_exact_count(std::uint32_t n, std::uint32_t i, const std::vector<VarId>& sigma);

/// Reduced OBDD of one prime-family member; quadratic size under every
/// ordering.
Obdd build_prime(PrimeId p, std::uint32_t n, const std::vector<VarId>& sigma);

Obdd literal_obdd(VarId var, bool positive, const std::vector<VarId>& sigma);
Obdd constant_obdd(bool value, const std::vector<VarId>& sigma);

/// Conjunction/disjunction of two OBDDs over the same ordering. The result
/// never exceeds node_count(f) * node_count(g) nodes (terminals included);
/// the bound is checked on every call.
Obdd apply(ObddOp op, const Obdd& f, const Obdd& g);

/// Restriction over the same ordering; assigned variables are skipped.
/// Never increases the node count (checked on every call).
Obdd condition(const Obdd& f, const Assignment& partial);

/// True iff the two diagrams have the same ordering and identical reduced
/// structure from their roots.
bool isomorphic(const Obdd& a, const Obdd& b);

/// Per-subset minimal-cost table filled by the exact minimization: entry
/// `suffix_cost[mask]` is the least number of decision nodes contributed by
/// the variables outside `mask` once the variables inside `mask` (bit p =
/// scope position p) have been placed first.
struct OrderingDpTable {
  std::uint32_t n = 0;
  std::vector<std::uint64_t> suffix_cost;
};

struct MinObddResult {
  std::uint64_t node_count = 0;  // incl. reachable terminals
  std::uint64_t internal_nodes = 0;
  std::uint64_t arc_count = 0;  // 6 * internal_nodes
  std::vector<VarId> ordering;  // lexicographically smallest witness
};

/// Exact minimum reduced-OBDD size over all |scope|! orderings, by dynamic
/// programming over variable subsets. Requires |scope| <= 16.
MinObddResult min_obdd_size_exact(const FunctionOracle& f,
                                  OrderingDpTable* table_out = nullptr);

/// GraphViz rendering: decision nodes as circles, dashed lo / solid hi
/// edges, boxed terminals.
std::string obdd_to_dot(const Obdd& f, const std::string& graph_name = "obdd");

}  // namespace sddkit
