#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sddkit/bitvec.hpp"
#include "sddkit/boolfn.hpp"
#include "sddkit/obdd.hpp"
#include "sddkit/vtree.hpp"

namespace sddkit {

/// Handle into an SddEnv node store. Structurally identical nodes share one
/// handle.
struct SddRef {
  std::uint32_t index = 0;
  friend bool operator==(const SddRef&, const SddRef&) = default;
};

enum class SddKind : std::uint8_t { Constant, Literal, Decision };

struct SddElement {
  SddRef prime;
  SddRef sub;
  friend bool operator==(const SddElement&, const SddElement&) = default;
};

/// Hash-consed SDD node store tied to one vtree. Single writer during
/// construction; freeze() makes it immutable (attempted insertions throw),
/// after which the env and all refs can be shared freely.
class SddEnv {
public:
  explicit SddEnv(Vtree vtree);

  const Vtree& vtree() const { return vtree_; }

  SddRef constant(bool value) const { return SddRef{value ? 1u : 0u}; }
  SddRef literal(VarId var, bool positive);
  /// Decision node at an internal vtree node with m >= 2 elements. Only the
  /// local shape is checked here; (S1)-(S5) are validate()'s job so that
  /// deliberately broken diagrams can be built for testing.
  SddRef decision(int vtree_node, std::vector<SddElement> elements);

  SddKind kind(SddRef r) const { return node_at(r).kind; }
  bool constant_value(SddRef r) const;
  VarId literal_var(SddRef r) const;
  bool literal_positive(SddRef r) const;
  int decision_vtree_node(SddRef r) const;
  const std::vector<SddElement>& elements(SddRef r) const;

  /// Vtree node the subcircuit naturally respects: leaf for literals, the
  /// decision's node for decisions, and kConstantAnywhere for constants.
  static constexpr int kConstantAnywhere = -1;
  int respect_node(SddRef r) const;

  std::size_t store_size() const { return nodes_.size(); }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

private:
  struct Node {
    SddKind kind;
    bool value = false;     // constants
    VarId var = 0;          // literals
    bool positive = false;  // literals
    int vtree_node = 0;     // decisions
    std::vector<SddElement> elems;
  };

  struct NodeKey {
    SddKind kind;
    std::uint64_t a = 0;
    std::vector<SddElement> elems;
    friend bool operator==(const NodeKey&, const NodeKey&) = default;
  };
  struct NodeKeyHash {
    std::size_t operator()(const NodeKey& k) const;
  };

  const Node& node_at(SddRef r) const;
  SddRef intern(NodeKey key, Node node);

  Vtree vtree_;
  std::vector<Node> nodes_;
  std::unordered_map<NodeKey, std::uint32_t, NodeKeyHash> unique_;
  bool frozen_ = false;
};

struct SddSize {
  std::uint64_t arcs = 0;
  std::uint64_t nodes = 0;
};

/// Arc and node counts of the DAG under `root`. A decision with m elements
/// contributes 3m arcs (two per AND gate plus one per OR wire); constants
/// and literals are input gates and contribute none.
SddSize size(SddRef root, const SddEnv& env);

/// Circuit evaluation; `a` must cover the vtree variable set.
bool evaluate(SddRef root, const SddEnv& env, const Assignment& a);

/// Row-indexed evaluation over a fixed ascending variable list, with the
/// first variable as the most significant row bit. Reuses scratch space
/// across rows; the workhorse behind exhaustive checks.
class SddEvaluator {
public:
  SddEvaluator(const SddEnv& env, std::vector<VarId> vars);
  bool evaluate(SddRef root, std::uint64_t row);

private:
  bool eval_rec(SddRef r, std::uint64_t row);

  const SddEnv* env_;
  std::vector<VarId> vars_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> value_;
  std::uint32_t epoch_ = 0;
};

/// Truth vector of `root` as a function of `vars` (ascending, <= 24).
BitVec semantic_table(SddRef root, const SddEnv& env, const std::vector<VarId>& vars);

/// Semantic equivalence over the full vtree variable set, by enumeration.
bool equivalent(SddRef a, SddRef b, const SddEnv& env);
/// Semantic equivalence as functions of `vars`.
bool equivalent_over(SddRef a, SddRef b, const SddEnv& env, const std::vector<VarId>& vars);

/// Number of models over `scope`, which must contain the variables of the
/// relevant vtree subtree. Unread scope variables are free.
std::uint64_t model_count(SddRef root, const SddEnv& env, const std::vector<VarId>& scope);

struct DecisionCheck {
  SddRef node;
  int vtree_node = 0;
  bool s1 = true, s2 = true, s3 = true, s4 = true, s5 = true;
  bool semantics_checked = false;
  std::optional<Assignment> witness;
  std::string detail;
  bool ok() const { return s1 && s2 && s3 && s4 && s5; }
};

/// Result of checking (S1)-(S5) at every reachable decision node.
struct ValidationReport {
  std::vector<DecisionCheck> decisions;
  bool all_ok() const;
  /// Name of the first failed condition ("S1".."S5"), empty when clean.
  std::string first_failure() const;
};

/// (S1)/(S2) structurally against the vtree, (S3)-(S5) by enumeration over
/// the left variables of each decision (cap kEnumerationCap per node).
ValidationReport validate(SddRef root, const SddEnv& env);

/// Condition (C): at every decision node the subs are pairwise inequivalent
/// as functions of the right variables.
bool is_compressed(SddRef root, const SddEnv& env);

/// Restriction over the same vtree. Assigned literals become constants;
/// elements whose primes become unsatisfiable are dropped; a decision left
/// with a single tautological prime hands back its sub. The result is valid
/// but not necessarily compressed.
SddRef condition(SddRef root, SddEnv& env, const Assignment& partial);

/// Semantics-preserving compression over the same vtree: per decision node,
/// elements with equivalent subs are merged and the merged prime is the
/// OBDD disjunction of the group's primes. Requires every prime to be in
/// Shannon (OBDD) form over the left-first ordering of its left subtree.
SddRef compress(SddRef root, SddEnv& env);

/// Embeds a reduced OBDD as a compressed SDD. The vtree subtree rooted at
/// `at` (the whole vtree for the two-argument form) must be right-linear
/// with left-first ordering equal to the OBDD ordering. Decision nodes map
/// to Shannon decisions; last-level nodes collapse to literals.
SddRef to_sdd(const Obdd& f, SddEnv& env);
SddRef to_sdd_at(const Obdd& f, SddEnv& env, int at);

std::string serialize_sdd(SddRef root, const SddEnv& env);
/// Parses into `env`; node lines must be topologically ordered and the last
/// line is the root.
SddRef parse_sdd(std::string_view text, SddEnv& env);

/// GraphViz rendering; every decision appears as one record of its
/// prime|sub element pairs, annotated with its vtree node.
std::string sdd_to_dot(SddRef root, const SddEnv& env, const std::string& graph_name = "sdd");

}  // namespace sddkit
