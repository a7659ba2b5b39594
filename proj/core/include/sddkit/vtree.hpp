#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sddkit/boolfn.hpp"

namespace sddkit {

/// Rooted, full, ordered binary tree whose leaves biject to a variable set.
/// Node ids are dense and assigned in in-order traversal, so the subtree
/// below a node covers a contiguous id interval and ancestor tests are O(1).
/// Immutable after construction.
class Vtree {
public:
  static constexpr int kNone = -1;

  /// Single-leaf vtree.
  static Vtree leaf(VarId var);
  /// New vtree with a fresh root over the two given subtrees; node ids are
  /// renumbered in in-order.
  static Vtree compose(const Vtree& left, const Vtree& right);
  /// Right-linear vtree (every left child is a leaf) whose left-first
  /// traversal yields `order`.
  static Vtree right_linear(const std::vector<VarId>& order);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int leaf_count() const { return (node_count() + 1) / 2; }
  int root() const { return root_; }

  bool is_leaf(int id) const { return node_at(id).left == kNone; }
  bool is_internal(int id) const { return !is_leaf(id); }
  int left(int id) const;
  int right(int id) const;
  int parent(int id) const { return node_at(id).parent; }
  VarId var_at(int id) const;

  /// Leaf id of `var`; throws if the variable is not in the tree.
  int leaf_of(VarId var) const;
  bool has_var(VarId var) const;

  /// True iff `inner` lies in the subtree rooted at `outer` (inclusive).
  bool in_subtree(int outer, int inner) const;
  bool var_below(int id, VarId var) const;

  /// Variables under `id`, ascending.
  const std::vector<VarId>& vars_below(int id) const;
  /// All variables, ascending.
  const std::vector<VarId>& var_set() const { return vars_below(root_); }

  /// The subtree rooted at `id` as an independent vtree (ids renumbered).
  Vtree subtree(int id) const;

  /// Variable ordering induced by a left-first traversal.
  std::vector<VarId> leftfirst_ordering() const;
  /// Left-first ordering of the subtree rooted at `id`.
  std::vector<VarId> leftfirst_ordering(int id) const;

  /// True iff every internal node's left child is a leaf.
  bool is_right_linear() const;

  std::string serialize() const;
  static Vtree parse(std::string_view text);

  friend bool operator==(const Vtree& a, const Vtree& b);

private:
  struct Node {
    int left = kNone;
    int right = kNone;
    int parent = kNone;
    VarId var = 0;  // leaves only
    int first = 0;  // in-order id interval covered by this subtree
    int last = 0;
  };

  Vtree() = default;
  const Node& node_at(int id) const;
  void index();  // fills intervals, leaf map and cached variable sets

  std::vector<Node> nodes_;
  int root_ = kNone;
  std::vector<std::pair<VarId, int>> leaf_by_var_;  // sorted by var
  std::vector<std::vector<VarId>> vars_below_;
};

/// The vtree of the HWB construction: right_linear(sigma) on the left and a
/// single dummy leaf on the right. The dummy variable defaults to id n+1,
/// the first id past the x range.
Vtree hwb_vtree(std::uint32_t n, const std::vector<VarId>& sigma);
Vtree hwb_vtree(std::uint32_t n, const std::vector<VarId>& sigma, VarId dummy);

/// The vtree of the F_n construction: right_linear(sigma) on the left,
/// right_linear(rho) on the right. |sigma| = n, |rho| = n+1.
Vtree fn_vtree(std::uint32_t n, const std::vector<VarId>& sigma,
               const std::vector<VarId>& rho);

}  // namespace sddkit
