#include "sddkit/sdd.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace sddkit {

// ---------------------------------------------------------------------------
// Store

std::size_t SddEnv::NodeKeyHash::operator()(const NodeKey& k) const {
  std::uint64_t h = static_cast<std::uint64_t>(k.kind) * 0x9e3779b97f4a7c15ull + k.a;
  for (const SddElement& e : k.elems) {
    h = h * 0x9e3779b97f4a7c15ull + e.prime.index;
    h = h * 0x9e3779b97f4a7c15ull + e.sub.index;
  }
  return static_cast<std::size_t>(h ^ (h >> 32));
}

SddEnv::SddEnv(Vtree vtree) : vtree_(std::move(vtree)) {
  Node f{SddKind::Constant, false, 0, false, 0, {}};
  Node t{SddKind::Constant, true, 0, false, 0, {}};
  nodes_.push_back(std::move(f));
  nodes_.push_back(std::move(t));
}

const SddEnv::Node& SddEnv::node_at(SddRef r) const {
  if (r.index >= nodes_.size())
    throw std::out_of_range("sdd: dangling node handle");
  return nodes_[r.index];
}

SddRef SddEnv::intern(NodeKey key, Node node) {
  auto it = unique_.find(key);
  if (it != unique_.end()) return SddRef{it->second};
  if (frozen_) throw std::logic_error("sdd: env is frozen");
  const std::uint32_t index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  unique_.emplace(std::move(key), index);
  return SddRef{index};
}

SddRef SddEnv::literal(VarId var, bool positive) {
  if (!vtree_.has_var(var))
    throw std::invalid_argument("sdd: literal variable " + std::to_string(var) +
                                " not in the vtree");
  NodeKey key{SddKind::Literal, (static_cast<std::uint64_t>(var) << 1) | (positive ? 1 : 0), {}};
  return intern(std::move(key), Node{SddKind::Literal, false, var, positive, 0, {}});
}

SddRef SddEnv::decision(int vtree_node, std::vector<SddElement> elements) {
  if (vtree_.is_leaf(vtree_node))
    throw std::invalid_argument("sdd: decisions respect internal vtree nodes only");
  if (elements.size() < 2)
    throw std::invalid_argument("sdd: decision needs at least 2 elements");
  for (const SddElement& e : elements) {
    (void)node_at(e.prime);
    (void)node_at(e.sub);
  }
  NodeKey key{SddKind::Decision, static_cast<std::uint64_t>(vtree_node), elements};
  return intern(std::move(key),
                Node{SddKind::Decision, false, 0, false, vtree_node, std::move(elements)});
}

bool SddEnv::constant_value(SddRef r) const {
  const Node& n = node_at(r);
  if (n.kind != SddKind::Constant) throw std::invalid_argument("sdd: not a constant");
  return n.value;
}

VarId SddEnv::literal_var(SddRef r) const {
  const Node& n = node_at(r);
  if (n.kind != SddKind::Literal) throw std::invalid_argument("sdd: not a literal");
  return n.var;
}

bool SddEnv::literal_positive(SddRef r) const {
  const Node& n = node_at(r);
  if (n.kind != SddKind::Literal) throw std::invalid_argument("sdd: not a literal");
  return n.positive;
}

int SddEnv::decision_vtree_node(SddRef r) const {
  const Node& n = node_at(r);
  if (n.kind != SddKind::Decision) throw std::invalid_argument("sdd: not a decision");
  return n.vtree_node;
}

const std::vector<SddElement>& SddEnv::elements(SddRef r) const {
  const Node& n = node_at(r);
  if (n.kind != SddKind::Decision) throw std::invalid_argument("sdd: not a decision");
  return n.elems;
}

int SddEnv::respect_node(SddRef r) const {
  const Node& n = node_at(r);
  switch (n.kind) {
    case SddKind::Constant: return kConstantAnywhere;
    case SddKind::Literal: return vtree_.leaf_of(n.var);
    case SddKind::Decision: return n.vtree_node;
  }
  return kConstantAnywhere;
}

namespace {

// Calls fn once per reachable node, children before parents.
template <typename Fn>
void for_each_reachable(SddRef root, const SddEnv& env, Fn&& fn) {
  std::unordered_set<std::uint32_t> done;
  std::vector<SddRef> stack{root};
  while (!stack.empty()) {
    SddRef r = stack.back();
    if (done.count(r.index)) {
      stack.pop_back();
      continue;
    }
    if (env.kind(r) != SddKind::Decision) {
      done.insert(r.index);
      fn(r);
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (const SddElement& e : env.elements(r)) {
      if (!done.count(e.prime.index)) {
        stack.push_back(e.prime);
        ready = false;
      }
      if (!done.count(e.sub.index)) {
        stack.push_back(e.sub);
        ready = false;
      }
    }
    if (!ready) continue;
    done.insert(r.index);
    fn(r);
    stack.pop_back();
  }
}

}  // namespace

SddSize size(SddRef root, const SddEnv& env) {
  SddSize s;
  for_each_reachable(root, env, [&](SddRef r) {
    ++s.nodes;
    if (env.kind(r) == SddKind::Decision)
      s.arcs += 3 * env.elements(r).size();
  });
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

bool evaluate(SddRef root, const SddEnv& env, const Assignment& a) {
  if (!a.covers(env.vtree().var_set()))
    throw std::invalid_argument("sdd: assignment does not cover the vtree variables");
  std::unordered_map<std::uint32_t, bool> memo;
  auto rec = [&](auto&& self, SddRef r) -> bool {
    switch (env.kind(r)) {
      case SddKind::Constant: return env.constant_value(r);
      case SddKind::Literal: return a.value_of(env.literal_var(r)) == env.literal_positive(r);
      case SddKind::Decision: break;
    }
    auto it = memo.find(r.index);
    if (it != memo.end()) return it->second;
    bool out = false;
    for (const SddElement& e : env.elements(r))
      if (self(self, e.prime) && self(self, e.sub)) {
        out = true;
        break;
      }
    memo.emplace(r.index, out);
    return out;
  };
  return rec(rec, root);
}

SddEvaluator::SddEvaluator(const SddEnv& env, std::vector<VarId> vars)
    : env_(&env), vars_(std::move(vars)) {
  if (!std::is_sorted(vars_.begin(), vars_.end()))
    std::sort(vars_.begin(), vars_.end());
}

bool SddEvaluator::evaluate(SddRef root, std::uint64_t row) {
  ++epoch_;
  if (stamp_.size() < env_->store_size()) {
    stamp_.resize(env_->store_size(), 0);
    value_.resize(env_->store_size(), 0);
  }
  return eval_rec(root, row);
}

bool SddEvaluator::eval_rec(SddRef r, std::uint64_t row) {
  switch (env_->kind(r)) {
    case SddKind::Constant:
      return env_->constant_value(r);
    case SddKind::Literal: {
      const VarId var = env_->literal_var(r);
      auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
      if (it == vars_.end() || *it != var)
        throw std::invalid_argument("sdd: literal variable " + std::to_string(var) +
                                    " outside the evaluation scope");
      const std::size_t pos = static_cast<std::size_t>(it - vars_.begin());
      const bool bit = (row >> (vars_.size() - 1 - pos)) & 1u;
      return bit == env_->literal_positive(r);
    }
    case SddKind::Decision:
      break;
  }
  if (stamp_[r.index] == epoch_) return value_[r.index] != 0;
  bool out = false;
  for (const SddElement& e : env_->elements(r))
    if (eval_rec(e.prime, row) && eval_rec(e.sub, row)) {
      out = true;
      break;
    }
  stamp_[r.index] = epoch_;
  value_[r.index] = out ? 1 : 0;
  return out;
}

BitVec semantic_table(SddRef root, const SddEnv& env, const std::vector<VarId>& vars) {
  if (vars.size() > kEnumerationCap)
    throw std::invalid_argument("sdd: enumeration cap exceeded");
  SddEvaluator eval(env, vars);
  const std::uint64_t rows = std::uint64_t{1} << vars.size();
  BitVec table(rows);
  for (std::uint64_t r = 0; r < rows; ++r)
    if (eval.evaluate(root, r)) table.set(r, true);
  return table;
}

bool equivalent_over(SddRef a, SddRef b, const SddEnv& env, const std::vector<VarId>& vars) {
  if (vars.size() > kEnumerationCap)
    throw std::invalid_argument("sdd: enumeration cap exceeded");
  SddEvaluator ea(env, vars), eb(env, vars);
  const std::uint64_t rows = std::uint64_t{1} << vars.size();
  for (std::uint64_t r = 0; r < rows; ++r)
    if (ea.evaluate(a, r) != eb.evaluate(b, r)) return false;
  return true;
}

bool equivalent(SddRef a, SddRef b, const SddEnv& env) {
  return equivalent_over(a, b, env, env.vtree().var_set());
}

// ---------------------------------------------------------------------------
// Model counting

namespace {

std::uint64_t pow2_checked(std::size_t e) {
  if (e >= 64) throw std::invalid_argument("sdd: model count overflows 64 bits");
  return std::uint64_t{1} << e;
}

struct CountContext {
  const SddEnv& env;
  std::unordered_map<std::uint32_t, std::uint64_t> memo;  // decisions at their own node

  std::uint64_t raw(SddRef r) {
    auto it = memo.find(r.index);
    if (it != memo.end()) return it->second;
    const int w = env.decision_vtree_node(r);
    const int wl = env.vtree().left(w), wr = env.vtree().right(w);
    std::uint64_t total = 0;
    for (const SddElement& e : env.elements(r))
      total += at(e.prime, wl) * at(e.sub, wr);
    memo.emplace(r.index, total);
    return total;
  }

  // Models of r as a function of the variables below `vnode`.
  std::uint64_t at(SddRef r, int vnode) {
    const std::size_t width = env.vtree().vars_below(vnode).size();
    switch (env.kind(r)) {
      case SddKind::Constant:
        return env.constant_value(r) ? pow2_checked(width) : 0;
      case SddKind::Literal:
        if (!env.vtree().var_below(vnode, env.literal_var(r)))
          throw std::invalid_argument("sdd: literal outside the counting subtree");
        return pow2_checked(width - 1);
      case SddKind::Decision: {
        const int w = env.decision_vtree_node(r);
        if (!env.vtree().in_subtree(vnode, w))
          throw std::invalid_argument("sdd: decision outside the counting subtree");
        const std::size_t gap = width - env.vtree().vars_below(w).size();
        return raw(r) * pow2_checked(gap);
      }
    }
    return 0;
  }
};

}  // namespace

std::uint64_t model_count(SddRef root, const SddEnv& env, const std::vector<VarId>& scope) {
  std::vector<VarId> sorted = scope;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("sdd: duplicate variable in counting scope");
  auto in_scope = [&](VarId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
  };
  CountContext ctx{env, {}};
  switch (env.kind(root)) {
    case SddKind::Constant:
      return env.constant_value(root) ? pow2_checked(scope.size()) : 0;
    case SddKind::Literal:
      if (!in_scope(env.literal_var(root)))
        throw std::invalid_argument("sdd: counting scope misses the literal variable");
      return pow2_checked(scope.size() - 1);
    case SddKind::Decision: {
      const int w = env.decision_vtree_node(root);
      for (VarId v : env.vtree().vars_below(w))
        if (!in_scope(v))
          throw std::invalid_argument("sdd: counting scope smaller than the vtree subtree");
      const std::size_t gap = scope.size() - env.vtree().vars_below(w).size();
      return ctx.raw(root) * pow2_checked(gap);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::all_ok() const {
  return std::all_of(decisions.begin(), decisions.end(),
                     [](const DecisionCheck& c) { return c.ok(); });
}

std::string ValidationReport::first_failure() const {
  for (const DecisionCheck& c : decisions) {
    if (!c.s1) return "S1";
    if (!c.s2) return "S2";
    if (!c.s3) return "S3";
    if (!c.s4) return "S4";
    if (!c.s5) return "S5";
  }
  return "";
}

namespace {

// A prime/sub is an SDD respecting a subtree of `limit` iff its own respect
// node sits inside that subtree; nested decisions are checked at their own
// report entry.
bool respects_within(SddRef r, const SddEnv& env, int limit) {
  const int at = env.respect_node(r);
  if (at == SddEnv::kConstantAnywhere) return true;
  return env.vtree().in_subtree(limit, at);
}

}  // namespace

ValidationReport validate(SddRef root, const SddEnv& env) {
  ValidationReport report;
  std::vector<SddRef> decisions;
  for_each_reachable(root, env, [&](SddRef r) {
    if (env.kind(r) == SddKind::Decision) decisions.push_back(r);
  });
  for (SddRef d : decisions) {
    DecisionCheck check;
    check.node = d;
    check.vtree_node = env.decision_vtree_node(d);
    const int vl = env.vtree().left(check.vtree_node);
    const int vr = env.vtree().right(check.vtree_node);
    const auto& elems = env.elements(d);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (!respects_within(elems[i].prime, env, vl)) {
        check.s1 = false;
        check.detail = "S1: prime " + std::to_string(i) + " does not respect the left subtree";
        break;
      }
      if (!respects_within(elems[i].sub, env, vr)) {
        check.s2 = false;
        check.detail = "S2: sub " + std::to_string(i) + " does not respect the right subtree";
        break;
      }
    }
    if (check.s1 && check.s2) {
      const std::vector<VarId>& left_vars = env.vtree().vars_below(vl);
      if (left_vars.size() > kEnumerationCap)
        throw std::invalid_argument("sdd: validate enumeration cap exceeded");
      check.semantics_checked = true;
      SddEvaluator eval(env, left_vars);
      std::vector<bool> satisfiable(elems.size(), false);
      const std::uint64_t rows = std::uint64_t{1} << left_vars.size();
      for (std::uint64_t row = 0; row < rows; ++row) {
        int hits = 0;
        std::size_t first = 0, second = 0;
        for (std::size_t i = 0; i < elems.size(); ++i) {
          if (eval.evaluate(elems[i].prime, row)) {
            if (hits == 0) first = i;
            if (hits == 1) second = i;
            ++hits;
            satisfiable[i] = true;
          }
        }
        if (hits == 0 && check.s5) {
          check.s5 = false;
          if (!check.witness) {
            check.witness = Assignment::from_row(left_vars, row);
            check.detail = "S5: no prime covers " + check.witness->to_string();
          }
        } else if (hits > 1 && check.s4) {
          check.s4 = false;
          if (!check.witness) {
            check.witness = Assignment::from_row(left_vars, row);
            check.detail = "S4: primes " + std::to_string(first) + " and " +
                           std::to_string(second) + " overlap on " + check.witness->to_string();
          }
        }
      }
      for (std::size_t i = 0; i < elems.size(); ++i)
        if (!satisfiable[i]) {
          check.s3 = false;
          if (check.detail.empty())
            check.detail = "S3: prime " + std::to_string(i) + " is unsatisfiable";
          break;
        }
    }
    report.decisions.push_back(std::move(check));
  }
  return report;
}

bool is_compressed(SddRef root, const SddEnv& env) {
  bool compressed = true;
  std::vector<SddRef> decisions;
  for_each_reachable(root, env, [&](SddRef r) {
    if (env.kind(r) == SddKind::Decision) decisions.push_back(r);
  });
  for (SddRef d : decisions) {
    if (!compressed) break;
    const int vr = env.vtree().right(env.decision_vtree_node(d));
    const std::vector<VarId>& right_vars = env.vtree().vars_below(vr);
    if (right_vars.size() > kEnumerationCap)
      throw std::invalid_argument("sdd: compression check enumeration cap exceeded");
    std::unordered_set<BitVec, BitVecHash> seen;
    for (const SddElement& e : env.elements(d))
      if (!seen.insert(semantic_table(e.sub, env, right_vars)).second) {
        compressed = false;
        break;
      }
  }
  return compressed;
}

// ---------------------------------------------------------------------------
// Conditioning

namespace {

bool semantically_false(SddRef r, const SddEnv& env) {
  switch (env.kind(r)) {
    case SddKind::Constant: return !env.constant_value(r);
    case SddKind::Literal: return false;
    case SddKind::Decision: {
      const int w = env.decision_vtree_node(r);
      return semantic_table(r, env, env.vtree().vars_below(w)).all_zero();
    }
  }
  return false;
}

bool semantically_true(SddRef r, const SddEnv& env) {
  switch (env.kind(r)) {
    case SddKind::Constant: return env.constant_value(r);
    case SddKind::Literal: return false;
    case SddKind::Decision: {
      const int w = env.decision_vtree_node(r);
      return semantic_table(r, env, env.vtree().vars_below(w)).all_one();
    }
  }
  return false;
}

// Negation by flipping subs; sound because the primes of a valid SDD
// partition the left assignments.
SddRef negate_valid(SddRef r, SddEnv& env,
                    std::unordered_map<std::uint32_t, SddRef>& memo) {
  switch (env.kind(r)) {
    case SddKind::Constant: return env.constant(!env.constant_value(r));
    case SddKind::Literal: return env.literal(env.literal_var(r), !env.literal_positive(r));
    case SddKind::Decision: break;
  }
  auto it = memo.find(r.index);
  if (it != memo.end()) return it->second;
  // Copy: insertions below reallocate the node store.
  const std::vector<SddElement> elems = env.elements(r);
  const int w = env.decision_vtree_node(r);
  std::vector<SddElement> flipped;
  for (const SddElement& e : elems)
    flipped.push_back({e.prime, negate_valid(e.sub, env, memo)});
  SddRef out = env.decision(w, std::move(flipped));
  memo.emplace(r.index, out);
  return out;
}

}  // namespace

SddRef condition(SddRef root, SddEnv& env, const Assignment& partial) {
  for (const auto& [var, _] : partial.entries())
    if (!env.vtree().has_var(var))
      throw std::invalid_argument("sdd: conditioning variable " + std::to_string(var) +
                                  " not in the vtree");
  std::unordered_map<std::uint32_t, SddRef> memo;
  std::unordered_map<std::uint32_t, SddRef> negate_memo;
  auto rec = [&](auto&& self, SddRef r) -> SddRef {
    switch (env.kind(r)) {
      case SddKind::Constant:
        return r;
      case SddKind::Literal: {
        auto v = partial.lookup(env.literal_var(r));
        if (!v) return r;
        return env.constant(*v == env.literal_positive(r));
      }
      case SddKind::Decision:
        break;
    }
    auto it = memo.find(r.index);
    if (it != memo.end()) return it->second;
    const int w = env.decision_vtree_node(r);
    // Copy: insertions below reallocate the node store.
    const std::vector<SddElement> elems = env.elements(r);
    std::vector<SddElement> kept;
    for (const SddElement& e : elems) {
      SddRef prime = self(self, e.prime);
      if (semantically_false(prime, env)) continue;
      kept.push_back({prime, self(self, e.sub)});
    }
    SddRef out;
    if (kept.empty()) {
      out = env.constant(false);
    } else if (kept.size() == 1) {
      if (semantically_true(kept[0].prime, env)) {
        out = kept[0].sub;
      } else {
        // Restore (S5) with the complement prime and an empty block.
        SddElement rest{negate_valid(kept[0].prime, env, negate_memo), env.constant(false)};
        out = env.decision(w, {kept[0], rest});
      }
    } else {
      out = env.decision(w, std::move(kept));
    }
    memo.emplace(r.index, out);
    return out;
  };
  return rec(rec, root);
}

// ---------------------------------------------------------------------------
// Compression

namespace {

// Rebuilds a Shannon-form SDD (decisions with a pair of complementary
// literal primes) as a reduced OBDD over `order`.
Obdd::Ref shannon_to_obdd_rec(SddRef r, const SddEnv& env, ObddBuilder& builder,
                              std::unordered_map<std::uint32_t, Obdd::Ref>& memo) {
  switch (env.kind(r)) {
    case SddKind::Constant:
      return builder.constant(env.constant_value(r));
    case SddKind::Literal:
      return builder.literal(env.literal_var(r), env.literal_positive(r));
    case SddKind::Decision:
      break;
  }
  auto it = memo.find(r.index);
  if (it != memo.end()) return it->second;
  const auto& elems = env.elements(r);
  if (elems.size() != 2 || env.kind(elems[0].prime) != SddKind::Literal ||
      env.kind(elems[1].prime) != SddKind::Literal ||
      env.literal_var(elems[0].prime) != env.literal_var(elems[1].prime) ||
      env.literal_positive(elems[0].prime) == env.literal_positive(elems[1].prime))
    throw std::invalid_argument("sdd: prime not in OBDD form");
  const SddElement& neg = env.literal_positive(elems[0].prime) ? elems[1] : elems[0];
  const SddElement& pos = env.literal_positive(elems[0].prime) ? elems[0] : elems[1];
  const VarId var = env.literal_var(neg.prime);
  const Obdd::Ref lo = shannon_to_obdd_rec(neg.sub, env, builder, memo);
  const Obdd::Ref hi = shannon_to_obdd_rec(pos.sub, env, builder, memo);
  const Obdd::Ref out = builder.make_node(builder.level_of_var(var), lo, hi);
  memo.emplace(r.index, out);
  return out;
}

Obdd shannon_to_obdd(SddRef r, const SddEnv& env, const std::vector<VarId>& order) {
  ObddBuilder builder(order);
  std::unordered_map<std::uint32_t, Obdd::Ref> memo;
  return builder.finish(shannon_to_obdd_rec(r, env, builder, memo));
}

}  // namespace

SddRef compress(SddRef root, SddEnv& env) {
  std::unordered_map<std::uint32_t, SddRef> memo;
  auto rec = [&](auto&& self, SddRef r) -> SddRef {
    if (env.kind(r) != SddKind::Decision) return r;
    auto it = memo.find(r.index);
    if (it != memo.end()) return it->second;
    const int w = env.decision_vtree_node(r);
    const int vl = env.vtree().left(w), vr = env.vtree().right(w);
    const std::vector<VarId>& right_vars = env.vtree().vars_below(vr);
    if (right_vars.size() > kEnumerationCap)
      throw std::invalid_argument("sdd: compression enumeration cap exceeded");
    // Copy: insertions below reallocate the node store.
    const std::vector<SddElement> elems = env.elements(r);
    // Group elements by the semantics of their (compressed) subs.
    struct Group {
      SddRef sub;
      std::vector<std::size_t> members;
    };
    std::vector<Group> groups;
    std::unordered_map<BitVec, std::size_t, BitVecHash> group_of;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      SddRef sub = self(self, elems[i].sub);
      BitVec table = semantic_table(sub, env, right_vars);
      auto [pos, inserted] = group_of.try_emplace(std::move(table), groups.size());
      if (inserted) groups.push_back({sub, {}});
      groups[pos->second].members.push_back(i);
    }
    SddRef out;
    if (groups.size() == 1) {
      // All subs coincide, so the decision reduces to its sub.
      out = groups[0].sub;
    } else {
      const std::vector<VarId> left_order = env.vtree().leftfirst_ordering(vl);
      std::vector<SddElement> merged;
      for (const Group& g : groups) {
        Obdd disjunction = shannon_to_obdd(elems[g.members[0]].prime, env, left_order);
        for (std::size_t j = 1; j < g.members.size(); ++j)
          disjunction = apply(ObddOp::Or, disjunction,
                              shannon_to_obdd(elems[g.members[j]].prime, env, left_order));
        merged.push_back({to_sdd_at(disjunction, env, vl), g.sub});
      }
      out = env.decision(w, std::move(merged));
    }
    memo.emplace(r.index, out);
    return out;
  };
  return rec(rec, root);
}

// ---------------------------------------------------------------------------
// OBDD embedding

SddRef to_sdd(const Obdd& f, SddEnv& env) { return to_sdd_at(f, env, env.vtree().root()); }

SddRef to_sdd_at(const Obdd& f, SddEnv& env, int at) {
  const Vtree& tree = env.vtree();
  const auto& order = f.ordering();
  const std::size_t n = order.size();
  // The subtree at `at` must be right-linear with left-first ordering equal
  // to the OBDD ordering; collect the decision node for each level.
  std::vector<int> vnode_at_level(n, Vtree::kNone);
  int v = at;
  for (std::size_t k = 0; k < n; ++k) {
    const bool last = k + 1 == n;
    if (last) {
      if (!tree.is_leaf(v) || tree.var_at(v) != order[k])
        throw std::invalid_argument("sdd: vtree does not match the OBDD ordering");
    } else {
      if (tree.is_leaf(v) || !tree.is_leaf(tree.left(v)) ||
          tree.var_at(tree.left(v)) != order[k])
        throw std::invalid_argument("sdd: vtree does not match the OBDD ordering");
      vnode_at_level[k] = v;
      v = tree.right(v);
    }
  }
  std::unordered_map<Obdd::Ref, SddRef> memo;
  auto rec = [&](auto&& self, Obdd::Ref r) -> SddRef {
    if (Obdd::is_terminal(r)) return env.constant(r == Obdd::kTrue);
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    const Obdd::Node& node = f.node(r);
    SddRef out;
    if (node.level + 1 == n) {
      // Both children are terminals here; a reduced node is a plain literal.
      out = env.literal(order[node.level], node.lo == Obdd::kFalse);
    } else {
      SddElement low{env.literal(order[node.level], false), self(self, node.lo)};
      SddElement high{env.literal(order[node.level], true), self(self, node.hi)};
      out = env.decision(vnode_at_level[node.level], {low, high});
    }
    memo.emplace(r, out);
    return out;
  };
  return rec(rec, f.root());
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_sdd(SddRef root, const SddEnv& env) {
  std::vector<SddRef> order;
  for_each_reachable(root, env, [&](SddRef r) { order.push_back(r); });
  std::unordered_map<std::uint32_t, std::size_t> file_id;
  for (std::size_t i = 0; i < order.size(); ++i) file_id.emplace(order[i].index, i);
  std::ostringstream os;
  os << "sdd " << order.size() << '\n';
  for (std::size_t i = 0; i < order.size(); ++i) {
    SddRef r = order[i];
    switch (env.kind(r)) {
      case SddKind::Constant:
        os << (env.constant_value(r) ? 'T' : 'F') << ' ' << i << '\n';
        break;
      case SddKind::Literal:
        os << "L " << i << ' ' << env.literal_var(r) << ' '
           << (env.literal_positive(r) ? '+' : '-') << '\n';
        break;
      case SddKind::Decision: {
        const auto& elems = env.elements(r);
        os << "D " << i << ' ' << env.decision_vtree_node(r) << ' ' << elems.size();
        for (const SddElement& e : elems)
          os << ' ' << file_id.at(e.prime.index) << ' ' << file_id.at(e.sub.index);
        os << '\n';
        break;
      }
    }
  }
  return os.str();
}

SddRef parse_sdd(std::string_view text, SddEnv& env) {
  std::istringstream is{std::string(text)};
  std::string line;
  long count = -1;
  std::vector<SddRef> by_id;
  std::vector<bool> defined;
  auto resolve = [&](long id) -> SddRef {
    if (id < 0 || id >= static_cast<long>(by_id.size()) ||
        !defined[static_cast<std::size_t>(id)])
      throw std::invalid_argument("sdd: reference to undefined node " + std::to_string(id));
    return by_id[static_cast<std::size_t>(id)];
  };
  auto define = [&](long id, SddRef r) {
    if (id < 0 || id >= count)
      throw std::invalid_argument("sdd: node id " + std::to_string(id) + " out of range");
    if (defined[static_cast<std::size_t>(id)])
      throw std::invalid_argument("sdd: node id " + std::to_string(id) + " defined twice");
    defined[static_cast<std::size_t>(id)] = true;
    by_id[static_cast<std::size_t>(id)] = r;
  };
  long last_id = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "sdd") {
      if (count >= 0) throw std::invalid_argument("sdd: duplicate header");
      if (!(ls >> count) || count <= 0) throw std::invalid_argument("sdd: bad node count");
      by_id.assign(static_cast<std::size_t>(count), SddRef{});
      defined.assign(static_cast<std::size_t>(count), false);
      continue;
    }
    if (count < 0) throw std::invalid_argument("sdd: node line before header");
    long id = -1;
    if (head == "T" || head == "F") {
      if (!(ls >> id)) throw std::invalid_argument("sdd: malformed constant line");
      define(id, env.constant(head == "T"));
    } else if (head == "L") {
      long var = 0;
      std::string sign;
      if (!(ls >> id >> var >> sign) || var <= 0 || (sign != "+" && sign != "-"))
        throw std::invalid_argument("sdd: malformed literal line '" + line + "'");
      define(id, env.literal(static_cast<VarId>(var), sign == "+"));
    } else if (head == "D") {
      long vnode = -1, m = 0;
      if (!(ls >> id >> vnode >> m)) throw std::invalid_argument("sdd: malformed decision line");
      if (m < 2)
        throw std::invalid_argument("sdd: decision with fewer than 2 elements");
      std::vector<SddElement> elems;
      for (long j = 0; j < m; ++j) {
        long p = -1, s = -1;
        if (!(ls >> p >> s)) throw std::invalid_argument("sdd: truncated decision line");
        elems.push_back({resolve(p), resolve(s)});
      }
      define(id, env.decision(static_cast<int>(vnode), std::move(elems)));
    } else {
      throw std::invalid_argument("sdd: malformed line '" + line + "'");
    }
    std::string rest;
    if (ls >> rest) throw std::invalid_argument("sdd: trailing tokens on line '" + line + "'");
    last_id = id;
  }
  if (count < 0) throw std::invalid_argument("sdd: missing header");
  for (long id = 0; id < count; ++id)
    if (!defined[static_cast<std::size_t>(id)])
      throw std::invalid_argument("sdd: node " + std::to_string(id) + " undefined");
  return by_id[static_cast<std::size_t>(last_id)];
}

std::string sdd_to_dot(SddRef root, const SddEnv& env, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  std::vector<SddRef> order;
  for_each_reachable(root, env, [&](SddRef r) { order.push_back(r); });
  auto inline_label = [&](SddRef r) -> std::string {
    switch (env.kind(r)) {
      case SddKind::Constant: return env.constant_value(r) ? "T" : "F";
      case SddKind::Literal:
        return (env.literal_positive(r) ? "x" : "~x") + std::to_string(env.literal_var(r));
      case SddKind::Decision: return "*";
    }
    return "?";
  };
  for (SddRef r : order) {
    if (env.kind(r) != SddKind::Decision) continue;
    const auto& elems = env.elements(r);
    os << "  d" << r.index << " [shape=circle, label=\"v" << env.decision_vtree_node(r)
       << "\"];\n";
    os << "  e" << r.index << " [shape=record, label=\"";
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (i) os << '|';
      os << "{<p" << i << "> " << inline_label(elems[i].prime) << "|<s" << i << "> "
         << inline_label(elems[i].sub) << '}';
    }
    os << "\"];\n";
    os << "  d" << r.index << " -> e" << r.index << " [arrowhead=none];\n";
    for (std::size_t i = 0; i < elems.size(); ++i) {
      if (env.kind(elems[i].prime) == SddKind::Decision)
        os << "  e" << r.index << ":p" << i << " -> d" << elems[i].prime.index << ";\n";
      if (env.kind(elems[i].sub) == SddKind::Decision)
        os << "  e" << r.index << ":s" << i << " -> d" << elems[i].sub.index << ";\n";
    }
  }
  if (env.kind(root) != SddKind::Decision)
    os << "  r [shape=box, label=\"" << inline_label(root) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace sddkit
