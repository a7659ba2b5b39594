#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sddkit/bitvec.hpp"
#include "sddkit/boolfn.hpp"
#include "sddkit/obdd.hpp"
#include "sddkit/sdd.hpp"
#include "sddkit/vtree.hpp"

namespace sddkit::testing {

// Literal brute force of the 2n-term disjunction defining the generalized
// function, independent of the library's case-split evaluator.
inline bool fn_disjunction_brute(std::uint32_t n, const Assignment& a) {
  std::uint32_t weight = 0;
  for (std::uint32_t i = 1; i <= n; ++i) weight += a.value_of(i) ? 1 : 0;
  auto exact = [&](std::uint32_t i) { return weight == i; };
  bool value = (exact(0) && !a.value_of(y_var(n, 0))) || (exact(n) && a.value_of(y_var(n, n)));
  for (std::uint32_t i = 1; i + 1 <= n; ++i) {
    value = value || (exact(i) && !a.value_of(i) && !a.value_of(y_var(n, i)));
    value = value || (exact(i) && a.value_of(i) && a.value_of(y_var(n, i)));
  }
  return value;
}

// Random function over {1..n} from a seeded truth table.
inline FunctionOracle random_oracle(std::uint32_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::uint64_t rows = std::uint64_t{1} << n;
  auto table = std::make_shared<BitVec>(rows);
  for (std::uint64_t r = 0; r < rows; ++r)
    if (rng() & 1) table->set(r, true);
  const std::vector<VarId> scope = x_scope(n);
  return FunctionOracle(
      scope,
      [table, scope](const Assignment& a) {
        std::uint64_t row = 0;
        for (VarId v : scope) row = (row << 1) | (a.value_of(v) ? 1 : 0);
        return table->get(row);
      },
      "random");
}

inline std::vector<VarId> shuffled_scope(std::uint32_t n, std::uint64_t seed) {
  std::vector<VarId> sigma = x_scope(n);
  std::mt19937_64 rng(seed);
  std::shuffle(sigma.begin(), sigma.end(), rng);
  return sigma;
}

// Random full binary tree over the given variables.
inline Vtree random_vtree(std::vector<VarId> vars, std::mt19937_64& rng) {
  if (vars.size() == 1) return Vtree::leaf(vars[0]);
  std::uniform_int_distribution<std::size_t> cut(1, vars.size() - 1);
  const std::size_t k = cut(rng);
  std::vector<VarId> left(vars.begin(), vars.begin() + static_cast<long>(k));
  std::vector<VarId> right(vars.begin() + static_cast<long>(k), vars.end());
  return Vtree::compose(random_vtree(std::move(left), rng), random_vtree(std::move(right), rng));
}

// Exhaustive agreement between a diagram and its oracle.
inline bool obdd_matches_oracle(const Obdd& diagram, const FunctionOracle& oracle) {
  const std::uint64_t rows = std::uint64_t{1} << oracle.scope().size();
  for (std::uint64_t r = 0; r < rows; ++r) {
    const Assignment a = Assignment::from_row(oracle.scope(), r);
    if (diagram.evaluate(a) != oracle.evaluate(a)) return false;
  }
  return true;
}

// Minimal OBDD size by brute-force enumeration of every ordering; the
// witness is the lexicographically smallest minimizer.
inline MinObddResult min_obdd_by_enumeration(const FunctionOracle& f) {
  std::vector<VarId> sigma = f.scope();
  std::sort(sigma.begin(), sigma.end());
  MinObddResult best;
  bool first = true;
  do {
    const Obdd diagram = from_oracle(f, sigma);
    if (first || diagram.internal_node_count() < best.internal_nodes) {
      first = false;
      best.internal_nodes = diagram.internal_node_count();
      best.node_count = diagram.node_count();
      best.arc_count = diagram.arc_count();
      best.ordering = sigma;
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return best;
}

// Independent per-level node count: distinct cofactors that still depend on
// the level's variable, enumerated straight from the oracle.
inline std::uint64_t cofactor_internal_count(const FunctionOracle& f,
                                             const std::vector<VarId>& sigma) {
  const std::uint32_t n = static_cast<std::uint32_t>(sigma.size());
  std::uint64_t total = 0;
  for (std::uint32_t k = 0; k < n; ++k) {
    std::unordered_set<BitVec, BitVecHash> distinct;
    const std::uint64_t prefixes = std::uint64_t{1} << k;
    const std::uint64_t suffix_rows = std::uint64_t{1} << (n - k);
    for (std::uint64_t p = 0; p < prefixes; ++p) {
      BitVec table(suffix_rows);
      for (std::uint64_t s = 0; s < suffix_rows; ++s) {
        Assignment a;
        for (std::uint32_t j = 0; j < k; ++j)
          a.set(sigma[j], (p >> (k - 1 - j)) & 1u);
        for (std::uint32_t j = k; j < n; ++j)
          a.set(sigma[j], (s >> (n - k - 1 - (j - k))) & 1u);
        if (f.evaluate(a)) table.set(s, true);
      }
      // Depends on sigma[k] iff the two halves of the suffix table differ.
      bool depends = false;
      for (std::uint64_t s = 0; s < suffix_rows / 2 && !depends; ++s)
        depends = table.get(s) != table.get(s + suffix_rows / 2);
      if (depends) distinct.insert(std::move(table));
    }
    total += distinct.size();
  }
  return total;
}

// OBDD built through apply calls only: Shannon-expands the oracle and
// combines literals with AND/OR. A second construction route for the
// canonicity checks.
inline Obdd obdd_via_apply(const FunctionOracle& f, const std::vector<VarId>& sigma) {
  const std::uint32_t n = static_cast<std::uint32_t>(sigma.size());
  struct Builder {
    const FunctionOracle& f;
    const std::vector<VarId>& sigma;
    std::uint32_t n;

    Obdd build(std::uint32_t level, std::uint64_t prefix) {
      bool constant = true;
      bool value = false;
      const std::uint64_t suffix_rows = std::uint64_t{1} << (n - level);
      for (std::uint64_t s = 0; s < suffix_rows; ++s) {
        const bool bit = eval(prefix, level, s);
        if (s == 0)
          value = bit;
        else if (bit != value) {
          constant = false;
          break;
        }
      }
      if (constant) return constant_obdd(value, sigma);
      const Obdd lo = build(level + 1, prefix << 1);
      const Obdd hi = build(level + 1, (prefix << 1) | 1);
      const Obdd neg = apply(ObddOp::And, literal_obdd(sigma[level], false, sigma), lo);
      const Obdd pos = apply(ObddOp::And, literal_obdd(sigma[level], true, sigma), hi);
      return apply(ObddOp::Or, neg, pos);
    }

    bool eval(std::uint64_t prefix, std::uint32_t level, std::uint64_t suffix) {
      Assignment a;
      for (std::uint32_t j = 0; j < level; ++j)
        a.set(sigma[j], (prefix >> (level - 1 - j)) & 1u);
      for (std::uint32_t j = level; j < n; ++j)
        a.set(sigma[j], (suffix >> (n - level - 1 - (j - level))) & 1u);
      return f.evaluate(a);
    }
  };
  return Builder{f, sigma, n}.build(0, 0);
}

// Independent arc count: expands the SDD into an explicit gate graph (one
// OR gate per decision, one AND gate per element) and counts the edge list.
inline std::uint64_t circuit_arc_count(SddRef root, const SddEnv& env) {
  std::unordered_map<std::uint32_t, int> gate_of;
  std::vector<std::pair<int, int>> edges;
  int next_gate = 0;
  auto rec = [&](auto&& self, SddRef r) -> int {
    auto it = gate_of.find(r.index);
    if (it != gate_of.end()) return it->second;
    const int gate = next_gate++;
    gate_of.emplace(r.index, gate);
    if (env.kind(r) == SddKind::Decision) {
      for (const SddElement& e : env.elements(r)) {
        const int and_gate = next_gate++;
        edges.emplace_back(self(self, e.prime), and_gate);
        edges.emplace_back(self(self, e.sub), and_gate);
        edges.emplace_back(and_gate, gate);
      }
    }
    return gate;
  };
  rec(rec, root);
  return edges.size();
}

// Random valid SDD whose primes partition the left assignments by
// construction and are embedded OBDDs, as compress() requires.
inline SddRef random_valid_sdd(SddEnv& env, int at, std::mt19937_64& rng, int depth = 0) {
  const Vtree& tree = env.vtree();
  if (tree.is_leaf(at)) {
    switch (rng() % 4) {
      case 0: return env.constant(false);
      case 1: return env.constant(true);
      default: return env.literal(tree.var_at(at), rng() & 1);
    }
  }
  if (depth > 0 && rng() % 3 == 0) return env.constant(rng() & 1);
  const int vl = tree.left(at), vr = tree.right(at);
  const std::vector<VarId> left_vars = tree.vars_below(vl);
  const std::uint64_t rows = std::uint64_t{1} << left_vars.size();
  const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng() % 3);
  // Random surjection from left assignments onto m blocks.
  std::vector<std::uint32_t> block(rows);
  for (std::uint64_t r = 0; r < rows; ++r)
    block[r] = static_cast<std::uint32_t>(rng() % m);
  for (std::uint32_t b = 0; b < m; ++b) block[b % rows] = b % m;
  const std::uint32_t used =
      *std::max_element(block.begin(), block.end()) + 1;  // rows < m leaves gaps
  const std::vector<VarId> left_order = tree.leftfirst_ordering(vl);
  std::vector<SddElement> elements;
  for (std::uint32_t b = 0; b < used; ++b) {
    bool nonempty = false;
    for (std::uint64_t r = 0; r < rows && !nonempty; ++r) nonempty = block[r] == b;
    if (!nonempty) continue;
    FunctionOracle indicator(
        left_vars,
        [left_vars, block, b](const Assignment& a) {
          std::uint64_t row = 0;
          for (VarId v : left_vars) row = (row << 1) | (a.value_of(v) ? 1 : 0);
          return block[row] == b;
        },
        "block");
    elements.push_back({to_sdd_at(from_oracle(indicator, left_order), env, vl),
                        random_valid_sdd(env, vr, rng, depth + 1)});
  }
  if (elements.size() < 2) {
    // Degenerate split; fall back to a two-block partition on one variable.
    elements.clear();
    const VarId v = left_vars[0];
    elements.push_back({to_sdd_at(literal_obdd(v, false, left_order), env, vl),
                        random_valid_sdd(env, vr, rng, depth + 1)});
    elements.push_back({to_sdd_at(literal_obdd(v, true, left_order), env, vl),
                        random_valid_sdd(env, vr, rng, depth + 1)});
  }
  return env.decision(at, std::move(elements));
}

}  // namespace sddkit::testing
