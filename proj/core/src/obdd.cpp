#include "sddkit/obdd.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

#include "sddkit/bitvec.hpp"

namespace sddkit {

namespace {

void require_permutation_of_scope(const std::vector<VarId>& sigma,
                                  const std::vector<VarId>& scope) {
  std::vector<VarId> a = sigma, b = scope;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b)
    throw std::invalid_argument("ordering is not a permutation of the scope");
}

}  // namespace

std::uint64_t Obdd::node_count() const {
  return internal_node_count() + (false_reachable_ ? 1 : 0) + (true_reachable_ ? 1 : 0);
}

bool Obdd::evaluate(const Assignment& a) const {
  Ref r = root_;
  while (!is_terminal(r)) {
    const Node& n = node(r);
    r = a.value_of(order_[n.level]) ? n.hi : n.lo;
  }
  return r == kTrue;
}

void Obdd::validate_reduced() const {
  std::set<std::tuple<std::uint32_t, Ref, Ref>> seen;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.lo == n.hi) throw std::logic_error("obdd: redundant test node");
    if (!seen.insert({n.level, n.lo, n.hi}).second)
      throw std::logic_error("obdd: duplicate node");
    const Ref self = static_cast<Ref>(i + 2);
    if (level_of(n.lo) <= n.level || level_of(n.hi) <= n.level)
      throw std::logic_error("obdd: child level not below parent");
    (void)self;
  }
}

ObddBuilder::ObddBuilder(std::vector<VarId> ordering) : order_(std::move(ordering)) {
  if (order_.empty()) throw std::invalid_argument("obdd: empty ordering");
  std::vector<VarId> sorted = order_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("obdd: duplicate variable in ordering");
}

Obdd::Ref ObddBuilder::make_node(std::uint32_t level, Obdd::Ref lo, Obdd::Ref hi) {
  if (level >= order_.size()) throw std::invalid_argument("obdd: level out of range");
  if (level_of(lo) <= level || level_of(hi) <= level)
    throw std::invalid_argument("obdd: children must sit strictly below");
  if (lo == hi) return lo;
  const NodeKey key{level, lo, hi};
  auto [it, inserted] = unique_.try_emplace(key, static_cast<Obdd::Ref>(nodes_.size() + 2));
  if (inserted) nodes_.push_back({level, lo, hi});
  return it->second;
}

std::uint32_t ObddBuilder::level_of_var(VarId var) const {
  for (std::size_t i = 0; i < order_.size(); ++i)
    if (order_[i] == var) return static_cast<std::uint32_t>(i);
  throw std::invalid_argument("obdd: variable " + std::to_string(var) + " not in ordering");
}

Obdd::Ref ObddBuilder::literal(VarId var, bool positive) {
  const std::uint32_t level = level_of_var(var);
  return positive ? make_node(level, Obdd::kFalse, Obdd::kTrue)
                  : make_node(level, Obdd::kTrue, Obdd::kFalse);
}

std::uint32_t ObddBuilder::level_of(Obdd::Ref r) const {
  return Obdd::is_terminal(r) ? static_cast<std::uint32_t>(order_.size())
                              : nodes_[r - 2].level;
}

Obdd::Node ObddBuilder::node(Obdd::Ref r) const { return nodes_[r - 2]; }

Obdd ObddBuilder::finish(Obdd::Ref root) const {
  Obdd out;
  out.order_ = order_;
  // Compact to the reachable subgraph, children first.
  std::vector<Obdd::Ref> remap(nodes_.size() + 2, 0);
  std::vector<bool> done(nodes_.size() + 2, false);
  std::vector<Obdd::Ref> stack{root};
  while (!stack.empty()) {
    Obdd::Ref r = stack.back();
    if (done[r]) {
      stack.pop_back();
      continue;
    }
    if (Obdd::is_terminal(r)) {
      (r == Obdd::kTrue ? out.true_reachable_ : out.false_reachable_) = true;
      remap[r] = r;
      done[r] = true;
      stack.pop_back();
      continue;
    }
    const Obdd::Node& n = nodes_[r - 2];
    if (!done[n.lo]) {
      stack.push_back(n.lo);
      continue;
    }
    if (!done[n.hi]) {
      stack.push_back(n.hi);
      continue;
    }
    remap[r] = static_cast<Obdd::Ref>(out.nodes_.size() + 2);
    out.nodes_.push_back({n.level, remap[n.lo], remap[n.hi]});
    done[r] = true;
    stack.pop_back();
  }
  out.root_ = remap[root];
  out.validate_reduced();
  return out;
}

namespace {

Obdd::Ref table_to_obdd(ObddBuilder& builder, const BitVec& table, std::uint32_t level,
                        std::vector<std::unordered_map<BitVec, Obdd::Ref, BitVecHash>>& memo) {
  if (table.all_zero()) return Obdd::kFalse;
  if (table.all_one()) return Obdd::kTrue;
  auto it = memo[level].find(table);
  if (it != memo[level].end()) return it->second;
  const std::size_t half = table.size() / 2;
  BitVec t0(half), t1(half);
  for (std::size_t i = 0; i < half; ++i) {
    if (table.get(i)) t0.set(i, true);
    if (table.get(i + half)) t1.set(i, true);
  }
  const Obdd::Ref lo = table_to_obdd(builder, t0, level + 1, memo);
  const Obdd::Ref hi = table_to_obdd(builder, t1, level + 1, memo);
  const Obdd::Ref r = builder.make_node(level, lo, hi);
  memo[level].emplace(table, r);
  return r;
}

}  // namespace

Obdd from_oracle(const FunctionOracle& f, const std::vector<VarId>& sigma) {
  const std::size_t n = f.scope().size();
  if (n > kEnumerationCap) throw std::invalid_argument("from_oracle: scope too large");
  require_permutation_of_scope(sigma, f.scope());
  // Truth table in sigma order: sigma.front() is the most significant bit.
  const std::uint64_t rows = std::uint64_t{1} << n;
  BitVec table(rows);
  for (std::uint64_t r = 0; r < rows; ++r) {
    Assignment a = Assignment::from_row(sigma, r);
    if (f.evaluate(a)) table.set(r, true);
  }
  ObddBuilder builder(sigma);
  std::vector<std::unordered_map<BitVec, Obdd::Ref, BitVecHash>> memo(n);
  const Obdd::Ref root = table_to_obdd(builder, table, 0, memo);
  return builder.finish(root);
}

Obdd build_exact_count(std::uint32_t n, std::uint32_t i, const std::vector<VarId>& sigma) {
  if (n == 0) throw std::invalid_argument("build_exact_count: n must be positive");
  if (i > n) throw std::invalid_argument("build_exact_count: count out of range");
  if (sigma.size() != n) throw std::invalid_argument("build_exact_count: |sigma| != n");
  ObddBuilder builder(sigma);
  // States of the running-count automaton, bottom layer first: after all n
  // bits the count must equal i.
  std::vector<Obdd::Ref> below(n + 1);
  for (std::uint32_t c = 0; c <= n; ++c) below[c] = builder.constant(c == i);
  for (std::uint32_t level = n; level-- > 0;) {
    std::vector<Obdd::Ref> row(level + 1);
    for (std::uint32_t c = 0; c <= level; ++c)
      row[c] = builder.make_node(level, below[c], below[c + 1]);
    below = std::move(row);
  }
  return builder.finish(below[0]);
}

Obdd literal_obdd(VarId var, bool positive, const std::vector<VarId>& sigma) {
  ObddBuilder builder(sigma);
  return builder.finish(builder.literal(var, positive));
}

Obdd constant_obdd(bool value, const std::vector<VarId>& sigma) {
  ObddBuilder builder(sigma);
  return builder.finish(builder.constant(value));
}

Obdd build_prime(PrimeId p, std::uint32_t n, const std::vector<VarId>& sigma) {
  if (!p.valid_for(n))
    throw std::invalid_argument("build_prime: " + p.tag() + " invalid for n=" + std::to_string(n));
  switch (p.kind) {
    case PrimeId::Kind::Empty:
      return build_exact_count(n, 0, sigma);
    case PrimeId::Kind::Full:
      return build_exact_count(n, n, sigma);
    case PrimeId::Kind::WithoutIndex:
      return apply(ObddOp::And, build_exact_count(n, p.index, sigma),
                   literal_obdd(p.index, false, sigma));
    case PrimeId::Kind::WithIndex:
      return apply(ObddOp::And, build_exact_count(n, p.index, sigma),
                   literal_obdd(p.index, true, sigma));
  }
  throw std::invalid_argument("build_prime: bad prime id");
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<Obdd::Ref, Obdd::Ref>& p) const {
    return (static_cast<std::size_t>(p.first) << 32) ^ p.second;
  }
};

Obdd::Ref apply_rec(ObddOp op, const Obdd& f, const Obdd& g, Obdd::Ref rf, Obdd::Ref rg,
                    ObddBuilder& builder,
                    std::unordered_map<std::pair<Obdd::Ref, Obdd::Ref>, Obdd::Ref, PairHash>& memo) {
  if (Obdd::is_terminal(rf) && Obdd::is_terminal(rg)) {
    const bool a = rf == Obdd::kTrue, b = rg == Obdd::kTrue;
    return builder.constant(op == ObddOp::And ? (a && b) : (a || b));
  }
  if (op == ObddOp::And && (rf == Obdd::kFalse || rg == Obdd::kFalse))
    return Obdd::kFalse;
  if (op == ObddOp::Or && (rf == Obdd::kTrue || rg == Obdd::kTrue))
    return Obdd::kTrue;
  const auto key = std::make_pair(rf, rg);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  const std::uint32_t lf = f.level_of(rf), lg = g.level_of(rg);
  const std::uint32_t level = std::min(lf, lg);
  const Obdd::Ref f0 = lf == level ? f.node(rf).lo : rf;
  const Obdd::Ref f1 = lf == level ? f.node(rf).hi : rf;
  const Obdd::Ref g0 = lg == level ? g.node(rg).lo : rg;
  const Obdd::Ref g1 = lg == level ? g.node(rg).hi : rg;
  const Obdd::Ref lo = apply_rec(op, f, g, f0, g0, builder, memo);
  const Obdd::Ref hi = apply_rec(op, f, g, f1, g1, builder, memo);
  const Obdd::Ref r = builder.make_node(level, lo, hi);
  memo.emplace(key, r);
  return r;
}

}  // namespace

Obdd apply(ObddOp op, const Obdd& f, const Obdd& g) {
  if (f.ordering() != g.ordering())
    throw std::invalid_argument("apply: operand orderings differ");
  ObddBuilder builder(f.ordering());
  std::unordered_map<std::pair<Obdd::Ref, Obdd::Ref>, Obdd::Ref, PairHash> memo;
  const Obdd::Ref root = apply_rec(op, f, g, f.root(), g.root(), builder, memo);
  Obdd out = builder.finish(root);
  if (out.node_count() > f.node_count() * g.node_count())
    throw std::logic_error("apply: product size bound violated");
  return out;
}

Obdd condition(const Obdd& f, const Assignment& partial) {
  for (const auto& [var, _] : partial.entries())
    if (std::find(f.ordering().begin(), f.ordering().end(), var) == f.ordering().end())
      throw std::invalid_argument("condition: variable " + std::to_string(var) +
                                  " not in the ordering");
  ObddBuilder builder(f.ordering());
  std::unordered_map<Obdd::Ref, Obdd::Ref> memo;
  auto rec = [&](auto&& self, Obdd::Ref r) -> Obdd::Ref {
    if (Obdd::is_terminal(r)) return r;
    auto it = memo.find(r);
    if (it != memo.end()) return it->second;
    const Obdd::Node& n = f.node(r);
    Obdd::Ref out;
    if (auto v = partial.lookup(f.ordering()[n.level])) {
      out = self(self, *v ? n.hi : n.lo);
    } else {
      const Obdd::Ref lo = self(self, n.lo);
      const Obdd::Ref hi = self(self, n.hi);
      out = builder.make_node(n.level, lo, hi);
    }
    memo.emplace(r, out);
    return out;
  };
  Obdd out = builder.finish(rec(rec, f.root()));
  if (out.node_count() > f.node_count())
    throw std::logic_error("condition: node count increased");
  return out;
}

bool isomorphic(const Obdd& a, const Obdd& b) {
  if (a.ordering() != b.ordering()) return false;
  std::unordered_map<Obdd::Ref, Obdd::Ref> paired;
  auto rec = [&](auto&& self, Obdd::Ref ra, Obdd::Ref rb) -> bool {
    if (Obdd::is_terminal(ra) || Obdd::is_terminal(rb)) return ra == rb;
    auto it = paired.find(ra);
    if (it != paired.end()) return it->second == rb;
    const Obdd::Node& na = a.node(ra);
    const Obdd::Node& nb = b.node(rb);
    if (na.level != nb.level) return false;
    paired.emplace(ra, rb);
    return self(self, na.lo, nb.lo) && self(self, na.hi, nb.hi);
  };
  return rec(rec, a.root(), b.root());
}

namespace {

// Cofactor tables for the subset DP. Sub-row indices put the first free
// scope position at the most significant bit.
BitVec split_table(const BitVec& g, std::uint32_t nfree, std::uint32_t j, bool bit) {
  const std::uint32_t shift = nfree - 1 - j;
  const std::size_t out_rows = g.size() / 2;
  BitVec out(out_rows);
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  for (std::size_t o = 0; o < out_rows; ++o) {
    const std::size_t src = ((o >> shift) << (shift + 1)) |
                            (static_cast<std::size_t>(bit) << shift) | (o & low_mask);
    if (g.get(src)) out.set(o, true);
  }
  return out;
}

bool depends_on(const BitVec& g, std::uint32_t nfree, std::uint32_t j) {
  const std::uint32_t shift = nfree - 1 - j;
  const std::size_t half = g.size() / 2;
  const std::size_t low_mask = (std::size_t{1} << shift) - 1;
  for (std::size_t o = 0; o < half; ++o) {
    const std::size_t base = ((o >> shift) << (shift + 1)) | (o & low_mask);
    if (g.get(base) != g.get(base | (std::size_t{1} << shift))) return true;
  }
  return false;
}

}  // namespace

MinObddResult min_obdd_size_exact(const FunctionOracle& f, OrderingDpTable* table_out) {
  const std::uint32_t n = static_cast<std::uint32_t>(f.scope().size());
  if (n > 16) throw std::invalid_argument("min_obdd_size_exact: scope larger than 16");
  const std::uint32_t num_masks = 1u << n;
  const BitVec full = f.truth_table();

  // cnt[mask * n + p]: distinct cofactors after fixing `mask` that still
  // depend on scope position p. Filled layer by layer while the cofactor
  // sets of the previous layer are alive.
  std::vector<std::uint32_t> cnt(static_cast<std::size_t>(num_masks) * n, 0);
  std::vector<std::vector<BitVec>> cofactors(num_masks);
  std::vector<std::uint32_t> masks_by_size(num_masks);
  std::iota(masks_by_size.begin(), masks_by_size.end(), 0u);
  std::stable_sort(masks_by_size.begin(), masks_by_size.end(),
                   [](std::uint32_t a, std::uint32_t b) {
                     return std::popcount(a) < std::popcount(b);
                   });
  cofactors[0] = {full};

  auto free_positions = [&](std::uint32_t mask) {
    std::vector<std::uint32_t> free;
    for (std::uint32_t p = 0; p < n; ++p)
      if (!(mask & (1u << p))) free.push_back(p);
    return free;
  };

  for (std::uint32_t mask : masks_by_size) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) == n) break;
    auto& tables = cofactors[mask];
    const auto free = free_positions(mask);
    const std::uint32_t nfree = static_cast<std::uint32_t>(free.size());
    for (const BitVec& g : tables)
      for (std::uint32_t j = 0; j < nfree; ++j)
        if (depends_on(g, nfree, j)) ++cnt[static_cast<std::size_t>(mask) * n + free[j]];
    for (std::uint32_t j = 0; j < nfree; ++j) {
      const std::uint32_t next = mask | (1u << free[j]);
      if (!cofactors[next].empty() || next == num_masks - 1) continue;
      std::unordered_set<BitVec, BitVecHash> seen;
      auto& out = cofactors[next];
      for (const BitVec& g : tables)
        for (bool bit : {false, true}) {
          BitVec h = split_table(g, nfree, j, bit);
          if (seen.insert(h).second) out.push_back(std::move(h));
        }
    }
    tables.clear();
    tables.shrink_to_fit();
  }

  // Suffix DP: cost of completing an order once `mask` is placed first.
  std::vector<std::uint64_t> suffix(num_masks, 0);
  for (auto it = masks_by_size.rbegin(); it != masks_by_size.rend(); ++it) {
    const std::uint32_t mask = *it;
    if (mask == num_masks - 1) continue;
    std::uint64_t best = ~std::uint64_t{0};
    for (std::uint32_t p = 0; p < n; ++p) {
      if (mask & (1u << p)) continue;
      best = std::min(best, cnt[static_cast<std::size_t>(mask) * n + p] +
                                suffix[mask | (1u << p)]);
    }
    suffix[mask] = best;
  }

  // Greedy front-to-back walk gives the lexicographically smallest witness
  // (scope order is ascending by variable id).
  MinObddResult result;
  std::uint32_t mask = 0;
  for (std::uint32_t step = 0; step < n; ++step) {
    for (std::uint32_t p = 0; p < n; ++p) {
      if (mask & (1u << p)) continue;
      if (cnt[static_cast<std::size_t>(mask) * n + p] + suffix[mask | (1u << p)] ==
          suffix[mask]) {
        result.ordering.push_back(f.scope()[p]);
        mask |= 1u << p;
        break;
      }
    }
  }
  result.internal_nodes = suffix[0];
  result.arc_count = 6 * result.internal_nodes;
  const bool constant = full.all_zero() || full.all_one();
  result.node_count = result.internal_nodes + (constant ? 1 : 2);
  if (table_out) {
    table_out->n = n;
    table_out->suffix_cost = std::move(suffix);
  }
  return result;
}

std::string obdd_to_dot(const Obdd& f, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n";
  os << "  ordering=out;\n";
  bool false_seen = false, true_seen = false;
  std::vector<bool> emitted(f.internal_node_count(), false);
  auto rec = [&](auto&& self, Obdd::Ref r) -> void {
    if (r == Obdd::kFalse) {
      false_seen = true;
      return;
    }
    if (r == Obdd::kTrue) {
      true_seen = true;
      return;
    }
    if (emitted[r - 2]) return;
    emitted[r - 2] = true;
    const Obdd::Node& n = f.node(r);
    os << "  n" << r << " [shape=circle, label=\"x" << f.ordering()[n.level] << "\"];\n";
    self(self, n.lo);
    self(self, n.hi);
    auto target = [&](Obdd::Ref c) {
      return c == Obdd::kFalse ? std::string("f") : c == Obdd::kTrue ? std::string("t")
                                                                     : "n" + std::to_string(c);
    };
    os << "  n" << r << " -> " << target(n.lo) << " [style=dashed];\n";
    os << "  n" << r << " -> " << target(n.hi) << " [style=solid];\n";
  };
  rec(rec, f.root());
  if (false_seen || f.root() == Obdd::kFalse)
    os << "  f [shape=box, label=\"0\"];\n";
  if (true_seen || f.root() == Obdd::kTrue)
    os << "  t [shape=box, label=\"1\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace sddkit
