#include "sddkit/vtree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace sddkit {

namespace {

int parse_int(std::string_view s, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0)
    throw std::invalid_argument("vtree: bad " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

}  // namespace

const Vtree::Node& Vtree::node_at(int id) const {
  if (id < 0 || id >= node_count())
    throw std::out_of_range("vtree: unknown node id " + std::to_string(id));
  return nodes_[static_cast<std::size_t>(id)];
}

int Vtree::left(int id) const {
  const Node& n = node_at(id);
  if (n.left == kNone) throw std::invalid_argument("vtree: leaf has no children");
  return n.left;
}

int Vtree::right(int id) const {
  const Node& n = node_at(id);
  if (n.right == kNone) throw std::invalid_argument("vtree: leaf has no children");
  return n.right;
}

VarId Vtree::var_at(int id) const {
  const Node& n = node_at(id);
  if (n.left != kNone) throw std::invalid_argument("vtree: internal node has no variable");
  return n.var;
}

int Vtree::leaf_of(VarId var) const {
  auto it = std::lower_bound(leaf_by_var_.begin(), leaf_by_var_.end(),
                             std::pair<VarId, int>{var, 0},
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it == leaf_by_var_.end() || it->first != var)
    throw std::out_of_range("vtree: variable " + std::to_string(var) + " not in tree");
  return it->second;
}

bool Vtree::has_var(VarId var) const {
  auto it = std::lower_bound(leaf_by_var_.begin(), leaf_by_var_.end(),
                             std::pair<VarId, int>{var, 0},
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return it != leaf_by_var_.end() && it->first == var;
}

bool Vtree::in_subtree(int outer, int inner) const {
  const Node& o = node_at(outer);
  (void)node_at(inner);
  return o.first <= inner && inner <= o.last;
}

bool Vtree::var_below(int id, VarId var) const {
  return has_var(var) && in_subtree(id, leaf_of(var));
}

const std::vector<VarId>& Vtree::vars_below(int id) const {
  (void)node_at(id);
  return vars_below_[static_cast<std::size_t>(id)];
}

Vtree Vtree::leaf(VarId var) {
  if (var == 0) throw std::invalid_argument("vtree: variable ids are positive");
  Vtree t;
  t.nodes_.push_back(Node{kNone, kNone, kNone, var, 0, 0});
  t.root_ = 0;
  t.index();
  return t;
}

Vtree Vtree::compose(const Vtree& left, const Vtree& right) {
  Vtree t;
  const int shift = left.node_count() + 1;  // right-subtree ids move past the root
  const int root_id = left.node_count();
  t.nodes_.resize(static_cast<std::size_t>(left.node_count() + right.node_count() + 1));
  for (int i = 0; i < left.node_count(); ++i) t.nodes_[static_cast<std::size_t>(i)] = left.nodes_[static_cast<std::size_t>(i)];
  for (int i = 0; i < right.node_count(); ++i) {
    Node n = right.nodes_[static_cast<std::size_t>(i)];
    if (n.left != kNone) n.left += shift;
    if (n.right != kNone) n.right += shift;
    t.nodes_[static_cast<std::size_t>(i + shift)] = n;
  }
  t.nodes_[static_cast<std::size_t>(root_id)] =
      Node{left.root_, right.root_ + shift, kNone, 0, 0, 0};
  t.root_ = root_id;
  t.index();
  return t;
}

Vtree Vtree::right_linear(const std::vector<VarId>& order) {
  if (order.empty()) throw std::invalid_argument("vtree: empty ordering");
  Vtree t = leaf(order.back());
  for (auto it = std::next(order.rbegin()); it != order.rend(); ++it)
    t = compose(leaf(*it), t);
  return t;
}

void Vtree::index() {
  const int count = node_count();
  leaf_by_var_.clear();
  vars_below_.assign(static_cast<std::size_t>(count), {});

  // In-order walk from the root: ids must come out as 0, 1, 2, ...
  std::vector<int> state(static_cast<std::size_t>(count), 0);
  std::vector<int> stack;
  stack.push_back(root_);
  int expected = 0;
  int visited = 0;
  while (!stack.empty()) {
    int id = stack.back();
    Node& n = nodes_[static_cast<std::size_t>(id)];
    int& st = state[static_cast<std::size_t>(id)];
    if (n.left != kNone && st == 0) {
      st = 1;
      stack.push_back(n.left);
      continue;
    }
    if (id != expected)
      throw std::invalid_argument("vtree: node ids are not in-order consistent");
    ++expected;
    ++visited;
    stack.pop_back();
    if (n.left != kNone) {
      nodes_[static_cast<std::size_t>(n.left)].parent = id;
      nodes_[static_cast<std::size_t>(n.right)].parent = id;
      stack.push_back(n.right);
    }
  }
  if (visited != count)
    throw std::invalid_argument("vtree: disconnected nodes");

  // Bottom-up (decreasing id on the left spine is not enough; use explicit
  // post-order) to fill intervals and variable sets.
  std::vector<int> post;
  post.reserve(static_cast<std::size_t>(count));
  stack.push_back(root_);
  while (!stack.empty()) {
    int id = stack.back();
    stack.pop_back();
    post.push_back(id);
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left != kNone) {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    Node& n = nodes_[static_cast<std::size_t>(*it)];
    auto& vars = vars_below_[static_cast<std::size_t>(*it)];
    if (n.left == kNone) {
      n.first = n.last = *it;
      vars = {n.var};
      leaf_by_var_.emplace_back(n.var, *it);
    } else {
      const Node& l = nodes_[static_cast<std::size_t>(n.left)];
      const Node& r = nodes_[static_cast<std::size_t>(n.right)];
      n.first = l.first;
      n.last = r.last;
      const auto& lv = vars_below_[static_cast<std::size_t>(n.left)];
      const auto& rv = vars_below_[static_cast<std::size_t>(n.right)];
      vars.resize(lv.size() + rv.size());
      std::merge(lv.begin(), lv.end(), rv.begin(), rv.end(), vars.begin());
    }
  }
  std::sort(leaf_by_var_.begin(), leaf_by_var_.end());
  for (std::size_t i = 1; i < leaf_by_var_.size(); ++i)
    if (leaf_by_var_[i].first == leaf_by_var_[i - 1].first)
      throw std::invalid_argument("vtree: variable " + std::to_string(leaf_by_var_[i].first) +
                                  " appears on two leaves");
}

Vtree Vtree::subtree(int id) const {
  const Node& n = node_at(id);
  if (id == root_) return *this;
  Vtree t;
  const int offset = n.first;
  t.nodes_.resize(static_cast<std::size_t>(n.last - n.first + 1));
  for (int i = n.first; i <= n.last; ++i) {
    Node copy = nodes_[static_cast<std::size_t>(i)];
    if (copy.left != kNone) {
      copy.left -= offset;
      copy.right -= offset;
    }
    copy.parent = kNone;
    t.nodes_[static_cast<std::size_t>(i - offset)] = copy;
  }
  t.root_ = id - offset;
  t.index();
  return t;
}

std::vector<VarId> Vtree::leftfirst_ordering() const {
  return leftfirst_ordering(root_);
}

std::vector<VarId> Vtree::leftfirst_ordering(int id) const {
  const Node& n = node_at(id);
  std::vector<VarId> order;
  // In-order ids make the left-first traversal the id order of the leaves.
  for (int i = n.first; i <= n.last; ++i)
    if (is_leaf(i)) order.push_back(nodes_[static_cast<std::size_t>(i)].var);
  return order;
}

bool Vtree::is_right_linear() const {
  for (int id = 0; id < node_count(); ++id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left != kNone && !is_leaf(n.left)) return false;
  }
  return true;
}

std::string Vtree::serialize() const {
  std::ostringstream os;
  os << "vtree " << node_count() << '\n';
  for (int id = 0; id < node_count(); ++id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left == kNone)
      os << "L " << id << ' ' << n.var << '\n';
    else
      os << "I " << id << ' ' << n.left << ' ' << n.right << '\n';
  }
  return os.str();
}

Vtree Vtree::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  int count = -1;
  Vtree t;
  std::vector<bool> defined;
  std::vector<bool> is_child;
  auto need_id = [&](int id) {
    if (id < 0 || id >= count)
      throw std::invalid_argument("vtree: node id " + std::to_string(id) + " out of range");
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "vtree") {
      if (count >= 0) throw std::invalid_argument("vtree: duplicate header");
      std::string num;
      ls >> num;
      count = parse_int(num, "node count");
      if (count == 0 || count % 2 == 0)
        throw std::invalid_argument("vtree: node count must be odd and positive");
      t.nodes_.resize(static_cast<std::size_t>(count));
      defined.assign(static_cast<std::size_t>(count), false);
      is_child.assign(static_cast<std::size_t>(count), false);
    } else if (head == "L" || head == "I") {
      if (count < 0) throw std::invalid_argument("vtree: node line before header");
      std::string a, b, c;
      ls >> a >> b;
      int id = parse_int(a, "node id");
      need_id(id);
      if (defined[static_cast<std::size_t>(id)])
        throw std::invalid_argument("vtree: node " + std::to_string(id) + " defined twice");
      defined[static_cast<std::size_t>(id)] = true;
      Node& n = t.nodes_[static_cast<std::size_t>(id)];
      if (head == "L") {
        int var = parse_int(b, "variable id");
        if (var == 0) throw std::invalid_argument("vtree: variable ids are positive");
        n.var = static_cast<VarId>(var);
      } else {
        ls >> c;
        n.left = parse_int(b, "left child");
        n.right = parse_int(c, "right child");
        need_id(n.left);
        need_id(n.right);
        is_child[static_cast<std::size_t>(n.left)] = true;
        is_child[static_cast<std::size_t>(n.right)] = true;
      }
      std::string rest;
      if (ls >> rest) throw std::invalid_argument("vtree: trailing tokens on line '" + line + "'");
    } else {
      throw std::invalid_argument("vtree: malformed line '" + line + "'");
    }
  }
  if (count < 0) throw std::invalid_argument("vtree: missing header");
  for (int id = 0; id < count; ++id)
    if (!defined[static_cast<std::size_t>(id)])
      throw std::invalid_argument("vtree: node " + std::to_string(id) + " undefined");
  t.root_ = kNone;
  for (int id = 0; id < count; ++id)
    if (!is_child[static_cast<std::size_t>(id)]) {
      if (t.root_ != kNone) throw std::invalid_argument("vtree: multiple roots");
      t.root_ = id;
    }
  if (t.root_ == kNone) throw std::invalid_argument("vtree: no root");
  t.index();
  return t;
}

bool operator==(const Vtree& a, const Vtree& b) {
  if (a.node_count() != b.node_count() || a.root_ != b.root_) return false;
  for (int id = 0; id < a.node_count(); ++id) {
    const auto& x = a.nodes_[static_cast<std::size_t>(id)];
    const auto& y = b.nodes_[static_cast<std::size_t>(id)];
    if (x.left != y.left || x.right != y.right || x.var != y.var) return false;
  }
  return true;
}

Vtree hwb_vtree(std::uint32_t n, const std::vector<VarId>& sigma) {
  return hwb_vtree(n, sigma, static_cast<VarId>(n + 1));
}

Vtree hwb_vtree(std::uint32_t n, const std::vector<VarId>& sigma, VarId dummy) {
  if (sigma.size() != n) throw std::invalid_argument("hwb_vtree: |sigma| must equal n");
  return Vtree::compose(Vtree::right_linear(sigma), Vtree::leaf(dummy));
}

Vtree fn_vtree(std::uint32_t n, const std::vector<VarId>& sigma,
               const std::vector<VarId>& rho) {
  if (sigma.size() != n) throw std::invalid_argument("fn_vtree: |sigma| must equal n");
  if (rho.size() != n + 1) throw std::invalid_argument("fn_vtree: |rho| must equal n+1");
  return Vtree::compose(Vtree::right_linear(sigma), Vtree::right_linear(rho));
}

}  // namespace sddkit
