#include "sddkit/boolfn.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace sddkit {

namespace {

std::uint32_t parse_u32(std::string_view s, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(s) + "'");
  return value;
}

}  // namespace

Assignment Assignment::from_row(const std::vector<VarId>& scope, std::uint64_t row) {
  Assignment a;
  const std::size_t k = scope.size();
  a.entries_.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    a.entries_.emplace_back(scope[j], (row >> (k - 1 - j)) & 1u);
  std::sort(a.entries_.begin(), a.entries_.end());
  return a;
}

void Assignment::set(VarId var, bool value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(),
                             std::pair<VarId, bool>{var, false},
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it != entries_.end() && it->first == var)
    it->second = value;
  else
    entries_.insert(it, {var, value});
}

std::optional<bool> Assignment::lookup(VarId var) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(),
                             std::pair<VarId, bool>{var, false},
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  if (it != entries_.end() && it->first == var) return it->second;
  return std::nullopt;
}

bool Assignment::value_of(VarId var) const {
  auto v = lookup(var);
  if (!v) throw std::out_of_range("variable " + std::to_string(var) + " is unassigned");
  return *v;
}

bool Assignment::covers(const std::vector<VarId>& vars) const {
  return std::all_of(vars.begin(), vars.end(), [&](VarId v) { return contains(v); });
}

std::string Assignment::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ' ';
    os << entries_[i].first << '=' << (entries_[i].second ? '1' : '0');
  }
  os << '}';
  return os.str();
}

bool PrimeId::valid_for(std::uint32_t n) const {
  switch (kind) {
    case Kind::Empty:
    case Kind::Full:
      return n >= 1;
    case Kind::WithoutIndex:
    case Kind::WithIndex:
      return index >= 1 && index + 1 <= n;
  }
  return false;
}

std::string PrimeId::tag() const {
  switch (kind) {
    case Kind::Empty: return "p0";
    case Kind::Full: return "pn";
    case Kind::WithoutIndex: return "p" + std::to_string(index) + ".0";
    case Kind::WithIndex: return "p" + std::to_string(index) + ".1";
  }
  return "?";
}

PrimeId PrimeId::from_tag(std::string_view tag) {
  if (tag == "p0") return empty();
  if (tag == "pn") return full();
  if (tag.size() >= 4 && tag.front() == 'p') {
    auto dot = tag.find('.');
    if (dot != std::string_view::npos && dot + 2 == tag.size()) {
      std::uint32_t i = parse_u32(tag.substr(1, dot - 1), "prime index");
      if (tag.back() == '0') return without_index(i);
      if (tag.back() == '1') return with_index(i);
    }
  }
  throw std::invalid_argument("bad prime tag: '" + std::string(tag) +
                              "' (want p0, pn, p<i>.0 or p<i>.1)");
}

std::vector<PrimeId> prime_family_ids(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("prime family needs n >= 1");
  std::vector<PrimeId> ids;
  ids.reserve(2 * n);
  ids.push_back(PrimeId::empty());
  ids.push_back(PrimeId::full());
  for (std::uint32_t i = 1; i + 1 <= n; ++i) {
    ids.push_back(PrimeId::without_index(i));
    ids.push_back(PrimeId::with_index(i));
  }
  return ids;
}

FunctionOracle::FunctionOracle(std::vector<VarId> scope, EvalFn eval, std::string name)
    : scope_(std::move(scope)), eval_(std::move(eval)), name_(std::move(name)) {
  std::vector<VarId> sorted = scope_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("oracle scope has duplicate variables");
}

bool FunctionOracle::evaluate(const Assignment& a) const {
  if (!a.covers(scope_))
    throw std::invalid_argument("assignment does not cover the scope of " + name_);
  return eval_(a);
}

bool FunctionOracle::evaluate_row(std::uint64_t row) const {
  return eval_(Assignment::from_row(scope_, row));
}

BitVec FunctionOracle::truth_table() const {
  if (scope_.size() > kEnumerationCap)
    throw std::invalid_argument("scope of " + name_ + " too large to materialize");
  const std::uint64_t rows = std::uint64_t{1} << scope_.size();
  BitVec table(rows);
  for (std::uint64_t r = 0; r < rows; ++r)
    if (evaluate_row(r)) table.set(r, true);
  return table;
}

std::uint64_t FunctionOracle::model_count() const {
  return truth_table().count();
}

FunctionOracle FunctionOracle::restrict(const Assignment& partial) const {
  for (const auto& [var, _] : partial.entries())
    if (std::find(scope_.begin(), scope_.end(), var) == scope_.end())
      throw std::invalid_argument("restriction variable " + std::to_string(var) +
                                  " outside the scope of " + name_);
  std::vector<VarId> remaining;
  for (VarId v : scope_)
    if (!partial.contains(v)) remaining.push_back(v);
  EvalFn parent = eval_;
  Assignment fixed = partial;
  return FunctionOracle(
      std::move(remaining),
      [parent, fixed](const Assignment& a) {
        Assignment merged = a;
        for (const auto& [var, value] : fixed.entries()) merged.set(var, value);
        return parent(merged);
      },
      name_ + "|restricted");
}

FunctionOracle FunctionOracle::renamed(std::vector<VarId> new_scope) const {
  if (new_scope.size() != scope_.size())
    throw std::invalid_argument("renaming must preserve arity");
  EvalFn inner = eval_;
  std::vector<VarId> old_scope = scope_;
  std::vector<VarId> fresh = new_scope;
  return FunctionOracle(
      std::move(new_scope),
      [inner, old_scope, fresh](const Assignment& a) {
        Assignment translated;
        for (std::size_t j = 0; j < fresh.size(); ++j)
          translated.set(old_scope[j], a.value_of(fresh[j]));
        return inner(translated);
      },
      name_);
}

std::vector<VarId> x_scope(std::uint32_t n) {
  std::vector<VarId> scope(n);
  for (std::uint32_t i = 0; i < n; ++i) scope[i] = i + 1;
  return scope;
}

std::vector<VarId> xy_scope(std::uint32_t n) {
  std::vector<VarId> scope = x_scope(n);
  for (std::uint32_t j = 0; j <= n; ++j) scope.push_back(y_var(n, j));
  return scope;
}

VarId y_var(std::uint32_t n, std::uint32_t j) {
  if (j > n) throw std::invalid_argument("y index out of range");
  return n + 1 + j;
}

namespace {

std::uint32_t weight_of(const Assignment& a, std::uint32_t n) {
  std::uint32_t w = 0;
  for (std::uint32_t i = 1; i <= n; ++i) w += a.value_of(i) ? 1 : 0;
  return w;
}

}  // namespace

FunctionOracle hwb_oracle(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("hwb needs n >= 1");
  return FunctionOracle(
      x_scope(n),
      [n](const Assignment& a) {
        const std::uint32_t w = weight_of(a, n);
        return w >= 1 && a.value_of(w);
      },
      "hwb:" + std::to_string(n));
}

FunctionOracle exact_count_oracle(std::uint32_t n, std::uint32_t i) {
  if (n == 0) throw std::invalid_argument("exact count needs n >= 1");
  if (i > n) throw std::invalid_argument("exact count index out of range");
  return FunctionOracle(
      x_scope(n),
      [n, i](const Assignment& a) { return weight_of(a, n) == i; },
      "exact:" + std::to_string(n) + ":" + std::to_string(i));
}

FunctionOracle prime_oracle(PrimeId p, std::uint32_t n) {
  if (!p.valid_for(n))
    throw std::invalid_argument("prime " + p.tag() + " invalid for n=" + std::to_string(n));
  return FunctionOracle(
      x_scope(n),
      [p, n](const Assignment& a) {
        const std::uint32_t w = weight_of(a, n);
        switch (p.kind) {
          case PrimeId::Kind::Empty: return w == 0;
          case PrimeId::Kind::Full: return w == n;
          case PrimeId::Kind::WithoutIndex: return w == p.index && !a.value_of(p.index);
          case PrimeId::Kind::WithIndex: return w == p.index && a.value_of(p.index);
        }
        return false;
      },
      "prime:" + std::to_string(n) + ":" + p.tag());
}

FunctionOracle generalized_hwb_oracle(std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("ghwb needs n >= 1");
  return FunctionOracle(
      xy_scope(n),
      [n](const Assignment& a) {
        // Exactly one prime holds; its sub decides the value.
        const std::uint32_t w = weight_of(a, n);
        if (w == 0) return !a.value_of(y_var(n, 0));
        if (w == n) return a.value_of(y_var(n, n));
        return a.value_of(w) ? a.value_of(y_var(n, w)) : !a.value_of(y_var(n, w));
      },
      "ghwb:" + std::to_string(n));
}

FunctionOracle parse_function_spec(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = spec.find(':', start);
    if (colon == std::string_view::npos) {
      parts.push_back(spec.substr(start));
      break;
    }
    parts.push_back(spec.substr(start, colon - start));
    start = colon + 1;
  }
  if (parts.size() == 2 && parts[0] == "hwb") return hwb_oracle(parse_u32(parts[1], "n"));
  if (parts.size() == 2 && parts[0] == "ghwb")
    return generalized_hwb_oracle(parse_u32(parts[1], "n"));
  if (parts.size() == 3 && parts[0] == "exact")
    return exact_count_oracle(parse_u32(parts[1], "n"), parse_u32(parts[2], "i"));
  if (parts.size() == 3 && parts[0] == "prime")
    return prime_oracle(PrimeId::from_tag(parts[2]), parse_u32(parts[1], "n"));
  throw std::invalid_argument("bad function spec: '" + std::string(spec) +
                              "' (want hwb:<n>, exact:<n>:<i>, prime:<n>:<tag> or ghwb:<n>)");
}

}  // namespace sddkit
