#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sddkit/bitvec.hpp"

namespace sddkit {

/// Variables are positive integers. The hidden weighted bit family uses
/// x_i = i for i = 1..n and y_j = n+1+j for j = 0..n, so one integer range
/// covers F_n without collisions.
using VarId = std::uint32_t;

/// Largest scope for which truth tables and model counts are materialized
/// by enumeration (2^24 rows).
inline constexpr std::uint32_t kEnumerationCap = 24;

/// Total or partial map from variables to bits. Entries are kept sorted by
/// variable id.
class Assignment {
public:
  Assignment() = default;

  /// Decodes `row` over `scope` with scope.front() as the most significant
  /// bit. Row 0b10 over scope (x1,x2) sets x1=1, x2=0.
  static Assignment from_row(const std::vector<VarId>& scope, std::uint64_t row);

  void set(VarId var, bool value);

  /// Value of `var`; throws std::out_of_range if unassigned.
  bool value_of(VarId var) const;
  std::optional<bool> lookup(VarId var) const;

  bool contains(VarId var) const { return lookup(var).has_value(); }
  bool covers(const std::vector<VarId>& vars) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<VarId, bool>>& entries() const { return entries_; }

  std::string to_string() const;

private:
  std::vector<std::pair<VarId, bool>> entries_;
};

/// Identifies one member of the 2n-element prime family over x_1..x_n:
/// the empty set, the full set, and for 1 <= i <= n-1 the weight-i sets
/// split by whether they contain index i.
struct PrimeId {
  enum class Kind : std::uint8_t { Empty, Full, WithoutIndex, WithIndex };

  Kind kind = Kind::Empty;
  std::uint32_t index = 0;  // only meaningful for WithoutIndex / WithIndex

  static PrimeId empty() { return {Kind::Empty, 0}; }
  static PrimeId full() { return {Kind::Full, 0}; }
  static PrimeId without_index(std::uint32_t i) { return {Kind::WithoutIndex, i}; }
  static PrimeId with_index(std::uint32_t i) { return {Kind::WithIndex, i}; }

  bool valid_for(std::uint32_t n) const;
  /// Tag syntax used by the CLI: p0, pn, p<i>.0, p<i>.1.
  std::string tag() const;
  static PrimeId from_tag(std::string_view tag);

  friend bool operator==(const PrimeId&, const PrimeId&) = default;
};

/// The prime family in formula order: P_0, P_n, P_{1,0}, P_{1,1}, ...,
/// P_{n-1,0}, P_{n-1,1}. Exactly 2n entries.
std::vector<PrimeId> prime_family_ids(std::uint32_t n);

/// A semantic boolean function over an ordered variable scope; the ground
/// truth against which every diagram in this library is checked.
class FunctionOracle {
public:
  using EvalFn = std::function<bool(const Assignment&)>;

  FunctionOracle(std::vector<VarId> scope, EvalFn eval, std::string name = "fn");

  const std::vector<VarId>& scope() const { return scope_; }
  const std::string& name() const { return name_; }

  /// Evaluates on a total assignment of the scope (extra variables are
  /// tolerated; missing ones are an error).
  bool evaluate(const Assignment& a) const;

  /// Evaluates the row `row` of the scope-order lexicographic enumeration.
  bool evaluate_row(std::uint64_t row) const;

  /// 2^|scope| bits, row r at bit r. Requires |scope| <= kEnumerationCap.
  BitVec truth_table() const;

  /// Number of satisfying assignments over the scope.
  std::uint64_t model_count() const;

  /// Restriction: fixes `partial` (domain must be inside the scope) and
  /// returns an oracle over the remaining variables in scope order.
  FunctionOracle restrict(const Assignment& partial) const;

  /// Same function with the scope renamed positionally.
  FunctionOracle renamed(std::vector<VarId> new_scope) const;

private:
  std::vector<VarId> scope_;
  EvalFn eval_;
  std::string name_;
};

/// Scope {1, ..., n} of the x variables.
std::vector<VarId> x_scope(std::uint32_t n);
/// Scope {1, ..., n, n+1, ..., 2n+1}: the x variables followed by y_0..y_n.
std::vector<VarId> xy_scope(std::uint32_t n);
/// Id of y_j in the generalized function, j = 0..n.
VarId y_var(std::uint32_t n, std::uint32_t j);

/// HWB_n: true iff the input has weight i >= 1 and bit x_i is set.
FunctionOracle hwb_oracle(std::uint32_t n);
/// E^i_n: true iff the input has weight exactly i.
FunctionOracle exact_count_oracle(std::uint32_t n, std::uint32_t i);
/// One member of the prime family.
FunctionOracle prime_oracle(PrimeId p, std::uint32_t n);
/// F_n over x_1..x_n, y_0..y_n. Fixing all y to 1 yields HWB_n.
FunctionOracle generalized_hwb_oracle(std::uint32_t n);

/// Parses the CLI function syntax: hwb:<n>, exact:<n>:<i>, prime:<n>:<tag>,
/// ghwb:<n>.
FunctionOracle parse_function_spec(std::string_view spec);

}  // namespace sddkit
