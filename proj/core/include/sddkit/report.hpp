#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sddkit {

/// One measurement row of the bench CSV output. Rows are keyed by
/// (function, n, construction).
struct SizeReport {
  std::string function;
  std::uint32_t n = 0;
  std::string construction;  // SDD_HWB, SDD_FN, OBDD_FIXED, OBDD_MIN, SDD_HWB_COMPRESSED
  std::uint64_t nodes = 0;
  std::uint64_t arcs = 0;
  double ms = 0.0;
  std::string descriptor;
};

inline constexpr const char* kCsvHeader = "function,n,construction,nodes,arcs,ms,descriptor";

std::string to_csv_row(const SizeReport& row);
/// Header plus one line per row, LF endings.
std::string to_csv(const std::vector<SizeReport>& rows);

}  // namespace sddkit
