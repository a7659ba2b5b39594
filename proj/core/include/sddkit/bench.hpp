#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sddkit/constructions.hpp"
#include "sddkit/report.hpp"

namespace sddkit {

/// One row per (n, construction) for n in [from, to]: SDD_FN sizes from the
/// compressed construction and, for n <= 16, OBDD_MIN sizes of HWB_n from
/// the exact ordering search. Custom sigma/rho are accepted only for
/// single-n ranges. from > to yields no rows.
std::vector<SizeReport> separation_rows(std::uint32_t from, std::uint32_t to,
                                        const std::optional<std::vector<VarId>>& sigma = {},
                                        const std::optional<std::vector<VarId>>& rho = {});

/// Per n in [from, to] (to <= 16): the HWB SDD before compression
/// (SDD_HWB), after compression over the same vtree (SDD_HWB_COMPRESSED),
/// and the fixed-order OBDD of HWB_n the compressed size tracks
/// (OBDD_FIXED).
std::vector<SizeReport> compress_blowup_rows(std::uint32_t from, std::uint32_t to);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::uint32_t n = 0;
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
  /// One "PASS name" / "FAIL name: detail" line per check.
  std::string to_string() const;
};

/// Aggregated per-n checks: validation, compression status, exhaustive
/// semantics, the partition fact (by enumeration and by OBDD algebra),
/// the conditioning identity and model counts. n <= 12; the exhaustive
/// F_n sweep switches to deterministic sampling above n = 10.
VerifyReport verify_constructions(std::uint32_t n);
VerifyReport verify_constructions(const ConstructionArtifact& hwb,
                                  const ConstructionArtifact& fn);

/// Renders the object named by `object_spec` in `format`. Objects:
/// hwb-sdd:<n>, fn-sdd:<n>, exact:<n>:<i>, prime:<n>:<tag>, vtree:hwb:<n>,
/// vtree:fn:<n>, vtree:rl:<v1,v2,...>. Formats: sdd, vtree, dot.
std::string export_object(std::string_view object_spec, std::string_view format);

}  // namespace sddkit
