#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sddkit/obdd.hpp"
#include "sddkit/report.hpp"
#include "sddkit/sdd.hpp"
#include "sddkit/vtree.hpp"

namespace sddkit {

/// A built SDD together with the store that owns it and its measured size.
struct ConstructionArtifact {
  enum class Role { Hwb, GeneralizedHwb };

  std::uint32_t n = 0;
  Role role = Role::Hwb;
  std::shared_ptr<SddEnv> env;
  SddRef root;
  SizeReport report;
};

/// OBDDs for the 2n primes in formula order (P_0, P_n, P_{1,0}, P_{1,1},
/// ...), each over `sigma`.
std::vector<Obdd> build_prime_family(std::uint32_t n, const std::vector<VarId>& sigma);

/// The cubic-size SDD for HWB_n: a single root decision with 2n elements
/// whose primes are the prime-family OBDDs embedded over the left subtree
/// and whose subs are constants. Not compressed for n >= 2.
ConstructionArtifact build_hwb_sdd(std::uint32_t n);
ConstructionArtifact build_hwb_sdd(std::uint32_t n, const std::vector<VarId>& sigma);

/// The cubic-size compressed SDD for F_n: same primes, literal subs
/// ~y_0, y_n, ~y_i, y_i over the right subtree.
ConstructionArtifact build_fn_sdd(std::uint32_t n);
ConstructionArtifact build_fn_sdd(std::uint32_t n, const std::vector<VarId>& sigma,
                                  const std::vector<VarId>& rho);

/// Exhaustive agreement check between the constructed decision form, the
/// (E^1 and x_1) or ... or (E^n and x_n) form, and the direct oracle.
struct EquivalenceCertificate {
  std::uint32_t n = 0;
  std::uint64_t cases_checked = 0;
  bool pass = false;
  std::optional<Assignment> witness;
  std::string detail;
};

EquivalenceCertificate hwb_equivalence_certificate(std::uint32_t n);
EquivalenceCertificate hwb_equivalence_certificate(const ConstructionArtifact& artifact);

}  // namespace sddkit
