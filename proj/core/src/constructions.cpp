#include "sddkit/constructions.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace sddkit {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string join_ids(const std::vector<VarId>& ids) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) os << ',';
    os << ids[i];
  }
  return os.str();
}

bool prime_is_taken(const PrimeId& p) {
  return p.kind == PrimeId::Kind::Full || p.kind == PrimeId::Kind::WithIndex;
}

}  // namespace

std::vector<Obdd> build_prime_family(std::uint32_t n, const std::vector<VarId>& sigma) {
  if (n == 0) throw std::invalid_argument("prime family needs n >= 1");
  std::vector<Obdd> family;
  family.reserve(2 * n);
  for (const PrimeId& p : prime_family_ids(n)) family.push_back(build_prime(p, n, sigma));
  return family;
}

ConstructionArtifact build_hwb_sdd(std::uint32_t n) { return build_hwb_sdd(n, x_scope(n)); }

ConstructionArtifact build_hwb_sdd(std::uint32_t n, const std::vector<VarId>& sigma) {
  if (sigma.size() != n) throw std::invalid_argument("build_hwb_sdd: |sigma| != n");
  const auto start = Clock::now();
  ConstructionArtifact artifact;
  artifact.n = n;
  artifact.role = ConstructionArtifact::Role::Hwb;
  artifact.env = std::make_shared<SddEnv>(hwb_vtree(n, sigma));
  SddEnv& env = *artifact.env;
  const int root_node = env.vtree().root();
  const int left = env.vtree().left(root_node);

  const std::vector<PrimeId> ids = prime_family_ids(n);
  const std::vector<Obdd> primes = build_prime_family(n, sigma);
  std::vector<SddElement> elements;
  elements.reserve(2 * n);
  for (std::size_t i = 0; i < ids.size(); ++i)
    elements.push_back({to_sdd_at(primes[i], env, left), env.constant(prime_is_taken(ids[i]))});
  artifact.root = env.decision(root_node, std::move(elements));

  const SddSize sz = size(artifact.root, env);
  artifact.report = {"hwb", n, "SDD_HWB", sz.nodes, sz.arcs, ms_since(start),
                     "sigma=" + join_ids(sigma)};
  return artifact;
}

ConstructionArtifact build_fn_sdd(std::uint32_t n) {
  std::vector<VarId> rho;
  for (std::uint32_t j = 0; j <= n; ++j) rho.push_back(y_var(n, j));
  return build_fn_sdd(n, x_scope(n), rho);
}

ConstructionArtifact build_fn_sdd(std::uint32_t n, const std::vector<VarId>& sigma,
                                  const std::vector<VarId>& rho) {
  if (sigma.size() != n) throw std::invalid_argument("build_fn_sdd: |sigma| != n");
  if (rho.size() != n + 1) throw std::invalid_argument("build_fn_sdd: |rho| != n+1");
  const auto start = Clock::now();
  ConstructionArtifact artifact;
  artifact.n = n;
  artifact.role = ConstructionArtifact::Role::GeneralizedHwb;
  artifact.env = std::make_shared<SddEnv>(fn_vtree(n, sigma, rho));
  SddEnv& env = *artifact.env;
  const int root_node = env.vtree().root();
  const int left = env.vtree().left(root_node);

  const std::vector<PrimeId> ids = prime_family_ids(n);
  const std::vector<Obdd> primes = build_prime_family(n, sigma);
  std::vector<SddElement> elements;
  elements.reserve(2 * n);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const PrimeId& p = ids[i];
    // Subs in formula order: ~y_0, y_n, ~y_i, y_i.
    const std::uint32_t y_index = p.kind == PrimeId::Kind::Empty  ? 0
                                  : p.kind == PrimeId::Kind::Full ? n
                                                                  : p.index;
    SddRef sub = env.literal(y_var(n, y_index), prime_is_taken(p));
    elements.push_back({to_sdd_at(primes[i], env, left), sub});
  }
  artifact.root = env.decision(root_node, std::move(elements));

  const SddSize sz = size(artifact.root, env);
  artifact.report = {"ghwb", n, "SDD_FN", sz.nodes, sz.arcs, ms_since(start),
                     "sigma=" + join_ids(sigma) + ";rho=" + join_ids(rho)};
  return artifact;
}

EquivalenceCertificate hwb_equivalence_certificate(std::uint32_t n) {
  if (n > 12) throw std::invalid_argument("hwb_equivalence_certificate: n cap is 12");
  return hwb_equivalence_certificate(build_hwb_sdd(n));
}

EquivalenceCertificate hwb_equivalence_certificate(const ConstructionArtifact& artifact) {
  if (artifact.role != ConstructionArtifact::Role::Hwb)
    throw std::invalid_argument("hwb_equivalence_certificate: expects the HWB artifact");
  const std::uint32_t n = artifact.n;
  if (n > 12) throw std::invalid_argument("hwb_equivalence_certificate: n cap is 12");
  EquivalenceCertificate cert;
  cert.n = n;
  cert.pass = true;

  const FunctionOracle direct = hwb_oracle(n);
  std::vector<FunctionOracle> exact;
  for (std::uint32_t i = 1; i <= n; ++i) exact.push_back(exact_count_oracle(n, i));

  // The SDD reads only the x variables; the dummy right-subtree variable is
  // pinned to 0 in the evaluation rows.
  SddEvaluator eval(*artifact.env, artifact.env->vtree().var_set());
  const std::vector<VarId> xs = x_scope(n);
  const std::uint64_t rows = std::uint64_t{1} << n;
  for (std::uint64_t row = 0; row < rows; ++row) {
    const Assignment a = Assignment::from_row(xs, row);
    const bool from_direct = direct.evaluate(a);
    bool from_eform = false;
    for (std::uint32_t i = 1; i <= n && !from_eform; ++i)
      from_eform = exact[i - 1].evaluate(a) && a.value_of(i);
    const bool from_sdd = eval.evaluate(artifact.root, row << 1);
    ++cert.cases_checked;
    if (from_direct != from_eform || from_direct != from_sdd) {
      cert.pass = false;
      cert.witness = a;
      cert.detail = "mismatch on " + a.to_string() + ": direct=" +
                    std::to_string(from_direct) + " eform=" + std::to_string(from_eform) +
                    " sdd=" + std::to_string(from_sdd);
      break;
    }
  }
  return cert;
}

}  // namespace sddkit
