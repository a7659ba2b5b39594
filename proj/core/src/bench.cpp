#include "sddkit/bench.hpp"

#include <charconv>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include "sddkit/obdd.hpp"
#include "sddkit/sdd.hpp"

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

std::uint32_t parse_u32(std::string_view s, std::string_view what) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad " + std::string(what) + ": '" + std::string(s) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<VarId> parse_id_list(std::string_view s) {
  std::vector<VarId> ids;
  for (std::string_view part : split(s, ','))
    ids.push_back(parse_u32(part, "variable id"));
  return ids;
}

}  // namespace

std::string to_csv_row(const SizeReport& row) {
  std::ostringstream os;
  os << row.function << ',' << row.n << ',' << row.construction << ',' << row.nodes << ','
     << row.arcs << ',' << row.ms << ',' << row.descriptor;
  return os.str();
}

std::string to_csv(const std::vector<SizeReport>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const SizeReport& row : rows) os << to_csv_row(row) << '\n';
  return os.str();
}

std::vector<SizeReport> separation_rows(std::uint32_t from, std::uint32_t to,
                                        const std::optional<std::vector<VarId>>& sigma,
                                        const std::optional<std::vector<VarId>>& rho) {
  std::vector<SizeReport> rows;
  if (from > to) return rows;
  if (from == 0) throw std::invalid_argument("separation: n starts at 1");
  if ((sigma || rho) && from != to)
    throw std::invalid_argument("separation: custom orderings need a single-n range");
  for (std::uint32_t n = from; n <= to; ++n) {
    ConstructionArtifact fn =
        (sigma || rho)
            ? build_fn_sdd(n, sigma.value_or(x_scope(n)), rho.value_or([&] {
                std::vector<VarId> d;
                for (std::uint32_t j = 0; j <= n; ++j) d.push_back(y_var(n, j));
                return d;
              }()))
            : build_fn_sdd(n);
    rows.push_back(fn.report);
    if (n <= 16) {
      const auto start = Clock::now();
      const MinObddResult min = min_obdd_size_exact(hwb_oracle(n));
      rows.push_back({"hwb", n, "OBDD_MIN", min.node_count, min.arc_count, ms_since(start),
                      "ordering=" + join_ids(min.ordering)});
    }
  }
  return rows;
}

std::vector<SizeReport> compress_blowup_rows(std::uint32_t from, std::uint32_t to) {
  std::vector<SizeReport> rows;
  if (from > to) return rows;
  if (from == 0) throw std::invalid_argument("compress-blowup: n starts at 1");
  if (to > 16) throw std::invalid_argument("compress-blowup: n cap is 16");
  for (std::uint32_t n = from; n <= to; ++n) {
    ConstructionArtifact hwb = build_hwb_sdd(n);
    rows.push_back(hwb.report);

    const auto start = Clock::now();
    const SddRef compressed = compress(hwb.root, *hwb.env);
    const SddSize sz = size(compressed, *hwb.env);
    rows.push_back({"hwb", n, "SDD_HWB_COMPRESSED", sz.nodes, sz.arcs, ms_since(start),
                    hwb.report.descriptor});

    const auto obdd_start = Clock::now();
    const Obdd fixed = from_oracle(hwb_oracle(n), x_scope(n));
    rows.push_back({"hwb", n, "OBDD_FIXED", fixed.node_count(), fixed.arc_count(),
                    ms_since(obdd_start), "ordering=" + join_ids(x_scope(n))});
  }
  return rows;
}

bool VerifyReport::all_pass() const {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerifyReport::to_string() const {
  std::ostringstream os;
  for (const VerifyCheck& c : checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.pass && !c.detail.empty()) os << ": " << c.detail;
    os << '\n';
  }
  return os.str();
}

namespace {

std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint32_t j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

}  // namespace

VerifyReport verify_constructions(std::uint32_t n) {
  return verify_constructions(build_hwb_sdd(n), build_fn_sdd(n));
}

VerifyReport verify_constructions(const ConstructionArtifact& hwb,
                                  const ConstructionArtifact& fn) {
  const std::uint32_t n = hwb.n;
  if (n == 0 || fn.n != n) throw std::invalid_argument("verify: mismatched artifacts");
  if (n > 12) throw std::invalid_argument("verify: n cap is 12");
  VerifyReport report;
  report.n = n;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    const ValidationReport v = validate(hwb.root, *hwb.env);
    add("hwb-validate", v.all_ok(), v.first_failure());
    const bool compressed = is_compressed(hwb.root, *hwb.env);
    add("hwb-uncompressed", n >= 2 ? !compressed : compressed,
        "compression status disagrees with the construction");
  }
  {
    const ValidationReport v = validate(fn.root, *fn.env);
    add("fn-validate", v.all_ok(), v.first_failure());
    add("fn-compressed", is_compressed(fn.root, *fn.env), "condition (C) violated");
  }

  {
    // HWB semantics over the full (n+1)-variable vtree scope.
    const FunctionOracle oracle = hwb_oracle(n);
    SddEvaluator eval(*hwb.env, hwb.env->vtree().var_set());
    bool ok = true;
    std::string detail;
    const std::uint64_t rows = std::uint64_t{1} << (n + 1);
    for (std::uint64_t row = 0; row < rows && ok; ++row)
      if (eval.evaluate(hwb.root, row) != oracle.evaluate_row(row >> 1)) {
        ok = false;
        detail = "mismatch at row " + std::to_string(row);
      }
    add("hwb-semantics", ok, detail);
  }
  {
    // F_n semantics: exhaustive through n = 10, deterministic sampling above.
    const FunctionOracle oracle = generalized_hwb_oracle(n);
    SddEvaluator eval(*fn.env, fn.env->vtree().var_set());
    bool ok = true;
    std::string detail;
    const std::uint32_t bits = 2 * n + 1;
    if (n <= 10) {
      const std::uint64_t rows = std::uint64_t{1} << bits;
      for (std::uint64_t row = 0; row < rows && ok; ++row)
        if (eval.evaluate(fn.root, row) != oracle.evaluate_row(row)) {
          ok = false;
          detail = "mismatch at row " + std::to_string(row);
        }
    } else {
      std::uint64_t state = 0x9e3779b97f4a7c15ull;
      for (std::uint32_t trial = 0; trial < 1u << 20 && ok; ++trial) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        const std::uint64_t row = (state >> 11) & ((std::uint64_t{1} << bits) - 1);
        if (eval.evaluate(fn.root, row) != oracle.evaluate_row(row)) {
          ok = false;
          detail = "mismatch at sampled row " + std::to_string(row);
        }
      }
    }
    add("fn-semantics", ok, detail);
  }

  {
    // Partition fact by enumeration: every x assignment hits exactly one prime.
    std::vector<FunctionOracle> primes;
    for (const PrimeId& p : prime_family_ids(n)) primes.push_back(prime_oracle(p, n));
    bool ok = true;
    std::string detail;
    const std::uint64_t rows = std::uint64_t{1} << n;
    for (std::uint64_t row = 0; row < rows && ok; ++row) {
      int hits = 0;
      for (const FunctionOracle& p : primes) hits += p.evaluate_row(row) ? 1 : 0;
      if (hits != 1) {
        ok = false;
        detail = "row " + std::to_string(row) + " satisfies " + std::to_string(hits) + " primes";
      }
    }
    add("partition-enumeration", ok, detail);

    // The same fact by OBDD algebra.
    const std::vector<Obdd> family = build_prime_family(n, x_scope(n));
    bool sym = true;
    for (std::size_t i = 0; i < family.size() && sym; ++i) {
      if (family[i].root() == Obdd::kFalse) sym = false;  // P not≡ bottom
      for (std::size_t j = i + 1; j < family.size() && sym; ++j)
        if (apply(ObddOp::And, family[i], family[j]).root() != Obdd::kFalse) sym = false;
    }
    if (sym) {
      Obdd all = family[0];
      for (std::size_t i = 1; i < family.size(); ++i) all = apply(ObddOp::Or, all, family[i]);
      sym = all.root() == Obdd::kTrue;
    }
    add("partition-symbolic", sym, "OBDD algebra disagrees with the fact");
    add("partition-agreement", ok == sym, "enumeration and OBDD algebra disagree");
  }

  {
    // Conditioning identity: F_n with every y pinned to 1 is HWB_n, and the
    // conditioned diagram no longer reads any y.
    Assignment all_y;
    for (std::uint32_t j = 0; j <= n; ++j) all_y.set(y_var(n, j), true);
    const SddRef conditioned = condition(fn.root, *fn.env, all_y);
    const FunctionOracle oracle = hwb_oracle(n);
    SddEvaluator eval(*fn.env, fn.env->vtree().var_set());
    bool ok = true;
    std::string detail;
    const std::uint64_t y_ones = (std::uint64_t{1} << (n + 1)) - 1;
    for (std::uint64_t xrow = 0; xrow < (std::uint64_t{1} << n) && ok; ++xrow) {
      const bool want = oracle.evaluate_row(xrow);
      const bool with_zero_y = eval.evaluate(conditioned, xrow << (n + 1));
      const bool with_one_y = eval.evaluate(conditioned, (xrow << (n + 1)) | y_ones);
      if (want != with_zero_y || want != with_one_y) {
        ok = false;
        detail = "mismatch at x row " + std::to_string(xrow);
      }
    }
    add("conditioning-identity", ok, detail);
  }

  {
    // Model counts: HWB over its n+1 scope doubles the x-count; F_n has
    // exactly 4^n models (each of the 2^n x assignments frees n of the n+1
    // y variables).
    std::uint64_t hwb_models = 0;
    for (std::uint32_t i = 1; i <= n; ++i) hwb_models += binomial(n - 1, i - 1);
    const bool hwb_ok =
        model_count(hwb.root, *hwb.env, hwb.env->vtree().var_set()) == 2 * hwb_models;
    add("hwb-model-count", hwb_ok, "count deviates from 2 * sum binomial(n-1, i-1)");
    const std::uint64_t fn_models =
        model_count(fn.root, *fn.env, fn.env->vtree().var_set());
    add("fn-model-count", fn_models == (std::uint64_t{1} << (2 * n)),
        "count deviates from 4^n");
  }

  return report;
}

namespace {

std::string export_function_object(const Obdd& diagram, const std::vector<VarId>& sigma,
                                   std::string_view format, const std::string& name) {
  if (format == "dot") return obdd_to_dot(diagram, name);
  const Vtree vt = Vtree::right_linear(sigma);
  if (format == "vtree") return vt.serialize();
  if (format == "sdd") {
    SddEnv env(vt);
    return serialize_sdd(to_sdd(diagram, env), env);
  }
  throw std::invalid_argument("export: unknown format '" + std::string(format) + "'");
}

std::string export_artifact(const ConstructionArtifact& artifact, std::string_view format) {
  if (format == "sdd") return serialize_sdd(artifact.root, *artifact.env);
  if (format == "vtree") return artifact.env->vtree().serialize();
  if (format == "dot") return sdd_to_dot(artifact.root, *artifact.env, artifact.report.function);
  throw std::invalid_argument("export: unknown format '" + std::string(format) + "'");
}

std::string export_vtree_object(const Vtree& vt, std::string_view format) {
  if (format == "vtree") return vt.serialize();
  if (format == "dot") {
    std::ostringstream os;
    os << "digraph vtree {\n";
    for (int id = 0; id < vt.node_count(); ++id) {
      if (vt.is_leaf(id))
        os << "  n" << id << " [shape=box, label=\"x" << vt.var_at(id) << "\"];\n";
      else {
        os << "  n" << id << " [shape=circle, label=\"" << id << "\"];\n";
        os << "  n" << id << " -> n" << vt.left(id) << ";\n";
        os << "  n" << id << " -> n" << vt.right(id) << ";\n";
      }
    }
    os << "}\n";
    return os.str();
  }
  throw std::invalid_argument("export: vtree objects support the vtree and dot formats");
}

}  // namespace

std::string export_object(std::string_view object_spec, std::string_view format) {
  const auto parts = split(object_spec, ':');
  if (parts.size() == 2 && parts[0] == "hwb-sdd")
    return export_artifact(build_hwb_sdd(parse_u32(parts[1], "n")), format);
  if (parts.size() == 2 && parts[0] == "fn-sdd")
    return export_artifact(build_fn_sdd(parse_u32(parts[1], "n")), format);
  if (parts.size() == 3 && parts[0] == "exact") {
    const std::uint32_t n = parse_u32(parts[1], "n");
    const std::uint32_t i = parse_u32(parts[2], "i");
    return export_function_object(build_exact_count(n, i, x_scope(n)), x_scope(n), format,
                                  "exact_count");
  }
  if (parts.size() == 3 && parts[0] == "prime") {
    const std::uint32_t n = parse_u32(parts[1], "n");
    const PrimeId p = PrimeId::from_tag(parts[2]);
    return export_function_object(build_prime(p, n, x_scope(n)), x_scope(n), format, "prime");
  }
  if (parts.size() >= 2 && parts[0] == "vtree") {
    if (parts.size() == 3 && parts[1] == "hwb") {
      const std::uint32_t n = parse_u32(parts[2], "n");
      return export_vtree_object(hwb_vtree(n, x_scope(n)), format);
    }
    if (parts.size() == 3 && parts[1] == "fn") {
      const std::uint32_t n = parse_u32(parts[2], "n");
      std::vector<VarId> rho;
      for (std::uint32_t j = 0; j <= n; ++j) rho.push_back(y_var(n, j));
      return export_vtree_object(fn_vtree(n, x_scope(n), rho), format);
    }
    if (parts.size() == 3 && parts[1] == "rl")
      return export_vtree_object(Vtree::right_linear(parse_id_list(parts[2])), format);
  }
  throw std::invalid_argument("export: unknown object '" + std::string(object_spec) + "'");
}

}  // namespace sddkit
