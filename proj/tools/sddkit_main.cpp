#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sddkit/bench.hpp"
#include "sddkit/boolfn.hpp"
#include "sddkit/obdd.hpp"
#include "sddkit/report.hpp"

namespace {

std::vector<sddkit::VarId> parse_ids(const std::string& csv) {
  std::vector<sddkit::VarId> ids;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto pos = csv.find(',', start);
    const std::string part =
        csv.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    ids.push_back(static_cast<sddkit::VarId>(std::stoul(part)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return ids;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
}

std::string join_ids(const std::vector<sddkit::VarId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ids[i]);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vtree/SDD/OBDD toolkit for the hidden weighted bit size separation"};
  app.require_subcommand(1);

  // separation
  std::uint32_t sep_from = 1, sep_to = 1;
  std::string sep_sigma, sep_rho, sep_out;
  CLI::App* sep = app.add_subcommand(
      "separation", "CSV of compressed-SDD sizes for F_n vs exact minimal OBDD sizes for HWB_n");
  sep->add_option("--from", sep_from, "first n")->required();
  sep->add_option("--to", sep_to, "last n")->required();
  sep->add_option("--sigma", sep_sigma, "x ordering (comma-separated ids, single-n only)");
  sep->add_option("--rho", sep_rho, "y ordering (comma-separated ids, single-n only)");
  sep->add_option("--out", sep_out, "output CSV path")->required();

  // compress-blowup
  std::uint32_t blow_from = 1, blow_to = 1;
  std::string blow_out;
  CLI::App* blow = app.add_subcommand(
      "compress-blowup", "CSV of HWB SDD sizes before/after compression over its vtree");
  blow->add_option("--from", blow_from, "first n")->required();
  blow->add_option("--to", blow_to, "last n")->required();
  blow->add_option("--out", blow_out, "output CSV path")->required();

  // verify
  std::uint32_t verify_n = 8;
  CLI::App* verify = app.add_subcommand("verify", "run the construction checks for one n");
  verify->add_option("--n", verify_n, "instance size (1..12)")->required();

  // export
  std::string exp_object, exp_format, exp_out;
  CLI::App* exp = app.add_subcommand("export", "write an object in the sdd/vtree/dot format");
  exp->add_option("--object", exp_object,
                  "hwb-sdd:<n> | fn-sdd:<n> | exact:<n>:<i> | prime:<n>:<tag> | "
                  "vtree:hwb:<n> | vtree:fn:<n> | vtree:rl:<ids>")
      ->required();
  exp->add_option("--format", exp_format, "sdd | vtree | dot")->required();
  exp->add_option("--out", exp_out, "output path")->required();

  // min-obdd
  std::string min_function, min_out;
  CLI::App* minobdd =
      app.add_subcommand("min-obdd", "exact minimal OBDD size over all orderings");
  minobdd->add_option("--function", min_function,
                      "hwb:<n> | exact:<n>:<i> | prime:<n>:<tag> | ghwb:<n>")
      ->required();
  minobdd->add_option("--out", min_out, "optional CSV path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sep->parsed()) {
      std::optional<std::vector<sddkit::VarId>> sigma, rho;
      if (!sep_sigma.empty()) sigma = parse_ids(sep_sigma);
      if (!sep_rho.empty()) rho = parse_ids(sep_rho);
      write_file(sep_out, sddkit::to_csv(sddkit::separation_rows(sep_from, sep_to, sigma, rho)));
      std::cout << "wrote " << sep_out << '\n';
    } else if (blow->parsed()) {
      write_file(blow_out, sddkit::to_csv(sddkit::compress_blowup_rows(blow_from, blow_to)));
      std::cout << "wrote " << blow_out << '\n';
    } else if (verify->parsed()) {
      const sddkit::VerifyReport report = sddkit::verify_constructions(verify_n);
      std::cout << report.to_string();
      return report.all_pass() ? 0 : 1;
    } else if (exp->parsed()) {
      write_file(exp_out, sddkit::export_object(exp_object, exp_format));
      std::cout << "wrote " << exp_out << '\n';
    } else if (minobdd->parsed()) {
      const sddkit::FunctionOracle oracle = sddkit::parse_function_spec(min_function);
      const auto start = std::chrono::steady_clock::now();
      const sddkit::MinObddResult min = sddkit::min_obdd_size_exact(oracle);
      const double ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
      const sddkit::SizeReport row{oracle.name(),
                                   static_cast<std::uint32_t>(oracle.scope().size()),
                                   "OBDD_MIN",
                                   min.node_count,
                                   min.arc_count,
                                   ms,
                                   "ordering=" + join_ids(min.ordering)};
      const std::string csv = sddkit::to_csv({row});
      if (min_out.empty())
        std::cout << csv;
      else {
        write_file(min_out, csv);
        std::cout << "wrote " << min_out << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
