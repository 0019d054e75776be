#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_common(CLI::App* cmd, cstar::cli::CommonOptions& opts, bool with_seed, bool with_cases,
                const char* cases_flag = "--cases") {
  cmd->add_option("--tol", opts.tol, "relative tolerance (tol_abs = tol * 1e-3)")->check(CLI::PositiveNumber);
  cmd->add_option("--json", opts.json_path, "write a machine-readable report to this path");
  if (with_seed) cmd->add_option("--seed", opts.seed, "random seed");
  if (with_cases) cmd->add_option(cases_flag, opts.cases, "number of random cases");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cstar::cli;
  CLI::App app{"finite-dimensional C*-algebra workbench for deformed products"};
  app.require_subcommand(1, 1);

  CommonOptions analyze_opts;
  std::string analyze_file;
  CLI::App* analyze = app.add_subcommand("analyze", "structure report for an algebra file");
  analyze->add_option("algebra_file", analyze_file)->required();
  add_common(analyze, analyze_opts, false, false);

  CommonOptions deform_opts;
  std::string deform_file;
  std::optional<std::string> emit_structure;
  CLI::App* deform = app.add_subcommand("deform", "check the deformed product and involution");
  deform->add_option("deformation_file", deform_file)->required();
  deform->add_option("--emit-structure", emit_structure, "write structure constants and star table");
  add_common(deform, deform_opts, true, true, "--samples");

  CommonOptions verify_opts;
  std::optional<std::string> verify_file;
  std::optional<std::string> blocks;
  std::optional<std::string> corrupt;
  CLI::App* verify = app.add_subcommand("verify", "run every law suite");
  verify->add_option("algebra_file", verify_file);
  verify->add_option("--blocks", blocks, "block sizes of a canned instance, e.g. 2,3");
  verify->add_option("--corrupt", corrupt, "inject the designated fault into one suite");
  add_common(verify, verify_opts, true, true);

  CommonOptions pos_opts;
  pos_opts.cases = 20;
  std::string pos_algebra, pos_element;
  CLI::App* pos = app.add_subcommand("positivize", "unitary that makes an invertible element positive");
  pos->add_option("algebra_file", pos_algebra)->required();
  pos->add_option("element_file", pos_element)->required();
  add_common(pos, pos_opts, true, true);

  CommonOptions rec_opts;
  std::string rec_algebra, rec_structure;
  CLI::App* rec = app.add_subcommand("recover", "recover (u, p) from structure constants");
  rec->add_option("algebra_file", rec_algebra)->required();
  rec->add_option("structure_file", rec_structure)->required();
  add_common(rec, rec_opts, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*analyze) return cmd_analyze(analyze_file, analyze_opts, std::cout, std::cerr);
  if (*deform) return cmd_deform(deform_file, deform_opts, emit_structure, std::cout, std::cerr);
  if (*verify) return cmd_verify(verify_file, blocks, verify_opts, corrupt, std::cout, std::cerr);
  if (*pos) return cmd_positivize(pos_algebra, pos_element, pos_opts, std::cout, std::cerr);
  return cmd_recover(rec_algebra, rec_structure, rec_opts, std::cout, std::cerr);
}
