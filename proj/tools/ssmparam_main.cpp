#include "ssmparam/runner.hpp"

#include <CLI11.hpp>

#include <string>

namespace {

void add_reduction_options(CLI::App* cmd, ssmparam::RunConfig& cfg) {
  cmd->add_option("--order", cfg.order, "Highest monomial order of the expansion")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--masters", cfg.masters,
                  "1-based master mode indices into the sorted eigenvalue list, e.g. --masters 1,2")
      ->delimiter(',');
  cmd->add_option("--omega", [&cfg](const CLI::results_t& res) {
        cfg.omega = std::stod(res[0]);
        return true;
      }, "Forcing frequency (rad/s); overrides the value in the input file");
  cmd->add_option("--rtol", cfg.r_tol, "Relative resonance tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--atol", cfg.a_tol, "Absolute resonance tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", cfg.threads, "Cap on intra-order worker threads (0 = automatic)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric reduced-order models of polynomial systems via invariant manifolds"};
  app.require_subcommand(1);

  ssmparam::RunConfig cfg;

  auto* reduce = app.add_subcommand("reduce", "Reduce a system onto a spectral submanifold");
  reduce->add_option("--input", cfg.input_path, "System JSON file")->required();
  reduce->add_option("--output", cfg.output_path, "Reduction artifact JSON path")->required();
  add_reduction_options(reduce, cfg);

  auto* expand = app.add_subcommand("expand", "Geometry-morphing determinant expansions");
  expand->add_option("--input", cfg.input_path, "Morph gradient JSON file")->required();
  expand->add_option("--output", cfg.output_path, "Expansion JSON path")->required();

  auto* integrand = app.add_subcommand("integrand", "Weak-form integrand batch evaluation");
  integrand->add_option("--input", cfg.input_path, "Point batch JSON file")->required();
  integrand->add_option("--output", cfg.output_path, "CSV output path")->required();

  auto* simulate = app.add_subcommand("simulate", "Integrate the full and reduced models");
  simulate->add_option("--input", cfg.input_path, "System JSON file")->required();
  simulate->add_option("--output", cfg.output_path, "Trajectory CSV path")->required();
  simulate->add_option("--rom", cfg.rom_path,
                       "Reduction artifact from a previous run; omitted means reduce in-process");
  simulate->add_option("--t-end", cfg.t_end, "Final time")->check(CLI::PositiveNumber);
  simulate->add_option("--dt", cfg.dt, "Step size")->check(CLI::PositiveNumber);
  simulate->add_option("--amplitude", cfg.amplitude, "Initial reduced-coordinate amplitude");
  add_reduction_options(simulate, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ssmparam::kExitOk : ssmparam::kExitInputError;
  }

  if (reduce->parsed()) return ssmparam::run_reduce(cfg);
  if (expand->parsed()) return ssmparam::run_expand(cfg);
  if (integrand->parsed()) return ssmparam::run_integrand(cfg);
  return ssmparam::run_simulate(cfg);
}
