// magrigid: synthesize fields, compute spectral invariants, invert them.
//
//   magrigid synth     [--config c.json] [--seed S] [--out DIR]
//   magrigid forward   --B B.json --V V.json [--k K] [--max-dir R] [--out DIR]
//   magrigid invert    --invariants inv.json [--k K] [--grid M] [--out DIR]
//   magrigid roundtrip [--config c.json] [--k K] [--seed S] [--max-dir R] [--grid M] [--out DIR]
//   magrigid check     [--config c.json]
//
// Exit status: 0 success, 1 a stage failed, 2 bad arguments or config.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "magrigid/cli.hpp"
#include "magrigid/errors.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::int64_t> k;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::int64_t> max_dir;
  std::optional<std::int64_t> grid;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--k", o.k, "harmonics per direction");
  cmd->add_option("--seed", o.seed, "random seed for synthesized fields");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--max-dir", o.max_dir, "max sup-norm of primitive directions");
  cmd->add_option("--grid", o.grid, "inversion grid size M");
}

magrigid::cli::ExperimentConfig resolve(const Overrides& o) {
  using magrigid::cli::ExperimentConfig;
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : magrigid::cli::load_config(o.config);
  if (o.k) {
    c.K = *o.k;
    std::erase_if(c.sweep_K, [&](std::int64_t k) { return k > c.K; });
  }
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.out = *o.out;
  if (o.max_dir) c.max_primitive_norm = *o.max_dir;
  if (o.grid) c.M = *o.grid;
  magrigid::cli::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Schroedinger spectral invariants on a flat torus"};
  app.require_subcommand(1);
  Overrides o;
  std::string B_path, V_path, inv_path;

  auto* synth = app.add_subcommand("synth", "write a random admissible B and a potential V");
  auto* forward = app.add_subcommand("forward", "compute the invariants of B and V");
  auto* invert = app.add_subcommand("invert", "reconstruct B and V from invariants");
  auto* roundtrip = app.add_subcommand("roundtrip", "synth, forward, invert and compare");
  auto* check = app.add_subcommand("check", "report genericity and flux of the lattice");
  for (auto* cmd : {synth, forward, invert, roundtrip, check}) add_common(cmd, o);
  forward->add_option("--B", B_path, "magnetic field JSON")->required()->check(CLI::ExistingFile);
  forward->add_option("--V", V_path, "potential JSON")->required()->check(CLI::ExistingFile);
  invert->add_option("--invariants", inv_path, "invariants JSON")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  magrigid::cli::ExperimentConfig config;
  try {
    config = resolve(o);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (*synth) return magrigid::cli::cmd_synth(config, std::cout, std::cerr);
  if (*forward) return magrigid::cli::cmd_forward(config, B_path, V_path, std::cout, std::cerr);
  if (*invert) return magrigid::cli::cmd_invert(config, inv_path, std::cout, std::cerr);
  if (*roundtrip) return magrigid::cli::cmd_roundtrip(config, std::cout, std::cerr);
  return magrigid::cli::cmd_check(config, std::cout, std::cerr);
}
