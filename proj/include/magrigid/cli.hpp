// Experiment driver behind the magrigid command-line tool.
//
// Every command takes a validated ExperimentConfig, writes its products under
// config.out and returns a process exit code. Diagnostics go to `log`, errors
// to `err`; an error line names the stage and, when there is one, the direction.
#ifndef MAGRIGID_CLI_HPP_
#define MAGRIGID_CLI_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magrigid/lattice.hpp"

namespace magrigid::cli {

struct ExperimentConfig {
  Vec2 e1{1.0, 0.0};
  Vec2 e2{0.3, 1.1};
  int b0_sign = 1;
  std::optional<double> b0;  // check only; default b0_for_unit_flux
  std::uint64_t seed = 42;
  std::int64_t bandwidth = 4;
  std::int64_t v_bandwidth = 4;
  double target_margin = 0.2;
  double v_amplitude = 1.0;
  std::int64_t K = 64;
  std::int64_t M = 512;
  std::int64_t N = 0;  // 0 selects the default quadrature size
  std::int64_t N2 = 128;
  std::int64_t max_primitive_norm = 4;
  double generic_radius = 5.0;
  std::vector<std::int64_t> sweep_K{4, 8, 16, 32, 64};
  std::int64_t heatmap_grid = 48;
  bool allow_inadmissible = false;
  std::optional<std::filesystem::path> B_file;  // roundtrip uses these instead of synth
  std::optional<std::filesystem::path> V_file;
  std::filesystem::path out = "out";

  Lattice lattice() const { return Lattice(e1, e2); }
};

/// Unknown keys and out-of-range values throw InputError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

int cmd_synth(const ExperimentConfig& config, std::ostream& log, std::ostream& err);
int cmd_forward(const ExperimentConfig& config, const std::filesystem::path& B_path,
                const std::filesystem::path& V_path, std::ostream& log, std::ostream& err);
int cmd_invert(const ExperimentConfig& config, const std::filesystem::path& invariants_path,
               std::ostream& log, std::ostream& err);
int cmd_roundtrip(const ExperimentConfig& config, std::ostream& log, std::ostream& err);
int cmd_check(const ExperimentConfig& config, std::ostream& log, std::ostream& err);

}  // namespace magrigid::cli

#endif  // MAGRIGID_CLI_HPP_
