#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "consol/sim.hpp"

namespace consol::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitShortfall = 2;

/// Parses argv and dispatches. Diagnostics go to `err`, progress to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_solve(const std::filesystem::path& problem_path, Algorithm algorithm,
              const std::filesystem::path& out_dir, std::ostream& out);
int cmd_export_lp(const std::filesystem::path& problem_path, const std::filesystem::path& out_file);
int cmd_validate(const std::filesystem::path& problem_path,
                 const std::optional<std::filesystem::path>& plan_path, std::ostream& out);

/// Experiment settings read from a JSON config; relative paths resolve
/// against the config file's directory.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> problem;  // empty: replication suite
  std::optional<std::filesystem::path> traces;   // empty: synthetic day traces
  bool scale_traces = true;
  std::optional<std::size_t> periods;
  SimConfig sim;
  std::string detector = "oracle";
  std::size_t detector_samples = 0;
  DetectorConfig detector_config;
  SensitivityConfig sensitivity;
  ScalabilityConfig bench;
};

/// Throws InputError naming the offending key.
ExperimentConfig load_config(const std::filesystem::path& path);

int cmd_simulate(ExperimentConfig cfg, const std::filesystem::path& out_dir, std::ostream& out);
int cmd_bench(ExperimentConfig cfg, const std::filesystem::path& out_dir, std::ostream& out);
int cmd_sensitivity(ExperimentConfig cfg, const std::filesystem::path& out_dir, std::ostream& out);

/// "1,10,100" -> {1, 10, 100}; every entry must be an integer >= 1.
std::vector<std::size_t> parse_factor_list(const std::string& text);

}  // namespace consol::cli
