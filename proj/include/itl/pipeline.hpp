#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "itl/data_prep.hpp"
#include "itl/itl_solver.hpp"

namespace itl {

/// Settings for one pipeline run, read from a flat `key = value` file.
/// Relative paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path buses;
  std::filesystem::path lines;
  std::optional<std::filesystem::path> regions;
  std::filesystem::path output_dir = "itl_output";
  double base_mva = 100.0;
  PrepConfig prep;
  bool use_neighborhood_filter = true;
  bool run_n1 = true;
  std::vector<Direction> directions{Direction::Forward, Direction::Reverse};
  std::string slack_bus;
  lp::SolverOptions solver;
  unsigned threads = 1;
  bool dump_lp = false;
  bool record_timings = false;

  StudyOptions study_options() const;
};

/// Throws ConfigError for unknown keys, malformed values and missing input files.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Data preparation only.
PrepResult load_and_prepare(const RunConfig& config);

enum class ExitStatus { Success = 0, Fatal = 1, Partial = 2 };

struct RunOutcome {
  ExitStatus status = ExitStatus::Success;
  std::vector<std::filesystem::path> files;  // every file written, sorted
  std::string error;                         // fatal error message, if any
};

/// Prep, n-0, optional n-1, optional region aggregation, statistics. Writes
/// itl.csv, stats.csv, flows/, injections/, run_manifest.json and, with a
/// region mapping, region_itl.csv and aggregation.csv. Fatal errors leave an
/// error.json in the output directory.
RunOutcome run_pipeline(const RunConfig& config);

inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace itl
