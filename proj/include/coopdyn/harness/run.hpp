#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopdyn/harness/config.hpp"

namespace coopdyn::harness {

struct RunArtifacts {
  std::filesystem::path out_dir;
  std::vector<std::string> csv_files;  // names relative to out_dir
  nlohmann::json manifest;
  std::string report;                  // contents of report.md
};

/// Executes the experiment, writing its CSVs, manifest.json and report.md into
/// `out_dir` (created if needed). Numerical-integrity errors are rethrown with
/// the experiment name prefixed.
RunArtifacts run(const ExperimentConfig& config, const std::filesystem::path& out_dir);

struct ReproductionCheck {
  std::vector<std::string> identical;
  std::vector<std::string> differing;  // includes files missing on either side
  bool ok() const { return differing.empty() && !identical.empty(); }
};

/// Re-runs the manifest at `manifest_path` in a scratch directory and
/// byte-compares every CSV with the ones next to the manifest. Writes
/// report.md (run report plus a reproducibility section) into `report_dir`.
ReproductionCheck reproduce(const std::filesystem::path& manifest_path, const std::filesystem::path& report_dir);

bool files_identical(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace coopdyn::harness
