// coopdyn <subcommand> --config <path> [--seed <u64>] [--out <dir>]
//
// Exit codes: 0 success, 1 validation error, 2 numerical-integrity error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coopdyn/errors.hpp"
#include "coopdyn/harness/config.hpp"
#include "coopdyn/harness/run.hpp"

namespace fs = std::filesystem;
using namespace coopdyn;

namespace {

constexpr int kValidationExit = 1;
constexpr int kNumericalExit = 2;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Options& opts) {
  sub->add_option("--config", opts.config, "Experiment config (JSON); a run manifest is also accepted")
      ->required();
  sub->add_option("--seed", opts.seed, "Override the config seed");
  sub->add_option("--out", opts.out, "Output directory (overrides output_dir)");
}

int run_experiment(harness::ExperimentKind kind, const Options& opts) {
  auto config = harness::load_config(opts.config, kind);
  if (opts.seed) config.seed = *opts.seed;
  if (opts.out) config.output_dir = *opts.out;
  if (config.output_dir.empty()) config.output_dir = "runs/" + std::string(harness::to_string(kind));
  const auto artifacts = harness::run(config, config.output_dir);
  std::cout << artifacts.report << "\nWrote " << artifacts.csv_files.size() << " CSV file(s), manifest.json and "
            << "report.md to " << artifacts.out_dir.string() << "\n";
  return 0;
}

int run_report(const Options& opts) {
  if (opts.seed) throw ValidationError("report: --seed is not accepted; the manifest seed is used");
  const fs::path manifest(opts.config);
  const fs::path out = opts.out ? fs::path(*opts.out) : manifest.parent_path();
  const auto check = harness::reproduce(manifest, out);
  std::cout << "Report written to " << (out / "report.md").string() << "\n";
  for (const auto& n : check.identical) std::cout << "  identical: " << n << "\n";
  for (const auto& n : check.differing) std::cout << "  DIFFERS:   " << n << "\n";
  if (!check.ok()) {
    std::cerr << "error: re-running the manifest did not reproduce the recorded CSVs\n";
    return kValidationExit;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperation dynamics: iterated PD, intersection mean-field game, role rotation"};
  app.require_subcommand(1);
  Options opts;

  const harness::ExperimentKind kinds[] = {
      harness::ExperimentKind::IpdMatch,    harness::ExperimentKind::IpdTournament,
      harness::ExperimentKind::DeltaScan,   harness::ExperimentKind::MfgSolve,
      harness::ExperimentKind::MfgSimulate, harness::ExperimentKind::RolesRun,
      harness::ExperimentKind::Dungeon};
  std::vector<std::pair<CLI::App*, harness::ExperimentKind>> subs;
  for (auto k : kinds) {
    auto* sub = app.add_subcommand(std::string(harness::subcommand_name(k)),
                                   "Run the " + std::string(harness::to_string(k)) + " experiment");
    add_common(sub, opts);
    subs.emplace_back(sub, k);
  }
  auto* report = app.add_subcommand("report", "Re-run a manifest, verify byte-identical CSVs, write report.md");
  add_common(report, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  try {
    if (report->parsed()) return run_report(opts);
    for (const auto& [sub, kind] : subs)
      if (sub->parsed()) return run_experiment(kind, opts);
  } catch (const NumericalIntegrityError& e) {
    std::cerr << "numerical integrity error: " << e.what() << "\n";
    return kNumericalExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidationExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationExit;
  }
  return kValidationExit;
}
