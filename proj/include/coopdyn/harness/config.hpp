#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "coopdyn/ipd/strategy.hpp"
#include "coopdyn/mfg/params.hpp"
#include "coopdyn/roles/credit.hpp"

namespace coopdyn::harness {

enum class ExperimentKind { IpdMatch, IpdTournament, DeltaScan, MfgSolve, MfgSimulate, RolesRun, Dungeon };

std::string_view to_string(ExperimentKind kind);           // "ipd_match"
std::string_view subcommand_name(ExperimentKind kind);     // "ipd-match"
std::optional<ExperimentKind> kind_from_string(std::string_view name);  // accepts either spelling

struct PayoffConfig {
  double T = 5.0, R = 3.0, P = 1.0, S = 0.0;
};

struct MatchBlock {
  std::uint32_t horizon = 100;
  double discount = 0.0;
};

struct GridConfig {
  // Explicit values win over start/stop/step.
  std::optional<std::vector<double>> values;
  double start = 0.0;
  double stop = 0.99;
  double step = 0.01;

  std::vector<double> points() const;
};

struct SimulateConfig {
  int episodes = 200;
};

// Who moves in the intersection each round.
enum class MoverSource { Static, Rotation, Stochastic, Mfg };
// Who sacrifices in the dungeon each round.
enum class SacrificeSource { Static, Rotation, Stochastic };

struct IntersectionConfig {
  int n_agents = 6;
  int threshold = 2;
  int rounds = 9;
  int cohort = 2;  // movers per round for static / rotation; initial movers for stochastic
  MoverSource source = MoverSource::Rotation;
  int window = 0;  // 0 = n_agents - 1
  double tau_s = 1.0;
  std::optional<double> s0;  // default C(n_agents - 1, threshold)
  roles::CreditRule credit{};
};

struct DungeonConfig {
  int n_agents = 3;
  int rounds = 6;
  double success_reward = 1.0;
  double sacrifice_cost = 0.0;
  SacrificeSource rotation = SacrificeSource::Rotation;
  int window = 0;  // 0 = n_agents - 1
  double tau_s = 1.0;
  std::optional<double> s0;  // default C(n_agents - 1, 1)
  roles::CreditRule credit{};
};

/// One experiment. Only the blocks used by `kind` are read or written.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::IpdMatch;
  std::uint64_t seed = 0;
  std::string output_dir;

  PayoffConfig payoff;
  MatchBlock match;
  ipd::Strategy x = ipd::Strategy::alternator();
  ipd::Strategy y = ipd::Strategy::alternator();
  std::vector<ipd::Strategy> strategies;
  GridConfig grid;
  mfg::MfgParams<double> mfg;
  mfg::SolverOptions solver;
  SimulateConfig simulate;
  IntersectionConfig intersection;
  DungeonConfig dungeon;

  /// Parameters for the intersection environment: the mfg block with N and i
  /// taken from the intersection block.
  mfg::MfgParams<double> intersection_params() const;
};

/// Parses and validates. Unknown or misplaced keys, wrong types and range
/// violations are all collected into one ValidationError. A "manifest" key
/// (present in emitted manifests) is accepted and ignored. When `expected`
/// is set, an "experiment" key must match it or be absent.
ExperimentConfig parse_config(const nlohmann::json& doc, std::optional<ExperimentKind> expected = {});
ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected = {});

/// Normalized form with every default spelled out; parse_config(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace coopdyn::harness
