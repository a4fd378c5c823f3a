#include "coopdyn/harness/run.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "coopdyn/errors.hpp"
#include "coopdyn/harness/csv.hpp"
#include "coopdyn/harness/envs.hpp"
#include "coopdyn/ipd/discount.hpp"
#include "coopdyn/ipd/match.hpp"
#include "coopdyn/mfg.hpp"
#include "coopdyn/roles/credit.hpp"

namespace coopdyn::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Output {
  fs::path dir;
  std::vector<std::string> csv_files;
  json results = json::object();
  std::string report;

  fs::path csv(const std::string& name) {
    csv_files.push_back(name);
    return dir / name;
  }
};

// Shortest round-trip form for report prose; CSVs use format_real.
std::string real(double x) { return fmt::format("{}", x == 0.0 ? 0.0 : x); }

std::string threshold_text(const std::optional<double>& t) { return t ? real(*t) : std::string("none"); }

ipd::PayoffMatrix payoff_of(const ExperimentConfig& c) {
  return ipd::PayoffMatrix(c.payoff.T, c.payoff.R, c.payoff.P, c.payoff.S);
}

void write_trajectory(const fs::path& path, const ipd::MatchResult& r) {
  CsvWriter w(path, {"round", "action_x", "action_y", "payoff_x", "payoff_y"});
  for (std::size_t t = 0; t < r.trajectory.size(); ++t) {
    const auto& row = r.trajectory[t];
    w.cell(static_cast<int>(t + 1))
        .cell(std::string_view(row.x == ipd::Action::Cooperate ? "C" : "D"))
        .cell(std::string_view(row.y == ipd::Action::Cooperate ? "C" : "D"))
        .cell(row.payoff_x)
        .cell(row.payoff_y);
    w.end_row();
  }
}

void run_ipd_match(const ExperimentConfig& c, Output& out) {
  const auto payoff = payoff_of(c);
  const ipd::MatchConfig mc{c.match.horizon, c.match.discount, c.seed};
  const auto r = ipd::play_match(c.x, c.y, payoff, mc);
  write_trajectory(out.csv("trajectory.csv"), r);
  const auto th = ipd::critical_discount(payoff);

  out.results = {{"discounted_payoffs", {r.discounted_payoffs.first, r.discounted_payoffs.second}},
                 {"total_payoffs", {r.total_payoffs.first, r.total_payoffs.second}},
                 {"group_payoff_per_round", r.group_payoff_per_round}};
  std::ostringstream md;
  md << "# ipd_match\n\n"
     << fmt::format("Payoffs T={} R={} P={} S={} (regime: {})\n\n", real(payoff.T()), real(payoff.R()),
                    real(payoff.P()), real(payoff.S()), ipd::to_string(payoff.regime()))
     << fmt::format("{} vs {}, {} rounds, discount {}\n\n", c.x.name(), c.y.name(), c.match.horizon,
                    real(c.match.discount))
     << "| player | discounted payoff | total payoff |\n|---|---|---|\n"
     << fmt::format("| x | {} | {} |\n", real(r.discounted_payoffs.first), real(r.total_payoffs.first))
     << fmt::format("| y | {} | {} |\n\n", real(r.discounted_payoffs.second), real(r.total_payoffs.second))
     << fmt::format("Group payoff per player per round: {}\n\n", real(r.group_payoff_per_round))
     << "| threshold | value |\n|---|---|\n"
     << fmt::format("| solved (bisection) | {} |\n| paper_formula, (P-S)/(T-R) | {} |\n", threshold_text(th.solved),
                    real(th.paper_formula));
  out.report = md.str();
}

void run_ipd_tournament(const ExperimentConfig& c, Output& out) {
  const auto payoff = payoff_of(c);
  const ipd::MatchConfig mc{c.match.horizon, c.match.discount, c.seed};
  const auto t = ipd::tournament(c.strategies, payoff, mc);
  const auto n = static_cast<Eigen::Index>(t.names.size());
  {
    CsvWriter w(out.csv("scores.csv"), {"index", "strategy", "mean_discounted_payoff", "mean_group_payoff"});
    for (Eigen::Index a = 0; a < n; ++a) {
      w.cell(static_cast<int>(a)).cell(t.names[a]).cell(t.mean_payoff(a)).cell(t.mean_group(a));
      w.end_row();
    }
  }
  {
    CsvWriter w(out.csv("pairs.csv"), {"index_a", "index_b", "payoff_a", "group_payoff"});
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b) {
        w.cell(static_cast<int>(a)).cell(static_cast<int>(b)).cell(t.pair_payoff(a, b)).cell(t.pair_group(a, b));
        w.end_row();
      }
  }
  std::ostringstream md;
  md << "# ipd_tournament\n\n"
     << fmt::format("Payoffs T={} R={} P={} S={} (regime: {}), {} rounds, discount {}\n\n", real(payoff.T()),
                    real(payoff.R()), real(payoff.P()), real(payoff.S()), ipd::to_string(payoff.regime()),
                    c.match.horizon, real(c.match.discount))
     << "| # | strategy | mean discounted payoff | mean group payoff |\n|---|---|---|---|\n";
  for (Eigen::Index a = 0; a < n; ++a)
    md << fmt::format("| {} | {} | {} | {} |\n", a, t.names[a], real(t.mean_payoff(a)), real(t.mean_group(a)));
  out.report = md.str();
}

void run_delta_scan(const ExperimentConfig& c, Output& out) {
  const auto payoff = payoff_of(c);
  const auto scan = delta_scan(payoff, c.grid.points());
  {
    CsvWriter w(out.csv("delta_scan.csv"),
                {"delta", "stick", "deviate", "sign", "above_solved", "above_paper_formula"});
    for (const auto& r : scan.rows) {
      w.cell(r.delta).cell(r.stick).cell(r.deviate).cell(r.sign).cell(r.above_solved).cell(r.above_paper_formula);
      w.end_row();
    }
  }
  const auto& th = scan.threshold;
  int mismatched_solved = 0, mismatched_paper = 0;
  for (const auto& r : scan.rows) {
    mismatched_solved += (r.sign > 0) != r.above_solved;
    mismatched_paper += (r.sign > 0) != r.above_paper_formula;
  }
  out.results = {{"solved", th.solved ? json(*th.solved) : json(nullptr)},
                 {"paper_formula", th.paper_formula},
                 {"rows_disagreeing_with_solved", mismatched_solved},
                 {"rows_disagreeing_with_paper_formula", mismatched_paper}};
  std::ostringstream md;
  md << "# delta_scan\n\n"
     << fmt::format("Payoffs T={} R={} P={} S={}\n\n", real(payoff.T()), real(payoff.R()), real(payoff.P()),
                    real(payoff.S()))
     << "| threshold | value | grid rows where sign(stick - deviate) > 0 disagrees |\n|---|---|---|\n"
     << fmt::format("| solved (bisection) | {} | {} |\n", threshold_text(th.solved), mismatched_solved)
     << fmt::format("| paper_formula, (P-S)/(T-R) | {} | {} |\n\n", real(th.paper_formula), mismatched_paper)
     << th.diagnostic << "\n";
  out.report = md.str();
}

void write_equilibrium(const mfg::EquilibriumResult<double>& r, Output& out) {
  const int H = r.policy.horizon();
  const int N = r.policy.N();
  {
    CsvWriter w(out.csv("policy.csv"), {"t", "j", "pi_wait", "pi_move"});
    for (int t = 0; t < H; ++t)
      for (int j = 0; j <= N; ++j) {
        w.cell(t).cell(j).cell(r.policy.slice(t)(j, mfg::kWait)).cell(r.policy.slice(t)(j, mfg::kMove));
        w.end_row();
      }
  }
  {
    CsvWriter w(out.csv("flow.csv"), {"t", "j", "prob"});
    for (int t = 0; t <= H; ++t)
      for (int j = 0; j <= N; ++j) {
        w.cell(t).cell(j).cell(r.distribution_flow[t][j]);
        w.end_row();
      }
  }
  {
    CsvWriter w(out.csv("values.csv"), {"t", "j", "q_wait", "q_move"});
    for (int t = 0; t <= H; ++t)
      for (int j = 0; j <= N; ++j) {
        w.cell(t).cell(j).cell(r.values.q[t](j, mfg::kWait)).cell(r.values.q[t](j, mfg::kMove));
        w.end_row();
      }
  }
  {
    CsvWriter w(out.csv("diag.csv"), {"iter", "policy_residual", "dist_residual"});
    for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
      w.cell(static_cast<int>(k + 1)).cell(r.residual_history[k].policy).cell(r.residual_history[k].distribution);
      w.end_row();
    }
  }
  out.results["converged"] = r.converged;
  out.results["residuals_monotone"] = r.monotone;
  out.results["iterations"] = r.iterations;
  out.results["exploitability"] = r.exploitability;
  out.results["greedy_gap"] = r.greedy_gap;
  out.results["final_mean_count"] = r.distribution_flow.back().mean();
}

std::string equilibrium_report(const mfg::MfgParams<double>& p, const mfg::EquilibriumResult<double>& r) {
  std::ostringstream md;
  const auto& last = r.residual_history.back();
  md << fmt::format("N={} i={} delta={} tau={} H={} reward_mode={} alpha={} b_base={} kappa={} B={}\n\n", p.N, p.i,
                    real(p.delta), real(p.tau), p.horizon, mfg::to_string(p.reward_mode), real(p.alpha),
                    real(p.b_base), real(p.kappa), real(p.B))
     << "| quantity | value |\n|---|---|\n"
     << fmt::format("| converged | {} |\n", r.converged ? "yes" : "no")
     << fmt::format("| residuals monotone after warm-up | {} |\n", r.monotone ? "yes" : "no")
     << fmt::format("| iterations | {} |\n", r.iterations)
     << fmt::format("| final policy residual | {} |\n", real(last.policy))
     << fmt::format("| final distribution residual | {} |\n", real(last.distribution))
     << fmt::format("| E[j] at t=0 | {} |\n", real(r.distribution_flow.front().mean()))
     << fmt::format("| E[j] at t=H | {} |\n", real(r.distribution_flow.back().mean()))
     << fmt::format("| exploitability (tau-regularized) | {} |\n", real(r.exploitability))
     << fmt::format("| greedy best-response gap | {} |\n", real(r.greedy_gap));
  return md.str();
}

void run_mfg(const ExperimentConfig& c, Output& out, bool simulate) {
  const auto r = mfg::solve_equilibrium(c.mfg, c.solver);
  write_equilibrium(r, out);
  std::ostringstream md;
  md << (simulate ? "# mfg_simulate\n\n" : "# mfg_solve\n\n") << equilibrium_report(c.mfg, r);
  if (simulate) {
    const auto s = mfg::simulate_population(c.mfg, r.policy, c.simulate.episodes, c.seed);
    {
      CsvWriter w(out.csv("simulation.csv"), {"t", "empirical_mean_j", "mean_field_mean_j", "abs_diff_over_N"});
      for (Eigen::Index t = 0; t < s.mean_count.size(); ++t) {
        w.cell(static_cast<int>(t))
            .cell(s.mean_count(t))
            .cell(s.mean_field_count(t))
            .cell(std::abs(s.mean_count(t) - s.mean_field_count(t)) / c.mfg.N);
        w.end_row();
      }
    }
    {
      CsvWriter w(out.csv("agents.csv"), {"agent_id", "mean_episode_utility"});
      for (Eigen::Index a = 0; a < s.agent_reward.size(); ++a) {
        w.cell(static_cast<int>(a)).cell(s.agent_reward(a));
        w.end_row();
      }
    }
    out.results["mean_field_deviation"] = s.deviation;
    out.results["episodes"] = s.episodes;
    md << fmt::format("\nFinite-N simulation: {} episodes of {} agents, sup_t |E^[j]/N - E_P[j]/N| = {}\n",
                      s.episodes, c.mfg.N, real(s.deviation));
  }
  out.report = md.str();
}

void write_ledger(const fs::path& path, const roles::RotationLedger& ledger, std::string_view max_label,
                  std::string_view sacrifice_label) {
  CsvWriter w(path, {"round", "agent_id", "role", "streak", "cumulative_sacrifices", "credited_reward"});
  for (const auto& row : ledger.rows()) {
    w.cell(row.round)
        .cell(row.agent_id)
        .cell(row.role == roles::Role::MaxReward ? max_label : sacrifice_label)
        .cell(row.streak)
        .cell(row.cumulative_sacrifices)
        .cell(row.credited_reward);
    w.end_row();
  }
}

std::string fairness_section(const roles::RotationLedger& ledger, const std::vector<double>& immediate,
                             std::string_view max_label, std::string_view sacrifice_label, Output& out) {
  const auto f = roles::fairness_report(ledger);
  {
    CsvWriter w(out.csv("fairness.csv"),
                {"agent_id", "max_reward_count", "sacrifice_count", "immediate_reward", "credited_reward"});
    for (int id = 0; id < ledger.size(); ++id) {
      w.cell(id)
          .cell(f.max_reward_counts[id])
          .cell(f.sacrifice_counts[id])
          .cell(immediate[id])
          .cell(ledger.agent(id).credited_reward);
      w.end_row();
    }
  }
  out.results["max_reward_gap"] = f.max_reward_gap;
  out.results["credit_stddev"] = f.credit_stddev;
  std::ostringstream md;
  md << fmt::format("| agent | times {} | times {} | immediate reward | delayed credit |\n|---|---|---|---|---|\n",
                    max_label, sacrifice_label);
  for (int id = 0; id < ledger.size(); ++id)
    md << fmt::format("| {} | {} | {} | {} | {} |\n", id, f.max_reward_counts[id], f.sacrifice_counts[id],
                      real(immediate[id]), real(ledger.agent(id).credited_reward));
  md << fmt::format("\nFairness gap (max - min times {}): {}\n\nCredited-reward std dev: {}, range: {}\n",
                    max_label, f.max_reward_gap, real(f.credit_stddev), real(f.credit_range));
  return md.str();
}

void run_roles(const ExperimentConfig& c, Output& out) {
  const auto params = c.intersection_params();
  std::optional<mfg::EquilibriumResult<double>> eq;
  if (c.intersection.source == MoverSource::Mfg) {
    eq = mfg::solve_equilibrium(params, c.solver);
    out.results["converged"] = eq->converged;
    out.results["exploitability"] = eq->exploitability;
  }
  const auto log = run_intersection(c.intersection, params, eq ? &eq->policy : nullptr, c.seed);
  write_ledger(out.csv("ledger.csv"), log.ledger, "mover", "waiter");
  {
    CsvWriter w(out.csv("rounds.csv"), {"round", "movers", "passed", "mover_ids"});
    for (const auto& r : log.rounds) {
      std::string ids;
      for (int id : r.movers) ids += (ids.empty() ? "" : " ") + std::to_string(id);
      w.cell(r.round).cell(static_cast<int>(r.movers.size())).cell(r.passed).cell(ids);
      w.end_row();
    }
  }
  const auto passed = std::count_if(log.rounds.begin(), log.rounds.end(), [](const auto& r) { return r.passed; });
  out.results["rounds_passed"] = passed;
  out.results["total_passes"] = log.group_outcome;
  std::ostringstream md;
  md << "# roles_run (intersection)\n\n"
     << fmt::format("{} agents, threshold i={}, {} rounds, cohort {}, source {}\n\n", c.intersection.n_agents,
                    c.intersection.threshold, c.intersection.rounds, c.intersection.cohort,
                    to_json(c)["intersection"]["source"].get<std::string>())
     << fmt::format("Rounds passed: {} of {}; total passes (group outcome): {}\n\n", passed, c.intersection.rounds,
                    real(log.group_outcome));
  if (eq) md << fmt::format("Policy from mean-field equilibrium (converged: {})\n\n", eq->converged ? "yes" : "no");
  md << fairness_section(log.ledger, log.immediate_reward, "mover", "waiter", out);
  out.report = md.str();
}

void run_dungeon_experiment(const ExperimentConfig& c, Output& out) {
  const auto log = run_dungeon(c.dungeon, c.seed);
  write_ledger(out.csv("ledger.csv"), log.ledger, "escaper", "sacrificer");
  {
    CsvWriter w(out.csv("rounds.csv"), {"round", "sacrificer", "success"});
    for (const auto& r : log.rounds) {
      w.cell(r.round).cell(r.sacrificer).cell(r.success);
      w.end_row();
    }
  }
  std::vector<int> sacrifices;
  for (const auto& rec : log.ledger.agents()) sacrifices.push_back(rec.sacrifice_count);
  out.results["sacrifice_counts"] = sacrifices;
  out.results["group_outcome"] = log.group_outcome;
  std::ostringstream md;
  md << "# dungeon\n\n"
     << fmt::format("{} agents, {} rounds, rotation {}\n\n", c.dungeon.n_agents, c.dungeon.rounds,
                    to_json(c)["dungeon"]["rotation"].get<std::string>())
     << "Sacrificer per round:";
  for (const auto& r : log.rounds) md << ' ' << r.sacrificer;
  md << "\n\n" << fairness_section(log.ledger, log.immediate_reward, "escaper", "sacrificer", out);
  out.report = md.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

RunArtifacts run(const ExperimentConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  Output out{out_dir, {}, json::object(), {}};
  try {
    switch (config.kind) {
      case ExperimentKind::IpdMatch: run_ipd_match(config, out); break;
      case ExperimentKind::IpdTournament: run_ipd_tournament(config, out); break;
      case ExperimentKind::DeltaScan: run_delta_scan(config, out); break;
      case ExperimentKind::MfgSolve: run_mfg(config, out, false); break;
      case ExperimentKind::MfgSimulate: run_mfg(config, out, true); break;
      case ExperimentKind::RolesRun: run_roles(config, out); break;
      case ExperimentKind::Dungeon: run_dungeon_experiment(config, out); break;
    }
  } catch (const NumericalIntegrityError& ex) {
    throw NumericalIntegrityError(fmt::format("{} run: {}", to_string(config.kind), ex.what()));
  }

  json manifest = to_json(config);
  manifest["manifest"] = {{"tool", "coopdyn"},
                          {"version", COOPDYN_VERSION},
                          {"files", out.csv_files},
                          {"results", out.results}};
  write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
  write_text(out_dir / "report.md", out.report);
  return {out_dir, out.csv_files, manifest, out.report};
}

bool files_identical(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  return std::equal(std::istreambuf_iterator<char>(fa), std::istreambuf_iterator<char>(),
                    std::istreambuf_iterator<char>(fb), std::istreambuf_iterator<char>());
}

ReproductionCheck reproduce(const fs::path& manifest_path, const fs::path& report_dir) {
  const auto config = load_config(manifest_path);
  const fs::path original = manifest_path.parent_path();

  std::random_device rd;
  const fs::path scratch =
      fs::temp_directory_path() / fmt::format("coopdyn-reproduce-{:016x}", (std::uint64_t{rd()} << 32) | rd());
  ReproductionCheck check;
  std::string body;
  try {
    const auto fresh = run(config, scratch);
    for (const auto& name : fresh.csv_files)
      (files_identical(scratch / name, original / name) ? check.identical : check.differing).push_back(name);
    body = fresh.report;
  } catch (...) {
    fs::remove_all(scratch);
    throw;
  }
  fs::remove_all(scratch);

  std::ostringstream md;
  md << body << "\n## Reproducibility\n\n"
     << fmt::format("Re-ran {} and byte-compared {} CSV file(s) with {}.\n\n", manifest_path.filename().string(),
                    check.identical.size() + check.differing.size(), original.string());
  for (const auto& n : check.identical) md << "- " << n << ": identical\n";
  for (const auto& n : check.differing) md << "- " << n << ": DIFFERS\n";
  fs::create_directories(report_dir);
  write_text(report_dir / "report.md", md.str());
  return check;
}

}  // namespace coopdyn::harness
