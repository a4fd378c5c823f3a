#include "coopdyn/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "coopdyn/errors.hpp"
#include "coopdyn/ipd/payoff.hpp"
#include "coopdyn/roles/assign.hpp"

namespace coopdyn::harness {

using nlohmann::json;

namespace {

constexpr ExperimentKind kAllKinds[] = {ExperimentKind::IpdMatch,  ExperimentKind::IpdTournament,
                                        ExperimentKind::DeltaScan, ExperimentKind::MfgSolve,
                                        ExperimentKind::MfgSimulate, ExperimentKind::RolesRun,
                                        ExperimentKind::Dungeon};

// Errors accumulated over the whole document.
struct Errors {
  std::vector<std::string> items;
  void add(std::string msg) { items.push_back(std::move(msg)); }
};

// Typed access to one JSON object that remembers which keys were consumed.
class Reader {
 public:
  Reader(const json& obj, std::string path, Errors& errors) : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) {
      errors_.add(fmt::format("{}: expected an object", label()));
      ok_ = false;
    }
  }

  bool has(const std::string& key) const { return ok_ && obj_.contains(key); }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.add(fmt::format("{}.{}: wrong type ({})", path_, key, obj_.at(key).type_name()));
    }
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (!has(key)) return;
    seen_.insert(key);
    if (obj_.at(key).is_null()) {
      out.reset();
      return;
    }
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      errors_.add(fmt::format("{}.{}: wrong type ({})", path_, key, obj_.at(key).type_name()));
    }
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    seen_.insert(key);
    return &obj_.at(key);
  }

  void mark(const std::string& key) { seen_.insert(key); }

  void finish() {
    if (!ok_) return;
    for (const auto& [key, _] : obj_.items())
      if (!seen_.count(key)) errors_.add(fmt::format("{}.{}: unknown key", path_, key));
  }

  std::string sub(const std::string& key) const { return path_ + "." + key; }
  std::string label() const { return path_; }
  Errors& errors() { return errors_; }

 private:
  const json& obj_;
  std::string path_;
  Errors& errors_;
  std::set<std::string> seen_;
  bool ok_ = true;
};

void require(Errors& e, bool cond, const std::string& msg) {
  if (!cond) e.add(msg);
}

ipd::Strategy parse_strategy(const json& j, const std::string& path, Errors& errors) {
  ipd::Strategy s;
  try {
    if (j.is_string()) {
      s.kind = ipd::strategy_kind_from_string(j.get<std::string>());
      return s;
    }
    Reader r(j, path, errors);
    std::string kind = "all_c";
    std::optional<std::string> parity;
    std::optional<std::uint32_t> punishment;
    r.read("kind", kind);
    r.read("role_parity", parity);
    r.read("punishment_length", punishment);
    r.finish();
    s.kind = ipd::strategy_kind_from_string(kind);
    if (parity) s.role_parity = ipd::parity_from_string(*parity);
    s.punishment_length = punishment;
    if (s.kind != ipd::StrategyKind::Alternator && (s.role_parity || s.punishment_length))
      errors.add(path + ": role_parity/punishment_length apply to alternator only");
  } catch (const ValidationError& ex) {
    errors.add(path + ": " + ex.what());
  }
  return s;
}

json strategy_json(const ipd::Strategy& s) {
  json j{{"kind", std::string(ipd::to_string(s.kind))}};
  if (s.kind == ipd::StrategyKind::Alternator) {
    j["role_parity"] = s.role_parity ? json(std::string(ipd::to_string(*s.role_parity))) : json(nullptr);
    j["punishment_length"] = s.punishment_length ? json(*s.punishment_length) : json(nullptr);
  }
  return j;
}

void parse_payoff(Reader& parent, PayoffConfig& p) {
  const json* node = parent.child("payoff");
  if (!node) return;
  Reader r(*node, parent.sub("payoff"), parent.errors());
  r.read("T", p.T);
  r.read("R", p.R);
  r.read("P", p.P);
  r.read("S", p.S);
  r.finish();
  try {
    ipd::PayoffMatrix(p.T, p.R, p.P, p.S);
  } catch (const ValidationError& ex) {
    parent.errors().add(parent.sub("payoff") + ": " + ex.what());
  }
}

void parse_match(Reader& parent, MatchBlock& m) {
  const json* node = parent.child("match");
  if (!node) return;
  Reader r(*node, parent.sub("match"), parent.errors());
  r.read("horizon", m.horizon);
  r.read("discount", m.discount);
  r.finish();
  require(parent.errors(), m.horizon >= 1, parent.sub("match.horizon") + ": must be >= 1");
  require(parent.errors(), m.discount >= 0.0 && m.discount < 1.0, parent.sub("match.discount") + ": must lie in [0, 1)");
}

void parse_grid(Reader& parent, GridConfig& g) {
  const json* node = parent.child("grid");
  if (!node) return;
  Reader r(*node, parent.sub("grid"), parent.errors());
  r.read("values", g.values);
  r.read("start", g.start);
  r.read("stop", g.stop);
  r.read("step", g.step);
  r.finish();
  auto& e = parent.errors();
  const auto in_range = [](double d) { return d >= 0.0 && d < 1.0; };
  if (g.values) {
    require(e, !g.values->empty(), parent.sub("grid.values") + ": must not be empty");
    for (double d : *g.values)
      require(e, in_range(d), fmt::format("{}: grid point {} outside [0, 1)", parent.sub("grid.values"), d));
  } else {
    require(e, g.step > 0.0, parent.sub("grid.step") + ": must be > 0");
    require(e, in_range(g.start) && in_range(g.stop) && g.start <= g.stop,
            parent.sub("grid") + ": need 0 <= start <= stop < 1");
  }
}

void parse_credit(Reader& parent, roles::CreditRule& c) {
  const json* node = parent.child("credit");
  if (!node) return;
  Reader r(*node, parent.sub("credit"), parent.errors());
  std::string rule = c.share == roles::ShareRule::EqualSplit ? "equal_split" : "full_each";
  r.read("rule", rule);
  r.read("completion_bonus", c.completion_bonus);
  r.finish();
  if (rule == "equal_split") c.share = roles::ShareRule::EqualSplit;
  else if (rule == "full_each") c.share = roles::ShareRule::FullEach;
  else parent.errors().add(parent.sub("credit.rule") + ": expected equal_split|full_each");
}

json credit_json(const roles::CreditRule& c) {
  return {{"rule", c.share == roles::ShareRule::EqualSplit ? "equal_split" : "full_each"},
          {"completion_bonus", c.completion_bonus}};
}

void parse_mfg(Reader& parent, mfg::MfgParams<double>& p, bool check) {
  const json* node = parent.child("mfg");
  auto& e = parent.errors();
  if (node) {
    Reader r(*node, parent.sub("mfg"), e);
    r.read("N", p.N);
    r.read("i", p.i);
    r.read("delta", p.delta);
    r.read("kappa", p.kappa);
    r.read("B", p.B);
    r.read("alpha", p.alpha);
    r.read("b_base", p.b_base);
    r.read("tau", p.tau);
    r.read("horizon", p.horizon);
    r.read("enforce_reward_ranking", p.enforce_reward_ranking);
    std::string mode(mfg::to_string(p.reward_mode));
    r.read("reward_mode", mode);
    try {
      p.reward_mode = mfg::reward_mode_from_string(mode);
    } catch (const ValidationError& ex) {
      e.add(parent.sub("mfg.reward_mode") + ": " + ex.what());
    }
    if (const json* t = r.child("reward_table")) {
      Reader tr(*t, parent.sub("mfg.reward_table"), e);
      tr.read("move_uncongested", p.reward_table.move_uncongested);
      tr.read("wait_uncongested", p.reward_table.wait_uncongested);
      tr.read("wait_congested", p.reward_table.wait_congested);
      tr.read("move_congested", p.reward_table.move_congested);
      tr.finish();
    }
    if (const json* init = r.child("initial_distribution")) {
      const std::string where = parent.sub("mfg.initial_distribution");
      if (init->is_null()) {
        p.initial.reset();
      } else if (init->is_array()) {
        try {
          const auto v = init->get<std::vector<double>>();
          p.initial = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        } catch (const json::exception&) {
          e.add(where + ": expected an array of numbers");
        }
      } else {
        e.add(where + ": expected an array of N + 1 probabilities or null");
      }
    }
    r.finish();
  }
  if (!check) return;
  try {
    p.validate();
  } catch (const ValidationError& ex) {
    e.add(parent.sub("mfg") + ": " + ex.what());
  }
}

json mfg_json(const mfg::MfgParams<double>& p) {
  json init = nullptr;
  if (p.initial) init = std::vector<double>(p.initial->data(), p.initial->data() + p.initial->size());
  return {{"N", p.N},
          {"i", p.i},
          {"delta", p.delta},
          {"kappa", p.kappa},
          {"B", p.B},
          {"alpha", p.alpha},
          {"b_base", p.b_base},
          {"tau", p.tau},
          {"horizon", p.horizon},
          {"reward_mode", std::string(mfg::to_string(p.reward_mode))},
          {"reward_table",
           {{"move_uncongested", p.reward_table.move_uncongested},
            {"wait_uncongested", p.reward_table.wait_uncongested},
            {"wait_congested", p.reward_table.wait_congested},
            {"move_congested", p.reward_table.move_congested}}},
          {"initial_distribution", init},
          {"enforce_reward_ranking", p.enforce_reward_ranking}};
}

void parse_solver(Reader& parent, mfg::SolverOptions& s) {
  const json* node = parent.child("solver");
  if (!node) return;
  Reader r(*node, parent.sub("solver"), parent.errors());
  r.read("tol", s.tol);
  r.read("max_iter", s.max_iter);
  r.read("damping", s.damping);
  r.finish();
  try {
    s.validate();
  } catch (const ValidationError& ex) {
    parent.errors().add(parent.sub("solver") + ": " + ex.what());
  }
}

template <typename Enum, std::size_t K>
void parse_enum(Reader& r, const std::string& key, Enum& out, const std::pair<const char*, Enum> (&names)[K]) {
  std::string current;
  for (const auto& [n, v] : names)
    if (v == out) current = n;
  r.read(key, current);
  for (const auto& [n, v] : names) {
    if (current == n) {
      out = v;
      return;
    }
  }
  std::string options;
  for (const auto& [n, v] : names) options += (options.empty() ? "" : "|") + std::string(n);
  r.errors().add(fmt::format("{}: expected {}", r.sub(key), options));
}

template <typename Enum, std::size_t K>
std::string enum_name(Enum value, const std::pair<const char*, Enum> (&names)[K]) {
  for (const auto& [n, v] : names)
    if (v == value) return n;
  return "unknown";
}

constexpr std::pair<const char*, MoverSource> kMoverSources[] = {
    {"static", MoverSource::Static},
    {"rotation", MoverSource::Rotation},
    {"stochastic", MoverSource::Stochastic},
    {"mfg", MoverSource::Mfg}};
constexpr std::pair<const char*, SacrificeSource> kSacrificeSources[] = {
    {"static", SacrificeSource::Static},
    {"rotation", SacrificeSource::Rotation},
    {"stochastic", SacrificeSource::Stochastic}};

void parse_intersection(Reader& parent, IntersectionConfig& c) {
  const json* node = parent.child("intersection");
  auto& e = parent.errors();
  if (node) {
    Reader r(*node, parent.sub("intersection"), e);
    r.read("n_agents", c.n_agents);
    r.read("threshold", c.threshold);
    r.read("rounds", c.rounds);
    r.read("cohort", c.cohort);
    parse_enum(r, "source", c.source, kMoverSources);
    r.read("window", c.window);
    r.read("tau_s", c.tau_s);
    r.read("s0", c.s0);
    parse_credit(r, c.credit);
    r.finish();
  }
  const std::string p = parent.sub("intersection");
  require(e, c.n_agents >= 2, p + ".n_agents: must be >= 2");
  require(e, c.threshold > 0 && c.threshold < c.n_agents, p + ".threshold: must satisfy 0 < threshold < n_agents");
  require(e, c.rounds >= 1, p + ".rounds: must be >= 1");
  require(e, c.cohort >= 1 && c.cohort < c.n_agents, p + ".cohort: must satisfy 1 <= cohort < n_agents");
  require(e, c.window >= 0, p + ".window: must be >= 0");
  require(e, c.tau_s > 0, p + ".tau_s: must be > 0");
  require(e, !c.s0 || *c.s0 >= 1.0, p + ".s0: must be >= 1");
}

void parse_dungeon(Reader& parent, DungeonConfig& c) {
  const json* node = parent.child("dungeon");
  auto& e = parent.errors();
  if (node) {
    Reader r(*node, parent.sub("dungeon"), e);
    r.read("n_agents", c.n_agents);
    r.read("rounds", c.rounds);
    r.read("success_reward", c.success_reward);
    r.read("sacrifice_cost", c.sacrifice_cost);
    parse_enum(r, "rotation", c.rotation, kSacrificeSources);
    r.read("window", c.window);
    r.read("tau_s", c.tau_s);
    r.read("s0", c.s0);
    parse_credit(r, c.credit);
    r.finish();
  }
  const std::string p = parent.sub("dungeon");
  require(e, c.n_agents >= 2, p + ".n_agents: must be >= 2");
  require(e, c.rounds >= 1, p + ".rounds: must be >= 1");
  require(e, c.window >= 0, p + ".window: must be >= 0");
  require(e, c.tau_s > 0, p + ".tau_s: must be > 0");
  require(e, !c.s0 || *c.s0 >= 1.0, p + ".s0: must be >= 1");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::IpdMatch: return "ipd_match";
    case ExperimentKind::IpdTournament: return "ipd_tournament";
    case ExperimentKind::DeltaScan: return "delta_scan";
    case ExperimentKind::MfgSolve: return "mfg_solve";
    case ExperimentKind::MfgSimulate: return "mfg_simulate";
    case ExperimentKind::RolesRun: return "roles_run";
    case ExperimentKind::Dungeon: return "dungeon";
  }
  return "unknown";
}

std::string_view subcommand_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::IpdMatch: return "ipd-match";
    case ExperimentKind::IpdTournament: return "ipd-tournament";
    case ExperimentKind::DeltaScan: return "delta-scan";
    case ExperimentKind::MfgSolve: return "mfg-solve";
    case ExperimentKind::MfgSimulate: return "mfg-simulate";
    case ExperimentKind::RolesRun: return "roles-run";
    case ExperimentKind::Dungeon: return "dungeon";
  }
  return "unknown";
}

std::optional<ExperimentKind> kind_from_string(std::string_view name) {
  for (auto k : kAllKinds)
    if (to_string(k) == name || subcommand_name(k) == name) return k;
  return std::nullopt;
}

std::vector<double> GridConfig::points() const {
  if (values) return *values;
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  for (long long k = 0; k <= n; ++k) out.push_back(std::round((start + k * step) * 1e12) / 1e12);
  return out;
}

mfg::MfgParams<double> ExperimentConfig::intersection_params() const {
  auto p = mfg;
  p.N = intersection.n_agents;
  p.i = intersection.threshold;
  return p;
}

ExperimentConfig parse_config(const json& doc, std::optional<ExperimentKind> expected) {
  Errors errors;
  ExperimentConfig c;
  Reader top(doc, "config", errors);
  if (!doc.is_object()) throw ValidationError("config: expected a JSON object");

  std::optional<std::string> kind_name;
  top.read("experiment", kind_name);
  if (kind_name) {
    const auto k = kind_from_string(*kind_name);
    if (!k) throw ValidationError("config.experiment: unknown experiment '" + *kind_name + "'");
    if (expected && *k != *expected)
      throw ValidationError(fmt::format("config.experiment: '{}' does not match subcommand '{}'", *kind_name,
                                        subcommand_name(*expected)));
    c.kind = *k;
  } else if (expected) {
    c.kind = *expected;
  } else {
    throw ValidationError("config.experiment: missing");
  }
  top.read("seed", c.seed);
  top.read("output_dir", c.output_dir);
  top.mark("manifest");

  switch (c.kind) {
    case ExperimentKind::IpdMatch:
      parse_payoff(top, c.payoff);
      parse_match(top, c.match);
      if (const json* j = top.child("x")) c.x = parse_strategy(*j, "config.x", errors);
      if (const json* j = top.child("y")) c.y = parse_strategy(*j, "config.y", errors);
      break;
    case ExperimentKind::IpdTournament:
      parse_payoff(top, c.payoff);
      parse_match(top, c.match);
      if (const json* j = top.child("strategies")) {
        if (!j->is_array()) {
          errors.add("config.strategies: expected an array");
        } else {
          for (std::size_t n = 0; n < j->size(); ++n)
            c.strategies.push_back(parse_strategy((*j)[n], fmt::format("config.strategies[{}]", n), errors));
        }
      }
      require(errors, c.strategies.size() >= 2, "config.strategies: need at least two strategies");
      break;
    case ExperimentKind::DeltaScan:
      parse_payoff(top, c.payoff);
      parse_grid(top, c.grid);
      break;
    case ExperimentKind::MfgSimulate:
      if (const json* j = top.child("simulate")) {
        Reader r(*j, "config.simulate", errors);
        r.read("episodes", c.simulate.episodes);
        r.finish();
      }
      require(errors, c.simulate.episodes >= 1, "config.simulate.episodes: must be >= 1");
      [[fallthrough]];
    case ExperimentKind::MfgSolve:
      parse_mfg(top, c.mfg, true);
      parse_solver(top, c.solver);
      break;
    case ExperimentKind::RolesRun: {
      parse_intersection(top, c.intersection);
      parse_mfg(top, c.mfg, false);
      parse_solver(top, c.solver);
      if (errors.items.empty()) {
        try {
          c.intersection_params().validate();
        } catch (const ValidationError& ex) {
          errors.add(std::string("config.mfg (as intersection reward params): ") + ex.what());
        }
      }
      break;
    }
    case ExperimentKind::Dungeon:
      parse_dungeon(top, c.dungeon);
      break;
  }
  top.finish();

  if (!errors.items.empty()) {
    std::string msg = "invalid config:";
    for (const auto& item : errors.items) msg += "\n  " + item;
    throw ValidationError(msg);
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw ValidationError("config " + path.string() + ": " + ex.what());
  }
  return parse_config(doc, expected);
}

json to_json(const ExperimentConfig& c) {
  json j{{"experiment", std::string(to_string(c.kind))}, {"seed", c.seed}, {"output_dir", c.output_dir}};
  const json payoff{{"T", c.payoff.T}, {"R", c.payoff.R}, {"P", c.payoff.P}, {"S", c.payoff.S}};
  const json match{{"horizon", c.match.horizon}, {"discount", c.match.discount}};
  const json solver{{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}, {"damping", c.solver.damping}};
  switch (c.kind) {
    case ExperimentKind::IpdMatch:
      j["payoff"] = payoff;
      j["match"] = match;
      j["x"] = strategy_json(c.x);
      j["y"] = strategy_json(c.y);
      break;
    case ExperimentKind::IpdTournament: {
      j["payoff"] = payoff;
      j["match"] = match;
      json list = json::array();
      for (const auto& s : c.strategies) list.push_back(strategy_json(s));
      j["strategies"] = list;
      break;
    }
    case ExperimentKind::DeltaScan:
      j["payoff"] = payoff;
      if (c.grid.values) j["grid"] = {{"values", *c.grid.values}};
      else j["grid"] = {{"start", c.grid.start}, {"stop", c.grid.stop}, {"step", c.grid.step}};
      break;
    case ExperimentKind::MfgSimulate:
      j["simulate"] = {{"episodes", c.simulate.episodes}};
      [[fallthrough]];
    case ExperimentKind::MfgSolve:
      j["mfg"] = mfg_json(c.mfg);
      j["solver"] = solver;
      break;
    case ExperimentKind::RolesRun: {
      const auto& in = c.intersection;
      j["intersection"] = {{"n_agents", in.n_agents},
                           {"threshold", in.threshold},
                           {"rounds", in.rounds},
                           {"cohort", in.cohort},
                           {"source", enum_name(in.source, kMoverSources)},
                           {"window", in.window},
                           {"tau_s", in.tau_s},
                           {"s0", optional_json(in.s0)},
                           {"credit", credit_json(in.credit)}};
      j["mfg"] = mfg_json(c.mfg);
      j["solver"] = solver;
      break;
    }
    case ExperimentKind::Dungeon: {
      const auto& d = c.dungeon;
      j["dungeon"] = {{"n_agents", d.n_agents},
                      {"rounds", d.rounds},
                      {"success_reward", d.success_reward},
                      {"sacrifice_cost", d.sacrifice_cost},
                      {"rotation", enum_name(d.rotation, kSacrificeSources)},
                      {"window", d.window},
                      {"tau_s", d.tau_s},
                      {"s0", optional_json(d.s0)},
                      {"credit", credit_json(d.credit)}};
      break;
    }
  }
  return j;
}

}  // namespace coopdyn::harness
