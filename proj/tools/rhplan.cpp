// Command-line front end: run, oracle, compare.
//
// Exit codes: 0 success (run completed or stopped at the iteration limit; oracle found every
// class feasible), 1 bad input or usage, 2 unsatisfiable run or infeasible class, 3 oracle
// refused a class as too large.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "rhp/oracle.hpp"
#include "rhp/render.hpp"
#include "rhp/report.hpp"
#include "rhp/sim.hpp"

namespace fs = std::filesystem;
using namespace rhp;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::string mode;
  std::uint64_t seed = 0;
  int h = 0, H = 0, H_cap = -1, stop_visits = -1, max_iters = -1;
  bool param_sync = false;
  std::vector<std::string> durations;  // AGENT=LO:HI
  bool seed_set = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->set_help_flag("--help", "print this help");  // -h would clash with --h
  cmd->add_option("--mode", f.mode, "stepwise | event")->check(CLI::IsMember({"stepwise", "event"}));
  cmd->add_option("--seed", f.seed, "RNG seed for action durations");
  cmd->add_option("--h", f.h, "short planning horizon");
  cmd->add_option("--H", f.H, "long planning horizon");
  cmd->add_option("--H-cap", f.H_cap, "upper bound for the long horizon extension (0: automatic)");
  cmd->add_option("--stop-visits", f.stop_visits, "stop once every agent has this many accepting visits");
  cmd->add_option("--max-iters", f.max_iters, "stop after this many planning rounds");
  cmd->add_flag("--param-sync", f.param_sync, "synchronize only within offline dependency classes");
  cmd->add_option("--duration", f.durations, "per-agent duration range AGENT=LO:HI (repeatable)");
}

Scenario load(const std::string& path) {
  try {
    return load_scenario_file(path);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

SimConfig apply(Scenario& sc, const RunFlags& f) {
  SimConfig c = sc.config;
  if (!f.mode.empty()) c.mode = parse_mode(f.mode);
  if (f.seed_set) c.seed = f.seed;
  if (f.h > 0) c.h = f.h;
  if (f.H > 0) c.H = f.H;
  if (f.H_cap >= 0) c.H_cap = f.H_cap;
  if (f.stop_visits >= 0) c.stop_visits = f.stop_visits;
  if (f.max_iters >= 0) c.max_iters = f.max_iters;
  if (f.param_sync) c.param_sync = true;
  for (const auto& d : f.durations) {
    auto eq = d.find('='), colon = d.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon < eq)
      throw InputError("--duration " + d + ": expected AGENT=LO:HI");
    const std::string id = d.substr(0, eq);
    int agent = -1;
    for (int i = 0; i < sc.num_agents(); ++i)
      if (sc.agents[i].id == id) agent = i;
    if (agent < 0) throw InputError("--duration " + d + ": unknown agent '" + id + "'");
    DurationRange r;
    try {
      r.lo = std::stoll(d.substr(eq + 1, colon - eq - 1));
      r.hi = std::stoll(d.substr(colon + 1));
    } catch (const std::exception&) {
      throw InputError("--duration " + d + ": bounds must be integers");
    }
    if (r.lo < 1 || r.hi < r.lo) throw InputError("--duration " + d + ": need 1 <= LO <= HI");
    sc.agent_duration[agent] = r;
  }
  return c;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream o(p, std::ios::binary);
  if (!o) throw InputError("cannot write " + p.string());
  o << text;
}

int cmd_run(const std::string& path, const RunFlags& flags, std::string out_dir, const std::string& render,
            bool timing) {
  Scenario sc = load(path);
  SimConfig cfg = apply(sc, flags);
  if (out_dir.empty()) {
    const char* env = std::getenv("RHPLAN_OUT");
    out_dir = env && *env ? env : "rhplan-out";
  }
  fs::create_directories(out_dir);

  std::ostringstream log;
  RunResult r = simulate(sc, cfg, &log);
  write_file(fs::path(out_dir) / "events.jsonl", log.str());

  auto report = run_report_json(sc, cfg, r);
  nlohmann::ordered_json artifacts;
  artifacts["events"] = "events.jsonl";
  nlohmann::ordered_json svgs = nlohmann::ordered_json::array();
  if (render == "svg") {
    if (renderable(sc)) {
      auto times = snapshot_times(sc, r.behaviors, r.metrics.end_time);
      for (std::size_t k = 0; k < times.size(); ++k) {
        std::ostringstream name;
        name << "snapshot_" << std::setw(4) << std::setfill('0') << k << ".svg";
        write_file(fs::path(out_dir) / name.str(), render_svg(sc, r.behaviors, times[k]));
        svgs.push_back(name.str());
      }
      write_file(fs::path(out_dir) / "final.svg", render_svg(sc, r.behaviors, r.metrics.end_time));
      svgs.push_back("final.svg");
    } else {
      std::cerr << "note: rendering skipped, not every agent is on a common grid\n";
    }
  }
  artifacts["renderings"] = svgs;
  report["artifacts"] = artifacts;
  if (timing) report["wall_clock"] = wall_clock_json(r);
  write_file(fs::path(out_dir) / "metrics.json", report.dump(2) + "\n");

  std::cout << status_name(r.status) << ": " << r.metrics.iterations << " planning rounds, "
            << r.metrics.sync_rounds << " barriers, end time " << r.metrics.end_time << ", visits";
  for (int i = 0; i < sc.num_agents(); ++i) std::cout << " " << sc.agents[i].id << "=" << r.metrics.visits[i];
  std::cout << "\n";
  if (!r.report.empty()) std::cout << r.report << "\n";
  std::cout << "artifacts in " << out_dir << "\n";
  return r.status == RunStatus::Unsatisfiable ? 2 : 0;
}

int cmd_oracle(const std::string& path) {
  Scenario sc = load(path);
  int code = 0;
  for (const auto& r : oracle_check_feasible(sc)) {
    std::cout << "class {";
    for (std::size_t i = 0; i < r.members.size(); ++i) std::cout << (i ? ", " : "") << sc.agents[r.members[i]].id;
    std::cout << "}: " << r.message << "\n";
    if (r.status == OracleStatus::Infeasible) code = 2;
    else if (r.status == OracleStatus::Refused && code == 0) code = 3;
  }
  return code;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string part;
  try {
    while (std::getline(ss, part, ',')) {
      auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
        continue;
      }
      std::uint64_t a = std::stoull(part.substr(0, dash)), b = std::stoull(part.substr(dash + 1));
      if (b < a) throw InputError("--seeds " + s + ": empty range " + part);
      for (std::uint64_t x = a; x <= b; ++x) out.push_back(x);
    }
  } catch (const std::invalid_argument&) {
    throw InputError("--seeds " + s + ": expected a list like 1-20 or 3,5,8");
  }
  if (out.empty()) throw InputError("--seeds: no seeds given");
  return out;
}

struct Row {
  int iterations = 0, sync_rounds = 0;
  std::int64_t first_k = -1;
  std::string status;
};

int cmd_compare(const std::string& path, const RunFlags& flags, const std::string& seeds_text, std::string agent_id,
                int k, int jobs) {
  Scenario sc = load(path);
  SimConfig base = apply(sc, flags);
  int agent = sc.num_agents() > 1 ? 1 : 0;
  if (!agent_id.empty()) {
    agent = -1;
    for (int i = 0; i < sc.num_agents(); ++i)
      if (sc.agents[i].id == agent_id) agent = i;
    if (agent < 0) throw InputError("--agent: unknown agent '" + agent_id + "'");
  }
  const auto seeds = parse_seeds(seeds_text);

  auto one = [&](std::uint64_t seed, SyncMode mode) {
    SimConfig c = base;
    c.seed = seed;
    c.mode = mode;
    RunResult r = simulate(sc, c);
    return Row{r.metrics.iterations, r.metrics.sync_rounds, r.metrics.completion_time(agent, k),
               status_name(r.status)};
  };
  std::vector<std::pair<Row, Row>> rows(seeds.size());
  std::vector<std::future<void>> pending;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    pending.push_back(std::async(std::launch::async, [&, i] {
      rows[i] = {one(seeds[i], SyncMode::Stepwise), one(seeds[i], SyncMode::Event)};
    }));
    if (static_cast<int>(pending.size()) >= std::max(jobs, 1)) {
      for (auto& p : pending) p.get();
      pending.clear();
    }
  }
  for (auto& p : pending) p.get();

  const std::string tk = "t_first" + std::to_string(k);
  std::cout << "first-" << k << " services of agent " << sc.agents[agent].id << "\n";
  std::cout << std::left << std::setw(8) << "seed" << std::setw(12) << "step_iters" << std::setw(12) << "step_sync"
            << std::setw(14) << ("step_" + tk) << std::setw(12) << "event_iters" << std::setw(12) << "event_sync"
            << std::setw(16) << ("event_" + tk) << "status\n";
  double sum[6] = {0, 0, 0, 0, 0, 0};
  int reached[2] = {0, 0};
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& [s, e] = rows[i];
    std::cout << std::setw(8) << seeds[i] << std::setw(12) << s.iterations << std::setw(12) << s.sync_rounds
              << std::setw(14) << s.first_k << std::setw(12) << e.iterations << std::setw(12) << e.sync_rounds
              << std::setw(16) << e.first_k << s.status << "/" << e.status << "\n";
    sum[0] += s.iterations;
    sum[1] += s.sync_rounds;
    sum[3] += e.iterations;
    sum[4] += e.sync_rounds;
    if (s.first_k >= 0) sum[2] += s.first_k, ++reached[0];
    if (e.first_k >= 0) sum[5] += e.first_k, ++reached[1];
  }
  const double n = static_cast<double>(seeds.size());
  auto mean_t = [&](int idx, int cnt) { return cnt ? sum[idx] / cnt : -1.0; };
  std::cout << std::fixed << std::setprecision(1) << "\nmean stepwise: iterations " << sum[0] / n << ", sync rounds "
            << sum[1] / n << ", " << tk << " " << mean_t(2, reached[0]) << " (" << reached[0] << " runs)\n"
            << "mean event:    iterations " << sum[3] / n << ", sync rounds " << sum[4] / n << ", " << tk << " "
            << mean_t(5, reached[1]) << " (" << reached[1] << " runs)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Receding-horizon multi-agent planner"};
  app.require_subcommand(1);

  std::string scenario, out_dir, render = "svg", seeds = "1-20", agent;
  bool timing = false;
  int k = 7, jobs = 4;
  RunFlags flags;

  auto* run = app.add_subcommand("run", "plan and execute a scenario");
  run->add_option("scenario", scenario, "scenario file")->required();
  add_run_flags(run, flags);
  run->add_option("--out", out_dir, "output directory (default: $RHPLAN_OUT, else ./rhplan-out)");
  run->add_option("--render", render, "svg | none")->check(CLI::IsMember({"svg", "none"}));
  run->add_flag("--timing", timing, "add a wall_clock section to metrics.json");

  auto* oracle = app.add_subcommand("oracle", "centralized feasibility check per offline class");
  oracle->add_option("scenario", scenario, "scenario file")->required();

  auto* compare = app.add_subcommand("compare", "stepwise against event-triggered over several seeds");
  compare->add_option("scenario", scenario, "scenario file")->required();
  add_run_flags(compare, flags);
  compare->add_option("--seeds", seeds, "seed list, e.g. 1-20 or 3,5,8");
  compare->add_option("--agent", agent, "agent whose first services are timed (default: the second agent)");
  compare->add_option("--first", k, "number of services timed")->check(CLI::PositiveNumber);
  compare->add_option("--jobs", jobs, "seeds run in parallel")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  flags.seed_set = run->count("--seed") > 0 || compare->count("--seed") > 0;

  try {
    if (*run) return cmd_run(scenario, flags, out_dir, render, timing);
    if (*oracle) return cmd_oracle(scenario);
    return cmd_compare(scenario, flags, seeds, agent, k, jobs);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
