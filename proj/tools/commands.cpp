#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <set>
#include <sstream>

#include "consol/heuristic.hpp"
#include "consol/ilp.hpp"
#include "consol/problem_io.hpp"
#include "consol/replication.hpp"

namespace consol::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ConsolidationProblem read_problem(const fs::path& path) {
  ConsolidationProblem problem;
  try {
    problem = load_problem(path);
  } catch (const InputError& e) {
    const std::string what = e.what();
    // Syntax errors already carry the path.
    if (what.rfind(path.string(), 0) == 0) throw;
    throw InputError(path.string() + ": " + what);
  }
  const auto violations = validate_problem(problem);
  if (!violations.empty()) {
    std::string msg = path.string() + ": invalid problem";
    for (const auto& v : violations) msg += "\n  " + v.path + ": " + v.reason;
    throw InputError(msg);
  }
  return problem;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw InputError("cannot create output directory '" + dir.string() + "'");
  }
}

std::string solve_summary(const ConsolidationProblem& problem, const DeploymentPlan& plan,
                          Algorithm algorithm, const std::string& status) {
  std::ostringstream s;
  s << "algorithm: " << to_string(algorithm) << "\n"
    << "status: " << status << "\n"
    << "pms: " << plan_pm_count(plan) << "\n"
    << "vms: " << plan_vm_count(plan) << "\n";
  const auto rd = relative_differences(problem, plan);
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    const auto& app = problem.applications[i];
    const double provided = plan.provided.empty() ? 0.0 : plan.provided[i];
    s << "app " << app.id << ": required " << format_number(app.required_throughput)
      << " provided " << format_number(provided) << " rd "
      << (std::isnan(rd[i]) ? std::string("n/a") : format_number(rd[i])) << "\n";
  }
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    const auto& app = problem.applications[i];
    const double provided = plan.provided.empty() ? 0.0 : plan.provided[i];
    if (provided < app.required_throughput) {
      s << "unmet " << app.id << ": shortfall " << format_number(app.required_throughput - provided)
        << "\n";
    }
  }
  return s.str();
}

// --- config parsing -------------------------------------------------------

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw InputError(where + ": unknown key '" + key + "'");
  }
}

std::size_t get_count(const json& obj, const char* key, const std::string& where, std::size_t fallback,
                      std::size_t minimum = 0) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer() || it->get<long long>() < static_cast<long long>(minimum)) {
    throw InputError(where + "." + key + ": expected an integer >= " + std::to_string(minimum));
  }
  return it->get<std::size_t>();
}

double get_number(const json& obj, const char* key, const std::string& where, double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw InputError(where + "." + key + ": expected a number");
  return it->get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& where,
                       const std::string& fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw InputError(where + "." + key + ": expected a string");
  return it->get<std::string>();
}

std::vector<std::size_t> get_factors(const json& obj, const char* key, const std::string& where,
                                     std::vector<std::size_t> fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_array() || it->empty()) throw InputError(where + "." + key + ": expected a non-empty array");
  std::vector<std::size_t> out;
  for (const auto& v : *it) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw InputError(where + "." + key + ": factors must be integers >= 1");
    }
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

void require_detector_name(const std::string& name, const std::string& where) {
  if (name != "oracle" && name != "chi2" && name != "f") {
    throw InputError(where + ": unknown detector '" + name + "' (expected chi2, f or oracle)");
  }
}

// --- scenarios ------------------------------------------------------------

Scenario build_sim_scenario(const ExperimentConfig& cfg) {
  Scenario sc;
  const std::size_t default_periods = cfg.periods.value_or(kDayIntervals);
  if (!cfg.problem) {
    sc = make_replication_scenario(cfg.seed, cfg.sim.f_pm, cfg.sim.f_app, default_periods);
  } else {
    if (cfg.sim.f_pm != 1 || cfg.sim.f_app != 1) {
      throw InputError("f_pm and f_app apply to the replication suite only");
    }
    sc.problem = read_problem(*cfg.problem);
  }
  if (cfg.traces) {
    std::vector<TraceSeries> raw;
    try {
      raw = align_traces(sc.problem, load_traces(*cfg.traces, cfg.sim.period_seconds));
    } catch (const InputError& e) {
      const std::string what = e.what();
      if (what.rfind(cfg.traces->string(), 0) == 0) throw;
      throw InputError(cfg.traces->string() + ": " + what);
    }
    sc.traces.clear();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      sc.traces.push_back(cfg.scale_traces ? scale_trace(raw[i], sc.problem, i) : raw[i]);
    }
  } else if (cfg.problem) {
    std::vector<std::string> ids;
    for (const auto& app : sc.problem.applications) ids.push_back(app.id);
    for (const auto& raw : make_worldcup_traces(cfg.seed, ids, default_periods)) {
      sc.traces.push_back(scale_trace(raw, sc.problem, sc.traces.size()));
    }
  }
  if (cfg.periods) {
    for (auto& trace : sc.traces) {
      if (trace.demands.size() < *cfg.periods) {
        throw InputError("periods: traces have only " + std::to_string(trace.demands.size()) +
                         " intervals");
      }
      trace.demands.resize(*cfg.periods);
    }
  }
  for (auto& trace : sc.traces) trace.interval_seconds = cfg.sim.period_seconds;
  return sc;
}

std::optional<DetectorConfig> detector_for(const ExperimentConfig& cfg) {
  if (cfg.detector == "oracle") return std::nullopt;
  DetectorConfig d = cfg.detector_config;
  d.test = parse_detector_test(cfg.detector);
  return d;
}

}  // namespace

std::vector<std::size_t> parse_factor_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    std::size_t value = 0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size() || value < 1) {
      throw InputError("invalid factor '" + item + "' in list '" + text + "'");
    }
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

ExperimentConfig load_config(const fs::path& path) {
  const json doc = parse_json_text(read_text_file(path), path.string());
  const std::string root = path.string();
  check_keys(doc, root,
             {"seed", "problem", "traces", "scale_traces", "periods", "period_seconds", "algorithm",
              "node_limit", "f_pm", "f_app", "detector", "sensitivity", "bench"});
  const fs::path base = path.parent_path();
  ExperimentConfig cfg;

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw InputError(root + ".seed: expected an unsigned integer");
    cfg.seed = it->get<std::uint64_t>();
  }
  if (doc.contains("problem")) cfg.problem = base / get_string(doc, "problem", root, "");
  if (doc.contains("traces")) cfg.traces = base / get_string(doc, "traces", root, "");
  if (auto it = doc.find("scale_traces"); it != doc.end()) {
    if (!it->is_boolean()) throw InputError(root + ".scale_traces: expected true or false");
    cfg.scale_traces = it->get<bool>();
  }
  if (doc.contains("periods")) cfg.periods = get_count(doc, "periods", root, 0, 1);
  cfg.sim.period_seconds = get_count(doc, "period_seconds", root, 900, 1);
  try {
    cfg.sim.algorithm = parse_algorithm(get_string(doc, "algorithm", root, "3max"));
  } catch (const InputError& e) {
    throw InputError(root + ".algorithm: " + e.what());
  }
  cfg.sim.node_limit = get_count(doc, "node_limit", root, kDefaultNodeLimit, 1);
  cfg.sim.f_pm = get_count(doc, "f_pm", root, 1, 1);
  cfg.sim.f_app = get_count(doc, "f_app", root, 1, 1);

  if (auto it = doc.find("detector"); it != doc.end()) {
    const std::string where = root + ".detector";
    check_keys(*it, where,
               {"test", "window_size", "alpha", "samples_per_period", "test_stride", "chi2_bins",
                "chi2_reference"});
    cfg.detector = get_string(*it, "test", where, "oracle");
    require_detector_name(cfg.detector, where + ".test");
    cfg.detector_config.window_size = get_count(*it, "window_size", where, 1000, 2);
    cfg.detector_config.alpha = get_number(*it, "alpha", where, 0.01);
    if (!(cfg.detector_config.alpha > 0.0 && cfg.detector_config.alpha < 1.0)) {
      throw InputError(where + ".alpha: must lie in (0, 1)");
    }
    cfg.detector_config.test_stride = get_count(*it, "test_stride", where, 0);
    cfg.detector_config.chi2_bins = get_count(*it, "chi2_bins", where, 10, 2);
    try {
      cfg.detector_config.chi2_reference =
          parse_chi2_reference(get_string(*it, "chi2_reference", where, "window"));
    } catch (const InputError& e) {
      throw InputError(where + ".chi2_reference: " + e.what());
    }
    cfg.detector_samples = get_count(*it, "samples_per_period", where, 0);
  }

  if (auto it = doc.find("sensitivity"); it != doc.end()) {
    const std::string where = root + ".sensitivity";
    check_keys(*it, where,
               {"combinations", "combination_seconds", "rate_low", "rate_high", "peak_rate",
                "sample_seconds", "reuse_tolerance"});
    auto& s = cfg.sensitivity;
    s.combinations = get_count(*it, "combinations", where, s.combinations, 1);
    s.combination_seconds = get_number(*it, "combination_seconds", where, s.combination_seconds);
    s.rate_low = get_number(*it, "rate_low", where, s.rate_low);
    s.rate_high = get_number(*it, "rate_high", where, s.rate_high);
    s.peak_rate = get_number(*it, "peak_rate", where, s.peak_rate);
    s.sample_seconds = get_number(*it, "sample_seconds", where, s.sample_seconds);
    s.reuse_tolerance = get_number(*it, "reuse_tolerance", where, s.reuse_tolerance);
    if (!(s.combination_seconds > 0.0) || !(s.sample_seconds > 0.0) || !(s.peak_rate > 0.0) ||
        !(s.rate_low > 0.0) || s.rate_high < s.rate_low || !(s.reuse_tolerance >= 0.0)) {
      throw InputError(where + ": durations and rates must be positive with rate_low <= rate_high");
    }
  }

  if (auto it = doc.find("bench"); it != doc.end()) {
    const std::string where = root + ".bench";
    check_keys(*it, where, {"f_pm", "f_app", "periods", "period_stride", "jobs"});
    auto& b = cfg.bench;
    b.f_pm = get_factors(*it, "f_pm", where, b.f_pm);
    b.f_app = get_factors(*it, "f_app", where, b.f_app);
    b.periods = get_count(*it, "periods", where, b.periods, 1);
    b.period_stride = get_count(*it, "period_stride", where, b.period_stride, 1);
    b.jobs = get_count(*it, "jobs", where, b.jobs, 1);
  }
  return cfg;
}

int cmd_solve(const fs::path& problem_path, Algorithm algorithm, const fs::path& out_dir,
              std::ostream& out) {
  const ConsolidationProblem problem = read_problem(problem_path);
  DeploymentPlan plan;
  std::string status;
  bool satisfied = false;
  if (algorithm == Algorithm::ThreeMax) {
    auto result = three_max(problem);
    plan = std::move(result.plan);
    satisfied = result.all_satisfied;
    status = satisfied ? "satisfied" : "unmet";
  } else {
    auto solution = solve_exact(build_ilp(problem));
    status = to_string(solution.status);
    satisfied = solution.objective_value.has_value();
    plan = satisfied ? std::move(solution.plan) : make_plan(problem, {});
  }
  ensure_directory(out_dir);
  const std::string summary = solve_summary(problem, plan, algorithm, status);
  write_text_file(out_dir / "plan.json", serialize_plan(plan));
  write_text_file(out_dir / "summary.txt", summary);
  out << summary;
  return satisfied ? kExitOk : kExitShortfall;
}

int cmd_export_lp(const fs::path& problem_path, const fs::path& out_file) {
  const ConsolidationProblem problem = read_problem(problem_path);
  write_text_file(out_file, export_lp(build_ilp(problem)));
  return kExitOk;
}

int cmd_validate(const fs::path& problem_path, const std::optional<fs::path>& plan_path,
                 std::ostream& out) {
  const ConsolidationProblem problem = read_problem(problem_path);
  out << "problem: ok (" << problem.num_apps() << " apps, " << problem.num_pms() << " pms, "
      << problem.num_types() << " vm types)\n";
  if (!plan_path) return kExitOk;
  DeploymentPlan plan;
  try {
    plan = plan_from_json(problem, parse_json_text(read_text_file(*plan_path), plan_path->string()));
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(plan_path->string(), 0) == 0) throw;
    throw InputError(plan_path->string() + ": " + what);
  }
  const auto report = check_plan(problem, plan);
  for (const auto& flag : report.overloaded) {
    out << "overloaded: pm " << problem.pms[flag.pm].id << " resource "
        << problem.meta.resources[flag.resource].name << "\n";
  }
  for (std::size_t i = 0; i < problem.num_apps(); ++i) {
    if (report.surplus[i] < 0.0 && !meets(plan.provided[i], problem.applications[i].required_throughput)) {
      out << "unmet: app " << problem.applications[i].id << " shortfall "
          << format_number(-report.surplus[i]) << "\n";
    }
  }
  out << "plan: " << (report.resource_feasible ? "resource-feasible" : "overloaded") << ", "
      << (report.performance_satisfied ? "satisfied" : "unmet") << "\n";
  if (!report.resource_feasible) return kExitInputError;
  return report.performance_satisfied ? kExitOk : kExitShortfall;
}

int cmd_simulate(ExperimentConfig cfg, const fs::path& out_dir, std::ostream& out) {
  const Scenario sc = build_sim_scenario(cfg);
  cfg.sim.seed = cfg.seed;
  cfg.sim.detector = detector_for(cfg);
  cfg.sim.detector_samples = cfg.detector_samples;
  const SimRun run = run_sim(sc.problem, sc.traces, cfg.sim);
  ensure_directory(out_dir);
  write_text_file(out_dir / "metrics.csv", metrics_csv(sc.problem, run.metrics));
  write_text_file(out_dir / "summary.csv", summary_csv(run.metrics));
  write_text_file(out_dir / "plans.jsonl", plans_jsonl(run.plans));
  out << "periods: " << run.metrics.pm_counts.size() << " ord: " << format_number(run.metrics.ord)
      << " pm_mean: " << format_number(mean_pm_count(run.metrics))
      << " #E: " << run.metrics.count_e << " #T: " << run.metrics.count_t
      << " #CNT: " << run.metrics.count_cnt << "\n";
  return kExitOk;
}

int cmd_bench(ExperimentConfig cfg, const fs::path& out_dir, std::ostream& out) {
  if (cfg.problem || cfg.traces) {
    throw InputError("bench runs on the replication suite; remove problem/traces from the config");
  }
  cfg.bench.seed = cfg.seed;
  const auto rows = run_scalability(cfg.bench);
  ensure_directory(out_dir);
  write_text_file(out_dir / "scalability.csv", scalability_csv(rows));
  for (const auto& row : rows) {
    out << "p=" << row.p << " a=" << row.a << " mean_time_ms=" << format_number(row.mean_time_ms)
        << " ord=" << format_number(row.ord) << "\n";
  }
  return kExitOk;
}

int cmd_sensitivity(ExperimentConfig cfg, const fs::path& out_dir, std::ostream& out) {
  const ConsolidationProblem problem =
      cfg.problem ? read_problem(*cfg.problem)
                  : make_replication_problem(cfg.seed, cfg.sim.f_pm, cfg.sim.f_app);
  cfg.sensitivity.seed = cfg.seed;
  cfg.sensitivity.algorithm = cfg.sim.algorithm;
  cfg.sensitivity.detector = detector_for(cfg);
  const SensitivityRun run = run_sensitivity(problem, cfg.sensitivity);
  ensure_directory(out_dir);
  write_text_file(out_dir / "metrics.csv", metrics_csv(problem, run.metrics));
  write_text_file(out_dir / "summary.csv", summary_csv(run.metrics));
  write_text_file(out_dir / "sensitivity.csv", sensitivity_csv(cfg.detector, run));
  out << "detector: " << cfg.detector << " detector_ord: " << format_number(run.detector_ord)
      << " ord: " << format_number(run.metrics.ord) << " #E: " << run.metrics.count_e
      << " #T: " << run.metrics.count_t << " #CNT: " << run.metrics.count_cnt << "\n";
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Throughput-constrained VM consolidation: solvers and experiment harness", "consol"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "Random seed (overrides the config file)");

  std::string problem, out_path, config, plan, algorithm = "3max", detector, fpm, fapp;
  std::optional<std::size_t> jobs;

  auto* solve = app.add_subcommand("solve", "Solve one problem file");
  solve->add_option("--problem", problem, "Problem JSON file")->required();
  solve->add_option("--algorithm", algorithm, "3max or exact")
      ->check(CLI::IsMember({"3max", "exact"}));
  solve->add_option("--out", out_path, "Output directory")->required();

  auto* lp = app.add_subcommand("export-lp", "Write the ILP in CPLEX LP format");
  lp->add_option("--problem", problem, "Problem JSON file")->required();
  lp->add_option("--out", out_path, "Output LP file")->required();

  auto* validate = app.add_subcommand("validate", "Check a problem file and optionally a plan");
  validate->add_option("--problem", problem, "Problem JSON file")->required();
  validate->add_option("--plan", plan, "Plan JSON file");

  auto* simulate = app.add_subcommand("simulate", "Trace-driven simulation");
  simulate->add_option("--config", config, "Experiment config JSON")->required();
  simulate->add_option("--out", out_path, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Scalability sweep");
  bench->add_option("--config", config, "Experiment config JSON")->required();
  bench->add_option("--fpm", fpm, "Comma-separated PM scaling factors");
  bench->add_option("--fapp", fapp, "Comma-separated application scaling factors");
  bench->add_option("--jobs", jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
  bench->add_option("--out", out_path, "Output directory")->required();

  auto* sensitivity = app.add_subcommand("sensitivity", "Workload-change detector experiment");
  sensitivity->add_option("--config", config, "Experiment config JSON")->required();
  sensitivity->add_option("--detector", detector, "chi2, f or oracle")
      ->check(CLI::IsMember({"chi2", "f", "oracle"}));
  sensitivity->add_option("--out", out_path, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (solve->parsed()) return cmd_solve(problem, parse_algorithm(algorithm), out_path, out);
    if (lp->parsed()) return cmd_export_lp(problem, out_path);
    if (validate->parsed()) {
      return cmd_validate(problem, plan.empty() ? std::nullopt : std::optional<fs::path>(plan), out);
    }
    ExperimentConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    if (simulate->parsed()) return cmd_simulate(std::move(cfg), out_path, out);
    if (bench->parsed()) {
      if (!fpm.empty()) cfg.bench.f_pm = parse_factor_list(fpm);
      if (!fapp.empty()) cfg.bench.f_app = parse_factor_list(fapp);
      if (jobs) cfg.bench.jobs = *jobs;
      return cmd_bench(std::move(cfg), out_path, out);
    }
    if (!detector.empty()) cfg.detector = detector;
    return cmd_sensitivity(std::move(cfg), out_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInputError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"consol"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace consol::cli
