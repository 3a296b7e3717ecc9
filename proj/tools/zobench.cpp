#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "zob/bench/bench.hpp"

namespace {

using namespace zob;
using namespace zob::bench;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct Options {
  std::string config;
  std::string trace_dir;
  std::string targets = "0.1,0.01,0.001";
  std::string out;
  std::uint64_t seed_offset = 0;
  unsigned jobs = 1;
  bool theory = false;
};

std::filesystem::path output_dir(const ExperimentPlan& plan, const Options& o) {
  return o.out.empty() ? plan.output_dir : std::filesystem::path(o.out);
}

ExperimentPlan plan_for(const Options& o) {
  ExperimentPlan plan = load_config(o.config);
  if (!o.out.empty()) {
    if (plan.hstar_file == plan.output_dir / "hstar.json") plan.hstar_file = std::filesystem::path(o.out) / "hstar.json";
    plan.output_dir = o.out;
  }
  apply_theory(plan, o.theory);
  return plan;
}

int cmd_run(const Options& o) {
  const ExperimentPlan plan = plan_for(o);
  ExecuteOptions eo;
  eo.jobs = o.jobs;
  eo.seed_offset = o.seed_offset;
  const ExecutionResult result = execute(plan, eo);
  const auto files = write_run_outputs(plan, result, output_dir(plan, o));
  for (const auto& f : files) std::cout << f.string() << '\n';
  if (!result.h_star)
    std::cerr << "note: no h* fixture; rel_error columns are empty (run `zobench oracle-hstar`)\n";
  for (const auto& f : result.failures)
    std::cerr << "run failed: cell " << f.cell << " seed " << f.seed << ": " << f.message << '\n';
  std::cout << result.traces.size() << " runs succeeded, " << result.failures.size() << " failed\n";
  return result.failures.empty() ? kOk : kRuntime;
}

int cmd_summarize(const Options& o) {
  const auto traces = read_trace_dir(o.trace_dir);
  const auto rows = summarize(traces, parse_targets(o.targets));
  const std::filesystem::path out = (o.out.empty() ? std::filesystem::path(o.trace_dir) : std::filesystem::path(o.out));
  emit_csv(rows, out / "summary.csv");
  std::cout << summary_to_csv(rows);
  return kOk;
}

int cmd_hstar(const Options& o) {
  const ExperimentPlan plan = plan_for(o);
  const HStarResult<double> r = run_hstar_job(plan);
  const auto path = output_dir(plan, o) / "hstar.json";
  write_hstar_file(plan, r, path);
  std::cout.precision(17);
  std::cout << "h* = " << r.h_star << "  (kkt: grad " << r.kkt.grad_lagrangian_norm << ", violation "
            << r.kkt.max_violation << ", slack " << r.kkt.max_compl_slack << ")\n"
            << path.string() << '\n';
  return kOk;
}

int cmd_probe(const Options& o) {
  const ExperimentPlan plan = load_config(o.config);
  LipschitzProbeOptions<double> po;
  po.seed = plan.problem.seed + o.seed_offset;
  const auto est = probe_lipschitz(build_problem(plan.problem, 0).clean, po);
  std::cout.precision(17);
  std::cout << "L_hat = " << est.L << "  (" << est.queries << " metrics queries)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order block primal-dual benchmark harness"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed-offset", o.seed_offset, "Added to every run seed");
    sub->add_option("--jobs", o.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    sub->add_flag("--theory", o.theory, "Use theory step-size schedules for every solver");
    sub->add_option("--out", o.out, "Output directory (overrides the config)");
  };
  auto* run = app.add_subcommand("run", "Execute a config and write trace CSVs");
  run->add_option("config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  common(run);
  auto* summ = app.add_subcommand("summarize", "Table of iterations/queries to reach rel-error targets");
  summ->add_option("trace-dir", o.trace_dir, "Directory with trace_*.csv")->required();
  summ->add_option("--targets", o.targets, "Comma-separated rel-error targets (inf allowed)");
  summ->add_option("--out", o.out, "Directory for summary.csv (default: trace-dir)");
  auto* hstar = app.add_subcommand("oracle-hstar", "Compute the h* fixture for a config's problem instance");
  hstar->add_option("config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  hstar->add_option("--out", o.out, "Output directory (overrides the config)");
  auto* probe = app.add_subcommand("probe-L", "Estimate the smoothness constant L");
  probe->add_option("config", o.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  probe->add_option("--seed-offset", o.seed_offset, "Added to the probe seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(o);
    if (*summ) return cmd_summarize(o);
    if (*hstar) return cmd_hstar(o);
    if (*probe) return cmd_probe(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InvalidBlockError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InvalidRadiusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kValidation;
}
