#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "zob/algorithms/solver.hpp"
#include "zob/algorithms/tuning.hpp"
#include "zob/problems/benchmarks.hpp"

namespace zob::bench {

/// Malformed or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ProblemSpec {
  std::string kind = "quad_ball";  // quad_ball | toy_grid
  Index dim = 0;
  std::uint64_t seed = 0;
  double objective_std = 0;
  double constraint_std = 0;
  /// Constraint noise as a fraction of the constraint range (toy_grid: the
  /// required curtailment p(0) - D; quad_ball: 1). Added to constraint_std.
  double constraint_std_relative = 0;
  std::uint64_t noise_seed = 0;

  bool noisy() const { return objective_std > 0 || constraint_std > 0 || constraint_std_relative > 0; }
  /// Canonical one-line description used to match h* fixtures.
  std::string key() const;
};

/// A problem instance for one run. `clean` shares the construction but has no
/// observation noise; `known_h_star` is set when the optimum is closed form.
struct BuiltProblem {
  OracleProblem<double> problem;
  OracleProblem<double> clean;
  std::optional<double> known_h_star;
  double constraint_range = 1;
};

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t run_seed);

/// One (algorithm, block size, step sizes) cell of the experiment grid.
struct RunCell {
  SolverConfig<double> config;
  bool theory = false;
};

struct ExperimentPlan {
  ProblemSpec problem;
  std::vector<RunCell> cells;
  std::vector<std::uint64_t> seeds;
  std::int64_t max_iters = 0;
  std::string init = "default";  // default | zero | midpoint | random
  std::optional<bool> project_x;
  int metrics_stride = 10;
  std::optional<double> moreau_lipschitz;
  std::optional<double> lipschitz;
  std::optional<double> h_star;
  std::filesystem::path hstar_file;
  HStarOptions<double> hstar_job;
  std::filesystem::path output_dir = "out";

  std::size_t run_count() const { return cells.size() * seeds.size(); }
};

ExperimentPlan parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
ExperimentPlan load_config(const std::filesystem::path& path);

/// Replaces the step sizes of every cell (or only cells flagged `theory` when
/// `all` is false) by schedule_defaults. Needs plan.lipschitz, else probes.
void apply_theory(ExperimentPlan& plan, bool all);

struct RunFailure {
  std::size_t cell = 0;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExecuteOptions {
  unsigned jobs = 1;
  std::uint64_t seed_offset = 0;
};

struct ExecutionResult {
  /// Cell-major, then in seed order. Failed runs are absent here.
  std::vector<RunTrace<double>> traces;
  /// Plan cell index of each trace.
  std::vector<std::size_t> trace_cells;
  std::vector<RunFailure> failures;
  std::optional<double> h_star;
};

/// Resolves h* from the plan: explicit value, fixture file, or closed form.
std::optional<double> resolve_h_star(const ExperimentPlan& plan);

ExecutionResult execute(const ExperimentPlan& plan, const ExecuteOptions& options = {});

/// Table-style aggregate over seeds for one (algorithm, b, target).
struct SummaryRow {
  std::string algorithm;
  Index block_size = 0;
  double target_rel_error = 0;
  double mean_iterations = 0;
  double mean_queries = 0;
  double success_fraction = 0;
  std::size_t runs = 0;
};

/// First k with rel_error <= target and violation <= 0, averaged over the
/// runs that reach it. Throws ConfigError when traces lack rel_error.
std::vector<SummaryRow> summarize(const std::vector<RunTrace<double>>& traces, const std::vector<double>& targets);

std::vector<double> parse_targets(const std::string& csv);

/// Trace CSV: k,queries,h,violation,g_norm,moreau_norm,rel_error,seed,algorithm,b
/// with 17 significant digits; rows seed-major, k-minor.
void emit_csv(const std::vector<RunTrace<double>>& traces, const std::filesystem::path& path);
void emit_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path);
std::string traces_to_csv(const std::vector<RunTrace<double>>& traces);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

std::vector<RunTrace<double>> read_traces_csv(const std::filesystem::path& path);
/// All trace_*.csv files of a directory, in file-name order.
std::vector<RunTrace<double>> read_trace_dir(const std::filesystem::path& dir);

/// Writes every cell's traces to `<dir>/trace_<algorithm>_b<b>.csv` (one
/// file per cell, index-suffixed on name clashes) plus failures.csv when any
/// run failed. Returns the written paths.
std::vector<std::filesystem::path> write_run_outputs(const ExperimentPlan& plan, const ExecutionResult& result,
                                                     const std::filesystem::path& dir);

/// Temp file plus rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// h* fixture job and its JSON file.
HStarResult<double> run_hstar_job(const ExperimentPlan& plan);
void write_hstar_file(const ExperimentPlan& plan, const HStarResult<double>& result,
                      const std::filesystem::path& path);

}  // namespace zob::bench
