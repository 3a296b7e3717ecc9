#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "zob/bench/bench.hpp"

namespace zob::bench {

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a * 0x9e3779b97f4a7c15ull + b + 0x632be59bd9b4e019ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

Vector<double> initial_point(const ExperimentPlan& plan, const OracleProblem<double>& problem, std::uint64_t seed) {
  const Index d = problem.dim_x();
  const auto& box = problem.x_box();
  if (plan.init == "zero") return Vector<double>::Zero(d);
  if (plan.init == "midpoint") return box ? box->midpoint() : Vector<double>::Zero(d);
  RandomStream rng(seed, StreamId::kInit);
  if (!box) return rng.gaussian_vector<double>(d);
  Vector<double> x(d);
  for (Index i = 0; i < d; ++i) x(i) = rng.uniform(box->lower(i), box->upper(i));
  return x;
}

}  // namespace

BuiltProblem build_problem(const ProblemSpec& spec, std::uint64_t run_seed) {
  std::optional<OracleProblem<double>> clean;
  std::optional<double> known;
  double range = 1;
  if (spec.kind == "quad_ball") {
    QuadBall<double> qb = make_quad_ball<double>(spec.dim, spec.seed);
    known = qb.h_star;
    clean.emplace(std::move(qb.problem));
  } else if (spec.kind == "toy_grid") {
    ToyGrid<double> tg = make_toy_grid<double>(spec.dim, spec.seed);
    range = tg.curtailment;
    clean.emplace(std::move(tg.problem));
  } else {
    throw ConfigError("unknown problem kind '" + spec.kind + "'");
  }
  BuiltProblem out{clean->clone(), clean->clone(), known, range};
  if (spec.noisy()) {
    NoiseSpec<double> noise;
    noise.objective_std = spec.objective_std;
    noise.constraint_std =
        Vector<double>::Constant(clean->dim_y(), spec.constraint_std + spec.constraint_std_relative * range);
    noise.seed = mix_seed(spec.noise_seed, run_seed);
    out.problem = wrap_noise(*clean, noise);
  }
  return out;
}

std::optional<double> resolve_h_star(const ExperimentPlan& plan) {
  if (plan.h_star) return plan.h_star;
  if (!plan.hstar_file.empty() && std::filesystem::exists(plan.hstar_file)) {
    std::ifstream in(plan.hstar_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("h* fixture '" + plan.hstar_file.string() + "' is not valid JSON: " + e.what());
    }
    if (!j.contains("problem") || j["problem"] != plan.problem.key())
      throw ConfigError("h* fixture '" + plan.hstar_file.string() + "' was computed for a different problem instance (" +
                        j.value("problem", std::string("?")) + " vs " + plan.problem.key() + ")");
    if (!j.contains("h_star") || !j["h_star"].is_number())
      throw ConfigError("h* fixture '" + plan.hstar_file.string() + "' has no numeric h_star");
    return j["h_star"].get<double>();
  }
  return build_problem(plan.problem, 0).known_h_star;
}

void apply_theory(ExperimentPlan& plan, bool all) {
  bool any = false;
  for (const auto& cell : plan.cells) any = any || all || cell.theory;
  if (!any) return;
  double L;
  if (plan.lipschitz) {
    L = *plan.lipschitz;
  } else {
    LipschitzProbeOptions<double> o;
    o.seed = plan.problem.seed;
    L = probe_lipschitz(build_problem(plan.problem, 0).clean, o).L;
  }
  for (auto& cell : plan.cells) {
    if (!all && !cell.theory) continue;
    const SolverConfig<double>& old = cell.config;
    SolverConfig<double> cfg =
        schedule_defaults(L, old.max_iters, old.block_size, plan.problem.dim, old.algorithm);
    cfg.direction = old.direction;
    cfg.metrics_stride = old.metrics_stride;
    cell.config = cfg;
    cell.theory = true;
  }
}

ExecutionResult execute(const ExperimentPlan& plan, const ExecuteOptions& options) {
  ExecutionResult result;
  result.h_star = resolve_h_star(plan);
  const std::size_t runs = plan.run_count();
  std::vector<std::optional<RunTrace<double>>> slots(runs);
  std::vector<std::string> errors(runs);

  auto work = [&](std::size_t idx) {
    const std::size_t cell_idx = idx / plan.seeds.size();
    const std::uint64_t seed = plan.seeds[idx % plan.seeds.size()] + options.seed_offset;
    try {
      BuiltProblem built = build_problem(plan.problem, seed);
      SolverConfig<double> cfg = plan.cells[cell_idx].config;
      cfg.seed = seed;
      cfg.project_x = plan.project_x.value_or(built.problem.x_box().has_value());
      if (plan.init != "default") cfg.x0 = initial_point(plan, built.problem, seed);
      cfg.record_metrics = true;
      cfg.metrics_stride = plan.metrics_stride;
      cfg.moreau_lipschitz = plan.moreau_lipschitz;
      cfg.h_star = result.h_star;
      slots[idx] = run(built.problem, cfg);
    } catch (const std::exception& e) {
      errors[idx] = e.what();
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(runs)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < runs; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < runs; i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < runs; ++i) {
    if (slots[i]) {
      result.traces.push_back(std::move(*slots[i]));
      result.trace_cells.push_back(i / plan.seeds.size());
    } else {
      result.failures.push_back({i / plan.seeds.size(), plan.seeds[i % plan.seeds.size()] + options.seed_offset,
                                 errors[i]});
    }
  }
  return result;
}

HStarResult<double> run_hstar_job(const ExperimentPlan& plan) {
  BuiltProblem built = build_problem(plan.problem, 0);
  return compute_h_star(built.clean, plan.hstar_job);
}

void write_hstar_file(const ExperimentPlan& plan, const HStarResult<double>& r, const std::filesystem::path& path) {
  nlohmann::json j;
  j["problem"] = plan.problem.key();
  j["h_star"] = r.h_star;
  j["kkt"] = {{"grad_lagrangian_norm", r.kkt.grad_lagrangian_norm},
              {"max_violation", r.kkt.max_violation},
              {"max_compl_slack", r.kkt.max_compl_slack}};
  j["solver_queries"] = r.solver_queries;
  j["metrics_queries"] = r.metrics_queries;
  j["y"] = to_std(r.y);
  std::ostringstream os;
  os.precision(17);
  os << j.dump(2) << '\n';
  write_file_atomic(path, os.str());
}

}  // namespace zob::bench
