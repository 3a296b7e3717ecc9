#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "zob/bench/bench.hpp"

namespace zob::bench {

namespace {

using json = nlohmann::json;

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  std::vector<std::string> unknown;
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) unknown.push_back(key);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown key(s) in " + where + ":";
    for (const auto& k : unknown) msg += " '" + k + "'";
    throw ConfigError(msg);
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + " must be a number");
  return v.get<double>();
}

std::uint64_t seed_value(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

/// A scalar or a list matching the block-size list.
std::vector<double> per_block(const json& obj, const char* key, const std::string& where, std::size_t n) {
  const json& v = obj.at(key);
  std::vector<double> out;
  if (v.is_array()) {
    if (v.size() != n)
      throw ConfigError(where + "." + key + " has " + std::to_string(v.size()) + " entries but block_size has " +
                        std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) out.push_back(number(v[i], where + "." + key));
  } else {
    out.assign(n, number(v, where + "." + key));
  }
  return out;
}

ProblemSpec parse_problem(const json& p) {
  check_keys(p, "problem", {"kind", "dim", "seed", "noise"});
  ProblemSpec spec;
  spec.kind = get<std::string>(p, "kind", "problem", "quad_ball");
  if (spec.kind != "quad_ball" && spec.kind != "toy_grid")
    throw ConfigError("problem.kind must be quad_ball or toy_grid, got '" + spec.kind + "'");
  if (!p.contains("dim")) throw ConfigError("problem.dim is required");
  const auto dim = get<std::int64_t>(p, "dim", "problem", 0);
  if (dim < 1) throw ConfigError("problem.dim must be >= 1");
  spec.dim = static_cast<Index>(dim);
  if (p.contains("seed")) spec.seed = seed_value(p["seed"], "problem.seed");
  if (p.contains("noise")) {
    const json& n = p["noise"];
    check_keys(n, "problem.noise", {"objective_std", "constraint_std", "constraint_std_relative", "seed"});
    spec.objective_std = get<double>(n, "objective_std", "problem.noise", 0.0);
    spec.constraint_std = get<double>(n, "constraint_std", "problem.noise", 0.0);
    spec.constraint_std_relative = get<double>(n, "constraint_std_relative", "problem.noise", 0.0);
    if (n.contains("seed")) spec.noise_seed = seed_value(n["seed"], "problem.noise.seed");
    if (spec.objective_std < 0 || spec.constraint_std < 0 || spec.constraint_std_relative < 0)
      throw ConfigError("problem.noise standard deviations must be >= 0");
  }
  return spec;
}

std::vector<std::uint64_t> parse_seeds(const json& s) {
  std::vector<std::uint64_t> out;
  if (s.is_array()) {
    for (const auto& v : s) out.push_back(seed_value(v, "seeds[]"));
  } else if (s.is_object()) {
    check_keys(s, "seeds", {"start", "count"});
    const std::uint64_t start = s.contains("start") ? seed_value(s["start"], "seeds.start") : 0;
    const auto count = get<std::int64_t>(s, "count", "seeds", 1);
    if (count < 1) throw ConfigError("seeds.count must be >= 1");
    for (std::int64_t i = 0; i < count; ++i) out.push_back(start + static_cast<std::uint64_t>(i));
  } else {
    out.push_back(seed_value(s, "seeds"));
  }
  if (out.empty()) throw ConfigError("seeds must not be empty");
  return out;
}

std::vector<Index> parse_block_sizes(const json& v, Index d, const std::string& where) {
  std::vector<Index> out;
  auto one = [&](const json& e) {
    if (e.is_string()) {
      if (e.get<std::string>() != "d") throw ConfigError(where + ".block_size strings must be \"d\"");
      out.push_back(d);
    } else if (e.is_number_integer()) {
      out.push_back(static_cast<Index>(e.get<std::int64_t>()));
    } else {
      throw ConfigError(where + ".block_size must be an integer, \"d\", or a list of those");
    }
  };
  if (v.is_array()) {
    for (const auto& e : v) one(e);
  } else {
    one(v);
  }
  if (out.empty()) throw ConfigError(where + ".block_size must not be empty");
  return out;
}

void parse_solver(const json& s, std::size_t idx, ExperimentPlan& plan) {
  const std::string where = "solvers[" + std::to_string(idx) + "]";
  check_keys(s, where,
             {"algorithm", "block_size", "alpha", "beta", "beta_ratio", "gamma", "p", "theory", "radius", "direction"});
  if (!s.contains("algorithm")) throw ConfigError(where + ".algorithm is required");
  Algorithm alg;
  try {
    alg = algorithm_from_string(get<std::string>(s, "algorithm", where, ""));
  } catch (const InvalidParameterError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  const Index d = plan.problem.dim;
  const bool block = is_block_algorithm(alg);
  std::vector<Index> sizes = s.contains("block_size") ? parse_block_sizes(s["block_size"], d, where)
                                                      : std::vector<Index>{block ? Index(1) : Index(0)};
  if (!block) sizes.assign(sizes.size(), Index(1));
  for (Index b : sizes) {
    if (block) {
      try {
        validate_block_size(d, b);
      } catch (const InvalidBlockError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    }
  }
  const std::size_t n = sizes.size();
  const bool theory = get<bool>(s, "theory", where, false);

  std::vector<double> alpha(n, 0.01), beta(n, 0.01), gamma(n, 1.0), p(n, 0.0);
  if (s.contains("alpha")) alpha = per_block(s, "alpha", where, n);
  if (s.contains("beta") && s.contains("beta_ratio")) throw ConfigError(where + ": give beta or beta_ratio, not both");
  if (s.contains("beta")) beta = per_block(s, "beta", where, n);
  if (s.contains("beta_ratio")) {
    const std::vector<double> ratio = per_block(s, "beta_ratio", where, n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = ratio[i] * alpha[i];
  }
  if (s.contains("gamma")) gamma = per_block(s, "gamma", where, n);
  if (s.contains("p")) p = per_block(s, "p", where, n);
  if (!theory && !s.contains("alpha")) throw ConfigError(where + ": alpha is required unless theory is true");

  double r0 = 0.1, decay = 1.2, cap = 2e-4;
  std::int64_t horizon = plan.max_iters;
  bool auto_rescale = false;
  if (s.contains("radius")) {
    const json& r = s["radius"];
    check_keys(r, where + ".radius", {"r0", "decay", "cap", "horizon", "auto_rescale"});
    r0 = get<double>(r, "r0", where + ".radius", r0);
    decay = get<double>(r, "decay", where + ".radius", decay);
    cap = get<double>(r, "cap", where + ".radius", cap);
    horizon = get<std::int64_t>(r, "horizon", where + ".radius", horizon);
    auto_rescale = get<bool>(r, "auto_rescale", where + ".radius", false);
  } else {
    auto_rescale = true;
  }
  if (horizon < plan.max_iters) {
    std::ostringstream os;
    os << where << ": max_iters K = " << plan.max_iters << " exceeds the radius horizon " << horizon
       << "; the condition sum_{k<=K} r_k^2 <= 1/b must hold over the whole run";
    throw ConfigError(os.str());
  }
  DirectionLaw direction = DirectionLaw::kGaussian;
  const std::string dir = get<std::string>(s, "direction", where, "gaussian");
  if (dir == "sphere")
    direction = DirectionLaw::kSphere;
  else if (dir != "gaussian")
    throw ConfigError(where + ".direction must be gaussian or sphere");

  for (std::size_t i = 0; i < n; ++i) {
    RunCell cell;
    cell.theory = theory;
    SolverConfig<double>& c = cell.config;
    c.algorithm = alg;
    c.block_size = sizes[i];
    c.alpha = alpha[i];
    c.beta = beta[i];
    c.gamma = gamma[i];
    c.p = p[i];
    c.max_iters = plan.max_iters;
    c.direction = direction;
    try {
      c.radius = auto_rescale ? RadiusSchedule<double>::auto_rescaled(r0, decay, cap, sizes[i], horizon)
                              : RadiusSchedule<double>::make(r0, decay, cap, sizes[i], horizon);
    } catch (const Error& e) {
      throw ConfigError(where + ".radius: " + e.what());
    }
    plan.cells.push_back(std::move(cell));
  }
}

}  // namespace

std::string ProblemSpec::key() const {
  std::ostringstream os;
  os.precision(17);
  os << kind << " dim=" << dim << " seed=" << seed;
  return os.str();
}

ExperimentPlan parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"problem", "solvers", "max_iters", "seeds", "init", "project_x", "metrics", "hstar", "hstar_file",
              "hstar_job", "output"});
  ExperimentPlan plan;
  if (!root.contains("problem")) throw ConfigError("config.problem is required");
  plan.problem = parse_problem(root["problem"]);
  if (!root.contains("max_iters")) throw ConfigError("config.max_iters is required");
  plan.max_iters = get<std::int64_t>(root, "max_iters", "config", 0);
  if (plan.max_iters < 0) throw ConfigError("config.max_iters must be >= 0");
  plan.seeds = root.contains("seeds") ? parse_seeds(root["seeds"]) : std::vector<std::uint64_t>{0};

  plan.init = get<std::string>(root, "init", "config", "default");
  if (plan.init != "default" && plan.init != "zero" && plan.init != "midpoint" && plan.init != "random")
    throw ConfigError("config.init must be default, zero, midpoint, or random");
  if (root.contains("project_x")) plan.project_x = get<bool>(root, "project_x", "config", true);

  if (root.contains("metrics")) {
    const json& m = root["metrics"];
    check_keys(m, "metrics", {"stride", "moreau_lipschitz", "lipschitz"});
    plan.metrics_stride = get<int>(m, "stride", "metrics", 10);
    if (plan.metrics_stride < 1) throw ConfigError("metrics.stride must be >= 1");
    if (m.contains("moreau_lipschitz")) plan.moreau_lipschitz = number(m["moreau_lipschitz"], "metrics.moreau_lipschitz");
    if (m.contains("lipschitz")) plan.lipschitz = number(m["lipschitz"], "metrics.lipschitz");
  }
  if (root.contains("hstar")) {
    plan.h_star = number(root["hstar"], "config.hstar");
    if (*plan.h_star == 0) throw ConfigError("config.hstar must be nonzero");
  }
  const std::filesystem::path out = get<std::string>(root, "output", "config", "out");
  plan.output_dir = out.is_absolute() ? out : base_dir / out;
  if (root.contains("hstar_file")) {
    const std::filesystem::path f = get<std::string>(root, "hstar_file", "config", "");
    plan.hstar_file = f.is_absolute() ? f : base_dir / f;
  } else {
    plan.hstar_file = plan.output_dir / "hstar.json";
  }
  if (root.contains("hstar_job")) {
    const json& h = root["hstar_job"];
    check_keys(h, "hstar_job", {"zo_iters", "alpha", "beta", "gamma", "p", "seed", "rho", "outer_iters", "inner_iters",
                                "tolerance"});
    auto& job = plan.hstar_job;
    job.zo_iters = get<std::int64_t>(h, "zo_iters", "hstar_job", job.zo_iters);
    job.alpha = get<double>(h, "alpha", "hstar_job", job.alpha);
    job.beta = get<double>(h, "beta", "hstar_job", job.beta);
    job.gamma = get<double>(h, "gamma", "hstar_job", job.gamma);
    job.p = get<double>(h, "p", "hstar_job", job.p);
    if (h.contains("seed")) job.seed = seed_value(h["seed"], "hstar_job.seed");
    job.rho = get<double>(h, "rho", "hstar_job", job.rho);
    job.outer_iters = get<int>(h, "outer_iters", "hstar_job", job.outer_iters);
    job.inner_iters = get<int>(h, "inner_iters", "hstar_job", job.inner_iters);
    job.tolerance = get<double>(h, "tolerance", "hstar_job", job.tolerance);
  }

  if (!root.contains("solvers") || !root["solvers"].is_array() || root["solvers"].empty())
    throw ConfigError("config.solvers must be a non-empty list");
  for (std::size_t i = 0; i < root["solvers"].size(); ++i) parse_solver(root["solvers"][i], i, plan);
  for (auto& cell : plan.cells) cell.config.metrics_stride = plan.metrics_stride;
  return plan;
}

ExperimentPlan load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace zob::bench
