#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "zob/bench/bench.hpp"

namespace zob::bench {

namespace {

constexpr const char* kTraceHeader = "k,queries,h,violation,g_norm,moreau_norm,rel_error,seed,algorithm,b";
constexpr const char* kSummaryHeader = "algorithm,b,target,mean_iterations,mean_queries,success_fraction,runs";

std::string num(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw ConfigError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(path.string() + ":" + std::to_string(line) + ": bad integer '" + s + "'");
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing: " + std::strerror(errno));
    out << contents;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::string traces_to_csv(const std::vector<RunTrace<double>>& traces) {
  std::vector<const RunTrace<double>*> sorted;
  for (const auto& t : traces) sorted.push_back(&t);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->seed < b->seed; });
  std::ostringstream os;
  os << kTraceHeader << '\n';
  for (const RunTrace<double>* t : sorted) {
    for (const auto& r : t->records) {
      os << r.k << ',' << r.queries << ',' << num(r.h) << ',' << num(r.violation) << ',' << opt(r.g_norm) << ','
         << opt(r.moreau_norm) << ',' << opt(r.rel_error) << ',' << t->seed << ',' << to_string(t->algorithm) << ','
         << t->block_size << '\n';
    }
  }
  return os.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    os << r.algorithm << ',' << r.block_size << ',' << num(r.target_rel_error) << ',' << num(r.mean_iterations) << ','
       << num(r.mean_queries) << ',' << num(r.success_fraction) << ',' << r.runs << '\n';
  }
  return os.str();
}

void emit_csv(const std::vector<RunTrace<double>>& traces, const std::filesystem::path& path) {
  write_file_atomic(path, traces_to_csv(traces));
}

void emit_csv(const std::vector<SummaryRow>& rows, const std::filesystem::path& path) {
  write_file_atomic(path, summary_to_csv(rows));
}

std::vector<RunTrace<double>> read_traces_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw ConfigError("'" + path.string() + "' does not start with the trace header");

  std::vector<RunTrace<double>> out;
  std::map<std::tuple<std::uint64_t, std::string, Index>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 10)
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 10 fields, got " +
                        std::to_string(f.size()));
    TraceRecord r;
    r.k = parse_int(f[0], path, lineno);
    r.queries = parse_int(f[1], path, lineno);
    r.h = parse_double(f[2], path, lineno);
    r.violation = parse_double(f[3], path, lineno);
    if (!f[4].empty()) r.g_norm = parse_double(f[4], path, lineno);
    if (!f[5].empty()) r.moreau_norm = parse_double(f[5], path, lineno);
    if (!f[6].empty()) r.rel_error = parse_double(f[6], path, lineno);
    const auto seed = static_cast<std::uint64_t>(parse_int(f[7], path, lineno));
    const Index b = static_cast<Index>(parse_int(f[9], path, lineno));
    const auto key = std::make_tuple(seed, f[8], b);
    auto it = index.find(key);
    if (it == index.end()) {
      RunTrace<double> t;
      t.seed = seed;
      try {
        t.algorithm = algorithm_from_string(f[8]);
      } catch (const Error& e) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      }
      t.block_size = b;
      out.push_back(std::move(t));
      it = index.emplace(key, out.size() - 1).first;
    }
    out[it->second].records.push_back(r);
  }
  return out;
}

std::vector<RunTrace<double>> read_trace_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("'" + dir.string() + "' is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("trace_", 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ConfigError("no trace_*.csv files in '" + dir.string() + "'");
  std::vector<RunTrace<double>> out;
  for (const auto& f : files) {
    auto part = read_traces_csv(f);
    for (auto& t : part) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::filesystem::path> write_run_outputs(const ExperimentPlan& plan, const ExecutionResult& result,
                                                     const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  std::map<std::string, int> used;
  for (std::size_t c = 0; c < plan.cells.size(); ++c) {
    const SolverConfig<double>& cfg = plan.cells[c].config;
    const Index b = is_block_algorithm(cfg.algorithm) ? cfg.block_size : 0;
    std::string stem = "trace_" + std::string(to_string(cfg.algorithm)) + "_b" + std::to_string(b);
    const int n = used[stem]++;
    if (n > 0) stem += "_" + std::to_string(n);
    std::vector<RunTrace<double>> mine;
    for (std::size_t i = 0; i < result.traces.size(); ++i)
      if (result.trace_cells[i] == c) mine.push_back(result.traces[i]);
    const auto path = dir / (stem + ".csv");
    emit_csv(mine, path);
    written.push_back(path);
  }
  if (!result.failures.empty()) {
    std::ostringstream os;
    os << "cell,seed,message\n";
    for (const auto& f : result.failures) {
      std::string msg = f.message;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      os << f.cell << ',' << f.seed << ',' << msg << '\n';
    }
    const auto path = dir / "failures.csv";
    write_file_atomic(path, os.str());
    written.push_back(path);
  }
  return written;
}

}  // namespace zob::bench
