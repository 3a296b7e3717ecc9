#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "zob/bench/bench.hpp"

namespace zob::bench {

std::vector<SummaryRow> summarize(const std::vector<RunTrace<double>>& traces, const std::vector<double>& targets) {
  for (const auto& t : traces) {
    for (const auto& r : t.records) {
      if (!r.rel_error)
        throw ConfigError(
            "traces carry no rel_error: no h* fixture was available. Run `zobench oracle-hstar <config>` first, "
            "then re-run the experiment");
    }
  }
  std::map<std::pair<std::string, Index>, std::vector<const RunTrace<double>*>> groups;
  std::vector<std::pair<std::string, Index>> order;
  for (const auto& t : traces) {
    const auto key = std::make_pair(std::string(to_string(t.algorithm)), t.block_size);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&t);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SummaryRow> rows;
  for (const auto& key : order) {
    const auto& runs = groups[key];
    for (double target : targets) {
      SummaryRow row;
      row.algorithm = key.first;
      row.block_size = key.second;
      row.target_rel_error = target;
      row.runs = runs.size();
      double iters = 0, queries = 0;
      std::size_t hits = 0;
      for (const RunTrace<double>* t : runs) {
        for (const auto& r : t->records) {
          if (*r.rel_error <= target && r.violation <= 0) {
            iters += static_cast<double>(r.k);
            queries += static_cast<double>(r.queries);
            ++hits;
            break;
          }
        }
      }
      row.success_fraction = runs.empty() ? 0 : static_cast<double>(hits) / static_cast<double>(runs.size());
      row.mean_iterations = hits ? iters / static_cast<double>(hits) : nan;
      row.mean_queries = hits ? queries / static_cast<double>(hits) : nan;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<double> parse_targets(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "inf" || item == "Inf" || item == "infinity") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    std::size_t used = 0;
    double v;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("invalid target '" + item + "'");
    }
    if (used != item.size() || std::isnan(v) || v < 0) throw ConfigError("invalid target '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("no targets given");
  return out;
}

}  // namespace zob::bench
