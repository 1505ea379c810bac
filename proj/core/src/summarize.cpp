#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "metagrad/bench.hpp"
#include "metagrad/errors.hpp"

namespace metagrad {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Summary summarize(const std::vector<CellResult>& cells,
                  const std::string& baseline_algo) {
  // rows are (dataset, loss); keep first-seen order for both rows and algos
  std::vector<std::pair<std::string, std::string>> row_keys;
  std::vector<std::string> algos;
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>>
      table;
  for (const auto& cell : cells) {
    const auto key = std::make_pair(cell.dataset, cell.loss);
    if (!table.count(key)) row_keys.push_back(key);
    auto& row = table[key];
    if (!row.count(cell.algo)) {
      if (std::find(algos.begin(), algos.end(), cell.algo) == algos.end()) {
        algos.push_back(cell.algo);
      }
      row[cell.algo] = cell.regret;
    } else {
      // duplicates (e.g. hypertune sweeps) keep the best regret
      row[cell.algo] = std::min(row[cell.algo], cell.regret);
    }
  }
  if (std::find(algos.begin(), algos.end(), baseline_algo) == algos.end()) {
    throw ConfigError("baseline algorithm '" + baseline_algo +
                      "' absent from the input cells");
  }

  Summary summary;
  std::map<std::string, AlgoSummary> per_algo;
  std::map<std::string, std::vector<double>> ratios;
  for (const auto& algo : algos) per_algo[algo].algo = algo;

  for (const auto& key : row_keys) {
    const auto& row = table[key];
    double row_min = std::numeric_limits<double>::infinity();
    for (const auto& [algo, regret] : row) row_min = std::min(row_min, regret);
    const auto base_it = row.find(baseline_algo);
    for (const auto& algo : algos) {
      const auto it = row.find(algo);
      if (it == row.end()) {
        summary.missing.push_back(key.first + "/" + key.second + ": " + algo);
        continue;
      }
      auto& s = per_algo[algo];
      ++s.n_cells;
      // "within one regret unit": at most one unit above
      if (it->second <= row_min + 1.0) ++s.n_best;
      if (base_it != row.end()) {
        if (it->second <= base_it->second + 1.0) ++s.n_better;
        if (base_it->second != 0) {
          ratios[algo].push_back(it->second / base_it->second);
        }
      }
    }
  }

  for (const auto& algo : algos) {
    auto& s = per_algo[algo];
    s.median_ratio = median(ratios[algo]);
    summary.rows.push_back(s);
  }
  return summary;
}

}  // namespace metagrad
