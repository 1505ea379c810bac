#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "metagrad/bench.hpp"
#include "metagrad/errors.hpp"

namespace metagrad {

const char* const kRunCsvHeader =
    "dataset,loss,algo,sigma_factor,T,d,regret,lin_regret,V_T,B_T,resets,"
    "wallclock_ms,seed";

namespace {

// shortest round-trip decimal form, locale-independent ('.' separator)
std::string fmt(double v) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double to_double(const std::string& s, const std::string& path) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw DataError("bad numeric field '" + s + "' in " + path);
  }
}

}  // namespace

void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kRunCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.dataset << ',' << r.loss << ',' << r.algo << ','
        << fmt(r.sigma_factor) << ',' << r.t << ',' << r.dim << ','
        << fmt(r.regret) << ',' << fmt(r.lin_regret) << ',' << fmt(r.v_t)
        << ',' << fmt(r.b_t) << ',' << r.resets << ','
        << fmt(r.wallclock_ms) << ',' << r.seed << '\n';
  }
}

void write_run_csv_file(const std::string& path,
                        const std::vector<RunRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_run_csv(out, records);
}

std::vector<CellResult> read_run_csvs(const std::vector<std::string>& paths) {
  std::vector<CellResult> cells;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty csv: " + path);
    const auto header = split_csv(line);
    int c_dataset = -1, c_loss = -1, c_algo = -1, c_regret = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
      if (header[i] == "dataset") c_dataset = i;
      if (header[i] == "loss") c_loss = i;
      if (header[i] == "algo") c_algo = i;
      if (header[i] == "regret") c_regret = i;
    }
    if (c_dataset < 0 || c_loss < 0 || c_algo < 0 || c_regret < 0) {
      throw DataError("missing required columns in " + path);
    }
    long line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto fields = split_csv(line);
      if (static_cast<int>(fields.size()) <= std::max(
              std::max(c_dataset, c_loss), std::max(c_algo, c_regret))) {
        throw DataError("short row at " + path + ":" + std::to_string(line_no));
      }
      cells.push_back({fields[c_dataset], fields[c_loss], fields[c_algo],
                       to_double(fields[c_regret], path)});
    }
  }
  return cells;
}

void write_sim_csv_file(const std::string& path, SimKind kind,
                        std::uint64_t seed, const SimCurves& curves) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "kind,T,seed,algo,t,regret\n";
  const long t_max = static_cast<long>(curves.metagrad.size());
  const auto emit = [&](const char* algo, const std::vector<double>& curve) {
    for (long t = 0; t < t_max; ++t) {
      out << to_string(kind) << ',' << t_max << ',' << seed << ',' << algo
          << ',' << (t + 1) << ',' << fmt(curve[t]) << '\n';
    }
  };
  emit("metagrad", curves.metagrad);
  emit("adagrad", curves.adagrad);
  emit("ogdnorm", curves.ogdnorm);
}

}  // namespace metagrad
