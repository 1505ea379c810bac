#include "metagrad/libsvm.hpp"

#include <zlib.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "metagrad/errors.hpp"

namespace metagrad {

namespace {

[[noreturn]] void parse_fail(long line_number, const std::string& what) {
  throw DataError("libsvm parse error at line " + std::to_string(line_number) +
                  ": " + what);
}

double parse_double(std::string_view tok, long line_number) {
  // strtod handles the exponent/inf spellings found in the wild
  std::string buf(tok);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE || buf.empty()) {
    parse_fail(line_number, "bad numeric token '" + buf + "'");
  }
  return v;
}

}  // namespace

SparseExample parse_libsvm_line(std::string_view line, long line_number) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos) {
    line = line.substr(0, hash);
  }
  SparseExample ex;
  std::istringstream in{std::string(line)};
  std::string tok;
  if (!(in >> tok)) parse_fail(line_number, "empty example");
  ex.label = parse_double(tok, line_number);
  int prev_index = 0;
  while (in >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) {
      parse_fail(line_number, "expected idx:val, got '" + tok + "'");
    }
    int index = 0;
    const auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + colon, index);
    if (ec != std::errc() || ptr != tok.data() + colon) {
      parse_fail(line_number, "bad feature index in '" + tok + "'");
    }
    if (index < 1) parse_fail(line_number, "feature index < 1");
    if (index <= prev_index) {
      parse_fail(line_number, "non-increasing feature index");
    }
    const double value = parse_double(
        std::string_view(tok).substr(colon + 1), line_number);
    ex.features.emplace_back(index, value);
    prev_index = index;
  }
  return ex;
}

std::string to_libsvm_line(const SparseExample& example) {
  std::ostringstream out;
  out.precision(17);
  out << example.label;
  for (const auto& [idx, val] : example.features) {
    out << ' ' << idx << ':' << val;
  }
  return out.str();
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> read_lines_gz(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw DataError("cannot open " + path);
  std::string content;
  char buf[1 << 16];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) content.append(buf, n);
  const bool bad = n < 0;
  gzclose(f);
  if (bad) throw DataError("gzip read failure on " + path);
  std::vector<std::string> lines;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> read_lines_plain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::string resolve_dataset_path(const std::string& name,
                                 const std::string& data_dir) {
  namespace fs = std::filesystem;
  if (fs::exists(name)) return name;
  const std::vector<std::string> stems = {name, name + "_scale"};
  const std::vector<std::string> exts = {"", ".txt", ".gz", ".txt.gz"};
  for (const auto& stem : stems) {
    for (const auto& ext : exts) {
      const fs::path candidate = fs::path(data_dir) / (stem + ext);
      if (fs::exists(candidate)) return candidate.string();
    }
  }
  throw DataError("data set '" + name + "' not found under '" + data_dir +
                  "'; see README for download instructions");
}

std::vector<SparseExample> load_libsvm(const std::string& path) {
  const auto lines =
      has_suffix(path, ".gz") ? read_lines_gz(path) : read_lines_plain(path);
  std::vector<SparseExample> examples;
  examples.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank_or_comment(lines[i])) continue;
    examples.push_back(parse_libsvm_line(lines[i], static_cast<long>(i + 1)));
  }
  return examples;
}

const std::vector<DatasetMeta>& dataset_registry() {
  static const std::vector<DatasetMeta> registry = {
      {"a9a", 32561, 123, true},      {"australian", 690, 14, true},
      {"breast-cancer", 683, 9, true}, {"covtype", 581012, 54, true},
      {"diabetes", 768, 8, true},     {"heart", 270, 13, true},
      {"ijcnn1", 91701, 22, true},    {"ionosphere", 351, 34, true},
      {"phishing", 11055, 68, true},  {"splice", 1000, 60, true},
      {"w8a", 49479, 300, true},      {"abalone", 4177, 8, false},
      {"bodyfat", 252, 14, false},    {"cpusmall", 8192, 12, false},
      {"housing", 506, 13, false},    {"mg", 1385, 6, false},
      {"space_ga", 3107, 6, false},
  };
  return registry;
}

const DatasetMeta* find_dataset_meta(std::string_view name) {
  for (const auto& meta : dataset_registry()) {
    if (name == meta.name) return &meta;
  }
  return nullptr;
}

DenseDataset preprocess(const std::vector<SparseExample>& examples,
                        bool classification, bool normalize,
                        const std::string& name) {
  if (examples.empty()) throw DataError("data set is empty");
  int max_index = 0;
  for (const auto& ex : examples) {
    if (!ex.features.empty()) {
      max_index = std::max(max_index, ex.features.back().first);
    }
  }
  const long rows = static_cast<long>(examples.size());
  if (const DatasetMeta* meta = find_dataset_meta(name)) {
    if (rows != meta->rows || max_index != meta->dim) {
      throw DataError("data set '" + name + "' has shape " +
                      std::to_string(rows) + "x" + std::to_string(max_index) +
                      ", registry expects " + std::to_string(meta->rows) +
                      "x" + std::to_string(meta->dim));
    }
  }

  DenseDataset ds;
  ds.name = name;
  ds.raw_dim = max_index;
  ds.classification = classification;
  ds.x = Eigen::MatrixXd::Zero(rows, max_index + 1);
  ds.y = Eigen::VectorXd::Zero(rows);
  for (long t = 0; t < rows; ++t) {
    ds.y(t) = examples[t].label;
    for (const auto& [idx, val] : examples[t].features) {
      ds.x(t, idx - 1) = val;
    }
  }

  if (normalize && max_index > 0) {
    // per-feature min-max scaling to [-1,1]; constant features map to 0
    for (int j = 0; j < max_index; ++j) {
      const double lo = ds.x.col(j).minCoeff();
      const double hi = ds.x.col(j).maxCoeff();
      if (hi > lo) {
        ds.x.col(j) = (2.0 * (ds.x.col(j).array() - lo) / (hi - lo)) - 1.0;
      } else {
        ds.x.col(j).setZero();
      }
    }
  }
  ds.x.col(max_index).setOnes();  // intercept feature

  if (classification) {
    std::set<double> labels(ds.y.data(), ds.y.data() + ds.y.size());
    const bool already_signed =
        labels.size() <= 2 &&
        std::all_of(labels.begin(), labels.end(),
                    [](double v) { return v == 1.0 || v == -1.0; });
    if (!already_signed) {
      if (labels.size() != 2) {
        throw DataError("classification data must have exactly 2 distinct "
                        "labels, found " +
                        std::to_string(labels.size()));
      }
      // deterministic remap: larger raw label -> +1
      const double hi = *labels.rbegin();
      for (long t = 0; t < rows; ++t) ds.y(t) = ds.y(t) == hi ? 1.0 : -1.0;
    }
  }
  return ds;
}

}  // namespace metagrad
