#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metagrad {

// One line of a LIBSVM-format file: "<label> <idx>:<val> ..." with 1-based,
// strictly increasing feature indices.
struct SparseExample {
  double label = 0.0;
  std::vector<std::pair<int, double>> features;
};

// Parses a single line; tolerates trailing whitespace and '#' comments.
// Throws DataError (with the line number) on malformed tokens,
// non-increasing indices, or indices < 1.
SparseExample parse_libsvm_line(std::string_view line, long line_number);

std::string to_libsvm_line(const SparseExample& example);

// Loads a LIBSVM file; gzip-compressed inputs are accepted by extension
// sniffing (".gz"). Blank and comment-only lines are skipped.
std::vector<SparseExample> load_libsvm(const std::string& path);

// Resolves a data set name to a file: an existing path wins, otherwise the
// data directory is searched under the usual LIBSVM spellings
// (<name>, <name>_scale, plus .txt/.gz variants). Throws DataError when
// nothing matches.
std::string resolve_dataset_path(const std::string& name,
                                 const std::string& data_dir);

// Registry of benchmark data sets with their expected shapes. Files are
// fetched by the user (see README); loading a registered name with a
// different shape fails loudly.
struct DatasetMeta {
  const char* name;
  long rows;  // T
  int dim;    // d, before the intercept feature
  bool binary;
};

const DatasetMeta* find_dataset_meta(std::string_view name);
const std::vector<DatasetMeta>& dataset_registry();

// Dense preprocessed data set: features densified to dimension d+1 with a
// constant intercept feature 1 appended as the last coordinate.
struct DenseDataset {
  std::string name;
  Eigen::MatrixXd x;  // T x (d+1)
  Eigen::VectorXd y;
  int raw_dim = 0;  // d, before the intercept
  bool classification = false;
};

// Densifies, appends the intercept, and for classification maps labels to
// {-1,+1} (two distinct raw labels; the larger one becomes +1). When
// normalize is set, raw features are min-max scaled to [-1,1] per feature
// before the intercept is appended. If name matches a registered data set,
// the parsed shape is validated against the registry.
DenseDataset preprocess(const std::vector<SparseExample>& examples,
                        bool classification, bool normalize,
                        const std::string& name = "");

}  // namespace metagrad
