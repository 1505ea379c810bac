// bench: run the online-learning benchmark harness, the fast-rate
// simulations, and result summaries. Exit codes: 0 ok, 1 config error,
// 2 data error, 3 numerical error.
#include <glob.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>

#include "metagrad/bench.hpp"
#include "metagrad/errors.hpp"

namespace fs = std::filesystem;
using namespace metagrad;

namespace {

std::string dataset_stem(const std::string& path) {
  std::string stem = fs::path(path).filename().string();
  for (const char* suffix : {".gz", ".txt", "_scale"}) {
    const std::size_t n = std::strlen(suffix);
    if (stem.size() > n && stem.compare(stem.size() - n, n, suffix) == 0) {
      stem.resize(stem.size() - n);
    }
  }
  return stem;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g;
  std::vector<std::string> paths;
  const int rc = glob(pattern.c_str(), GLOB_TILDE, nullptr, &g);
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) paths.push_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (paths.empty()) throw DataError("no files match '" + pattern + "'");
  return paths;
}

int run_command(const std::string& dataset, const std::string& data_dir,
                const std::string& loss_name, const std::string& algo_name,
                double sigma_factor, bool hypertune, std::uint64_t seed,
                bool normalize, const std::string& out_path) {
  ExperimentConfig config;
  config.loss = loss_from_string(loss_name);
  config.algo = parse_algo(algo_name);
  config.seed = seed;
  config.normalize = normalize;

  const bool explicit_path = fs::exists(dataset);
  const std::string path = resolve_dataset_path(dataset, data_dir);
  config.dataset = explicit_path ? dataset_stem(dataset) : dataset;
  const auto examples = load_libsvm(path);
  const DenseDataset data =
      preprocess(examples, is_classification_loss(config.loss), normalize,
                 config.dataset);

  const Eigen::VectorXd u_star = solve_comparator(data, config.loss);
  const DomainSizes sizes = size_domains(data, u_star);

  std::vector<RunRecord> records;
  const std::vector<double> factors =
      hypertune ? hypertune_grid() : std::vector<double>{sigma_factor};
  for (double factor : factors) {
    config.sigma_factor = factor;
    records.push_back(run_experiment(data, config, u_star, sizes));
    const RunRecord& r = records.back();
    std::cerr << r.dataset << "/" << r.loss << "/" << r.algo
              << " sigma_factor=" << r.sigma_factor << " regret=" << r.regret
              << " resets=" << r.resets << "\n";
  }
  write_run_csv_file(out_path, records);
  return 0;
}

int simulate_command(const std::string& kind_name, long t_max,
                     std::uint64_t seed, const std::string& out_path) {
  const SimKind kind = sim_kind_from_string(kind_name);
  const SimCurves curves = run_simulation(kind, t_max, seed);
  write_sim_csv_file(out_path, kind, seed, curves);
  std::cerr << to_string(kind) << " T=" << t_max
            << " final regrets: metagrad=" << curves.metagrad.back()
            << " adagrad=" << curves.adagrad.back()
            << " ogdnorm=" << curves.ogdnorm.back() << "\n";
  return 0;
}

int summarize_command(const std::string& in_glob, const std::string& baseline) {
  const auto cells = read_run_csvs(expand_glob(in_glob));
  const Summary summary = summarize(cells, baseline);
  std::printf("%-12s %8s %22s %12s\n", "algo", "#best",
              ("#better than " + baseline).c_str(), "MedianRatio");
  for (const auto& row : summary.rows) {
    std::printf("%-12s %8d %22d %12.2f\n", row.algo.c_str(), row.n_best,
                row.n_better, row.median_ratio);
  }
  if (!summary.missing.empty()) {
    std::printf("missing cells (excluded from medians):\n");
    for (const auto& cell : summary.missing) {
      std::printf("  %s\n", cell.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online convex optimization benchmark harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one algorithm on a data set");
  std::string dataset, loss_name, algo_name, out_path, data_dir = "data";
  double sigma_factor = 1.0;
  bool hypertune = false, normalize = false;
  std::uint64_t seed = 0;
  run->add_option("--dataset", dataset, "data set name or file path")
      ->required();
  run->add_option("--loss", loss_name, "hinge|logistic|absolute|squared")
      ->required();
  run->add_option("--algo", algo_name,
                  "ogdt|ogdnorm|adagrad|mgco|mgf:<m>|mgfull")
      ->required();
  run->add_option("--sigma-factor", sigma_factor,
                  "multiplier on the theoretical sigma");
  run->add_flag("--hypertune", hypertune,
                "sweep the 28-point sigma-factor grid");
  run->add_option("--seed", seed, "recorded in the output");
  run->add_flag("--normalize", normalize,
                "min-max scale raw features to [-1,1]");
  run->add_option("--data-dir", data_dir, "directory with LIBSVM files");
  run->add_option("--out", out_path, "output CSV path")->required();

  auto* sim = app.add_subcommand("simulate", "fast-rate simulations");
  std::string kind_name;
  long t_max = 1 << 14;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  sim->add_option("--kind", kind_name, "offline_abs|stochastic_abs")
      ->required();
  sim->add_option("--T", t_max, "number of rounds");
  sim->add_option("--seed", sim_seed, "stream seed");
  sim->add_option("--out", sim_out, "output CSV path")->required();

  auto* sum = app.add_subcommand("summarize", "summarize run CSVs");
  std::string in_glob, baseline = "ogdt";
  sum->add_option("--in", in_glob, "glob of run CSV files")->required();
  sum->add_option("--baseline", baseline, "baseline algorithm");

  try {
    app.parse(argc, argv);
    if (run->parsed()) {
      if (hypertune && run->count("--sigma-factor") > 0) {
        throw ConfigError("--hypertune and --sigma-factor are exclusive");
      }
      return run_command(dataset, data_dir, loss_name, algo_name, sigma_factor,
                         hypertune, seed, normalize, out_path);
    }
    if (sim->parsed()) {
      return simulate_command(kind_name, t_max, sim_seed, sim_out);
    }
    return summarize_command(in_glob, baseline);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
