#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metagrad/libsvm.hpp"
#include "metagrad/losses.hpp"

namespace metagrad {

// ---------------------------------------------------------------------------
// method roster

enum class Algo { ogdt, ogdnorm, adagrad, mgco, mgf, mgfull };

struct AlgoSpec {
  Algo kind = Algo::mgfull;
  int sketch_m = 0;  // required iff kind == mgf
};

// accepts ogdt | ogdnorm | adagrad | mgco | mgf:<m> | mgfull
AlgoSpec parse_algo(const std::string& name);
std::string to_string(const AlgoSpec& algo);

// ---------------------------------------------------------------------------
// offline comparator and domain sizing

// Unconstrained minimizer of the cumulative loss over R^{d+1}. Squared loss
// is solved exactly; the other losses use deterministic full-batch
// subgradient descent with step c/sqrt(k) and a running-average iterate,
// budget 100000 iterations or objective improvement < 1e-9 over 1000
// iterations, whichever comes first. Throws NumericalError (advising
// feature scaling) if the objective diverges tenfold.
Eigen::VectorXd solve_comparator(const DenseDataset& data, LossKind loss);

double cumulative_loss(const DenseDataset& data, LossKind loss,
                       const Eigen::VectorXd& u);

struct DomainSizes {
  double d2 = 0;    // L2 ball radius, 3*||u*||_2
  double dinf = 0;  // box half-width,  3*||u*||_inf
  double c = 0;     // slab bound,      3*max_t |x_t^T u*|
};

DomainSizes size_domains(const DenseDataset& data, const Eigen::VectorXd& u_star);

// Optimal theoretical sigma: ||u*|| for the multi-eta methods (L2 norm for
// the full/sketched versions, Linf for the coordinate one) and sqrt(8)*||u*||
// in the matching norm for the mirror-descent baselines.
double theoretical_sigma(const AlgoSpec& algo, const Eigen::VectorXd& u_star);

// Hindsight-tuning grid of sigma multipliers: {2^-7,...,2^-4} followed by
// the linear grid 2^-3 + k/8 for k = 0..23; exactly 28 increasing values.
std::vector<double> hypertune_grid();

// ---------------------------------------------------------------------------
// experiment runs

struct ExperimentConfig {
  std::string dataset;  // registry name (or the file's stem)
  LossKind loss = LossKind::hinge;
  AlgoSpec algo;
  double sigma_factor = 1.0;
  std::uint64_t seed = 0;
  bool normalize = false;
  // diagnostic escape hatch for degenerate comparators; the CLI always
  // derives sigma from the theoretical tuning times sigma_factor
  std::optional<double> sigma_override;
};

struct RunRecord {
  std::string dataset, loss, algo;
  double sigma_factor = 1.0;
  long t = 0;
  int dim = 0;  // raw feature dimension (before intercept)
  double regret = 0;
  double lin_regret = 0;
  double v_t = 0;       // sum ((u*-w_t)^T g_t)^2
  double b_t = 0;       // final running range-bound maximum
  long resets = 0;
  double wallclock_ms = 0;
  std::uint64_t seed = 0;
  double sigma = 0;                 // the sigma actually used
  double comparator_loss = 0;      // cumulative loss of u*
  std::vector<double> round_losses;  // per-round loss of the algorithm
  std::vector<int> active_trace;     // active-set size per round (multi-eta)
  std::size_t max_active = 0;
};

// Diagnostic gradient trace: accumulates F_T = sum g g^T and sum ||g||^2 for
// rank-aware bound checks. Deliberately capped (d <= 64, T <= 100000).
class GradTrace {
 public:
  explicit GradTrace(int dim);
  void add(const Eigen::VectorXd& g);
  const Eigen::MatrixXd& outer_sum() const { return outer_; }
  double sq_sum() const { return sq_sum_; }
  long rounds() const { return rounds_; }
  // rank of F_T with eigenvalue tolerance rel_tol * lambda_max
  int effective_rank(double rel_tol = 1e-8) const;

 private:
  Eigen::MatrixXd outer_;
  double sq_sum_ = 0;
  long rounds_ = 0;
};

// Single sequential pass over the data set: reveal domain, predict, incur
// loss, feed gradient. Deterministic given the config.
RunRecord run_experiment(const DenseDataset& data, const ExperimentConfig& config,
                         const Eigen::VectorXd& u_star, const DomainSizes& sizes,
                         GradTrace* trace = nullptr);

// Convenience wrapper: comparator solve + domain sizing + run.
RunRecord run_experiment(const DenseDataset& data, const ExperimentConfig& config,
                         GradTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// regret-bound diagnostic

struct BoundCheck {
  double lhs = 0;  // linearized regret against u
  double rhs = 0;  // guarantee evaluated from the run's own statistics
  bool ok = false;
};

// Evaluates the guarantee
//   lhs <= 5/2 sqrt(V^u (||u||^2/(2 sigma^2) + Z)) +
//          5 B_T (||u||^2/(2 sigma^2) + Z) + 2 B_T
// with Z = rk ln(1 + sigma^2 sum||g||^2 / (2 B_T^2 rk)) +
//          2 ln ceil(2 log2 T)_+ + 1/2,
// where rk is the rank of F_T. B_T = 0 passes vacuously.
BoundCheck bound_check(double lin_regret, double v_u, double u_norm,
                       double sigma, double b_t, long t, const GradTrace& trace);

// ---------------------------------------------------------------------------
// fast-rate simulations

enum class SimKind { offline_abs, stochastic_abs };

SimKind sim_kind_from_string(const std::string& name);
const char* to_string(SimKind kind);

struct SimCurves {
  // cumulative regret against the fixed comparator, one entry per round
  std::vector<double> metagrad, adagrad, ogdnorm;
};

// Absolute-value simulations on the domain [-1,1]: either the fixed offline
// objective |w - 1/4| or the stochastic stream |w - x_t| with x_t = +1/2
// w.p. 0.6 and -1/2 w.p. 0.4 (comparators 1/4 and 1/2 respectively).
SimCurves run_simulation(SimKind kind, long t_max, std::uint64_t seed);

// ---------------------------------------------------------------------------
// summaries

struct CellResult {
  std::string dataset, loss, algo;
  double regret = 0;
};

struct AlgoSummary {
  std::string algo;
  int n_best = 0;    // cells within one regret unit of the row minimum
  int n_better = 0;  // cells within one regret unit of the baseline
  double median_ratio = 0;  // median of regret / baseline regret
  long n_cells = 0;
};

struct Summary {
  std::vector<AlgoSummary> rows;
  std::vector<std::string> missing;  // "dataset/loss: algo" cells absent
};

Summary summarize(const std::vector<CellResult>& cells,
                  const std::string& baseline_algo);

// ---------------------------------------------------------------------------
// CSV I/O (schema: dataset,loss,algo,sigma_factor,T,d,regret,lin_regret,
// V_T,B_T,resets,wallclock_ms,seed)

extern const char* const kRunCsvHeader;

void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_run_csv_file(const std::string& path,
                        const std::vector<RunRecord>& records);

// Reads one or more run CSVs into summary cells. Duplicate
// (dataset,loss,algo) cells keep the minimum regret, which makes hypertune
// sweeps summarize as best-in-hindsight.
std::vector<CellResult> read_run_csvs(const std::vector<std::string>& paths);

void write_sim_csv_file(const std::string& path, SimKind kind,
                        std::uint64_t seed, const SimCurves& curves);

}  // namespace metagrad
