#ifndef BETAREG_SIMULATION_HPP
#define BETAREG_SIMULATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "betareg/fisher_scoring.hpp"
#include "betareg/model.hpp"
#include "betareg/random.hpp"

namespace betareg {

enum class MuRange { low, mid, high };

// Endpoints of the induced mean range: low (0.005, 0.12),
// mid (0.20, 0.88), high (0.90, 0.99).
std::pair<double, double> mu_range_endpoints(MuRange range);

// Law of the mean-submodel covariates. student_t3 draws the first slope
// column from Student's t(3) (the leverage-contamination design) and the
// rest from U(0,1). Precision-submodel covariates are always U(-0.5,0.5).
enum class CovariateLaw { uniform01, uniform_half, student_t3 };

struct Dispersion {
  bool varying = false;
  double value = 50.0;  // fixed phi, or the lambda = phi_max/phi_min target

  static Dispersion fixed_phi(double phi) { return {false, phi}; }
  static Dispersion varying_lambda(double lambda) { return {true, lambda}; }
};

// One Monte Carlo design cell: data generated under the true model, the
// estimated model fitted per replication.
struct ScenarioConfig {
  int n = 40;
  int replications = 1000;
  std::uint64_t seed = 1;
  MuRange mu_range = MuRange::mid;
  Dispersion dispersion = Dispersion::fixed_phi(50.0);
  int true_mean_covariates = 4;       // slope count, intercept excluded
  int true_precision_covariates = 0;  // 0 means fixed dispersion
  int estimated_mean_covariates = 4;
  int estimated_precision_covariates = 0;
  CovariateLaw covariate_law = CovariateLaw::uniform01;
  bool replicate_covariate_block = false;  // tile the first 40 rows for n > 40
  double phi_anchor = 50.0;  // geometric mean of the phi range when varying
  int threads = 1;
};

struct ScenarioResult {
  double mean_p2 = 0.0;
  double mean_p2_bg = 0.0;
  double mean_r2lr = 0.0;
  double se_p2 = 0.0;
  double se_p2_bg = 0.0;
  double se_r2lr = 0.0;
  int converged_replications = 0;
  int failed_replications = 0;
};

struct ReplicationOutcome {
  bool ok = false;
  double p2 = 0.0;
  double p2_bg = 0.0;
  double r2_lr = 0.0;
};

// True-model design matrices (with intercept columns). Covariate column j
// is drawn from a column-specific substream so the same column values are
// produced regardless of how many columns a scenario requests; with
// replicate_covariate_block only 40 rows are drawn and tiled.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_covariates(
    const ScenarioConfig& config, const RandomStream& rng);

// True coefficients making the induced mu_t span the configured range
// exactly (equal slope loadings, intercept anchored at the lower
// endpoint) and, under varying dispersion, max(phi)/min(phi) equal to the
// lambda target with the geometric mean of the phi range at phi_anchor.
// Deterministic given config and covariates.
std::pair<Eigen::VectorXd, Eigen::VectorXd> calibrate_coefficients(
    const ScenarioConfig& config, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z);

// True per-observation (mu, phi) for calibrated coefficients.
std::pair<Eigen::VectorXd, Eigen::VectorXd> true_parameters(
    const ScenarioConfig& config, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z,
    const Eigen::VectorXd& beta_true, const Eigen::VectorXd& gamma_true);

// Per-replication statistics; entry r-1 belongs to replication r, which
// consumes substream r of the config seed. Results are identical for any
// thread count.
std::vector<ReplicationOutcome> run_scenario_detailed(const ScenarioConfig& config);

ScenarioResult summarize(const std::vector<ReplicationOutcome>& outcomes);

ScenarioResult run_scenario(const ScenarioConfig& config);

// ---- Grid runs mirroring the paper-style tables ----

enum class TableLayout { table1, table2, table3 };

struct GridCellKey {
  int n = 0;
  int scenario = 0;     // 1..4 (table1) or 5..8 (table2/3)
  double disp_value = 0.0;  // phi (table1) or lambda (table2/3)
};

struct GridCell {
  GridCellKey key;
  ScenarioResult result;
};

// CSV with one row group per (n, statistic) and one value column plus one
// MC-standard-error column per (scenario, dispersion value). Missing grid
// cells appear as NA. Byte-deterministic for fixed inputs.
std::string emit_table(const std::vector<GridCell>& results, TableLayout layout);

// A full simulation plan as read from the flat key-value config file.
struct SimulationPlan {
  TableLayout layout = TableLayout::table1;
  MuRange mu_range = MuRange::mid;
  std::vector<int> sample_sizes = {40};
  std::vector<double> dispersion_values = {50.0};
  std::vector<int> scenarios = {4};
  int replications = 1000;
  std::uint64_t seed = 1;
  CovariateLaw covariate_law = CovariateLaw::uniform01;
  double phi_anchor = 50.0;
  int threads = 1;
};

// Expands one plan cell into the ScenarioConfig for run_scenario. All
// cells share the plan seed, so scenario columns at equal (n, dispersion)
// are paired through common random numbers.
ScenarioConfig cell_config(const SimulationPlan& plan, const GridCellKey& key);

// Runs the whole grid and emits the table CSV. The optional callback is
// invoked after each completed cell (progress reporting).
using CellProgressFn = std::function<void(const GridCellKey&, const ScenarioResult&)>;
std::string run_plan(const SimulationPlan& plan, const CellProgressFn& progress = {});

// Parses the flat key-value config format ("key = value", '#' comments).
// Unknown keys raise std::invalid_argument naming the key.
SimulationPlan parse_plan(const std::string& text);
SimulationPlan parse_plan_file(const std::string& path);

}  // namespace betareg

#endif  // BETAREG_SIMULATION_HPP
