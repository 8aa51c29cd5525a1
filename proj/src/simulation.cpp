#include "betareg/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "betareg/prediction.hpp"

namespace betareg {

namespace {

constexpr std::uint64_t kMeanCovariateStream = 1ull << 40;
constexpr std::uint64_t kPrecisionCovariateStream = 1ull << 41;

Eigen::VectorXd draw_column(RandomStream stream, int rows, CovariateLaw law, bool t3_column) {
  Eigen::VectorXd col(rows);
  for (int i = 0; i < rows; ++i) {
    if (t3_column) {
      col(i) = stream.student_t(3);
    } else if (law == CovariateLaw::uniform_half) {
      col(i) = stream.uniform(-0.5, 0.5);
    } else {
      col(i) = stream.uniform01();
    }
  }
  return col;
}

Eigen::VectorXd tile(const Eigen::VectorXd& block, int n) {
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = block(i % block.size());
  return out;
}

void check_config(const ScenarioConfig& config) {
  if (config.n < 3) throw std::invalid_argument("scenario: n must be at least 3");
  if (config.replications < 1) throw std::invalid_argument("scenario: replications must be >= 1");
  if (config.true_mean_covariates < 0 || config.true_mean_covariates > 4 ||
      config.true_precision_covariates < 0 || config.true_precision_covariates > 4) {
    throw std::invalid_argument("scenario: covariate counts must lie in 0..4");
  }
  if (config.estimated_mean_covariates < 0 ||
      config.estimated_mean_covariates > config.true_mean_covariates) {
    throw std::invalid_argument(
        "scenario: estimated mean covariates must lie in 0..true_mean_covariates");
  }
  if (config.estimated_precision_covariates < 0 ||
      config.estimated_precision_covariates > config.true_precision_covariates) {
    throw std::invalid_argument(
        "scenario: estimated precision covariates must lie in 0..true_precision_covariates");
  }
  if (!(config.dispersion.value > 0.0)) {
    throw std::invalid_argument("scenario: dispersion value must be positive");
  }
  if (config.dispersion.varying && config.true_precision_covariates == 0) {
    throw std::invalid_argument("scenario: varying dispersion needs precision covariates");
  }
}

}  // namespace

std::pair<double, double> mu_range_endpoints(MuRange range) {
  switch (range) {
    case MuRange::low: return {0.005, 0.12};
    case MuRange::mid: return {0.20, 0.88};
    case MuRange::high: return {0.90, 0.99};
  }
  throw std::logic_error("unreachable mu range");
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> generate_covariates(const ScenarioConfig& config,
                                                                const RandomStream& rng) {
  check_config(config);
  const int n = config.n;
  const int block_rows = config.replicate_covariate_block ? std::min(n, 40) : n;

  Eigen::MatrixXd X(n, 1 + config.true_mean_covariates);
  X.col(0).setOnes();
  for (int j = 1; j <= config.true_mean_covariates; ++j) {
    const bool t3 = (config.covariate_law == CovariateLaw::student_t3) && j == 1;
    const Eigen::VectorXd block = draw_column(rng.substream(kMeanCovariateStream + j), block_rows,
                                              config.covariate_law, t3);
    X.col(j) = tile(block, n);
  }

  Eigen::MatrixXd Z(n, 1 + config.true_precision_covariates);
  Z.col(0).setOnes();
  for (int j = 1; j <= config.true_precision_covariates; ++j) {
    const Eigen::VectorXd block = draw_column(rng.substream(kPrecisionCovariateStream + j),
                                              block_rows, CovariateLaw::uniform_half, false);
    Z.col(j) = tile(block, n);
  }
  return {X, Z};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> calibrate_coefficients(const ScenarioConfig& config,
                                                                   const Eigen::MatrixXd& X,
                                                                   const Eigen::MatrixXd& Z) {
  const auto [mu_lo, mu_hi] = mu_range_endpoints(config.mu_range);
  const double eta_lo = link_apply(Link::logit, mu_lo);
  const double eta_hi = link_apply(Link::logit, mu_hi);

  const int m = static_cast<int>(X.cols()) - 1;
  Eigen::VectorXd beta(X.cols());
  if (m == 0) {
    beta(0) = 0.5 * (eta_lo + eta_hi);
  } else {
    const Eigen::VectorXd s = X.rightCols(m).rowwise().sum();
    const double s_min = s.minCoeff();
    const double s_max = s.maxCoeff();
    if (!(s_max - s_min > 1e-12)) {
      throw std::invalid_argument("calibration failed: covariate spread is degenerate");
    }
    const double slope = (eta_hi - eta_lo) / (s_max - s_min);
    beta(0) = eta_lo - slope * s_min;
    beta.tail(m).setConstant(slope);
  }

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(Z.cols());
  if (!config.dispersion.varying) {
    gamma(0) = std::log(config.dispersion.value);
  } else {
    const int mz = static_cast<int>(Z.cols()) - 1;
    if (mz == 0) throw std::invalid_argument("calibration failed: no precision covariates");
    const Eigen::VectorXd sz = Z.rightCols(mz).rowwise().sum();
    const double sz_min = sz.minCoeff();
    const double sz_max = sz.maxCoeff();
    if (!(sz_max - sz_min > 1e-12)) {
      throw std::invalid_argument("calibration failed: precision covariate spread is degenerate");
    }
    const double slope = std::log(config.dispersion.value) / (sz_max - sz_min);
    gamma(0) = std::log(config.phi_anchor) - slope * 0.5 * (sz_min + sz_max);
    gamma.tail(mz).setConstant(slope);
  }
  return {beta, gamma};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> true_parameters(const ScenarioConfig& /*config*/,
                                                            const Eigen::MatrixXd& X,
                                                            const Eigen::MatrixXd& Z,
                                                            const Eigen::VectorXd& beta_true,
                                                            const Eigen::VectorXd& gamma_true) {
  const Eigen::VectorXd eta = X * beta_true;
  const Eigen::VectorXd vartheta = Z * gamma_true;
  Eigen::VectorXd mu(eta.size()), phi(vartheta.size());
  for (Eigen::Index t = 0; t < eta.size(); ++t) {
    mu(t) = link_inverse(Link::logit, eta(t));
    phi(t) = link_inverse(Link::log, vartheta(t));
  }
  return {mu, phi};
}

std::vector<ReplicationOutcome> run_scenario_detailed(const ScenarioConfig& config) {
  check_config(config);
  const RandomStream root(config.seed);
  const auto [X, Z] = generate_covariates(config, root);
  const auto [beta_true, gamma_true] = calibrate_coefficients(config, X, Z);
  const auto [mu_true, phi_true] = true_parameters(config, X, Z, beta_true, gamma_true);

  const Eigen::MatrixXd x_est = X.leftCols(1 + config.estimated_mean_covariates);
  const Eigen::MatrixXd z_est = Z.leftCols(1 + config.estimated_precision_covariates);

  std::vector<ReplicationOutcome> outcomes(config.replications);
  const auto run_replication = [&](int r) {
    ReplicationOutcome& outcome = outcomes[r - 1];
    try {
      RandomStream stream = root.substream(static_cast<std::uint64_t>(r));
      ModelSpec spec;
      spec.y.resize(config.n);
      for (int t = 0; t < config.n; ++t) {
        spec.y(t) = sample_beta(mu_true(t), phi_true(t), stream);
      }
      spec.X = x_est;
      spec.Z = z_est;
      spec.mean_link = Link::logit;
      spec.precision_link = Link::log;

      const FittedModel fitted = fit(spec);
      if (!fitted.converged) return;
      const FittedModel null_fit = fit_null_model(spec);
      if (!null_fit.converged) return;
      const PredictionReport report = prediction_report(spec, fitted, null_fit);
      outcome.p2 = report.p2;
      outcome.p2_bg = report.p2_bg;
      outcome.r2_lr = report.r2_lr;
      outcome.ok = true;
    } catch (const std::exception&) {
      outcome.ok = false;
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (int r = 1; r <= config.replications; ++r) run_replication(r);
  } else {
    std::vector<std::thread> workers;
    const int nw = std::min(threads, config.replications);
    workers.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      workers.emplace_back([&, w]() {
        for (int r = 1 + w; r <= config.replications; r += nw) run_replication(r);
      });
    }
    for (auto& worker : workers) worker.join();
  }
  return outcomes;
}

ScenarioResult summarize(const std::vector<ReplicationOutcome>& outcomes) {
  ScenarioResult result;
  double s1_p2 = 0.0, s1_bg = 0.0, s1_lr = 0.0;
  for (const auto& o : outcomes) {
    if (!o.ok) {
      ++result.failed_replications;
      continue;
    }
    ++result.converged_replications;
    s1_p2 += o.p2;
    s1_bg += o.p2_bg;
    s1_lr += o.r2_lr;
  }
  const int m = result.converged_replications;
  if (m == 0) return result;
  result.mean_p2 = s1_p2 / m;
  result.mean_p2_bg = s1_bg / m;
  result.mean_r2lr = s1_lr / m;

  if (m > 1) {
    double v_p2 = 0.0, v_bg = 0.0, v_lr = 0.0;
    for (const auto& o : outcomes) {
      if (!o.ok) continue;
      v_p2 += (o.p2 - result.mean_p2) * (o.p2 - result.mean_p2);
      v_bg += (o.p2_bg - result.mean_p2_bg) * (o.p2_bg - result.mean_p2_bg);
      v_lr += (o.r2_lr - result.mean_r2lr) * (o.r2_lr - result.mean_r2lr);
    }
    const double denom = static_cast<double>(m) * (m - 1);
    result.se_p2 = std::sqrt(v_p2 / denom);
    result.se_p2_bg = std::sqrt(v_bg / denom);
    result.se_r2lr = std::sqrt(v_lr / denom);
  }
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  return summarize(run_scenario_detailed(config));
}

namespace {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

std::string format_disp(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e9) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(value));
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

}  // namespace

std::string emit_table(const std::vector<GridCell>& results, TableLayout layout) {
  const std::string disp_label = layout == TableLayout::table1 ? "phi" : "lambda";

  std::set<int> ns, scenarios;
  std::set<double> disp_values;
  std::map<std::tuple<int, int, double>, const ScenarioResult*> by_key;
  for (const auto& cell : results) {
    ns.insert(cell.key.n);
    scenarios.insert(cell.key.scenario);
    disp_values.insert(cell.key.disp_value);
    by_key[{cell.key.n, cell.key.scenario, cell.key.disp_value}] = &cell.result;
  }

  std::ostringstream out;
  out << "n,statistic";
  for (int s : scenarios) {
    for (double v : disp_values) {
      const std::string col = "s" + std::to_string(s) + "_" + disp_label + format_disp(v);
      out << "," << col << "," << col << "_se";
    }
  }
  out << "\n";

  const char* statistic_names[3] = {"P2", "P2bg", "R2LR"};
  for (int n : ns) {
    for (int stat = 0; stat < 3; ++stat) {
      out << n << "," << statistic_names[stat];
      for (int s : scenarios) {
        for (double v : disp_values) {
          const auto it = by_key.find({n, s, v});
          if (it == by_key.end() || it->second->converged_replications == 0) {
            out << ",NA,NA";
            continue;
          }
          const ScenarioResult& r = *it->second;
          const double mean = stat == 0 ? r.mean_p2 : stat == 1 ? r.mean_p2_bg : r.mean_r2lr;
          const double se = stat == 0 ? r.se_p2 : stat == 1 ? r.se_p2_bg : r.se_r2lr;
          out << "," << format_number(mean) << "," << format_number(se);
        }
      }
      out << "\n";
    }
  }
  return out.str();
}

ScenarioConfig cell_config(const SimulationPlan& plan, const GridCellKey& key) {
  ScenarioConfig config;
  config.n = key.n;
  config.replications = plan.replications;
  config.seed = plan.seed;
  config.mu_range = plan.mu_range;
  config.covariate_law = plan.covariate_law;
  config.phi_anchor = plan.phi_anchor;
  config.threads = plan.threads;

  switch (plan.layout) {
    case TableLayout::table1:
      if (key.scenario < 1 || key.scenario > 4) {
        throw std::invalid_argument("table1 scenarios are 1..4");
      }
      config.dispersion = Dispersion::fixed_phi(key.disp_value);
      config.true_mean_covariates = 4;
      config.true_precision_covariates = 0;
      config.estimated_mean_covariates = key.scenario;
      config.estimated_precision_covariates = 0;
      config.replicate_covariate_block = false;
      break;
    case TableLayout::table2:
    case TableLayout::table3: {
      if (key.scenario < 5 || key.scenario > 8) {
        throw std::invalid_argument("table2/table3 scenarios are 5..8");
      }
      const int m = key.scenario - 4;
      config.dispersion = Dispersion::varying_lambda(key.disp_value);
      config.true_mean_covariates = m;
      config.true_precision_covariates = m;
      config.estimated_mean_covariates = m;
      config.estimated_precision_covariates = plan.layout == TableLayout::table2 ? m : 0;
      config.replicate_covariate_block = true;
      break;
    }
  }
  return config;
}

std::string run_plan(const SimulationPlan& plan, const CellProgressFn& progress) {
  std::vector<GridCell> cells;
  cells.reserve(plan.sample_sizes.size() * plan.scenarios.size() * plan.dispersion_values.size());
  for (int n : plan.sample_sizes) {
    for (int scenario : plan.scenarios) {
      for (double disp : plan.dispersion_values) {
        GridCell cell;
        cell.key = GridCellKey{n, scenario, disp};
        cell.result = run_scenario(cell_config(plan, cell.key));
        if (progress) progress(cell.key, cell.result);
        cells.push_back(std::move(cell));
      }
    }
  }
  return emit_table(cells, plan.layout);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string current;
  std::istringstream in(value);
  while (std::getline(in, current, ',')) {
    const std::string item = trim(current);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse number '" + value + "'");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse integer '" + value + "'");
  }
}

}  // namespace

SimulationPlan parse_plan(const std::string& text) {
  SimulationPlan plan;
  bool saw_scenarios = false;
  bool saw_phi = false;
  bool saw_lambda = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "layout") {
      if (value == "table1") plan.layout = TableLayout::table1;
      else if (value == "table2") plan.layout = TableLayout::table2;
      else if (value == "table3") plan.layout = TableLayout::table3;
      else throw std::invalid_argument("config key 'layout': unknown value '" + value + "'");
    } else if (key == "mu_range") {
      if (value == "low") plan.mu_range = MuRange::low;
      else if (value == "mid") plan.mu_range = MuRange::mid;
      else if (value == "high") plan.mu_range = MuRange::high;
      else throw std::invalid_argument("config key 'mu_range': unknown value '" + value + "'");
    } else if (key == "n") {
      plan.sample_sizes.clear();
      for (const auto& item : split_list(value)) {
        plan.sample_sizes.push_back(static_cast<int>(parse_int(key, item)));
      }
    } else if (key == "phi" || key == "lambda" || key == "dispersion") {
      plan.dispersion_values.clear();
      for (const auto& item : split_list(value)) {
        plan.dispersion_values.push_back(parse_double(key, item));
      }
      if (key == "phi") saw_phi = true;
      if (key == "lambda") saw_lambda = true;
    } else if (key == "scenarios") {
      plan.scenarios.clear();
      for (const auto& item : split_list(value)) {
        plan.scenarios.push_back(static_cast<int>(parse_int(key, item)));
      }
      saw_scenarios = true;
    } else if (key == "replications") {
      plan.replications = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      plan.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "covariate_law") {
      if (value == "uniform01") plan.covariate_law = CovariateLaw::uniform01;
      else if (value == "uniform_half") plan.covariate_law = CovariateLaw::uniform_half;
      else if (value == "student_t3") plan.covariate_law = CovariateLaw::student_t3;
      else throw std::invalid_argument("config key 'covariate_law': unknown value '" + value + "'");
    } else if (key == "phi_anchor") {
      plan.phi_anchor = parse_double(key, value);
    } else if (key == "threads") {
      plan.threads = static_cast<int>(parse_int(key, value));
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }

  if (!saw_scenarios) {
    plan.scenarios = plan.layout == TableLayout::table1 ? std::vector<int>{1, 2, 3, 4}
                                                        : std::vector<int>{5, 6, 7, 8};
  }
  if (plan.layout == TableLayout::table1 && saw_lambda) {
    throw std::invalid_argument("config: table1 uses 'phi', not 'lambda'");
  }
  if (plan.layout != TableLayout::table1 && saw_phi) {
    throw std::invalid_argument("config: table2/table3 use 'lambda', not 'phi'");
  }
  if (plan.replications < 1) throw std::invalid_argument("config: replications must be >= 1");
  if (plan.sample_sizes.empty() || plan.dispersion_values.empty() || plan.scenarios.empty()) {
    throw std::invalid_argument("config: n, dispersion values and scenarios must be non-empty");
  }
  return plan;
}

SimulationPlan parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_plan(buf.str());
}

}  // namespace betareg
