#include "betareg/prediction.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "betareg/residuals.hpp"

namespace betareg {

namespace {

// Converged weighted least-squares representation: ycheck_t = s_t u1_t on
// Xcheck = diag(s) X with s_t = sqrt(phi_t w_t) and
// u1_t = eta_t + (y*_t - mu*_t) / (w_t g'(mu_t)).
struct TransformedRegression {
  Eigen::VectorXd scale;    // sqrt(phi_t w_t)
  Eigen::VectorXd u1;
  Eigen::VectorXd y_check;
  Eigen::MatrixXd x_check;
};

TransformedRegression transformed_regression(const Workset& ws, const ModelSpec& spec) {
  TransformedRegression tr;
  tr.scale = (ws.phi.array() * ws.w.array()).sqrt();
  tr.u1 = ws.eta.array() +
          (ws.y_star - ws.mu_star).array() * ws.t_diag.array() / ws.w.array();
  tr.y_check = tr.scale.array() * tr.u1.array();
  tr.x_check = tr.scale.asDiagonal() * spec.X;
  return tr;
}

Eigen::VectorXd hat_diagonal_impl(const TransformedRegression& tr) {
  const Eigen::MatrixXd gram = tr.x_check.transpose() * tr.x_check;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw EstimationError("singular weighted cross-product in hat_diagonal");
  }
  const Eigen::Index n = tr.x_check.rows();
  Eigen::VectorXd h(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::VectorXd xt = tr.x_check.row(t).transpose();
    h(t) = xt.dot(llt.solve(xt));
  }
  return h;
}

std::pair<double, Eigen::VectorXd> press_from(const Eigen::VectorXd& residual,
                                              const Eigen::VectorXd& h) {
  const Eigen::Index n = residual.size();
  Eigen::VectorXd components(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (h(t) > 1.0 - 1e-10) {
      throw DegeneracyError("leverage h*_tt is one at observation " + std::to_string(t + 1) +
                            "; deleted prediction undefined");
    }
    const double e = residual(t) / (1.0 - h(t));
    components(t) = e * e;
  }
  return {components.sum(), components};
}

Eigen::VectorXd r_beta_from(const Workset& ws) {
  return ((ws.y_star - ws.mu_star).array() / ws.v.array().sqrt()).matrix();
}

Eigen::VectorXd r_combined_from(const Workset& ws) {
  const Eigen::Index n = ws.mu.size();
  Eigen::VectorXd r(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double z = zeta(ws.mu(t), ws.phi(t));
    if (!(z > 0.0) || !std::isfinite(z)) {
      throw DegeneracyError("non-positive combined-residual variance at observation " +
                            std::to_string(t + 1));
    }
    r(t) = ((ws.y_star(t) - ws.mu_star(t)) + ws.a(t)) / std::sqrt(z);
  }
  return r;
}

}  // namespace

Eigen::VectorXd hat_diagonal(const FittedModel& fit, const ModelSpec& spec) {
  const Workset ws = evaluate_workset(spec, fit);
  return hat_diagonal_impl(transformed_regression(ws, spec));
}

std::pair<double, Eigen::VectorXd> press(const FittedModel& fit, const ModelSpec& spec) {
  const Workset ws = evaluate_workset(spec, fit);
  const Eigen::VectorXd h = hat_diagonal_impl(transformed_regression(ws, spec));
  return press_from(r_beta_from(ws), h);
}

std::pair<double, Eigen::VectorXd> press_beta_gamma(const FittedModel& fit,
                                                    const ModelSpec& spec) {
  const Workset ws = evaluate_workset(spec, fit);
  const Eigen::VectorXd h = hat_diagonal_impl(transformed_regression(ws, spec));
  return press_from(r_combined_from(ws), h);
}

double sst_deleted(const FittedModel& fit, const ModelSpec& spec) {
  const Eigen::Index n = spec.n();
  const Eigen::Index p = spec.k() + spec.q();
  if (n <= p) throw std::domain_error("sst_deleted requires n > k + q");
  const Workset ws = evaluate_workset(spec, fit);
  const TransformedRegression tr = transformed_regression(ws, spec);
  const double mean = tr.y_check.mean();
  const double sst = (tr.y_check.array() - mean).square().sum();
  const double factor = static_cast<double>(n) / static_cast<double>(n - p);
  return factor * factor * sst;
}

double p2(double press_value, double sst_deleted_value) {
  if (!(sst_deleted_value > 0.0)) {
    throw std::domain_error("prediction coefficient undefined: SST_(t) is zero");
  }
  return 1.0 - press_value / sst_deleted_value;
}

double r2_lr(const FittedModel& fit, const FittedModel& null_fit, Eigen::Index n) {
  const double slack = 1e-8 * (1.0 + std::abs(fit.loglik));
  if (null_fit.loglik > fit.loglik + slack) {
    throw EstimationError("null log-likelihood exceeds the fitted one; models are not nested");
  }
  return 1.0 - std::exp((2.0 / static_cast<double>(n)) * (null_fit.loglik - fit.loglik));
}

double lambda_ratio(const Eigen::VectorXd& phi) {
  if (phi.size() == 0) throw std::domain_error("lambda_ratio: empty precision vector");
  const double lo = phi.minCoeff();
  if (!(lo > 0.0)) throw std::domain_error("lambda_ratio: non-positive precision");
  return phi.maxCoeff() / lo;
}

FittedModel fit_null_model(const ModelSpec& spec, const FitOptions& options) {
  ModelSpec null_spec;
  null_spec.y = spec.y;
  null_spec.X = Eigen::MatrixXd::Ones(spec.n(), 1);
  null_spec.Z = Eigen::MatrixXd::Ones(spec.n(), 1);
  null_spec.mean_link = spec.mean_link;
  null_spec.precision_link = spec.precision_link;
  return fit(null_spec, options);
}

PredictionReport prediction_report(const ModelSpec& spec, const FittedModel& fit,
                                   const FittedModel& null_fit) {
  const Workset ws = evaluate_workset(spec, fit);
  const TransformedRegression tr = transformed_regression(ws, spec);

  PredictionReport report;
  report.h_star_diag = hat_diagonal_impl(tr);
  std::tie(report.press, report.press_components) =
      press_from(r_beta_from(ws), report.h_star_diag);
  std::tie(report.press_bg, report.press_bg_components) =
      press_from(r_combined_from(ws), report.h_star_diag);

  const Eigen::Index n = spec.n();
  const Eigen::Index p = spec.k() + spec.q();
  if (n <= p) throw std::domain_error("prediction_report requires n > k + q");
  const double mean = tr.y_check.mean();
  const double sst = (tr.y_check.array() - mean).square().sum();
  const double factor = static_cast<double>(n) / static_cast<double>(n - p);
  report.sst_deleted = factor * factor * sst;

  report.p2 = p2(report.press, report.sst_deleted);
  report.p2_bg = p2(report.press_bg, report.sst_deleted);
  report.r2_lr = r2_lr(fit, null_fit, n);
  report.lambda = lambda_ratio(fit.phi);
  return report;
}

LooPressResult loo_press_raw(const ModelSpec& spec, const FitOptions& options, int threads) {
  require_valid(spec);
  const Eigen::Index n = spec.n();
  if (n <= spec.k() + spec.q() + 1) {
    throw std::domain_error("loo_press_raw requires n > k + q + 1");
  }

  LooPressResult result;
  result.squared_errors = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());

  const auto run_deletion = [&](Eigen::Index t) {
    ModelSpec deleted;
    deleted.y.resize(n - 1);
    deleted.X.resize(n - 1, spec.k());
    deleted.Z.resize(n - 1, spec.q());
    Eigen::Index row = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
      if (s == t) continue;
      deleted.y(row) = spec.y(s);
      deleted.X.row(row) = spec.X.row(s);
      deleted.Z.row(row) = spec.Z.row(s);
      ++row;
    }
    deleted.mean_link = spec.mean_link;
    deleted.precision_link = spec.precision_link;
    try {
      const FittedModel fit_t = fit(deleted, options);
      if (!fit_t.converged) return;
      const double eta_t = spec.X.row(t).dot(fit_t.beta);
      const double predicted = link_inverse(spec.mean_link, eta_t);
      const double e = spec.y(t) - predicted;
      result.squared_errors(t) = e * e;
    } catch (const std::exception&) {
      // deletion fit failed; leave NaN
    }
  };

  if (threads <= 1) {
    for (Eigen::Index t = 0; t < n; ++t) run_deletion(t);
  } else {
    std::vector<std::thread> workers;
    const int nw = std::min<int>(threads, static_cast<int>(n));
    workers.reserve(nw);
    for (int w = 0; w < nw; ++w) {
      workers.emplace_back([&, w]() {
        for (Eigen::Index t = w; t < n; t += nw) run_deletion(t);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  double sum = 0.0;
  int converged = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    if (std::isnan(result.squared_errors(t))) {
      ++result.failed_deletions;
    } else {
      sum += result.squared_errors(t);
      ++converged;
    }
  }
  if (converged == 0) throw EstimationError("every deletion fit failed in loo_press_raw");
  result.statistic = sum / static_cast<double>(converged);
  return result;
}

std::vector<CandidateResult> model_selection_report(
    const std::vector<std::pair<std::string, ModelSpec>>& candidates,
    const FitOptions& options) {
  std::vector<CandidateResult> rows;
  rows.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& [label, spec] = candidates[i];
    CandidateResult row;
    row.label = label;
    row.input_index = i;
    try {
      const FittedModel fitted = fit(spec, options);
      row.converged = fitted.converged;
      row.loglik = fitted.loglik;
      if (!fitted.converged) {
        row.error = "fit did not converge";
      } else {
        const FittedModel null_fit = fit_null_model(spec, options);
        const PredictionReport report = prediction_report(spec, fitted, null_fit);
        row.p2 = report.p2;
        row.p2_bg = report.p2_bg;
        row.r2_lr = report.r2_lr;
        row.lambda = report.lambda;
        row.ok = true;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(), [](const CandidateResult& a, const CandidateResult& b) {
    if (a.ok != b.ok) return a.ok;  // competitive candidates first
    if (!a.ok) return a.input_index < b.input_index;
    if (a.p2 != b.p2) return a.p2 > b.p2;
    if (a.p2_bg != b.p2_bg) return a.p2_bg > b.p2_bg;
    return a.input_index < b.input_index;
  });
  return rows;
}

}  // namespace betareg
