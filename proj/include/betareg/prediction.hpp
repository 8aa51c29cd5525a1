#ifndef BETAREG_PREDICTION_HPP
#define BETAREG_PREDICTION_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betareg/fisher_scoring.hpp"
#include "betareg/model.hpp"

namespace betareg {

// PRESS-based prediction measures for one fitted model.
struct PredictionReport {
  double press = 0.0;
  double press_bg = 0.0;
  double p2 = 0.0;
  double p2_bg = 0.0;
  double r2_lr = 0.0;
  double lambda = 1.0;
  double sst_deleted = 0.0;
  Eigen::VectorXd h_star_diag;
  Eigen::VectorXd press_components;
  Eigen::VectorXd press_bg_components;
  std::optional<double> loo_press_raw;
};

// Diagonal of H* = (W Phi)^{1/2} X (X' Phi W X)^{-1} X' (Phi W)^{1/2},
// the leverage in the weighted transformed regression. Entries lie in
// [0,1] and sum to k.
Eigen::VectorXd hat_diagonal(const FittedModel& fit, const ModelSpec& spec);

// PRESS = sum_t (r_beta_t / (1 - h*_tt))^2, with per-observation
// components. Throws DegeneracyError naming the observation if some
// h*_tt is numerically one.
std::pair<double, Eigen::VectorXd> press(const FittedModel& fit, const ModelSpec& spec);

// Same shape with the standardized combined residual in the numerator.
std::pair<double, Eigen::VectorXd> press_beta_gamma(const FittedModel& fit,
                                                    const ModelSpec& spec);

// SST_(t) = (n/(n-p))^2 * sum_t (ycheck_t - mean(ycheck))^2 where
// ycheck_t = sqrt(phi_t w_t) u1_t is the transformed response of the
// converged weighted least-squares representation and p = k + q.
double sst_deleted(const FittedModel& fit, const ModelSpec& spec);

// P^2 = 1 - press/sst_deleted, in (-inf, 1]. Throws std::domain_error if
// sst_deleted is zero (coefficient undefined).
double p2(double press_value, double sst_deleted_value);

// Likelihood-ratio R^2 = 1 - exp((2/n)(l_null - l_fit)); the null model is
// intercept-only in both submodels. Throws EstimationError if the null
// log-likelihood exceeds the fitted one beyond numerical tolerance.
double r2_lr(const FittedModel& fit, const FittedModel& null_fit, Eigen::Index n);

// Intensity of nonconstant dispersion: max(phi) / min(phi).
double lambda_ratio(const Eigen::VectorXd& phi);

// Intercept-only-in-both-submodels fit of the same response, for r2_lr.
FittedModel fit_null_model(const ModelSpec& spec, const FitOptions& options = {});

// Assembles every closed-form measure above for one fit.
PredictionReport prediction_report(const ModelSpec& spec, const FittedModel& fit,
                                   const FittedModel& null_fit);

// Brute-force leave-one-out PRESS on the response scale: n full refits,
// each excluding one observation, returning the mean squared prediction
// error sum_t (y_t - yhat_(t))^2 over converged deletions. Deletion fits
// that fail are skipped and counted.
struct LooPressResult {
  double statistic = 0.0;
  int failed_deletions = 0;
  Eigen::VectorXd squared_errors;  // NaN for failed deletions
};
LooPressResult loo_press_raw(const ModelSpec& spec, const FitOptions& options = {},
                             int threads = 1);

// One row of a candidate-model comparison.
struct CandidateResult {
  std::string label;
  bool ok = false;
  bool converged = false;
  double p2 = 0.0;
  double p2_bg = 0.0;
  double r2_lr = 0.0;
  double lambda = 1.0;
  double loglik = 0.0;
  std::string error;
  std::size_t input_index = 0;
};

// Fits every candidate (all sharing the same response), computes the
// prediction measures, and ranks by P^2 descending with P^2_bg as the
// tiebreaker; failed candidates sort last in input order.
std::vector<CandidateResult> model_selection_report(
    const std::vector<std::pair<std::string, ModelSpec>>& candidates,
    const FitOptions& options = {});

}  // namespace betareg

#endif  // BETAREG_PREDICTION_HPP
