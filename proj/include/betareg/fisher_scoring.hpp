#ifndef BETAREG_FISHER_SCORING_HPP
#define BETAREG_FISHER_SCORING_HPP

#include <Eigen/Dense>
#include <utility>

#include "betareg/model.hpp"

namespace betareg {

struct FitOptions {
  int max_iterations = 200;
  double tolerance = 1e-8;
  int step_halving_max = 20;
};

struct ScoreVector {
  Eigen::VectorXd u_beta;   // X' Phi T (y* - mu*)
  Eigen::VectorXd u_gamma;  // Z' H a
};

// Blocks of the Fisher information:
//   K_bb = X' Phi W X,  K_bg = X' C T H Z,  K_gg = Z' D Z.
struct InformationBlocks {
  Eigen::MatrixXd K_bb;
  Eigen::MatrixXd K_bg;
  Eigen::MatrixXd K_gg;
};

// Per-observation quantities shared by the scoring iterations, the
// residuals and the prediction measures, all evaluated at one (beta, gamma):
//
//   y*_t   = log(y_t/(1-y_t))
//   mu*_t  = psi(mu_t phi_t) - psi((1-mu_t) phi_t)
//   a_t    = mu_t (y*_t - mu*_t) + log(1-y_t) - psi((1-mu_t) phi_t) + psi(phi_t)
//   v_t    = psi'(mu_t phi_t) + psi'((1-mu_t) phi_t)
//   sig_t  = psi'(mu_t phi_t) mu_t^2 + psi'((1-mu_t) phi_t)(1-mu_t)^2 - psi'(phi_t)
//   w_t    = phi_t v_t / g'(mu_t)^2
//   c_t    = phi_t { psi'(mu_t phi_t) mu_t - psi'((1-mu_t) phi_t)(1-mu_t) }
//   d_t    = sig_t / h'(phi_t)^2
//   T_t    = 1/g'(mu_t),  H_t = 1/h'(phi_t)
struct Workset {
  Eigen::VectorXd mu, phi, eta, vartheta;
  Eigen::VectorXd y_star, mu_star, a;
  Eigen::VectorXd v, varsigma;
  Eigen::VectorXd w, c, d;
  Eigen::VectorXd t_diag, h_diag;
  double loglik = 0.0;
};

// Evaluates the workset at (beta, gamma); throws std::domain_error if the
// induced (mu, phi) leave the parameter space or the log-likelihood is not
// finite there.
Workset evaluate_workset(const ModelSpec& spec, const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& gamma);

// Workset for an already-converged fit (no re-evaluation of links).
Workset evaluate_workset(const ModelSpec& spec, const FittedModel& fit);

double log_likelihood(const ModelSpec& spec, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& gamma);

ScoreVector score(const ModelSpec& spec, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& gamma);

InformationBlocks information(const ModelSpec& spec, const Eigen::VectorXd& beta,
                              const Eigen::VectorXd& gamma);

// Starting values: OLS of g(clamped y) on X for beta; for gamma, the
// precision intercept from the method-of-moments estimate built on the OLS
// fitted values and residual variance, remaining components zero.
std::pair<Eigen::VectorXd, Eigen::VectorXd> initialize(const ModelSpec& spec);

// Block-alternating Fisher scoring with step halving. Convergence is
// declared on the parameter change: max over both blocks of the sup-norm
// change below tolerance * (1 + sup-norm of the previous iterate).
FittedModel fit(const ModelSpec& spec, const FitOptions& options = {});

// Standard errors from the inverse of the full (k+q) x (k+q) information
// matrix evaluated at the fit.
std::pair<Eigen::VectorXd, Eigen::VectorXd> standard_errors(const ModelSpec& spec,
                                                            const FittedModel& fit);

}  // namespace betareg

#endif  // BETAREG_FISHER_SCORING_HPP
