#ifndef BETAREG_RESIDUALS_HPP
#define BETAREG_RESIDUALS_HPP

#include <Eigen/Dense>
#include <tuple>

#include "betareg/fisher_scoring.hpp"
#include "betareg/model.hpp"

namespace betareg {

// Per-observation residual quantities evaluated at the fitted model.
//
//   r_beta_t        = (y*_t - mu*_t) / sqrt(v_t)
//   r_gamma_t       = a_t / sqrt(varsigma_t)
//   r_combined_std  = ((y*_t - mu*_t) + a_t) / sqrt(zeta_t)
// with
//   zeta_t = (1+mu_t)^2 psi'(mu_t phi_t) + mu_t^2 psi'((1-mu_t) phi_t)
//            - psi'(phi_t).
struct ResidualSet {
  Eigen::VectorXd y_star;
  Eigen::VectorXd mu_star;
  Eigen::VectorXd a_hat;
  Eigen::VectorXd v_hat;
  Eigen::VectorXd varsigma_hat;
  Eigen::VectorXd zeta_hat;
  Eigen::VectorXd r_beta;
  Eigen::VectorXd r_gamma;
  Eigen::VectorXd r_combined_std;
};

// Elementwise working quantities (y*, mu*, a) at given (y, mu, phi).
// Throws std::domain_error on boundary inputs.
std::tuple<Eigen::VectorXd, Eigen::VectorXd, Eigen::VectorXd> working_quantities(
    const Eigen::VectorXd& y, const Eigen::VectorXd& mu, const Eigen::VectorXd& phi);

// Variance of the combined residual numerator at known (mu, phi).
double zeta(double mu, double phi);

// Full residual set at the MLE. Throws DegeneracyError naming the first
// observation whose zeta_t is non-positive.
ResidualSet residuals_beta_gamma(const FittedModel& fit, const ModelSpec& spec);

// Just the standardized combined residual vector.
Eigen::VectorXd combined_residual(const FittedModel& fit, const ModelSpec& spec);

}  // namespace betareg

#endif  // BETAREG_RESIDUALS_HPP
