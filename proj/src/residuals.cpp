#include "betareg/residuals.hpp"

#include <cmath>
#include <string>

#include "betareg/special_functions.hpp"

namespace betareg {

std::tuple<Eigen::VectorXd, Eigen::VectorXd, Eigen::VectorXd> working_quantities(
    const Eigen::VectorXd& y, const Eigen::VectorXd& mu, const Eigen::VectorXd& phi) {
  const Eigen::Index n = y.size();
  if (mu.size() != n || phi.size() != n) {
    throw std::invalid_argument("working_quantities: length mismatch");
  }
  Eigen::VectorXd y_star(n), mu_star(n), a(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (!(y(t) > 0.0 && y(t) < 1.0)) {
      throw std::domain_error("working_quantities: y outside (0,1) at row " +
                              std::to_string(t + 1));
    }
    if (!(mu(t) > 0.0 && mu(t) < 1.0) || !(phi(t) > 0.0)) {
      throw std::domain_error("working_quantities: (mu, phi) out of domain at row " +
                              std::to_string(t + 1));
    }
    const double log_1my = std::log1p(-y(t));
    y_star(t) = std::log(y(t)) - log_1my;
    const double psi_p = digamma(mu(t) * phi(t));
    const double psi_r = digamma((1.0 - mu(t)) * phi(t));
    mu_star(t) = psi_p - psi_r;
    a(t) = mu(t) * (y_star(t) - mu_star(t)) + log_1my - psi_r + digamma(phi(t));
  }
  return {y_star, mu_star, a};
}

double zeta(double mu, double phi) {
  if (!(mu > 0.0 && mu < 1.0) || !(phi > 0.0)) {
    throw std::domain_error("zeta: (mu, phi) out of domain");
  }
  return (1.0 + mu) * (1.0 + mu) * trigamma(mu * phi) +
         mu * mu * trigamma((1.0 - mu) * phi) - trigamma(phi);
}

ResidualSet residuals_beta_gamma(const FittedModel& fit, const ModelSpec& spec) {
  const Workset ws = evaluate_workset(spec, fit);
  const Eigen::Index n = spec.n();

  ResidualSet set;
  set.y_star = ws.y_star;
  set.mu_star = ws.mu_star;
  set.a_hat = ws.a;
  set.v_hat = ws.v;
  set.varsigma_hat = ws.varsigma;
  set.zeta_hat.resize(n);
  set.r_beta.resize(n);
  set.r_gamma.resize(n);
  set.r_combined_std.resize(n);

  for (Eigen::Index t = 0; t < n; ++t) {
    set.r_beta(t) = (ws.y_star(t) - ws.mu_star(t)) / std::sqrt(ws.v(t));
    set.r_gamma(t) = ws.a(t) / std::sqrt(ws.varsigma(t));
    const double z = zeta(ws.mu(t), ws.phi(t));
    if (!(z > 0.0) || !std::isfinite(z)) {
      throw DegeneracyError("non-positive combined-residual variance at observation " +
                            std::to_string(t + 1));
    }
    set.zeta_hat(t) = z;
    set.r_combined_std(t) = ((ws.y_star(t) - ws.mu_star(t)) + ws.a(t)) / std::sqrt(z);
  }
  return set;
}

Eigen::VectorXd combined_residual(const FittedModel& fit, const ModelSpec& spec) {
  return residuals_beta_gamma(fit, spec).r_combined_std;
}

}  // namespace betareg
