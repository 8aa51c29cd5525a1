#include "betareg/fisher_scoring.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <cmath>
#include <optional>

#include "betareg/special_functions.hpp"

namespace betareg {

namespace {

std::optional<Workset> try_workset(const ModelSpec& spec, const Eigen::VectorXd& beta,
                                   const Eigen::VectorXd& gamma) {
  const Eigen::Index n = spec.n();
  Workset ws;
  ws.eta = spec.X * beta;
  ws.vartheta = spec.Z * gamma;
  if (!ws.eta.allFinite() || !ws.vartheta.allFinite()) return std::nullopt;

  ws.mu.resize(n);
  ws.phi.resize(n);
  ws.y_star.resize(n);
  ws.mu_star.resize(n);
  ws.a.resize(n);
  ws.v.resize(n);
  ws.varsigma.resize(n);
  ws.w.resize(n);
  ws.c.resize(n);
  ws.d.resize(n);
  ws.t_diag.resize(n);
  ws.h_diag.resize(n);

  double loglik = 0.0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double mu = link_inverse(spec.mean_link, ws.eta(t));
    const double phi = link_inverse(spec.precision_link, ws.vartheta(t));
    const double y = spec.y(t);

    const double p = mu * phi;          // first beta shape
    const double r = (1.0 - mu) * phi;  // second beta shape
    if (!(p > 0.0) || !(r > 0.0) || !std::isfinite(p) || !std::isfinite(r)) {
      return std::nullopt;
    }

    const double log_y = std::log(y);
    const double log_1my = std::log1p(-y);
    const double lt = log_gamma(phi) - log_gamma(p) - log_gamma(r) + (p - 1.0) * log_y +
                      (r - 1.0) * log_1my;
    if (!std::isfinite(lt)) return std::nullopt;
    loglik += lt;

    const double psi_p = digamma(p);
    const double psi_r = digamma(r);
    const double psi_phi = digamma(phi);
    const double tri_p = trigamma(p);
    const double tri_r = trigamma(r);
    const double tri_phi = trigamma(phi);
    const double gprime = link_derivative(spec.mean_link, mu);
    const double hprime = link_derivative(spec.precision_link, phi);

    ws.mu(t) = mu;
    ws.phi(t) = phi;
    ws.y_star(t) = log_y - log_1my;
    ws.mu_star(t) = psi_p - psi_r;
    ws.a(t) = mu * (ws.y_star(t) - ws.mu_star(t)) + log_1my - psi_r + psi_phi;
    ws.v(t) = tri_p + tri_r;
    ws.varsigma(t) = tri_p * mu * mu + tri_r * (1.0 - mu) * (1.0 - mu) - tri_phi;
    ws.w(t) = phi * ws.v(t) / (gprime * gprime);
    ws.c(t) = phi * (tri_p * mu - tri_r * (1.0 - mu));
    ws.d(t) = ws.varsigma(t) / (hprime * hprime);
    ws.t_diag(t) = 1.0 / gprime;
    ws.h_diag(t) = 1.0 / hprime;
  }
  if (!std::isfinite(loglik)) return std::nullopt;
  ws.loglik = loglik;
  return ws;
}

Eigen::VectorXd solve_spd(Eigen::MatrixXd A, const Eigen::VectorXd& b) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  // one-shot jitter retry for near-singular blocks
  const double jitter = 1e-10 * A.trace() / static_cast<double>(A.rows());
  A.diagonal().array() += jitter;
  llt.compute(A);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  throw EstimationError("singular information block");
}

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

Workset evaluate_workset(const ModelSpec& spec, const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& gamma) {
  auto ws = try_workset(spec, beta, gamma);
  if (!ws) {
    throw std::domain_error("parameters drive (mu, phi) out of the admissible region");
  }
  return *std::move(ws);
}

Workset evaluate_workset(const ModelSpec& spec, const FittedModel& fit) {
  return evaluate_workset(spec, fit.beta, fit.gamma);
}

double log_likelihood(const ModelSpec& spec, const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& gamma) {
  return evaluate_workset(spec, beta, gamma).loglik;
}

ScoreVector score(const ModelSpec& spec, const Eigen::VectorXd& beta,
                  const Eigen::VectorXd& gamma) {
  const Workset ws = evaluate_workset(spec, beta, gamma);
  ScoreVector s;
  s.u_beta = spec.X.transpose() *
             (ws.phi.array() * ws.t_diag.array() * (ws.y_star - ws.mu_star).array()).matrix();
  s.u_gamma = spec.Z.transpose() * (ws.h_diag.array() * ws.a.array()).matrix();
  return s;
}

InformationBlocks information(const ModelSpec& spec, const Eigen::VectorXd& beta,
                              const Eigen::VectorXd& gamma) {
  const Workset ws = evaluate_workset(spec, beta, gamma);
  InformationBlocks blocks;
  blocks.K_bb = spec.X.transpose() * (ws.phi.array() * ws.w.array()).matrix().asDiagonal() * spec.X;
  blocks.K_bg = spec.X.transpose() *
                (ws.c.array() * ws.t_diag.array() * ws.h_diag.array()).matrix().asDiagonal() *
                spec.Z;
  blocks.K_gg = spec.Z.transpose() * ws.d.asDiagonal() * spec.Z;
  // enforce exact symmetry of the diagonal blocks
  blocks.K_bb = ((blocks.K_bb + blocks.K_bb.transpose()) / 2.0).eval();
  blocks.K_gg = ((blocks.K_gg + blocks.K_gg.transpose()) / 2.0).eval();
  return blocks;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> initialize(const ModelSpec& spec) {
  const Eigen::Index n = spec.n();
  const Eigen::Index k = spec.k();
  constexpr double eps = 1e-6;

  Eigen::VectorXd gy(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double y = std::min(std::max(spec.y(t), eps), 1.0 - eps);
    gy(t) = link_apply(spec.mean_link, y);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(spec.X);
  qr.setThreshold(1e-10);
  if (qr.rank() < k) throw EstimationError("rank-deficient mean design in initialize");
  const Eigen::VectorXd beta0 = qr.solve(gy);

  const Eigen::VectorXd eta0 = spec.X * beta0;
  const double rss = (gy - eta0).squaredNorm();
  const double s2 = rss / static_cast<double>(n - k);

  double phi_tilde;
  if (!(s2 > 0.0) || !std::isfinite(s2)) {
    phi_tilde = 1e6;  // degenerate perfect linear fit
  } else {
    double acc = 0.0;
    for (Eigen::Index t = 0; t < n; ++t) {
      double mu = link_inverse(spec.mean_link, eta0(t));
      mu = std::min(std::max(mu, eps), 1.0 - eps);
      const double gprime = link_derivative(spec.mean_link, mu);
      const double sigma2 = s2 / (gprime * gprime);
      acc += mu * (1.0 - mu) / sigma2 - 1.0;
    }
    phi_tilde = acc / static_cast<double>(n);
    phi_tilde = std::min(std::max(phi_tilde, 1e-2), 1e6);
  }

  Eigen::VectorXd gamma0 = Eigen::VectorXd::Zero(spec.q());
  gamma0(0) = link_apply(spec.precision_link, phi_tilde);
  return {beta0, gamma0};
}

FittedModel fit(const ModelSpec& spec, const FitOptions& options) {
  require_valid(spec);

  auto [beta, gamma] = initialize(spec);
  auto ws = try_workset(spec, beta, gamma);
  if (!ws) throw EstimationError("starting values give a non-finite log-likelihood");

  // accept a step if the log-likelihood does not decrease beyond roundoff
  const auto acceptable = [](double candidate, double current) {
    return candidate >= current - 1e-10 * (1.0 + std::abs(current));
  };

  // Halve the step until the candidate stays in the domain and does not
  // lower the log-likelihood. Returns false if every step length failed.
  const auto take_step = [&](Eigen::VectorXd& block, const Eigen::VectorXd& direction,
                             bool beta_block) {
    double step = 1.0;
    for (int half = 0; half <= options.step_halving_max; ++half) {
      const Eigen::VectorXd candidate = block + step * direction;
      const auto ws_candidate = beta_block ? try_workset(spec, candidate, gamma)
                                           : try_workset(spec, beta, candidate);
      if (ws_candidate && acceptable(ws_candidate->loglik, ws->loglik)) {
        block = candidate;
        ws = ws_candidate;
        return true;
      }
      step /= 2.0;
    }
    return false;
  };

  FittedModel result;
  result.loglik_trace.reserve(16);

  bool converged = false;
  int iterations = 0;
  for (int m = 0; m < options.max_iterations; ++m) {
    ++iterations;
    const Eigen::VectorXd beta_prev = beta;
    const Eigen::VectorXd gamma_prev = gamma;

    // beta block: direction K_bb^{-1} U_beta at the current iterate
    Eigen::VectorXd u_beta =
        spec.X.transpose() *
        (ws->phi.array() * ws->t_diag.array() * (ws->y_star - ws->mu_star).array()).matrix();
    Eigen::MatrixXd k_bb =
        spec.X.transpose() * (ws->phi.array() * ws->w.array()).matrix().asDiagonal() * spec.X;
    const bool beta_moved = take_step(beta, solve_spd(std::move(k_bb), u_beta), true);

    // gamma block, re-evaluated at the fresh beta
    Eigen::VectorXd u_gamma = spec.Z.transpose() * (ws->h_diag.array() * ws->a.array()).matrix();
    Eigen::MatrixXd k_gg = spec.Z.transpose() * ws->d.asDiagonal() * spec.Z;
    const bool gamma_moved = take_step(gamma, solve_spd(std::move(k_gg), u_gamma), false);

    result.loglik_trace.push_back(ws->loglik);

    const bool stalled = !beta_moved && !gamma_moved;
    const bool small_change =
        sup_norm(beta - beta_prev) < options.tolerance * (1.0 + sup_norm(beta_prev)) &&
        sup_norm(gamma - gamma_prev) < options.tolerance * (1.0 + sup_norm(gamma_prev));
    if (small_change && beta_moved && gamma_moved) {
      converged = true;
      break;
    }
    if (stalled) break;  // no usable ascent direction left
  }

  result.beta = beta;
  result.gamma = gamma;
  result.mu = ws->mu;
  result.phi = ws->phi;
  result.eta = ws->eta;
  result.vartheta = ws->vartheta;
  result.loglik = ws->loglik;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> standard_errors(const ModelSpec& spec,
                                                            const FittedModel& fit) {
  const InformationBlocks blocks = information(spec, fit.beta, fit.gamma);
  const Eigen::Index k = spec.k();
  const Eigen::Index q = spec.q();
  Eigen::MatrixXd full(k + q, k + q);
  full.topLeftCorner(k, k) = blocks.K_bb;
  full.topRightCorner(k, q) = blocks.K_bg;
  full.bottomLeftCorner(q, k) = blocks.K_bg.transpose();
  full.bottomRightCorner(q, q) = blocks.K_gg;

  Eigen::LDLT<Eigen::MatrixXd> ldlt(full);
  if (ldlt.info() != Eigen::Success) {
    throw EstimationError("information matrix not factorizable at the fit");
  }
  const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(k + q, k + q));
  Eigen::VectorXd se_beta(k), se_gamma(q);
  for (Eigen::Index i = 0; i < k; ++i) se_beta(i) = std::sqrt(std::max(cov(i, i), 0.0));
  for (Eigen::Index j = 0; j < q; ++j) se_gamma(j) = std::sqrt(std::max(cov(k + j, k + j), 0.0));
  return {se_beta, se_gamma};
}

}  // namespace betareg
