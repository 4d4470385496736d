#pragma once

#include <optional>
#include <vector>

#include "thz/types.hpp"

namespace thz::bayes {

// Measurement model after noise whitening: y = S h_b + w with w ~ CN(0, I).
// Keeping log det(R_v) allows marginal likelihoods in the original scale.
struct WhitenedModel {
  MatC s;
  VecC y;
  double logdet_rv = 0.0;
};

WhitenedModel whiten(const MatC& psi_tilde, const VecC& y, const MatC& r_v);

// Posterior of h_b under the prior CN(0, diag(gamma)). The solver picks the
// cheaper algebraic route: a Woodbury form working in measurement space when
// rows < G, or the information form with a Cholesky of
// A = S^H S + Gamma^{-1} otherwise. Both expose the quantities the EM loops
// need: mean, covariance diagonal, marginal log-likelihood, and projected
// covariances X Sigma X^H.
class PosteriorSolve {
 public:
  // gram may pass a cached S^H S to skip recomputing it (information route).
  PosteriorSolve(const WhitenedModel& model, const VecD& gamma,
                 const MatC* gram = nullptr);

  const VecC& mean() const { return mu_; }
  const VecD& cov_diag() const { return cov_diag_; }

  // -log det(R_y) - y^H R_y^{-1} y, with R_y = R_v + Psi_tilde Gamma Psi_tilde^H.
  double loglik() const { return loglik_; }

  MatC cov_project(const MatC& x) const;  // x Sigma x^H
  MatC full_cov() const;
  double cov_trace() const;
  double cov_project_trace(const MatC& x) const;  // Tr(x Sigma x^H)

 private:
  bool information_route_;
  VecD gamma_;
  MatC s_;                  // retained whitened sensing matrix
  Eigen::LLT<MatC> llt_;    // of A (information route) or B (Woodbury route)
  VecC mu_;
  VecD cov_diag_;
  double loglik_ = 0.0;
};

}  // namespace thz::bayes
