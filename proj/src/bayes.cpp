#include "thz/bayes.hpp"

#include <cmath>
#include <stdexcept>

namespace thz::bayes {

WhitenedModel whiten(const MatC& psi_tilde, const VecC& y, const MatC& r_v) {
  if (psi_tilde.rows() != y.size() || r_v.rows() != y.size() ||
      r_v.cols() != y.size())
    throw std::invalid_argument("whiten: dimension mismatch");
  Eigen::LLT<MatC> llt(r_v);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("whiten: R_v is not positive definite");
  WhitenedModel m;
  const auto lower = llt.matrixL();
  m.s = lower.solve(psi_tilde);
  m.y = lower.solve(y);
  m.logdet_rv =
      2.0 * lower.toDenseMatrix().diagonal().real().array().log().sum();
  return m;
}

namespace {

// Column-wise squared norms of L^{-1}, giving diag((L L^H)^{-1}).
VecD inverse_diag_from_llt(const Eigen::LLT<MatC>& llt) {
  const Eigen::Index n = llt.matrixLLT().rows();
  MatC linv = MatC::Identity(n, n);
  llt.matrixL().solveInPlace(linv);
  return linv.colwise().squaredNorm().transpose();
}

double logdet_from_llt(const Eigen::LLT<MatC>& llt) {
  return 2.0 *
         llt.matrixLLT().diagonal().real().array().log().sum();
}

}  // namespace

PosteriorSolve::PosteriorSolve(const WhitenedModel& model, const VecD& gamma,
                               const MatC* gram)
    : gamma_(gamma), s_(model.s) {
  const Eigen::Index rows = model.s.rows();
  const Eigen::Index g = model.s.cols();
  if (gamma.size() != g)
    throw std::invalid_argument("PosteriorSolve: gamma length mismatch");
  if ((gamma.array() < 0.0).any())
    throw std::invalid_argument("PosteriorSolve: gamma entries must be >= 0");

  information_route_ = rows >= g;
  if (information_route_ && (gamma.array() <= 0.0).any())
    throw std::invalid_argument(
        "PosteriorSolve: gamma entries must be > 0 in the information route");

  if (information_route_) {
    MatC a = gram ? *gram : MatC(model.s.adjoint() * model.s);
    a.diagonal() += gamma.cwiseInverse().cast<cxd>();
    llt_.compute(a);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("PosteriorSolve: information matrix not PD");
    mu_ = llt_.solve(model.s.adjoint() * model.y);
    cov_diag_ = inverse_diag_from_llt(llt_);
    // det(R_y) = det(R_v) det(Gamma) det(A)
    const double logdet_ry = model.logdet_rv +
                             gamma.array().log().sum() +
                             logdet_from_llt(llt_);
    const double quad =
        (model.y.dot(model.y - model.s * mu_)).real();
    loglik_ = -logdet_ry - quad;
  } else {
    // B = I + S Gamma S^H, computed from scaled columns.
    const MatC s_scaled = model.s * gamma.cwiseSqrt().asDiagonal();
    MatC b = MatC::Identity(rows, rows);
    b.selfadjointView<Eigen::Lower>().rankUpdate(s_scaled);
    b = b.selfadjointView<Eigen::Lower>();
    llt_.compute(b);
    if (llt_.info() != Eigen::Success)
      throw std::runtime_error("PosteriorSolve: measurement matrix not PD");
    const VecC b_inv_y = llt_.solve(model.y);
    mu_ = gamma.asDiagonal() * (model.s.adjoint() * b_inv_y);
    // diag(Sigma) = gamma_i - gamma_i^2 (S^H B^{-1} S)_{ii}
    const MatC t = llt_.solve(model.s);
    cov_diag_.resize(g);
    for (Eigen::Index i = 0; i < g; ++i) {
      const double c = model.s.col(i).dot(t.col(i)).real();
      cov_diag_(i) = std::max(0.0, gamma(i) - gamma(i) * gamma(i) * c);
    }
    const double logdet_ry = model.logdet_rv + logdet_from_llt(llt_);
    const double quad = (model.y.dot(model.y - model.s * mu_)).real();
    loglik_ = -logdet_ry - quad;
  }
}

MatC PosteriorSolve::cov_project(const MatC& x) const {
  if (x.cols() != gamma_.size())
    throw std::invalid_argument("cov_project: column count mismatch");
  if (information_route_) {
    // X Sigma X^H = V^H V with V = L^{-1} X^H.
    MatC v = x.adjoint();
    llt_.matrixL().solveInPlace(v);
    return v.adjoint() * v;
  }
  // Sigma = Gamma - Gamma S^H B^{-1} S Gamma.
  const MatC xg = x * gamma_.asDiagonal();
  const MatC sgx = s_ * gamma_.asDiagonal() * x.adjoint();
  return xg * x.adjoint() - sgx.adjoint() * llt_.solve(sgx);
}

double PosteriorSolve::cov_project_trace(const MatC& x) const {
  if (information_route_) {
    MatC v = x.adjoint();
    llt_.matrixL().solveInPlace(v);
    return v.squaredNorm();
  }
  const MatC xg = x * gamma_.asDiagonal();
  const MatC sgx = s_ * gamma_.asDiagonal() * x.adjoint();
  return (xg * x.adjoint()).trace().real() -
         (sgx.adjoint() * llt_.solve(sgx)).trace().real();
}

MatC PosteriorSolve::full_cov() const {
  const Eigen::Index g = gamma_.size();
  if (information_route_)
    return llt_.solve(MatC::Identity(g, g));
  const MatC sg = s_ * gamma_.asDiagonal();
  MatC cov = MatC(gamma_.cast<cxd>().asDiagonal());
  cov.noalias() -= sg.adjoint() * llt_.solve(sg);
  return cov;
}

double PosteriorSolve::cov_trace() const { return cov_diag_.sum(); }

}  // namespace thz::bayes
