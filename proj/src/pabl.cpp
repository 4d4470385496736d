#include "thz/pabl.hpp"

#include <cmath>
#include <stdexcept>

#include "thz/linalg.hpp"

namespace thz::pabl {

PosteriorMoments posterior_moments(const VecC& y_p, const MatC& psi_tilde,
                                   const MatC& r_vp, const VecD& gamma) {
  if ((gamma.array() <= 0.0).any())
    throw std::invalid_argument("posterior_moments: gamma entries must be > 0");
  const Eigen::Index g = psi_tilde.cols();
  Eigen::LLT<MatC> rv_llt(r_vp);
  if (rv_llt.info() != Eigen::Success)
    throw std::invalid_argument("posterior_moments: R_vp not positive definite");
  const MatC rv_inv_psi = rv_llt.solve(psi_tilde);
  MatC a = psi_tilde.adjoint() * rv_inv_psi;
  a.diagonal() += gamma.cwiseInverse().cast<cxd>();

  PosteriorMoments m;
  m.r_b = linalg::hermitian_solve(a, MatC::Identity(g, g));
  m.r_b = 0.5 * (m.r_b + m.r_b.adjoint());  // suppress Hermitian drift
  m.mu = m.r_b * (psi_tilde.adjoint() * rv_llt.solve(y_p));
  return m;
}

VecD update_hyperparameters(const PosteriorMoments& moments) {
  return moments.r_b.diagonal().real().cwiseMax(0.0) +
         moments.mu.cwiseAbs2();
}

namespace {

VecD floored(const VecD& gamma, double floor_rel) {
  const double top = gamma.maxCoeff();
  if (top <= 0.0) return VecD::Constant(gamma.size(), 1e-300);
  return gamma.cwiseMax(floor_rel * top);
}

SubcarrierEstimate run_em(const bayes::WhitenedModel& model, const MatC* gram,
                          const Options& options) {
  const Eigen::Index g = model.s.cols();
  SubcarrierEstimate out;
  VecD gamma = VecD::Ones(g);

  int j = 0;
  while (true) {
    ++j;
    bayes::PosteriorSolve post(model, floored(gamma, options.gamma_floor_rel),
                               gram);
    out.loglik.push_back(post.loglik());
    VecD gamma_next = post.cov_diag() + post.mean().cwiseAbs2().eval();
    gamma_next = floored(gamma_next, options.gamma_floor_rel);

    const double delta = (gamma_next - gamma).norm();
    out.gamma_delta.push_back(delta);
    gamma = gamma_next;
    out.h_b = post.mean();

    if (delta <= options.eps || j >= options.max_iterations) {
      out.converged = delta <= options.eps;
      break;
    }
  }
  out.iterations = j;
  out.gamma = gamma;
  return out;
}

}  // namespace

SubcarrierEstimate pabl_estimate(const VecC& y_p, const MatC& psi_tilde,
                                 const MatC& r_vp, const Options& options) {
  const bayes::WhitenedModel model = bayes::whiten(psi_tilde, y_p, r_vp);
  if (model.s.rows() >= model.s.cols()) {
    const MatC gram = model.s.adjoint() * model.s;
    return run_em(model, &gram, options);
  }
  return run_em(model, nullptr, options);
}

Report pabl_estimate_cfr(const frame::PilotMeasurements& pilots,
                         const sparse::DictionarySet& dict,
                         const std::vector<MatC>& psi_tilde,
                         const Options& options) {
  const int k = static_cast<int>(pilots.y.size());
  Report report;
  report.per_k.reserve(k);
  report.h_hat.h.reserve(k);
  for (int i = 0; i < k; ++i) {
    report.per_k.push_back(
        pabl_estimate(pilots.y[i], psi_tilde[i], pilots.r_v, options));
    report.h_hat.h.push_back(
        sparse::beamspace_to_channel(report.per_k.back().h_b, dict.at(i)));
    report.max_iterations_used =
        std::max(report.max_iterations_used, report.per_k.back().iterations);
  }
  return report;
}

Bcrlb bcrlb_pa(const MatC& psi_tilde, const MatC& r_vp, const VecD& gamma,
               const MatC& psi) {
  if ((gamma.array() <= 0.0).any())
    throw std::invalid_argument("bcrlb_pa: gamma entries must be > 0");
  Eigen::LLT<MatC> rv_llt(r_vp);
  if (rv_llt.info() != Eigen::Success)
    throw std::invalid_argument("bcrlb_pa: R_vp not positive definite");
  MatC j = psi_tilde.adjoint() * rv_llt.solve(psi_tilde);
  j.diagonal() += gamma.cwiseInverse().cast<cxd>();

  Eigen::LLT<MatC> j_llt(j);
  if (j_llt.info() != Eigen::Success)
    throw std::runtime_error("bcrlb_pa: Fisher information matrix is singular");

  Bcrlb bound{};
  {
    MatC linv = MatC::Identity(j.rows(), j.cols());
    j_llt.matrixL().solveInPlace(linv);
    bound.beamspace = linv.squaredNorm();
    MatC v = psi.adjoint();
    j_llt.matrixL().solveInPlace(v);
    bound.antenna = v.squaredNorm();
  }
  return bound;
}

}  // namespace thz::pabl
