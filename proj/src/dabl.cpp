#include "thz/dabl.hpp"

#include <cmath>
#include <stdexcept>

#include "thz/linalg.hpp"

namespace thz::dabl {

MatC zf_detect(const MatC& y_d, const MatC& h_eq) {
  if (h_eq.rows() < h_eq.cols())
    throw std::invalid_argument("zf_detect: H_eq has fewer rows than columns");
  const MatC normal = h_eq.adjoint() * h_eq;
  Eigen::LDLT<MatC> ldlt(normal);
  const VecD d = ldlt.vectorD().real();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 0.0 ||
      d.maxCoeff() / d.minCoeff() > 1e12)
    throw std::runtime_error("zf_detect: rank-deficient equivalent channel");
  return ldlt.solve(h_eq.adjoint() * y_d);
}

MatC mmse_detect(const MatC& y_d, const MatC& h_eq, const MatC& r_d) {
  MatC regularized = h_eq.adjoint() * h_eq + r_d;
  return linalg::hermitian_solve(regularized, h_eq.adjoint() * y_d);
}

namespace {

// Data rows of the equivalent sensing matrix for one block:
// (A_T^H F x)^T (x) (W^H A_R).
MatC data_sensing_rows(const VecC& g, const MatC& t_w) {
  MatC rows(t_w.rows(), g.size() * t_w.cols());
  for (Eigen::Index t = 0; t < g.size(); ++t)
    rows.middleCols(t * t_w.cols(), t_w.cols()) = g(t) * t_w;
  return rows;
}

MatC xi_from_sigma_eq(const MatC& sigma_eq, int n_rf) {
  MatC xi(n_rf, n_rf);
  for (int a = 0; a < n_rf; ++a)
    for (int b = 0; b < n_rf; ++b)
      xi(a, b) = sigma_eq.block(b * n_rf, a * n_rf, n_rf, n_rf).trace();
  return 0.5 * (xi + MatC(xi.adjoint()));
}

DataEstimate demodulate_matrix(const MatC& soft, const Constellation& constel) {
  DataEstimate est;
  est.x_soft = soft;
  est.x_idx.resize(soft.rows(), soft.cols());
  est.x_hat.resize(soft.rows(), soft.cols());
  for (Eigen::Index c = 0; c < soft.cols(); ++c)
    for (Eigen::Index r = 0; r < soft.rows(); ++r) {
      const int idx = constel.demodulate(soft(r, c));
      est.x_idx(r, c) = idx;
      est.x_hat(r, c) = constel.point(idx);
    }
  return est;
}

}  // namespace

ConcatenatedModel build_concatenated(const MatC& x_d_hat, const MatC& y_d,
                                     const VecC& y_p, const MatC& psi_tilde_p,
                                     const MatC& r_vp, const MatC& r_vd_block,
                                     const MatC& f_rf, const MatC& w_rf,
                                     const sparse::DictionaryPair& dict) {
  const int n_rf = static_cast<int>(w_rf.cols());
  const int n_d = static_cast<int>(x_d_hat.cols());
  if (y_d.cols() != n_d || y_d.rows() != n_rf)
    throw std::invalid_argument("build_concatenated: Y_d dimension mismatch");
  const int pilot_rows = static_cast<int>(psi_tilde_p.rows());
  const int data_rows = n_d * n_rf;
  const Eigen::Index g = psi_tilde_p.cols();

  ConcatenatedModel model;
  model.data_rows = data_rows;
  model.y.resize(data_rows + pilot_rows);
  model.psi_tilde.resize(data_rows + pilot_rows, g);
  model.r_v = MatC::Zero(data_rows + pilot_rows, data_rows + pilot_rows);

  const MatC t_w = w_rf.adjoint() * dict.a_r;   // N_RF x G_R
  const MatC t_f = dict.a_t.adjoint() * f_rf;   // G_T x N_RF
  for (int m = 0; m < n_d; ++m) {
    const VecC g_m = t_f * x_d_hat.col(m);
    model.psi_tilde.middleRows(m * n_rf, n_rf) = data_sensing_rows(g_m, t_w);
    model.y.segment(m * n_rf, n_rf) = y_d.col(m);
    model.r_v.block(m * n_rf, m * n_rf, n_rf, n_rf) = r_vd_block;
  }
  model.y.tail(pilot_rows) = y_p;
  model.psi_tilde.bottomRows(pilot_rows) = psi_tilde_p;
  model.r_v.bottomRightCorner(pilot_rows, pilot_rows) = r_vp;
  return model;
}

MatC xi_matrix(const MatC& sigma, const MatC& psi, const MatC& f_rf,
               const MatC& w_rf) {
  const int n_rf = static_cast<int>(w_rf.cols());
  const MatC phi_tilde =
      linalg::kron(f_rf.transpose(), w_rf.adjoint()) * psi;
  const MatC sigma_eq = phi_tilde * sigma * phi_tilde.adjoint();
  return xi_from_sigma_eq(sigma_eq, n_rf);
}

DataEstimate robust_zf_detect(const MatC& y_d, const MatC& h_eq_hat,
                              const MatC& xi, const Constellation& constel) {
  const Eigen::Index n_rf = h_eq_hat.cols();
  MatC h_cal(h_eq_hat.rows() + n_rf, n_rf);
  h_cal.topRows(h_eq_hat.rows()) = h_eq_hat;
  h_cal.bottomRows(n_rf) = linalg::hermitian_sqrt_psd(xi);
  MatC y_bar = MatC::Zero(y_d.rows() + n_rf, y_d.cols());
  y_bar.topRows(y_d.rows()) = y_d;

  return demodulate_matrix(
      linalg::hermitian_solve(h_cal.adjoint() * h_cal, h_cal.adjoint() * y_bar),
      constel);
}

namespace {

VecD floored(const VecD& gamma, double floor_rel) {
  const double top = gamma.maxCoeff();
  if (top <= 0.0) return VecD::Constant(gamma.size(), 1e-300);
  return gamma.cwiseMax(floor_rel * top);
}

}  // namespace

SubcarrierEstimate dabl_estimate(const VecC& y_p, const MatC& psi_tilde_p,
                                 const MatC& r_vp, const MatC& y_d,
                                 const MatC& r_vd_block, const MatC& f_rf,
                                 const MatC& w_rf,
                                 const sparse::DictionaryPair& dict,
                                 const Constellation& constel,
                                 const VecC& pabl_h_b, const Options& options) {
  const int n_rf = static_cast<int>(w_rf.cols());
  const int n_d = static_cast<int>(y_d.cols());
  const Eigen::Index g = psi_tilde_p.cols();
  const Eigen::Index g_t = dict.a_t.cols();
  const Eigen::Index g_r = dict.a_r.cols();

  // With no data the concatenated model is the pilot model; run the
  // pilot-aided loop so the reduction is exact.
  if (n_d == 0) {
    pabl::Options popt;
    popt.eps = options.eps;
    popt.max_iterations = options.max_iterations;
    popt.gamma_floor_rel = options.gamma_floor_rel;
    const auto pa = pabl::pabl_estimate(y_p, psi_tilde_p, r_vp, popt);
    SubcarrierEstimate out;
    out.h_b = pa.h_b;
    out.gamma = pa.gamma;
    out.iterations = pa.iterations;
    out.converged = pa.converged;
    out.loglik = pa.loglik;
    out.gamma_delta = pa.gamma_delta;
    return out;
  }

  const MatC t_w = w_rf.adjoint() * dict.a_r;  // N_RF x G_R
  const MatC t_f = dict.a_t.adjoint() * f_rf;  // G_T x N_RF

  // Whitened pilot rows, fixed across iterations.
  const bayes::WhitenedModel pilot_model = bayes::whiten(psi_tilde_p, y_p, r_vp);
  const MatC gram_p = pilot_model.s.adjoint() * pilot_model.s;

  // Whitener of the shared per-block data noise covariance.
  Eigen::LLT<MatC> rvd_llt(r_vd_block);
  if (rvd_llt.info() != Eigen::Success)
    throw std::invalid_argument("dabl_estimate: R_vd block not positive definite");
  const double logdet_rvd_block =
      2.0 * rvd_llt.matrixLLT().diagonal().real().array().log().sum();
  const MatC t_w_white = rvd_llt.matrixL().solve(t_w);
  const MatC m_w = t_w_white.adjoint() * t_w_white;  // G_R x G_R
  MatC y_d_white(n_rf, n_d);
  for (int m = 0; m < n_d; ++m)
    y_d_white.col(m) = rvd_llt.matrixL().solve(y_d.col(m));

  const int rows = n_d * n_rf + static_cast<int>(psi_tilde_p.rows());
  const double logdet_rv = n_d * logdet_rvd_block + pilot_model.logdet_rv;

  // Phi~ = T_F^T (x) T_W maps the beamspace posterior onto the equivalent
  // channel for the Xi computation.
  const MatC phi_tilde = linalg::kron(t_f.transpose(), t_w);

  // Initial data detection: MMSE detector driven by the PA-BL channel.
  const MatC h_eq_init = t_w * linalg::unvec(pabl_h_b, g_r, g_t) * t_f;
  DataEstimate detected =
      demodulate_matrix(mmse_detect(y_d, h_eq_init, r_vd_block), constel);

  SubcarrierEstimate out;
  VecD gamma = VecD::Ones(g);

  bayes::WhitenedModel model;
  model.logdet_rv = logdet_rv;
  model.y.resize(rows);
  model.y.head(n_d * n_rf) = Eigen::Map<const VecC>(y_d_white.data(), n_d * n_rf);
  model.y.tail(pilot_model.y.size()) = pilot_model.y;
  model.s.resize(rows, g);
  model.s.bottomRows(pilot_model.s.rows()) = pilot_model.s;

  int j = 0;
  while (true) {
    ++j;
    // Rebuild whitened data rows from the current symbol estimate.
    const MatC g_syms = t_f * detected.x_hat;  // G_T x N_d
    for (int m = 0; m < n_d; ++m)
      model.s.middleRows(m * n_rf, n_rf) =
          data_sensing_rows(g_syms.col(m), t_w_white);
    const MatC gram =
        gram_p + linalg::kron(MatC((g_syms * g_syms.adjoint()).conjugate()),
                              m_w);

    bayes::PosteriorSolve post(model, floored(gamma, options.gamma_floor_rel),
                               &gram);
    out.loglik.push_back(post.loglik());
    out.h_b = post.mean();

    VecD gamma_next = post.cov_diag() + post.mean().cwiseAbs2().eval();
    gamma_next = floored(gamma_next, options.gamma_floor_rel);
    const double delta = (gamma_next - gamma).norm();
    out.gamma_delta.push_back(delta);
    gamma = gamma_next;

    // Robust detection with the refreshed channel and its uncertainty.
    const MatC h_eq = t_w * linalg::unvec(out.h_b, g_r, g_t) * t_f;
    const MatC xi = xi_from_sigma_eq(post.cov_project(phi_tilde), n_rf);
    detected = robust_zf_detect(y_d, h_eq, xi, constel);

    if (delta <= options.eps || j >= options.max_iterations) {
      out.converged = delta <= options.eps;
      break;
    }
  }
  out.iterations = j;
  out.gamma = gamma;
  out.data = detected;
  return out;
}

Report dabl_estimate_cfr(const frame::PilotMeasurements& pilots,
                         const frame::DataMeasurements& data,
                         const sparse::DictionarySet& dict,
                         const std::vector<MatC>& psi_tilde_p,
                         const pabl::Report& pabl_report,
                         const Constellation& constel, const Options& options) {
  const int k = static_cast<int>(pilots.y.size());
  const int n_rf = static_cast<int>(data.w_rf.cols());
  const bool have_data = !data.y.empty() && data.y.front().cols() > 0;
  const MatC r_vd_block =
      have_data ? MatC(data.r_v.topLeftCorner(n_rf, n_rf)) : MatC();

  Report report;
  report.per_k.reserve(k);
  report.h_hat.h.reserve(k);
  for (int i = 0; i < k; ++i) {
    const MatC y_d = have_data ? data.y[i] : MatC(n_rf, 0);
    report.per_k.push_back(dabl_estimate(
        pilots.y[i], psi_tilde_p[i], pilots.r_v, y_d, r_vd_block, data.f_rf,
        data.w_rf, dict.at(i), constel, pabl_report.per_k[i].h_b, options));
    report.h_hat.h.push_back(
        sparse::beamspace_to_channel(report.per_k.back().h_b, dict.at(i)));
  }
  return report;
}

pabl::Bcrlb bcrlb_da(const MatC& psi_tilde, const MatC& r_v, const VecD& gamma,
                     const MatC& psi) {
  return pabl::bcrlb_pa(psi_tilde, r_v, gamma, psi);
}

}  // namespace thz::dabl
