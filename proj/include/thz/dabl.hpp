#pragma once

#include <vector>

#include "thz/bayes.hpp"
#include "thz/channel.hpp"
#include "thz/constellation.hpp"
#include "thz/frame.hpp"
#include "thz/pabl.hpp"
#include "thz/sparsemodel.hpp"
#include "thz/types.hpp"

namespace thz::dabl {

/// Zero-forcing detection (H^H H)^{-1} H^H Y for a full-column-rank
/// equivalent channel; throws on rank deficiency.
MatC zf_detect(const MatC& y_d, const MatC& h_eq);

/// Regularized detector (H^H H + R_d)^{-1} H^H Y, exactly as written.
MatC mmse_detect(const MatC& y_d, const MatC& h_eq, const MatC& r_d);

// Concatenated data+pilot model for one subcarrier: data rows stacked above
// pilot rows, with R_v = blkdiag(R_vd, R_vp).
struct ConcatenatedModel {
  VecC y;
  MatC psi_tilde;
  MatC r_v;
  int data_rows = 0;
};

/// Builds the concatenated model from the current data-symbol estimate. The
/// data rows of the equivalent sensing matrix are
/// (x_m^T F^T (x) W^H) Psi = (A_T^H F x_m)^T (x) (W^H A_R).
ConcatenatedModel build_concatenated(const MatC& x_d_hat, const MatC& y_d,
                                     const VecC& y_p, const MatC& psi_tilde_p,
                                     const MatC& r_vp, const MatC& r_vd_block,
                                     const MatC& f_rf, const MatC& w_rf,
                                     const sparse::DictionaryPair& dict);

/// Posterior second-moment correction of the equivalent channel:
/// E{H_eq^H H_eq} = H_eq_hat^H H_eq_hat + Xi, with
/// Sigma_eq = Phi~ Sigma Phi~^H and Phi~ = [F^T (x) W^H] Psi. Block traces of
/// Sigma_eq are arranged so that the second-moment identity holds exactly.
MatC xi_matrix(const MatC& sigma, const MatC& psi, const MatC& f_rf,
               const MatC& w_rf);

struct DataEstimate {
  MatC x_soft;            // ZF output before demodulation
  MatC x_hat;             // hard symbols (constellation values)
  Eigen::MatrixXi x_idx;  // constellation indices of x_hat
};

/// Robust ZF of the augmented system [Y_d; 0] = [H_eq_hat; Xi^{1/2}] X:
/// the posterior channel uncertainty regularizes the detector.
DataEstimate robust_zf_detect(const MatC& y_d, const MatC& h_eq_hat,
                              const MatC& xi, const Constellation& constel);

struct Options {
  double eps = 1.0;
  int max_iterations = 20;  // DL_max
  double gamma_floor_rel = 1e-8;
};

struct SubcarrierEstimate {
  VecC h_b;
  VecD gamma;
  DataEstimate data;
  int iterations = 0;
  bool converged = false;
  std::vector<double> loglik;
  std::vector<double> gamma_delta;
};

/// Joint channel estimation and data detection for one subcarrier
/// (the data-aided EM loop). `pabl_init` supplies the channel estimate that
/// seeds the initial MMSE data detection. With zero data blocks the loop is
/// the pilot-aided one and the result matches pabl_estimate bit for bit.
SubcarrierEstimate dabl_estimate(const VecC& y_p, const MatC& psi_tilde_p,
                                 const MatC& r_vp, const MatC& y_d,
                                 const MatC& r_vd_block, const MatC& f_rf,
                                 const MatC& w_rf,
                                 const sparse::DictionaryPair& dict,
                                 const Constellation& constel,
                                 const VecC& pabl_h_b,
                                 const Options& options = {});

struct Report {
  std::vector<SubcarrierEstimate> per_k;
  channel::ChannelFrequencyResponse h_hat;
};

/// Runs the data-aided loop across subcarriers, seeding each from the
/// pilot-aided report, and reconstructs H_hat[k].
Report dabl_estimate_cfr(const frame::PilotMeasurements& pilots,
                         const frame::DataMeasurements& data,
                         const sparse::DictionarySet& dict,
                         const std::vector<MatC>& psi_tilde_p,
                         const pabl::Report& pabl_report,
                         const Constellation& constel,
                         const Options& options = {});

/// Data-aided BCRLB: the pilot-aided bound evaluated on the concatenated
/// model J_DA = Psi~^H R_v^{-1} Psi~ + Gamma^{-1}.
pabl::Bcrlb bcrlb_da(const MatC& psi_tilde, const MatC& r_v, const VecD& gamma,
                     const MatC& psi);

}  // namespace thz::dabl
