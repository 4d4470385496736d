#pragma once

#include <string>
#include <vector>

#include "thz/channel.hpp"
#include "thz/constellation.hpp"
#include "thz/rng.hpp"
#include "thz/types.hpp"

namespace thz::frame {

// Antenna/RF-chain geometry and frame dimensions of one scenario.
// K = N_p + L - 1 is implied by the zero-padded block structure.
struct SystemConfig {
  int n_t = 32;
  int n_r = 32;
  int n_rf = 6;
  int n_s = 1;
  int n_pilot_symbols = 13;  // N_p per block
  int n_taps = 4;            // L
  int n_pilot_blocks = 30;   // M
  int n_data_blocks = 100;   // N_d
  int phase_bits = 4;        // N_Q
  double sigma_v_sq = 1.0;   // pilot-phase noise variance
  double sigma_d_sq = 1.0;   // data-phase noise variance
  std::string pilot_constellation = "8psk";
  std::string data_constellation = "qpsk";

  int n_subcarriers() const { return n_pilot_symbols + n_taps - 1; }
  void validate() const;
};

// One training block: its RF pair, the pilot vectors and their K-point DFT.
struct PilotBlock {
  MatC f_rf;       // N_T x N_RF
  MatC w_rf;       // N_R x N_RF
  MatC pilots;     // N_RF x N_p
  MatC pilots_fd;  // N_RF x K, DFT of the zero-padded pilot sequence
};

struct PilotFrame {
  std::vector<PilotBlock> blocks;
};

// Stacked pilot part of the estimation model for all subcarriers.
struct PilotMeasurements {
  std::vector<VecC> y;    // per k: M N_RF
  std::vector<MatC> phi;  // per k: M N_RF x N_T N_R
  MatC r_v;               // M N_RF x M N_RF, Hermitian PSD block diagonal
};

// Data part of the model; one shared RF pair serves every data block.
struct DataMeasurements {
  std::vector<MatC> y;       // per k: N_RF x N_d
  std::vector<MatC> x_true;  // per k: N_RF x N_d transmitted symbols
  MatC f_rf;                 // N_T x N_RF
  MatC w_rf;                 // N_R x N_RF
  MatC r_v;                  // N_d N_RF x N_d N_RF
};

/// Random quantized phase-shifter matrix: entries (1/sqrt(n_rows)) e^{j phi}
/// with phi uniform on the 2^{n_q}-point lattice {0, 2pi/2^{n_q}, ...}.
MatC generate_rf_codebook(Rng& rng, int n_rows, int n_cols, int n_q);

/// Unnormalized forward DFT across columns: out.col(k) = sum_q in.col(q)
/// e^{-j 2 pi k q / K}.
MatC to_frequency_domain(const MatC& td_block);

/// Inverse transform carrying the 1/K factor.
MatC to_time_domain(const MatC& fd_block);

/// Training frame with block-independent RF pairs and i.i.d. unit-power
/// pilot vectors.
PilotFrame generate_pilot_frame(const SystemConfig& config, Rng& rng);

/// Time-domain combiner outputs of one block (Eq. of the zero-padded model):
/// y(q) = W^H (H_q circ-conv u_zp(q)) + W^H v(q). `taps` and `precoded_zp`
/// must both span K samples; sigma_v_sq = 0 gives the noiseless path.
MatC synthesize_pilot_block_td(const std::vector<MatC>& taps,
                               const MatC& precoded_zp, const MatC& w_rf,
                               double sigma_v_sq, Rng* rng);

/// Per-subcarrier sensing matrix Phi_m[k] = (u^T F^T (x) W^H).
MatC build_pilot_sensing(const VecC& u_fd, const MatC& f_rf, const MatC& w_rf);

/// Frequency-domain synthesis of one block (direct evaluation of the
/// per-subcarrier model): y_m[k] = W^H H[k] F u_m[k] + W^H v[k] with
/// v[k] ~ CN(0, sigma_v_sq * K * I).
std::vector<VecC> synthesize_pilot_block_fd(
    const channel::ChannelFrequencyResponse& cfr, const PilotBlock& block,
    double sigma_v_sq, Rng* rng);

/// Stacks per-block outputs and sensing matrices in block order and forms
/// R_vp = sigma_v^2 K blkdiag(W_m^H W_m).
PilotMeasurements stack_pilot_blocks(
    const SystemConfig& config, const PilotFrame& frame,
    const std::vector<std::vector<VecC>>& per_block_outputs);

/// Convenience path used by the experiment harness: per-block FD synthesis
/// followed by stacking.
PilotMeasurements synthesize_pilot_measurements(
    const channel::ChannelFrequencyResponse& cfr, const SystemConfig& config,
    const PilotFrame& frame, Rng& rng, bool noiseless = false);

/// Draws X_d[k] (N_RF x N_d) per subcarrier from the data constellation.
std::vector<MatC> generate_data_symbols(const SystemConfig& config,
                                        const Constellation& constellation,
                                        Rng& rng);

/// Data-phase outputs y_{d,m}[k] = W^H H[k] F x_m[k] + W^H v[k] for the
/// shared RF pair, plus R_vd = sigma_d^2 K blkdiag(W^H W).
DataMeasurements synthesize_data_blocks(
    const channel::ChannelFrequencyResponse& cfr, const SystemConfig& config,
    const std::vector<MatC>& x_d, const MatC& f_rf, const MatC& w_rf, Rng& rng,
    bool noiseless = false);

}  // namespace thz::frame
