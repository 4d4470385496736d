#include "thz/frame.hpp"

#include <cmath>
#include <stdexcept>

#include "thz/linalg.hpp"

namespace thz::frame {

void SystemConfig::validate() const {
  if (n_s < 1 || n_rf < n_s || n_rf > std::min(n_t, n_r))
    throw std::invalid_argument("SystemConfig: need N_s <= N_RF <= min(N_T, N_R)");
  if (n_pilot_symbols < 1 || n_taps < 1)
    throw std::invalid_argument("SystemConfig: need N_p >= 1 and L >= 1");
  if (n_pilot_blocks < 1) throw std::invalid_argument("SystemConfig: M >= 1");
  if (n_data_blocks < 0) throw std::invalid_argument("SystemConfig: N_d >= 0");
  if (phase_bits < 1) throw std::invalid_argument("SystemConfig: N_Q >= 1");
  if (sigma_v_sq < 0.0 || sigma_d_sq < 0.0)
    throw std::invalid_argument("SystemConfig: noise variances >= 0");
}

MatC generate_rf_codebook(Rng& rng, int n_rows, int n_cols, int n_q) {
  if (n_q < 1) throw std::invalid_argument("generate_rf_codebook: N_Q >= 1");
  const int levels = 1 << n_q;
  const double modulus = 1.0 / std::sqrt(static_cast<double>(n_rows));
  MatC m(n_rows, n_cols);
  for (Eigen::Index j = 0; j < n_cols; ++j)
    for (Eigen::Index i = 0; i < n_rows; ++i) {
      const auto level = rng.uniform_index(levels);
      m(i, j) = std::polar(modulus, 2.0 * kPi * static_cast<double>(level) / levels);
    }
  return m;
}

namespace {

MatC dft_matrix(Eigen::Index k, bool inverse) {
  MatC w(k, k);
  const double sign = inverse ? 1.0 : -1.0;
  const double scale = inverse ? 1.0 / static_cast<double>(k) : 1.0;
  for (Eigen::Index q = 0; q < k; ++q)
    for (Eigen::Index f = 0; f < k; ++f)
      w(q, f) = scale * std::polar(1.0, sign * 2.0 * kPi * q * f / k);
  return w;
}

}  // namespace

MatC to_frequency_domain(const MatC& td_block) {
  return td_block * dft_matrix(td_block.cols(), false);
}

MatC to_time_domain(const MatC& fd_block) {
  return fd_block * dft_matrix(fd_block.cols(), true);
}

PilotFrame generate_pilot_frame(const SystemConfig& config, Rng& rng) {
  config.validate();
  const auto pilots = Constellation::from_name(config.pilot_constellation);
  const int k = config.n_subcarriers();
  PilotFrame frame;
  frame.blocks.reserve(config.n_pilot_blocks);
  for (int m = 0; m < config.n_pilot_blocks; ++m) {
    PilotBlock block;
    block.f_rf = generate_rf_codebook(rng, config.n_t, config.n_rf,
                                      config.phase_bits);
    block.w_rf = generate_rf_codebook(rng, config.n_r, config.n_rf,
                                      config.phase_bits);
    block.pilots.resize(config.n_rf, config.n_pilot_symbols);
    for (Eigen::Index c = 0; c < block.pilots.cols(); ++c)
      for (Eigen::Index r = 0; r < block.pilots.rows(); ++r)
        block.pilots(r, c) = pilots.draw(rng);
    MatC zero_padded = MatC::Zero(config.n_rf, k);
    zero_padded.leftCols(config.n_pilot_symbols) = block.pilots;
    block.pilots_fd = to_frequency_domain(zero_padded);
    frame.blocks.push_back(std::move(block));
  }
  return frame;
}

MatC synthesize_pilot_block_td(const std::vector<MatC>& taps,
                               const MatC& precoded_zp, const MatC& w_rf,
                               double sigma_v_sq, Rng* rng) {
  const auto k = static_cast<Eigen::Index>(taps.size());
  if (k == 0 || precoded_zp.cols() != k)
    throw std::invalid_argument(
        "synthesize_pilot_block_td: tap and pilot blocks must both span K");
  const Eigen::Index n_r = taps.front().rows();
  for (const auto& tap : taps)
    if (tap.rows() != n_r || tap.cols() != precoded_zp.rows())
      throw std::invalid_argument("synthesize_pilot_block_td: tap dimensions");

  MatC out(w_rf.cols(), k);
  for (Eigen::Index q = 0; q < k; ++q) {
    VecC acc = VecC::Zero(n_r);
    for (Eigen::Index l = 0; l < k; ++l)
      acc.noalias() += taps[l] * precoded_zp.col(((q - l) % k + k) % k);
    if (sigma_v_sq > 0.0 && rng)
      acc += rng->cnormal_vector(n_r, sigma_v_sq);
    out.col(q) = w_rf.adjoint() * acc;
  }
  return out;
}

MatC build_pilot_sensing(const VecC& u_fd, const MatC& f_rf, const MatC& w_rf) {
  const MatC row = (f_rf * u_fd).transpose();  // u^T F^T, 1 x N_T
  return linalg::kron(row, w_rf.adjoint());
}

std::vector<VecC> synthesize_pilot_block_fd(
    const channel::ChannelFrequencyResponse& cfr, const PilotBlock& block,
    double sigma_v_sq, Rng* rng) {
  const auto k = static_cast<Eigen::Index>(cfr.h.size());
  std::vector<VecC> out(k);
  const MatC w_h = block.w_rf.adjoint();
  for (Eigen::Index i = 0; i < k; ++i) {
    VecC received = cfr.h[i] * (block.f_rf * block.pilots_fd.col(i));
    if (sigma_v_sq > 0.0 && rng)
      received += rng->cnormal_vector(received.size(),
                                      sigma_v_sq * static_cast<double>(k));
    out[i] = w_h * received;
  }
  return out;
}

PilotMeasurements stack_pilot_blocks(
    const SystemConfig& config, const PilotFrame& frame,
    const std::vector<std::vector<VecC>>& per_block_outputs) {
  const int m_blocks = static_cast<int>(frame.blocks.size());
  if (per_block_outputs.size() != frame.blocks.size())
    throw std::invalid_argument("stack_pilot_blocks: block count mismatch");
  const int k = config.n_subcarriers();
  const int rows = m_blocks * config.n_rf;
  const int cols = config.n_t * config.n_r;

  PilotMeasurements meas;
  meas.y.assign(k, VecC(rows));
  meas.phi.assign(k, MatC(rows, cols));
  meas.r_v = MatC::Zero(rows, rows);

  for (int m = 0; m < m_blocks; ++m) {
    const auto& block = frame.blocks[m];
    meas.r_v.block(m * config.n_rf, m * config.n_rf, config.n_rf, config.n_rf) =
        config.sigma_v_sq * static_cast<double>(k) *
        (block.w_rf.adjoint() * block.w_rf);
    for (int i = 0; i < k; ++i) {
      meas.y[i].segment(m * config.n_rf, config.n_rf) = per_block_outputs[m][i];
      meas.phi[i].middleRows(m * config.n_rf, config.n_rf) =
          build_pilot_sensing(block.pilots_fd.col(i), block.f_rf, block.w_rf);
    }
  }
  return meas;
}

PilotMeasurements synthesize_pilot_measurements(
    const channel::ChannelFrequencyResponse& cfr, const SystemConfig& config,
    const PilotFrame& frame, Rng& rng, bool noiseless) {
  std::vector<std::vector<VecC>> outputs;
  outputs.reserve(frame.blocks.size());
  for (const auto& block : frame.blocks)
    outputs.push_back(synthesize_pilot_block_fd(
        cfr, block, noiseless ? 0.0 : config.sigma_v_sq, &rng));
  return stack_pilot_blocks(config, frame, outputs);
}

std::vector<MatC> generate_data_symbols(const SystemConfig& config,
                                        const Constellation& constellation,
                                        Rng& rng) {
  std::vector<MatC> x(config.n_subcarriers());
  for (auto& xk : x) {
    xk.resize(config.n_rf, config.n_data_blocks);
    for (Eigen::Index c = 0; c < xk.cols(); ++c)
      for (Eigen::Index r = 0; r < xk.rows(); ++r)
        xk(r, c) = constellation.draw(rng);
  }
  return x;
}

DataMeasurements synthesize_data_blocks(
    const channel::ChannelFrequencyResponse& cfr, const SystemConfig& config,
    const std::vector<MatC>& x_d, const MatC& f_rf, const MatC& w_rf, Rng& rng,
    bool noiseless) {
  const int k = config.n_subcarriers();
  if (static_cast<int>(x_d.size()) != k)
    throw std::invalid_argument("synthesize_data_blocks: need X_d for all K");

  DataMeasurements meas;
  meas.f_rf = f_rf;
  meas.w_rf = w_rf;
  meas.x_true = x_d;
  meas.y.assign(k, MatC(config.n_rf, config.n_data_blocks));

  const MatC w_h = w_rf.adjoint();
  const double fd_noise_var = config.sigma_d_sq * static_cast<double>(k);
  for (int i = 0; i < k; ++i) {
    const MatC heq = cfr.h[i] * f_rf;
    for (int m = 0; m < config.n_data_blocks; ++m) {
      VecC received = heq * x_d[i].col(m);
      if (!noiseless && fd_noise_var > 0.0)
        received += rng.cnormal_vector(received.size(), fd_noise_var);
      meas.y[i].col(m) = w_h * received;
    }
  }

  const int rows = config.n_data_blocks * config.n_rf;
  meas.r_v = MatC::Zero(rows, rows);
  const MatC block_cov =
      config.sigma_d_sq * static_cast<double>(k) * (w_rf.adjoint() * w_rf);
  for (int m = 0; m < config.n_data_blocks; ++m)
    meas.r_v.block(m * config.n_rf, m * config.n_rf, config.n_rf,
                   config.n_rf) = block_cov;
  return meas;
}

}  // namespace thz::frame
