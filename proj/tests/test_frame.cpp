#include <doctest.h>

#include <cmath>

#include "thz/frame.hpp"
#include "thz/linalg.hpp"
#include "thz/rng.hpp"

using namespace thz;
using namespace thz::frame;

namespace {

MatC random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatC m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.cnormal(1.0);
  return m;
}

SystemConfig tiny_system() {
  SystemConfig sys;
  sys.n_t = 4;
  sys.n_r = 4;
  sys.n_rf = 2;
  sys.n_s = 1;
  sys.n_pilot_symbols = 3;
  sys.n_taps = 2;
  sys.n_pilot_blocks = 3;
  sys.n_data_blocks = 4;
  sys.sigma_v_sq = 0.0;
  sys.sigma_d_sq = 0.0;
  return sys;
}

}  // namespace

TEST_CASE("rf codebook: binary phase set and exact modulus") {
  Rng rng(3);
  const MatC m = generate_rf_codebook(rng, 16, 4, 1);
  const double mod = 1.0 / 4.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      CHECK(std::abs(std::abs(m(r, c)) - mod) < 1e-15);
      // n_q = 1: phases in {0, pi} means entries are +-1/sqrt(16)
      CHECK(std::abs(m(r, c).imag()) < 1e-15);
    }
}

TEST_CASE("rf codebook: quantized phases are uniform") {
  Rng rng(11);
  const int n_q = 4;
  const MatC m = generate_rf_codebook(rng, 250, 400, n_q);  // 1e5 entries
  std::vector<int> counts(1 << n_q, 0);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      double phase = std::arg(m(r, c));
      if (phase < -1e-12) phase += 2.0 * kPi;
      const int bin =
          static_cast<int>(std::lround(phase / (2.0 * kPi / 16.0))) % 16;
      ++counts[bin];
    }
  const double total = 250.0 * 400.0;
  for (int b = 0; b < 16; ++b)
    CHECK(std::abs(counts[b] / total - 1.0 / 16.0) < 0.01);
}

TEST_CASE("TD synthesis: memoryless channel passes precoded pilots through") {
  Rng rng(4);
  const int k = 4, n = 3;
  std::vector<MatC> taps(k, MatC::Zero(n, n));
  taps[0] = 2.0 * MatC::Identity(n, n);
  const MatC pilots_zp = random_matrix(rng, n, k);
  const MatC w = MatC::Identity(n, n);
  const MatC out = synthesize_pilot_block_td(taps, pilots_zp, w, 0.0, nullptr);
  CHECK((out - 2.0 * pilots_zp).norm() < 1e-12);
}

TEST_CASE("TD synthesis: zero pilots give zero outputs") {
  Rng rng(5);
  const int k = 5;
  std::vector<MatC> taps(k, MatC::Zero(2, 3));
  taps[0] = random_matrix(rng, 2, 3);
  taps[1] = random_matrix(rng, 2, 3);
  const MatC out = synthesize_pilot_block_td(taps, MatC::Zero(3, k),
                                             random_matrix(rng, 2, 2), 0.0,
                                             nullptr);
  CHECK(out.norm() == 0.0);
}

TEST_CASE("TD synthesis: brute-force circular convolution oracle") {
  Rng rng(6);
  const int n_r = 3, n_t = 2, l_taps = 2, n_p = 3;
  const int k = n_p + l_taps - 1;
  std::vector<MatC> taps(k, MatC::Zero(n_r, n_t));
  for (int l = 0; l < l_taps; ++l) taps[l] = random_matrix(rng, n_r, n_t);
  MatC pilots_zp = MatC::Zero(n_t, k);
  pilots_zp.leftCols(n_p) = random_matrix(rng, n_t, n_p);
  const MatC w = random_matrix(rng, n_r, 2);

  const MatC got = synthesize_pilot_block_td(taps, pilots_zp, w, 0.0, nullptr);

  // Independent triple loop.
  for (int q = 0; q < k; ++q) {
    VecC conv = VecC::Zero(n_r);
    for (int l = 0; l < k; ++l) {
      int idx = q - l;
      while (idx < 0) idx += k;
      conv += taps[l] * pilots_zp.col(idx);
    }
    CHECK((got.col(q) - w.adjoint() * conv).norm() < 1e-12);
  }
}

TEST_CASE("DFT: K = 1 is the identity") {
  MatC x(2, 1);
  x << cxd(1.0, 2.0), cxd(-0.5, 0.25);
  CHECK((to_frequency_domain(x) - x).norm() < 1e-15);
  CHECK((to_time_domain(x) - x).norm() < 1e-15);
}

TEST_CASE("DFT: Parseval under the unnormalized-forward convention") {
  Rng rng(7);
  const MatC td = random_matrix(rng, 3, 8);
  const MatC fd = to_frequency_domain(td);
  CHECK(td.squaredNorm() ==
        doctest::Approx(fd.squaredNorm() / 8.0).epsilon(1e-12));
  CHECK((to_time_domain(fd) - td).norm() < 1e-12);
}

TEST_CASE("pilot sensing: scalar Kronecker case") {
  Rng rng(8);
  const VecC u = random_matrix(rng, 1, 1);
  const MatC f = random_matrix(rng, 1, 1);
  const MatC w = random_matrix(rng, 1, 1);
  const MatC phi = build_pilot_sensing(u, f, w);
  REQUIRE(phi.rows() == 1);
  REQUIRE(phi.cols() == 1);
  CHECK(std::abs(phi(0, 0) - u(0) * f(0, 0) * std::conj(w(0, 0))) < 1e-15);
}

TEST_CASE("pilot sensing: vec identity on random instances") {
  Rng rng(9);
  for (int i = 0; i < 20; ++i) {
    const MatC f = random_matrix(rng, 5, 3);
    const MatC w = random_matrix(rng, 4, 3);
    const MatC h = random_matrix(rng, 4, 5);
    const VecC u = random_matrix(rng, 3, 1);
    const MatC phi = build_pilot_sensing(u, f, w);
    const VecC direct = w.adjoint() * h * (f * u);
    CHECK((phi * linalg::vec(h) - direct).norm() < 1e-12 * direct.norm());
  }
  const MatC zero_phi = build_pilot_sensing(VecC::Zero(3),
                                            random_matrix(rng, 5, 3),
                                            random_matrix(rng, 4, 3));
  CHECK(zero_phi.norm() == 0.0);
}

TEST_CASE("stacking: single block is the identity arrangement") {
  auto sys = tiny_system();
  sys.n_pilot_blocks = 1;
  Rng rng(10);
  const auto frame = generate_pilot_frame(sys, rng);
  const int k = sys.n_subcarriers();
  std::vector<std::vector<VecC>> outputs(1);
  for (int i = 0; i < k; ++i)
    outputs[0].push_back(random_matrix(rng, sys.n_rf, 1));
  const auto meas = stack_pilot_blocks(sys, frame, outputs);
  for (int i = 0; i < k; ++i) CHECK((meas.y[i] - outputs[0][i]).norm() == 0.0);
}

TEST_CASE("stacking: blocks appear in order and R_vp is Hermitian PSD") {
  auto sys = tiny_system();
  sys.sigma_v_sq = 0.7;
  Rng rng(12);
  const auto frame = generate_pilot_frame(sys, rng);
  const int k = sys.n_subcarriers();
  std::vector<std::vector<VecC>> outputs(sys.n_pilot_blocks);
  for (int m = 0; m < sys.n_pilot_blocks; ++m)
    for (int i = 0; i < k; ++i)
      outputs[m].push_back(random_matrix(rng, sys.n_rf, 1));
  const auto meas = stack_pilot_blocks(sys, frame, outputs);

  for (int m = 0; m < sys.n_pilot_blocks; ++m)
    for (int i = 0; i < k; ++i)
      CHECK((meas.y[i].segment(m * sys.n_rf, sys.n_rf) - outputs[m][i])
                .norm() == 0.0);
  for (int i = 0; i < k; ++i) {
    const auto& block = frame.blocks[1];
    const MatC expected =
        build_pilot_sensing(block.pilots_fd.col(i), block.f_rf, block.w_rf);
    CHECK((meas.phi[i].middleRows(sys.n_rf, sys.n_rf) - expected).norm() <
          1e-14);
  }

  CHECK((meas.r_v - meas.r_v.adjoint()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<MatC> es(meas.r_v);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);
}

TEST_CASE("noise covariance matches the synthesized ensemble") {
  auto sys = tiny_system();
  sys.n_pilot_blocks = 2;
  sys.sigma_v_sq = 0.5;
  Rng rng(13);
  const auto frame = generate_pilot_frame(sys, rng);
  const int k = sys.n_subcarriers();
  const int rows = sys.n_pilot_blocks * sys.n_rf;

  // Noise-only channel: zero taps.
  channel::ChannelFrequencyResponse cfr;
  cfr.h.assign(k, MatC::Zero(sys.n_r, sys.n_t));

  MatC cov = MatC::Zero(rows, rows);
  const int samples = 10000;
  for (int i = 0; i < samples; ++i) {
    const auto meas = synthesize_pilot_measurements(cfr, sys, frame, rng);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(meas.y[0], 1.0 / samples);
  }
  cov = cov.selfadjointView<Eigen::Lower>();
  const auto meas = synthesize_pilot_measurements(cfr, sys, frame, rng);
  CHECK((cov - meas.r_v).norm() / meas.r_v.norm() < 0.05);
}

TEST_CASE("FD/TD equivalence for random reduced instances") {
  Rng rng(14);
  for (int inst = 0; inst < 10; ++inst) {
    auto sys = tiny_system();
    sys.n_pilot_blocks = 1;
    const int k = sys.n_subcarriers();
    std::vector<MatC> taps(k, MatC::Zero(sys.n_r, sys.n_t));
    for (int l = 0; l < sys.n_taps; ++l)
      taps[l] = random_matrix(rng, sys.n_r, sys.n_t);

    const auto frame = generate_pilot_frame(sys, rng);
    const auto& block = frame.blocks.front();
    MatC padded = MatC::Zero(sys.n_rf, k);
    padded.leftCols(sys.n_pilot_symbols) = block.pilots;
    const MatC td =
        synthesize_pilot_block_td(taps, block.f_rf * padded, block.w_rf, 0.0,
                                  nullptr);
    const MatC via_fft = to_frequency_domain(td);

    channel::ChannelFrequencyResponse cfr;
    for (int i = 0; i < k; ++i) {
      MatC h = MatC::Zero(sys.n_r, sys.n_t);
      for (int l = 0; l < k; ++l)
        h += taps[l] * std::polar(1.0, -2.0 * kPi * i * l / k);
      cfr.h.push_back(h);
    }
    const auto direct = synthesize_pilot_block_fd(cfr, block, 0.0, nullptr);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < k; ++i) {
      num += (via_fft.col(i) - direct[i]).squaredNorm();
      den += direct[i].squaredNorm();
    }
    CHECK(std::sqrt(num / den) < 1e-9);
  }
}

TEST_CASE("data blocks: noiseless scalar model") {
  auto sys = tiny_system();
  sys.n_t = sys.n_r = sys.n_rf = 1;
  sys.n_data_blocks = 3;
  Rng rng(15);
  channel::ChannelFrequencyResponse cfr;
  const int k = sys.n_subcarriers();
  for (int i = 0; i < k; ++i) cfr.h.push_back(random_matrix(rng, 1, 1));
  std::vector<MatC> x(k);
  for (auto& xi : x) xi = random_matrix(rng, 1, 3);
  const MatC f = random_matrix(rng, 1, 1);
  const MatC w = random_matrix(rng, 1, 1);
  const auto data = synthesize_data_blocks(cfr, sys, x, f, w, rng, true);
  for (int i = 0; i < k; ++i)
    for (int m = 0; m < 3; ++m) {
      const cxd expected =
          std::conj(w(0, 0)) * cfr.h[i](0, 0) * f(0, 0) * x[i](0, m);
      CHECK(std::abs(data.y[i](0, m) - expected) < 1e-12);
    }
}

TEST_CASE("data blocks: sensing rows satisfy the Kronecker identity") {
  auto sys = tiny_system();
  Rng rng(16);
  channel::ChannelFrequencyResponse cfr;
  const int k = sys.n_subcarriers();
  for (int i = 0; i < k; ++i)
    cfr.h.push_back(random_matrix(rng, sys.n_r, sys.n_t));
  std::vector<MatC> x(k);
  for (auto& xi : x) xi = random_matrix(rng, sys.n_rf, sys.n_data_blocks);
  const MatC f = random_matrix(rng, sys.n_t, sys.n_rf);
  const MatC w = random_matrix(rng, sys.n_r, sys.n_rf);
  const auto data = synthesize_data_blocks(cfr, sys, x, f, w, rng, true);

  for (int i = 0; i < k; ++i)
    for (int m = 0; m < sys.n_data_blocks; ++m) {
      const MatC phi_dm =
          linalg::kron(MatC((f * x[i].col(m)).transpose()), MatC(w.adjoint()));
      const VecC via_phi = phi_dm * linalg::vec(cfr.h[i]);
      CHECK((data.y[i].col(m) - via_phi).norm() < 1e-12 * via_phi.norm());
    }
}

TEST_CASE("system config invariants") {
  auto sys = tiny_system();
  CHECK_NOTHROW(sys.validate());
  CHECK(sys.n_subcarriers() == sys.n_pilot_symbols + sys.n_taps - 1);
  sys.n_rf = 5;  // exceeds min(N_T, N_R)
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
  sys = tiny_system();
  sys.phase_bits = 0;
  CHECK_THROWS_AS(sys.validate(), std::invalid_argument);
}
