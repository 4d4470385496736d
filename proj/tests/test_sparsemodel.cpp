#include <doctest.h>

#include <cmath>

#include "thz/linalg.hpp"
#include "thz/rng.hpp"
#include "thz/sparsemodel.hpp"

using namespace thz;
using namespace thz::sparse;

namespace {

MatC random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatC m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.cnormal(1.0);
  return m;
}

}  // namespace

TEST_CASE("angular grid values") {
  const auto g2 = make_grid(2);
  CHECK(g2.cosines == std::vector<double>{-1.0, 0.0});

  const auto g4 = make_grid(4);
  CHECK(g4.cosines == std::vector<double>{-1.0, -0.5, 0.0, 0.5});

  const auto g64 = make_grid(64);
  CHECK(g64.cosines.front() == -1.0);
  CHECK(g64.cosines.back() == doctest::Approx(1.0 - 2.0 / 64.0));
  for (int i = 1; i < 64; ++i)
    CHECK(g64.cosines[i] - g64.cosines[i - 1] ==
          doctest::Approx(2.0 / 64.0).epsilon(1e-14));
}

TEST_CASE("dictionaries: frame identity at the carrier") {
  const auto grid = make_grid(8);
  const auto pair = build_dictionaries(grid, grid, 1.0, 8, 8);
  const MatC gram_t = pair.a_t * pair.a_t.adjoint();
  const MatC gram_r = pair.a_r * pair.a_r.adjoint();
  CHECK((gram_t - MatC::Identity(8, 8)).norm() < 1e-10);
  CHECK((gram_r - MatC::Identity(8, 8)).norm() < 1e-10);

  // Oversampled grid: A A^H = (G/N) I.
  const auto big = make_grid(16);
  const auto pair2 = build_dictionaries(big, big, 1.0, 8, 8);
  CHECK((pair2.a_t * pair2.a_t.adjoint() - 2.0 * MatC::Identity(8, 8)).norm() <
        1e-10);
}

TEST_CASE("dictionaries: columns stay unit norm off carrier") {
  const auto grid = make_grid(12);
  const auto pair = build_dictionaries(grid, grid, 1.04, 7, 9);
  for (Eigen::Index c = 0; c < pair.a_t.cols(); ++c)
    CHECK(std::abs(pair.a_t.col(c).norm() - 1.0) < 1e-12);
  for (Eigen::Index c = 0; c < pair.a_r.cols(); ++c)
    CHECK(std::abs(pair.a_r.col(c).norm() - 1.0) < 1e-12);
}

TEST_CASE("sparsifying dictionary: scalar case and vec identity") {
  Rng rng(21);
  {
    const auto grid = make_grid(1);
    const auto pair = build_dictionaries(grid, grid, 1.0, 1, 1);
    const MatC psi = sparsifying_dictionary(pair);
    REQUIRE(psi.rows() == 1);
    REQUIRE(psi.cols() == 1);
    CHECK(std::abs(psi(0, 0) -
                   std::conj(pair.a_t(0, 0)) * pair.a_r(0, 0)) < 1e-15);
  }
  {
    const auto grid = make_grid(6);
    const auto pair = build_dictionaries(grid, grid, 1.02, 4, 5);
    const MatC psi = sparsifying_dictionary(pair);
    for (int i = 0; i < 10; ++i) {
      const MatC h_b = random_matrix(rng, 6, 6);
      const VecC via_psi = psi * linalg::vec(h_b);
      const VecC direct =
          linalg::vec(MatC(pair.a_r * h_b * pair.a_t.adjoint()));
      CHECK((via_psi - direct).norm() < 1e-12 * direct.norm());
    }
    CHECK((psi * VecC::Zero(36)).norm() == 0.0);
  }
}

TEST_CASE("equivalent sensing: identity and zero degenerate cases") {
  Rng rng(22);
  const MatC phi = random_matrix(rng, 4, 9);
  CHECK((equivalent_sensing(phi, MatC::Identity(9, 9)) - phi).norm() == 0.0);
  CHECK(equivalent_sensing(MatC::Zero(4, 9), random_matrix(rng, 9, 12)).norm() ==
        0.0);
  CHECK_THROWS_AS(equivalent_sensing(phi, random_matrix(rng, 8, 3)),
                  std::invalid_argument);
}

TEST_CASE("equivalent sensing: end-to-end noiseless model consistency") {
  Rng rng(23);
  const auto grid = make_grid(6);
  const auto pair = build_dictionaries(grid, grid, 1.01, 4, 4);
  const MatC psi = sparsifying_dictionary(pair);

  VecC h_b = VecC::Zero(36);
  h_b(7) = cxd(1.2, -0.4);
  h_b(20) = cxd(-0.3, 0.9);
  const MatC h = beamspace_to_channel(h_b, pair);

  const MatC phi = random_matrix(rng, 5, 16);
  const VecC via_equivalent = equivalent_sensing(phi, psi) * h_b;
  const VecC via_channel = phi * linalg::vec(h);
  CHECK((via_equivalent - via_channel).norm() < 1e-10 * via_channel.norm());
}

TEST_CASE("beamspace to channel: single beam and zero") {
  const auto grid = make_grid(5);
  const auto pair = build_dictionaries(grid, grid, 1.0, 4, 4);
  VecC h_b = VecC::Zero(25);
  h_b(0) = 1.0;  // (r, t) = (1, 1)
  const MatC h = beamspace_to_channel(h_b, pair);
  const MatC expected = pair.a_r.col(0) * pair.a_t.col(0).adjoint();
  CHECK((h - expected).norm() < 1e-12);
  CHECK(beamspace_to_channel(VecC::Zero(25), pair).norm() == 0.0);
  CHECK_THROWS_AS(beamspace_to_channel(VecC::Zero(7), pair),
                  std::invalid_argument);
}

TEST_CASE("on-grid single path recovers a 1-sparse beamspace vector") {
  // G = N and delta = 1: grid steering vectors are orthonormal, so the
  // beamspace representation of an on-grid rank-1 channel has exactly one
  // nonzero entry.
  const int n = 8;
  const auto grid = make_grid(n);
  const auto pair = build_dictionaries(grid, grid, 1.0, n, n);
  const int t_idx = 5, r_idx = 2;
  const cxd gain(0.8, -0.6);
  const MatC h =
      gain * (pair.a_r.col(r_idx) * pair.a_t.col(t_idx).adjoint());

  // Representation through the analysis operator, scaled by (N/G) = 1.
  const MatC h_beam = pair.a_r.adjoint() * h * pair.a_t;
  int nonzeros = 0;
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < n; ++t)
      if (std::abs(h_beam(r, t)) > 1e-9) ++nonzeros;
  CHECK(nonzeros == 1);
  CHECK(std::abs(h_beam(r_idx, t_idx) - gain) < 1e-10);

  // And the synthesis reproduces the channel exactly.
  CHECK((beamspace_to_channel(linalg::vec(h_beam), pair) - h).norm() < 1e-10);
}

TEST_CASE("vec/unvec round trip") {
  Rng rng(24);
  const MatC m = random_matrix(rng, 5, 7);
  CHECK((linalg::unvec(linalg::vec(m), 5, 7) - m).norm() == 0.0);
}

TEST_CASE("dictionary set covers every subcarrier consistently") {
  channel::PhysicalConfig pc;
  pc.f_c = 1e12;
  pc.bandwidth = 50e9;
  pc.n_subcarriers = 4;
  pc.k_abs = {0.0};
  const DictionarySet set(pc, 8, 8, 4, 4);
  REQUIRE(set.n_subcarriers() == 4);
  for (int k = 0; k < 4; ++k) {
    const auto pair =
        build_dictionaries(make_grid(8), make_grid(8),
                           pc.relative_frequency(k), 4, 4);
    CHECK((set.at(k).a_t - pair.a_t).norm() == 0.0);
    CHECK((set.psi(k) - sparsifying_dictionary(pair)).norm() == 0.0);
  }
}
