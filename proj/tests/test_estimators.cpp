#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "thz/estimators.hpp"
#include "thz/linalg.hpp"
#include "thz/rng.hpp"

using namespace thz;
using namespace thz::est;

namespace {

MatC random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  MatC m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.cnormal(1.0);
  return m;
}

}  // namespace

TEST_CASE("ls: identity sensing returns the observation") {
  Rng rng(41);
  const VecC y = random_matrix(rng, 6, 1);
  CHECK((ls_estimate(y, MatC::Identity(6, 6)) - y).norm() < 1e-12);
}

TEST_CASE("ls: exact recovery on noiseless over-determined systems") {
  Rng rng(42);
  const MatC phi = random_matrix(rng, 12, 5);
  const VecC h = random_matrix(rng, 5, 1);
  const VecC est = ls_estimate(phi * h, phi);
  CHECK((est - h).norm() < 1e-8 * h.norm());
}

TEST_CASE("ls: under-determined systems are rejected") {
  Rng rng(43);
  CHECK_THROWS_AS(
      ls_estimate(random_matrix(rng, 4, 1), random_matrix(rng, 4, 9)),
      std::invalid_argument);
}

TEST_CASE("ls: residual is orthogonal to the column space") {
  Rng rng(44);
  const MatC phi = random_matrix(rng, 10, 4);
  const VecC y = random_matrix(rng, 10, 1);
  const VecC est = ls_estimate(y, phi);
  const VecC residual = y - phi * est;
  CHECK((phi.adjoint() * residual).norm() < 1e-8 * y.norm());
}

TEST_CASE("mmse: vanishing prior approaches LS; zero sensing returns prior mean") {
  Rng rng(45);
  const MatC phi = random_matrix(rng, 9, 4);
  const VecC h = random_matrix(rng, 4, 1);
  const VecC y = phi * h;
  const MatC r_v = MatC::Identity(9, 9) * 0.01;
  const MatC r_h = MatC::Identity(4, 4) * 1e8;
  const VecC mmse = mmse_estimate(y, phi, r_h, r_v);
  const VecC ls = ls_estimate(y, phi);
  CHECK((mmse - ls).norm() < 1e-5 * ls.norm());

  const VecC zero =
      mmse_estimate(y, MatC::Zero(9, 4), MatC::Identity(4, 4), r_v);
  CHECK(zero.norm() < 1e-12);
}

TEST_CASE("mmse: empirical MSE matches the posterior covariance oracle") {
  // Matched-prior ensemble: h ~ CN(0, I), y = Phi h + v. The analytic MSE is
  // Tr[(I + Phi^H R_v^{-1} Phi)^{-1}], and MMSE cannot lose to LS.
  Rng rng(46);
  const int rows = 8, cols = 4, trials = 10000;
  const MatC phi = random_matrix(rng, rows, cols);
  const double sigma2 = 0.25;
  const MatC r_v = sigma2 * MatC::Identity(rows, rows);
  const MatC r_h = MatC::Identity(cols, cols);

  MatC a = phi.adjoint() * phi / sigma2;
  a.diagonal().array() += 1.0;
  const double analytic_mse =
      linalg::hermitian_solve(a, MatC::Identity(cols, cols)).trace().real();

  double mmse_err = 0.0, ls_err = 0.0;
  for (int t = 0; t < trials; ++t) {
    const VecC h = rng.cnormal_vector(cols, 1.0);
    const VecC y = phi * h + rng.cnormal_vector(rows, sigma2);
    mmse_err += (mmse_estimate(y, phi, r_h, r_v) - h).squaredNorm();
    ls_err += (ls_estimate(y, phi) - h).squaredNorm();
  }
  mmse_err /= trials;
  ls_err /= trials;
  CHECK(mmse_err == doctest::Approx(analytic_mse).epsilon(0.05));
  CHECK(mmse_err <= ls_err);
}

TEST_CASE("omp: one-sparse identifiability") {
  Rng rng(47);
  MatC dict = random_matrix(rng, 10, 24);
  const cxd coeff(2.0, -1.0);
  const VecC y = coeff * dict.col(17);
  OmpOptions opt;
  opt.noise_scale = 0.0;
  const auto r = omp_estimate(y, dict, opt);
  REQUIRE(r.support.size() >= 1);
  CHECK(r.support.front() == 17);
  CHECK(std::abs(r.x(17) - coeff) < 1e-10);
  CHECK(r.residual_norm < 1e-10 * y.norm());
}

TEST_CASE("omp: zero observation yields an empty support") {
  Rng rng(48);
  const auto r = omp_estimate(VecC::Zero(8), random_matrix(rng, 8, 12), {});
  CHECK(r.support.empty());
  CHECK(r.x.norm() == 0.0);
}

TEST_CASE("omp: no atom repeats; residual norm non-increasing") {
  Rng rng(49);
  for (int i = 0; i < 10; ++i) {
    const MatC dict = random_matrix(rng, 10, 30);
    const VecC y = random_matrix(rng, 10, 1);
    OmpOptions opt;
    opt.max_atoms = 10;
    const auto r = omp_estimate(y, dict, opt);
    auto sorted = r.support;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  // Residual trajectory via nested runs with growing atom budgets.
  const MatC dict = random_matrix(rng, 12, 40);
  const VecC y = random_matrix(rng, 12, 1);
  double prev = y.norm();
  for (int atoms = 1; atoms <= 8; ++atoms) {
    OmpOptions opt;
    opt.max_atoms = atoms;
    const auto r = omp_estimate(y, dict, opt);
    CHECK(r.residual_norm <= prev + 1e-12);
    prev = r.residual_norm;
  }
}

TEST_CASE("omp: three-sparse support recovery at 30 dB") {
  Rng rng(50);
  // Draw a dictionary with low mutual coherence.
  MatC dict = random_matrix(rng, 40, 80);
  for (Eigen::Index c = 0; c < dict.cols(); ++c) dict.col(c).normalize();
  double coherence = 0.0;
  for (Eigen::Index i = 0; i < dict.cols(); ++i)
    for (Eigen::Index j = i + 1; j < dict.cols(); ++j)
      coherence = std::max(coherence, std::abs(dict.col(i).dot(dict.col(j))));
  REQUIRE(coherence < 0.5);

  const double sigma2 = 1e-3;  // SNR 30 dB per unit-power component
  int hits = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> truth;
    while (truth.size() < 3) {
      const int idx = static_cast<int>(rng.uniform_index(80));
      if (std::find(truth.begin(), truth.end(), idx) == truth.end())
        truth.push_back(idx);
    }
    VecC y = rng.cnormal_vector(40, sigma2);
    for (int idx : truth) y += std::polar(1.0, rng.uniform(-kPi, kPi)) * dict.col(idx);

    OmpOptions opt;
    opt.eps_o = 1.0;
    opt.noise_scale = std::sqrt(sigma2 * 40);
    opt.max_atoms = 6;
    const auto r = omp_estimate(y, dict, opt);
    const bool superset = std::all_of(
        truth.begin(), truth.end(), [&](int idx) {
          return std::find(r.support.begin(), r.support.end(), idx) !=
                 r.support.end();
        });
    hits += superset;
  }
  CHECK(hits >= static_cast<int>(0.95 * trials));
}

TEST_CASE("focuss: zero observation converges immediately to zero") {
  Rng rng(51);
  const auto r = focuss_estimate(VecC::Zero(6), random_matrix(rng, 6, 12),
                                 {1e-3, 1.0, 50, 1e-6});
  CHECK(r.x.norm() == 0.0);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
}

TEST_CASE("focuss: one-sparse recovery on an orthogonal dictionary") {
  const int n = 8;
  const MatC dict = MatC::Identity(n, n);
  VecC y = VecC::Zero(n);
  y(3) = cxd(0.7, 0.2);
  FocussOptions opt;
  opt.lambda = 1e-10;
  opt.max_iter = 200;
  const auto r = focuss_estimate(y, dict, opt);
  CHECK((r.x - y).norm() < 1e-6);
}

TEST_CASE("focuss: objective is non-increasing") {
  Rng rng(52);
  for (int i = 0; i < 10; ++i) {
    const MatC dict = random_matrix(rng, 8, 20);
    const VecC y = random_matrix(rng, 8, 1);
    FocussOptions opt;
    opt.lambda = 0.05;
    opt.max_iter = 60;
    const auto r = focuss_estimate(y, dict, opt);
    for (std::size_t j = 1; j < r.objective.size(); ++j)
      CHECK(r.objective[j] <= r.objective[j - 1] + 1e-9 * (1.0 + r.objective[j - 1]));
  }
}

TEST_CASE("focuss: parameter validation") {
  Rng rng(53);
  const MatC dict = random_matrix(rng, 4, 8);
  const VecC y = random_matrix(rng, 4, 1);
  CHECK_THROWS_AS(focuss_estimate(y, dict, {0.0, 1.0, 10, 1e-6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(focuss_estimate(y, dict, {1e-3, 1.5, 10, 1e-6}),
                  std::invalid_argument);
}
