#include "thz/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thz/linalg.hpp"

namespace thz::est {

VecC ls_estimate(const VecC& y, const MatC& phi) {
  if (phi.rows() < phi.cols())
    throw std::invalid_argument(
        "ls_estimate: under-determined system (rows < cols); the LS/MMSE "
        "baselines require M N_RF >= N_T N_R");
  const MatC normal = phi.adjoint() * phi;
  Eigen::LDLT<MatC> ldlt(normal);
  const VecD d = ldlt.vectorD().real();
  if (ldlt.info() != Eigen::Success || d.minCoeff() <= 0.0 ||
      d.maxCoeff() / d.minCoeff() > 1e12)
    throw std::runtime_error("ls_estimate: rank-deficient sensing matrix");
  return ldlt.solve(phi.adjoint() * y);
}

VecC mmse_estimate(const VecC& y, const MatC& phi, const MatC& r_h,
                   const MatC& r_v) {
  Eigen::LLT<MatC> rh_llt(r_h);
  Eigen::LLT<MatC> rv_llt(r_v);
  if (rh_llt.info() != Eigen::Success)
    throw std::invalid_argument("mmse_estimate: R_h is not positive definite");
  if (rv_llt.info() != Eigen::Success)
    throw std::invalid_argument("mmse_estimate: R_v is not positive definite");
  const MatC rv_inv_phi = rv_llt.solve(phi);
  const MatC a = rh_llt.solve(MatC::Identity(r_h.rows(), r_h.cols())) +
                 phi.adjoint() * rv_inv_phi;
  return linalg::hermitian_solve(a, phi.adjoint() * rv_llt.solve(y));
}

OmpResult omp_estimate(const VecC& y, const MatC& dict, const OmpOptions& opt) {
  const Eigen::Index rows = dict.rows();
  const Eigen::Index cols = dict.cols();
  const VecD col_norms = dict.colwise().norm();
  if ((col_norms.array() <= 0.0).any())
    throw std::invalid_argument("omp_estimate: dictionary has a zero column");

  const int max_atoms =
      opt.max_atoms > 0
          ? std::min<int>(opt.max_atoms, static_cast<int>(std::min(rows, cols)))
          : static_cast<int>(std::min(rows, cols));
  const double stop_norm = opt.eps_o * opt.noise_scale;

  OmpResult result;
  result.x = VecC::Zero(cols);
  VecC residual = y;
  result.residual_norm = residual.norm();
  std::vector<bool> used(cols, false);

  MatC selected(rows, 0);
  while (result.iterations < max_atoms && result.residual_norm > stop_norm &&
         result.residual_norm > 1e-14 * (y.norm() + 1e-300)) {
    const VecC corr = dict.adjoint() * residual;
    int best = -1;
    double best_score = 0.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (used[j]) continue;
      const double score = std::abs(corr(j)) / col_norms(j);
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(j);
      }
    }
    if (best < 0 || best_score <= 0.0) break;

    used[best] = true;
    result.support.push_back(best);
    selected.conservativeResize(Eigen::NoChange, selected.cols() + 1);
    selected.col(selected.cols() - 1) = dict.col(best);

    const VecC coeff =
        linalg::hermitian_solve(selected.adjoint() * selected,
                                selected.adjoint() * y);
    residual = y - selected * coeff;
    const double new_norm = residual.norm();
    ++result.iterations;
    result.residual_norm = new_norm;
    for (std::size_t i = 0; i < result.support.size(); ++i)
      result.x(result.support[i]) = coeff(static_cast<Eigen::Index>(i));
  }
  return result;
}

namespace {

double focuss_objective(const VecC& y, const MatC& a, const VecC& x,
                        double lambda, double p) {
  double lp = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    lp += std::pow(std::abs(x(i)), p);
  return (y - a * x).squaredNorm() + lambda * lp;
}

}  // namespace

FocussResult focuss_estimate(const VecC& y, const MatC& dict,
                             const FocussOptions& opt) {
  if (opt.lambda <= 0.0)
    throw std::invalid_argument("focuss_estimate: lambda must be > 0");
  if (opt.p <= 0.0 || opt.p > 1.0)
    throw std::invalid_argument("focuss_estimate: need 0 < p <= 1");

  FocussResult result;
  if (y.norm() == 0.0) {
    result.x = VecC::Zero(dict.cols());
    result.iterations = 1;
    result.converged = true;
    result.objective.push_back(0.0);
    return result;
  }

  // Matched-filter start keeps every coefficient active in iteration one.
  VecC x = dict.adjoint() * y;
  x *= y.norm() / std::max(1e-300, (dict * x).norm());
  result.objective.push_back(focuss_objective(y, dict, x, opt.lambda, opt.p));

  const double mu = opt.lambda * opt.p / 2.0;
  for (int it = 0; it < opt.max_iter; ++it) {
    // Surrogate weights |x_i|^{2-p}; zero entries stay zero.
    VecD w(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      w(i) = std::pow(std::abs(x(i)), 2.0 - opt.p);

    const MatC aw = dict * w.asDiagonal();
    MatC gram = aw * dict.adjoint();
    gram.diagonal().array() += mu;
    const VecC z = linalg::hermitian_solve(gram, y);
    const VecC x_next = w.asDiagonal() * (dict.adjoint() * z);

    const double delta = (x_next - x).norm();
    const double scale = std::max(x.norm(), 1e-300);
    x = x_next;
    result.objective.push_back(
        focuss_objective(y, dict, x, opt.lambda, opt.p));
    result.iterations = it + 1;
    if (delta / scale < opt.rel_tol) {
      result.converged = true;
      break;
    }
  }
  result.x = x;
  return result;
}

}  // namespace thz::est
