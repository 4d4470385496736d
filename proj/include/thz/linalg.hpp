#pragma once

#include <stdexcept>

#include "thz/types.hpp"

namespace thz::linalg {

// Column-major vectorization, matching vec(ABC) = (C^T x A) vec(B).
inline VecC vec(const MatC& m) {
  return Eigen::Map<const VecC>(m.data(), m.size());
}

inline MatC unvec(const VecC& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols)
    throw std::invalid_argument("unvec: length mismatch");
  return Eigen::Map<const MatC>(v.data(), rows, cols);
}

inline MatC kron(const MatC& a, const MatC& b) {
  MatC out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Solves A X = B for Hermitian positive definite A. When the LDLT pivots
// reveal conditioning worse than 1e12, retries once with a relative jitter of
// 1e-12 * trace(A)/n on the diagonal. Throws on a singular system.
inline MatC hermitian_solve(const MatC& a, const MatC& b) {
  Eigen::LDLT<MatC> ldlt(a);
  const VecD d = ldlt.vectorD().real();
  const double dmax = d.cwiseAbs().maxCoeff();
  const double dmin = d.cwiseAbs().minCoeff();
  if (ldlt.info() == Eigen::Success && dmin > 0.0 && dmax / dmin < 1e12)
    return ldlt.solve(b);

  const double jitter = 1e-12 * a.trace().real() / static_cast<double>(a.rows());
  MatC aj = a;
  aj.diagonal().array() += jitter;
  Eigen::LDLT<MatC> retry(aj);
  const VecD dr = retry.vectorD().real();
  if (retry.info() != Eigen::Success || dr.minCoeff() <= 0.0)
    throw std::runtime_error("hermitian_solve: matrix is singular or indefinite");
  return retry.solve(b);
}

// Principal square root of a Hermitian PSD matrix. Negative eigenvalues from
// roundoff are clamped to zero before rooting.
inline MatC hermitian_sqrt_psd(const MatC& a) {
  Eigen::SelfAdjointEigenSolver<MatC> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("hermitian_sqrt_psd: eigendecomposition failed");
  VecD lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

// log(det(A)) for Hermitian PD A via LLT. Throws if A is not PD.
inline double logdet_pd(const MatC& a) {
  Eigen::LLT<MatC> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("logdet_pd: matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
}

}  // namespace thz::linalg
