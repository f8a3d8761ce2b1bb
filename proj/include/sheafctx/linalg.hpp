#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace sheafctx {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vector3 = Eigen::Vector3d;

inline CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

inline CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

inline double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMatrix& a, double tol) {
  return a.rows() == a.cols() && max_abs(CMatrix(a - a.adjoint())) <= tol;
}

inline bool is_projection(const CMatrix& p, double tol) {
  return is_hermitian(p, tol) && max_abs(CMatrix(p * p - p)) <= tol;
}

/// Dimension of the kernel of a Hermitian positive semidefinite matrix,
/// counting eigenvalues below the threshold.
inline int kernel_dimension(const CMatrix& psd, double threshold) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(psd);
  int dim = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    if (solver.eigenvalues()(i) < threshold) ++dim;
  return dim;
}

/// Embeds `op`, acting on the tensor factors listed in `positions` (strictly
/// increasing indices into a chain of factors with the given dimensions),
/// into the full tensor product, identity elsewhere.
CMatrix embed_operator(const CMatrix& op, const std::vector<int>& positions,
                       const std::vector<int>& factor_dims);

}  // namespace sheafctx
