#include "hardymod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace hardymod::linalg {

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return a.norm();
  // Largest eigenvalue of the smaller Gram matrix.
  const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.adjoint()) : Matrix(a.adjoint() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

double min_eigenvalue(const Matrix& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Orthonormalized orthonormal_columns(const Matrix& a, double rel_tol) {
  Orthonormalized out;
  if (a.cols() == 0 || a.rows() == 0) {
    out.basis = Matrix(a.rows(), 0);
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff && s(r) > 0.0) ++r;
  out.basis = svd.matrixU().leftCols(r);
  out.discarded = a.cols() - r;
  return out;
}

Matrix orthocomplement(const Matrix& orthonormal_basis, Index dim) {
  const Index r = orthonormal_basis.cols();
  if (r == 0) return Matrix::Identity(dim, dim);
  if (r >= dim) return Matrix(dim, 0);
  Eigen::HouseholderQR<Matrix> qr(orthonormal_basis);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  return q.rightCols(dim - r);
}

Matrix psd_sqrt(const Matrix& a) {
  if (a.size() == 0) return a;
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

Index rank(const Matrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > cutoff && s(r) > 0.0) ++r;
  return r;
}

Matrix selector(std::span<const Index> positions, Index dim) {
  Matrix w = Matrix::Zero(dim, static_cast<Index>(positions.size()));
  for (std::size_t c = 0; c < positions.size(); ++c) w(positions[c], static_cast<Index>(c)) = 1.0;
  return w;
}

Matrix compress(const Matrix& a, std::span<const Index> positions) {
  const std::vector<Index> idx(positions.begin(), positions.end());
  return a(idx, idx);
}

}  // namespace hardymod::linalg
