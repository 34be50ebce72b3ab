#pragma once

#include <complex>

#include <Eigen/Dense>

#include "pointforge/errors.hpp"

namespace pointforge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// max_ij |A_ij - conj(A_ji)|
double hermiticity_defect(const CMatrix& a);

/// Dense complex matrix validated Hermitian (defect <= 1e-12 * max(1,|A|_inf))
/// at construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix m);

  const CMatrix& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

/// Eigendecomposition of a Hermitian matrix, ascending eigenvalues.
/// Backed by LAPACKE zheevd when available, Eigen otherwise.
void herm_eigensolve(const CMatrix& a, RVector& eigenvalues, CMatrix& eigenvectors);

/// Eigenvalues only, ascending.
RVector herm_eigenvalues(const CMatrix& a);

/// Operator (spectral) norm of a Hermitian matrix.
double herm_norm(const CMatrix& a);

/// Operator norm of an anti-Hermitian matrix K (equals herm_norm(-iK)).
double antiherm_norm(const CMatrix& k);

}  // namespace pointforge
