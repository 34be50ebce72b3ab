#include "pointforge/linalg.hpp"

#include <algorithm>
#include <string>

#ifdef POINTFORGE_USE_LAPACKE
#include <lapacke.h>
#endif

namespace pointforge {

double hermiticity_defect(const CMatrix& a) {
  double defect = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      defect = std::max(defect, std::abs(a(i, j) - std::conj(a(j, i))));
  return defect;
}

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols())
    throw InputError("HermitianMatrix: not square (" + std::to_string(m_.rows()) + "x" +
                     std::to_string(m_.cols()) + ")");
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(m_);
  if (defect > 1e-12 * scale)
    throw InputError("HermitianMatrix: hermiticity defect " + std::to_string(defect) +
                     " exceeds tolerance");
}

#ifdef POINTFORGE_USE_LAPACKE

void herm_eigensolve(const CMatrix& a, RVector& eigenvalues, CMatrix& eigenvectors) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  eigenvectors = a;
  eigenvalues.resize(n);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'V', 'L', n,
      reinterpret_cast<lapack_complex_double*>(eigenvectors.data()), n, eigenvalues.data());
  if (info != 0)
    throw ConvergenceError("zheevd failed with info = " + std::to_string(info));
}

RVector herm_eigenvalues(const CMatrix& a) {
  const lapack_int n = static_cast<lapack_int>(a.rows());
  CMatrix work = a;
  RVector eigenvalues(n);
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'N', 'L', n,
      reinterpret_cast<lapack_complex_double*>(work.data()), n, eigenvalues.data());
  if (info != 0)
    throw ConvergenceError("zheevd failed with info = " + std::to_string(info));
  return eigenvalues;
}

#else

void herm_eigensolve(const CMatrix& a, RVector& eigenvalues, CMatrix& eigenvectors) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("SelfAdjointEigenSolver failed");
  eigenvalues = es.eigenvalues();
  eigenvectors = es.eigenvectors();
}

RVector herm_eigenvalues(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("SelfAdjointEigenSolver failed");
  return es.eigenvalues();
}

#endif

double herm_norm(const CMatrix& a) {
  if (a.rows() == 0) return 0.0;
  const RVector ev = herm_eigenvalues(a);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double antiherm_norm(const CMatrix& k) {
  return herm_norm(CMatrix(Complex(0.0, -1.0) * k));
}

}  // namespace pointforge
