#pragma once

#include <complex>

#include <Eigen/Dense>

namespace misosec {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Complex Hermitian matrix. Construction symmetrizes the input as (A + A^H)/2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& a);

  static HermitianMatrix zero(Eigen::Index dim);
  static HermitianMatrix identity(Eigen::Index dim);
  /// x x^H
  static HermitianMatrix outer(const CVector& x);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  double trace() const { return m_.trace().real(); }
  double frobenius_norm() const { return m_.norm(); }
  /// Real quadratic form x^H A x.
  double quad(const CVector& x) const { return x.dot(m_ * x).real(); }

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;

 private:
  CMatrix m_;
};

/// Eigenvalues sorted descending, eigenvectors as matching unit-norm columns.
struct HermitianEig {
  RVector values;
  CMatrix vectors;
};

/// Cyclic Jacobi eigendecomposition. Throws InvalidInput on non-finite entries.
HermitianEig hermitian_eig(const HermitianMatrix& a);

/// Unit-norm q maximizing q^H A q / q^H B q. B must be positive definite
/// (minimum eigenvalue above 1e-12), otherwise DomainError.
CVector principal_generalized_eigvec(const HermitianMatrix& a, const HermitianMatrix& b);

CMatrix kron(const CMatrix& a, const CMatrix& b);
/// Column stacking.
CVector vec(const CMatrix& a);

/// I - G (G^H G)^+ G^H, with singular values below 1e-10 * sigma_max treated as zero.
HermitianMatrix orthogonal_complement_projector(const CMatrix& g);

/// [[Re A, -Im A], [Im A, Re A]]; spectrum of A with doubled multiplicities.
RMatrix real_embedding(const HermitianMatrix& a);
/// Inverse of real_embedding; averages the two copies of each part.
HermitianMatrix real_unembedding(const RMatrix& s);

/// Makes the first component with magnitude above 1e-12 real and nonnegative.
void normalize_phase(CVector& v);

/// sum_i log2(1 + lambda_i(A)); A must satisfy lambda_min > -1.
double log2_det_identity_plus(const HermitianMatrix& a);

}  // namespace misosec
