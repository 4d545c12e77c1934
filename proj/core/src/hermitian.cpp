#include "misosec/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "misosec/error.hpp"

namespace misosec {

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("HermitianMatrix: matrix is not square");
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index dim) {
  return HermitianMatrix(CMatrix::Identity(dim, dim));
}

HermitianMatrix HermitianMatrix::outer(const CVector& x) {
  return HermitianMatrix(x * x.adjoint());
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ + o.m_);
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  return HermitianMatrix(m_ - o.m_);
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s);
}

void normalize_phase(CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

HermitianEig hermitian_eig(const HermitianMatrix& a_in) {
  const Eigen::Index n = a_in.dim();
  CMatrix a = a_in.matrix();
  if (!a.allFinite()) {
    throw InvalidInput("hermitian_eig: non-finite entries");
  }
  CMatrix v = CMatrix::Identity(n, n);

  const double scale = a.norm();
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(2.0 * off) <= 1e-15 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        // Phase on q makes a(p,q) real, then a real Jacobi rotation zeroes it.
        const Complex phase = std::conj(a(p, q)) / mag;  // e^{-i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const Complex vpp = c;
        const Complex vpq = s;
        const Complex vqp = -s * phase;
        const Complex vqq = c * phase;

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * vpp + vkq * vqp;
          v(k, q) = vkp * vpq + vkq * vqq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() > a(j, j).real();
  });

  HermitianEig out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    CVector col = v.col(src);
    col.normalize();
    normalize_phase(col);
    out.vectors.col(k) = col;
  }
  return out;
}

CVector principal_generalized_eigvec(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("principal_generalized_eigvec: dimension mismatch");
  }
  const HermitianEig eb = hermitian_eig(b);
  if (eb.values(eb.values.size() - 1) <= 1e-12) {
    throw DomainError("principal_generalized_eigvec: B is not positive definite");
  }
  // B^{-1/2} A B^{-1/2} u = lambda u, q = B^{-1/2} u.
  const RVector inv_sqrt = eb.values.array().rsqrt();
  const CMatrix b_inv_half = eb.vectors * inv_sqrt.asDiagonal() * eb.vectors.adjoint();
  const HermitianMatrix c(b_inv_half * a.matrix() * b_inv_half);
  const HermitianEig ec = hermitian_eig(c);
  CVector q = b_inv_half * ec.vectors.col(0);
  q.normalize();
  normalize_phase(q);
  return q;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector vec(const CMatrix& a) {
  return Eigen::Map<const CVector>(a.data(), a.size());
}

HermitianMatrix orthogonal_complement_projector(const CMatrix& g) {
  const Eigen::Index nt = g.rows();
  CMatrix proj = CMatrix::Identity(nt, nt);
  if (g.cols() == 0 || g.norm() == 0.0) return HermitianMatrix(proj);

  Eigen::JacobiSVD<CMatrix> svd(g, Eigen::ComputeThinU);
  const RVector& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      const CVector u = svd.matrixU().col(i);
      proj -= u * u.adjoint();
    }
  }
  return HermitianMatrix(proj);
}

RMatrix real_embedding(const HermitianMatrix& a) {
  const Eigen::Index n = a.dim();
  const RMatrix re = a.matrix().real();
  const RMatrix im = a.matrix().imag();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

HermitianMatrix real_unembedding(const RMatrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) {
    throw InvalidInput("real_unembedding: expected an even square matrix");
  }
  const Eigen::Index n = s.rows() / 2;
  const RMatrix re = 0.5 * (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n));
  const RMatrix im = 0.5 * (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n));
  CMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return HermitianMatrix(out);
}

double log2_det_identity_plus(const HermitianMatrix& a) {
  const HermitianEig e = hermitian_eig(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) <= -1.0) {
      throw DomainError("log2_det_identity_plus: I + A is not positive definite");
    }
    acc += std::log1p(e.values(i));
  }
  return acc / std::log(2.0);
}

}  // namespace misosec
