#include "misosec/lmi_builder.hpp"

#include <cmath>

#include "misosec/error.hpp"

namespace misosec {

CMatrix HermitianVariable::basis(int k) const {
  CMatrix e = CMatrix::Zero(dim, dim);
  if (k < dim) {
    e(k, k) = 1.0;
    return e;
  }
  int idx = k - dim;
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      if (idx == 0) {
        e(p, q) = 1.0;
        e(q, p) = 1.0;
        return e;
      }
      if (idx == 1) {
        e(p, q) = Complex(0.0, 1.0);
        e(q, p) = Complex(0.0, -1.0);
        return e;
      }
      idx -= 2;
    }
  }
  throw InvalidInput("HermitianVariable::basis: index out of range");
}

HermitianMatrix HermitianVariable::value(const sdp::Vector& x) const {
  CMatrix z = CMatrix::Zero(dim, dim);
  for (int p = 0; p < dim; ++p) z(p, p) = x(offset + p);
  int k = offset + dim;
  for (int p = 0; p < dim; ++p) {
    for (int q = p + 1; q < dim; ++q) {
      z(p, q) = Complex(x(k), x(k + 1));
      z(q, p) = std::conj(z(p, q));
      k += 2;
    }
  }
  return HermitianMatrix(z);
}

AffineHermitian::AffineHermitian(int dim) : dim_(dim), constant_(CMatrix::Zero(dim, dim)) {}

AffineHermitian& AffineHermitian::add_constant(const CMatrix& c) {
  if (c.rows() != dim_ || c.cols() != dim_) throw InvalidInput("AffineHermitian: shape mismatch");
  constant_ += c;
  return *this;
}

void AffineHermitian::accumulate(int var, const CMatrix& coeff) {
  if (coeff.rows() != dim_ || coeff.cols() != dim_) {
    throw InvalidInput("AffineHermitian: shape mismatch");
  }
  for (auto& [v, m] : coeffs_) {
    if (v == var) {
      m += coeff;
      return;
    }
  }
  coeffs_.emplace_back(var, coeff);
}

AffineHermitian& AffineHermitian::add_scalar(int var, const CMatrix& coeff) {
  accumulate(var, coeff);
  return *this;
}

AffineHermitian& AffineHermitian::add_linear(const HermitianVariable& z,
                                             const std::function<CMatrix(const CMatrix&)>& map) {
  for (int k = 0; k < z.num_params(); ++k) {
    const CMatrix image = map(z.basis(k));
    if (image.norm() > 0.0) accumulate(z.offset + k, image);
  }
  return *this;
}

CMatrix AffineHermitian::evaluate(const sdp::Vector& x) const {
  CMatrix out = constant_;
  for (const auto& [v, m] : coeffs_) out += x(v) * m;
  return out;
}

int ProblemBuilder::add_scalar_variable() { return num_vars_++; }

HermitianVariable ProblemBuilder::add_hermitian_variable(int dim) {
  HermitianVariable z{num_vars_, dim};
  num_vars_ += z.num_params();
  return z;
}

void ProblemBuilder::set_objective(int var, double coeff) { objective_.emplace_back(var, coeff); }

void ProblemBuilder::add_trace_objective(const HermitianVariable& z, double coeff) {
  for (int p = 0; p < z.dim; ++p) objective_.emplace_back(z.offset + p, coeff);
}

namespace {

// Entries below this are treated as structural zeros of the coefficient matrices.
constexpr double kDropTol = 1e-300;

bool is_real_scalar(const AffineHermitian& e) {
  if (e.dim() != 1) return false;
  if (std::abs(e.constant()(0, 0).imag()) > 0.0) return false;
  for (const auto& [v, m] : e.coefficients()) {
    if (std::abs(m(0, 0).imag()) > 0.0) return false;
  }
  return true;
}

}  // namespace

std::size_t ProblemBuilder::add_psd(const AffineHermitian& expr) {
  if (is_real_scalar(expr)) return add_nonnegative(expr);
  sdp::ConeBlock blk;
  blk.spec = {sdp::ConeKind::PsdRealSymmetric, 2 * expr.dim()};
  blk.constant = real_embedding(HermitianMatrix(expr.constant()));
  for (const auto& [v, m] : expr.coefficients()) {
    auto f = sdp::SparseSymmetric::from_dense(real_embedding(HermitianMatrix(m)), kDropTol);
    if (!f.entries.empty()) blk.terms.emplace_back(v, std::move(f));
  }
  blocks_.push_back(std::move(blk));
  return blocks_.size() - 1;
}

std::size_t ProblemBuilder::add_nonnegative(const AffineHermitian& e) {
  if (!is_real_scalar(e)) throw InvalidInput("add_nonnegative: expression is not a real scalar");
  sdp::ConeBlock blk;
  blk.spec = {sdp::ConeKind::NonnegativeScalar, 1};
  blk.constant = sdp::Matrix::Constant(1, 1, e.constant()(0, 0).real());
  for (const auto& [v, m] : e.coefficients()) {
    const double val = m(0, 0).real();
    if (val != 0.0) {
      sdp::SparseSymmetric f;
      f.entries.push_back({0, 0, val});
      blk.terms.emplace_back(v, std::move(f));
    }
  }
  blocks_.push_back(std::move(blk));
  return blocks_.size() - 1;
}

void ProblemBuilder::add_equality(const std::vector<std::pair<int, double>>& coeffs, double rhs) {
  equalities_.emplace_back(coeffs, rhs);
}

sdp::SdpProblem ProblemBuilder::build() const {
  sdp::SdpProblem p;
  p.num_vars = num_vars_;
  p.objective = sdp::Vector::Zero(num_vars_);
  for (const auto& [v, c] : objective_) p.objective(v) += c;
  p.blocks = blocks_;
  for (const auto& [coeffs, rhs] : equalities_) {
    sdp::LinearEquality eq;
    eq.a = sdp::Vector::Zero(num_vars_);
    for (const auto& [v, c] : coeffs) eq.a(v) += c;
    eq.b = rhs;
    p.equalities.push_back(std::move(eq));
  }
  p.validate();
  return p;
}

}  // namespace misosec
