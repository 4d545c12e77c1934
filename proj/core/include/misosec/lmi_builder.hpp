#pragma once

#include <functional>
#include <vector>

#include "misosec/hermitian.hpp"
#include "misosec/sdp.hpp"

namespace misosec {

/// A complex Hermitian matrix unknown parametrized by dim^2 real entries of
/// the SDP decision vector: diagonal entries first, then (Re, Im) of each
/// strictly upper entry in row-major order.
struct HermitianVariable {
  int offset = 0;
  int dim = 0;

  int num_params() const { return dim * dim; }
  /// Hermitian basis element attached to parameter k.
  CMatrix basis(int k) const;
  HermitianMatrix value(const sdp::Vector& x) const;
};

/// Hermitian-valued affine function of the decision vector:
/// constant + sum_i x_i * coefficient_i.
class AffineHermitian {
 public:
  explicit AffineHermitian(int dim);

  int dim() const { return dim_; }
  AffineHermitian& add_constant(const CMatrix& c);
  AffineHermitian& add_scalar(int var, const CMatrix& coeff);
  /// Adds map(Z) for a linear map of the Hermitian variable Z.
  AffineHermitian& add_linear(const HermitianVariable& z,
                              const std::function<CMatrix(const CMatrix&)>& map);

  CMatrix evaluate(const sdp::Vector& x) const;
  const CMatrix& constant() const { return constant_; }
  const std::vector<std::pair<int, CMatrix>>& coefficients() const { return coeffs_; }

 private:
  void accumulate(int var, const CMatrix& coeff);

  int dim_;
  CMatrix constant_;
  std::vector<std::pair<int, CMatrix>> coeffs_;
};

/// Assembles an SdpProblem from complex LMIs. Complex blocks of size n become
/// real symmetric blocks of size 2n through real_embedding; 1x1 real
/// expressions become nonnegative-scalar blocks.
class ProblemBuilder {
 public:
  int add_scalar_variable();
  HermitianVariable add_hermitian_variable(int dim);
  int num_vars() const { return num_vars_; }

  void set_objective(int var, double coeff);
  /// Objective += Tr(Z).
  void add_trace_objective(const HermitianVariable& z, double coeff);

  /// Registers expr >= 0 and returns its block index.
  std::size_t add_psd(const AffineHermitian& expr);
  std::size_t add_nonnegative(const AffineHermitian& scalar_expr);
  void add_equality(const std::vector<std::pair<int, double>>& coeffs, double rhs);

  sdp::SdpProblem build() const;

 private:
  int num_vars_ = 0;
  std::vector<std::pair<int, double>> objective_;
  std::vector<sdp::ConeBlock> blocks_;
  std::vector<std::pair<std::vector<std::pair<int, double>>, double>> equalities_;
};

}  // namespace misosec
