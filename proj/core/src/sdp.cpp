#include "misosec/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <optional>

#include "misosec/error.hpp"

namespace misosec::sdp {

// ---------------------------------------------------------------------------
// SparseSymmetric

SparseSymmetric SparseSymmetric::from_dense(const Matrix& m, double drop_tol) {
  SparseSymmetric s;
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r <= c; ++r) {
      const double v = 0.5 * (m(r, c) + m(c, r));
      if (std::abs(v) > drop_tol) s.entries.push_back({r, c, v});
    }
  }
  return s;
}

Matrix SparseSymmetric::to_dense(int dim) const {
  Matrix m = Matrix::Zero(dim, dim);
  add_to(m, 1.0);
  return m;
}

double SparseSymmetric::inner(const Matrix& m) const {
  double acc = 0.0;
  for (const auto& e : entries) {
    acc += (e.row == e.col ? 1.0 : 2.0) * e.value * m(e.row, e.col);
  }
  return acc;
}

void SparseSymmetric::add_to(Matrix& acc, double scale) const {
  for (const auto& e : entries) {
    acc(e.row, e.col) += scale * e.value;
    if (e.row != e.col) acc(e.col, e.row) += scale * e.value;
  }
}

// ---------------------------------------------------------------------------
// SdpProblem

void SdpProblem::validate() const {
  if (num_vars < 0) throw InvalidInput("sdp: negative variable count");
  if (objective.size() != num_vars) {
    throw InvalidInput("sdp: objective length differs from num_vars");
  }
  if (!objective.allFinite()) throw InvalidInput("sdp: non-finite objective");
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& blk = blocks[j];
    const std::string where = "sdp: block " + std::to_string(j);
    if (blk.spec.dim < 1) throw InvalidInput(where + " has dim < 1");
    if (blk.spec.kind == ConeKind::NonnegativeScalar && blk.spec.dim != 1) {
      throw InvalidInput(where + " is a nonnegative scalar with dim != 1");
    }
    if (blk.constant.rows() != blk.spec.dim || blk.constant.cols() != blk.spec.dim) {
      throw InvalidInput(where + " constant has wrong shape");
    }
    if (!blk.constant.allFinite()) throw InvalidInput(where + " constant is not finite");
    if ((blk.constant - blk.constant.transpose()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + blk.constant.cwiseAbs().maxCoeff())) {
      throw InvalidInput(where + " constant is not symmetric");
    }
    for (const auto& [var, f] : blk.terms) {
      if (var < 0 || var >= num_vars) throw InvalidInput(where + " references a bad variable");
      for (const auto& e : f.entries) {
        if (e.row < 0 || e.col < e.row || e.col >= blk.spec.dim || !std::isfinite(e.value)) {
          throw InvalidInput(where + " has a malformed coefficient entry");
        }
      }
    }
  }
  for (std::size_t k = 0; k < equalities.size(); ++k) {
    if (equalities[k].a.size() != num_vars || !equalities[k].a.allFinite() ||
        !std::isfinite(equalities[k].b)) {
      throw InvalidInput("sdp: equality " + std::to_string(k) + " is malformed");
    }
  }
}

Matrix SdpProblem::block_value(std::size_t j, const Vector& x) const {
  const auto& blk = blocks[j];
  Matrix s = blk.constant;
  for (const auto& [var, f] : blk.terms) f.add_to(s, x(var));
  return s;
}

Vector SdpProblem::adjoint(const std::vector<Matrix>& y) const {
  Vector out = Vector::Zero(num_vars);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (const auto& [var, f] : blocks[j].terms) out(var) += f.inner(y[j]);
  }
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal-infeasible";
    case SolveStatus::DualInfeasibleOrUnbounded: return "dual-infeasible-or-unbounded";
    case SolveStatus::SlowProgress: return "slow-progress";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Solver internals

namespace {

// Relative ray residual at which a normalized dual iterate certifies
// primal infeasibility.
constexpr double kCertificateTol = 1e-6;

struct Scaling {
  Matrix g;      // W = G G^T
  Matrix g_inv;
  Matrix w;
  Vector d;      // G^T S G = G^{-1} Y G^{-T} = diag(d)
};

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool nt_scaling(const Matrix& s, const Matrix& y, Scaling& out) {
  Eigen::LLT<Matrix> lly(y);
  if (lly.info() != Eigen::Success) return false;
  const Matrix l = lly.matrixL();
  const Matrix k = sym(l.transpose() * s * l);
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  if (es.info() != Eigen::Success) return false;
  const Vector lam = es.eigenvalues();
  if (lam.minCoeff() <= 0.0 || !lam.allFinite()) return false;
  out.d = lam.cwiseSqrt();
  const Vector d_inv_half = out.d.cwiseSqrt().cwiseInverse();
  const Vector d_half = out.d.cwiseSqrt();
  out.g = l * es.eigenvectors() * d_inv_half.asDiagonal();
  const Matrix l_inv = l.triangularView<Eigen::Lower>().solve(Matrix::Identity(l.rows(), l.cols()));
  out.g_inv = d_half.asDiagonal() * es.eigenvectors().transpose() * l_inv;
  out.w = sym(out.g * out.g.transpose());
  return true;
}

// Largest alpha with X + alpha dX >= 0 (infinity when unconstrained).
double max_step(const Matrix& x, const Matrix& dx) {
  if (x.rows() == 1) {
    return dx(0, 0) < 0.0 ? -x(0, 0) / dx(0, 0) : std::numeric_limits<double>::infinity();
  }
  Eigen::LLT<Matrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  Matrix t = l.solve(dx);
  t = l.solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double min_eigenvalue(const Matrix& m) {
  if (m.rows() == 1) return m(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// W F W for sparse symmetric F, touching only the columns F occupies.
Matrix congruence(const Matrix& w, const SparseSymmetric& f) {
  const Eigen::Index n = w.rows();
  std::vector<int> col_slot(static_cast<std::size_t>(n), -1);
  std::vector<int> cols;
  auto slot = [&](int c) {
    auto& s = col_slot[static_cast<std::size_t>(c)];
    if (s < 0) {
      s = static_cast<int>(cols.size());
      cols.push_back(c);
    }
    return s;
  };
  for (const auto& e : f.entries) {
    slot(e.row);
    slot(e.col);
  }
  Matrix wf = Matrix::Zero(n, static_cast<Eigen::Index>(cols.size()));  // (W F)[:, cols]
  for (const auto& e : f.entries) {
    wf.col(slot(e.col)) += e.value * w.col(e.row);
    if (e.row != e.col) wf.col(slot(e.row)) += e.value * w.col(e.col);
  }
  Matrix wrows(static_cast<Eigen::Index>(cols.size()), n);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    wrows.row(static_cast<Eigen::Index>(k)) = w.row(cols[k]);
  }
  return wf * wrows;
}

struct Iterate {
  Vector x;
  Vector y;
  std::vector<Matrix> s;
  std::vector<Matrix> z;  // dual blocks Y_j
};

class InteriorPoint {
 public:
  InteriorPoint(const SdpProblem& p, const SolverOptions& o, bool correct_dual)
      : p_(p), opt_(o), correct_dual_(correct_dual) {
    m_ = p.num_vars;
    neq_ = static_cast<int>(p.equalities.size());
    a_ = Matrix::Zero(neq_, m_);
    b_ = Vector::Zero(neq_);
    for (int k = 0; k < neq_; ++k) {
      a_.row(k) = p.equalities[static_cast<std::size_t>(k)].a.transpose();
      b_(k) = p.equalities[static_cast<std::size_t>(k)].b;
    }
    for (const auto& blk : p.blocks) {
      nu_ += blk.spec.dim;
      f0_norm_sq_ += blk.constant.squaredNorm();
    }
  }

  SdpSolution run();

 private:
  Matrix linear_part(std::size_t j, const Vector& dx) const {
    Matrix out = Matrix::Zero(p_.blocks[j].spec.dim, p_.blocks[j].spec.dim);
    for (const auto& [var, f] : p_.blocks[j].terms) f.add_to(out, dx(var));
    return out;
  }

  // Solves the Newton system for the given complementarity right-hand sides.
  void newton_direction(const std::vector<Scaling>& sc, const std::vector<Matrix>& rc,
                        const std::vector<Matrix>& rs, const Vector& rd, const Vector& re,
                        const Matrix& kkt, const Eigen::PartialPivLU<Matrix>& lu, Vector& dx, Vector& dy,
                        std::vector<Matrix>& ds, std::vector<Matrix>& dz) const {
    std::vector<Matrix> q(p_.blocks.size());
    for (std::size_t j = 0; j < p_.blocks.size(); ++j) {
      q[j] = sym(rc[j] - sc[j].w * rs[j] * sc[j].w);
    }
    Vector rhs(m_ + neq_);
    rhs.head(m_) = p_.adjoint(q) - rd;
    rhs.tail(neq_) = re;
    Vector sol = lu.solve(rhs);
    // The Schur matrix grows ill-conditioned near the optimum; refinement
    // keeps the linearized residuals consistent.
    for (int pass = 0; pass < 2; ++pass) sol += lu.solve(rhs - kkt * sol);
    dx = sol.head(m_);
    dy = sol.tail(neq_);
    ds.resize(p_.blocks.size());
    dz.resize(p_.blocks.size());
    for (std::size_t j = 0; j < p_.blocks.size(); ++j) {
      ds[j] = linear_part(j, dx) + rs[j];
      dz[j] = sym(rc[j] - sc[j].w * ds[j] * sc[j].w);
    }
    // Forming W ds W loses accuracy as W grows, which shows up as an error in
    // the dual equation F^T dZ + A^T dy = rd. The correction of least norm in
    // the scaled space removes it: dZ -= W F(u) W, dy += v with KKT
    // (u, v) = (err, 0).
    if (!correct_dual_) return;
    Vector err(m_ + neq_);
    err.head(m_) = p_.adjoint(dz) + a_.transpose() * dy - rd;
    err.tail(neq_).setZero();
    Vector uv = lu.solve(err);
    uv += lu.solve(err - kkt * uv);
    if (uv.allFinite()) {
      const Vector u = uv.head(m_);
      for (std::size_t j = 0; j < p_.blocks.size(); ++j) {
        dz[j] -= sym(sc[j].w * linear_part(j, u) * sc[j].w);
      }
      dy += uv.tail(neq_);
    }
  }

  double step_length(const std::vector<Matrix>& x, const std::vector<Matrix>& dx) const {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < x.size(); ++j) alpha = std::min(alpha, max_step(x[j], dx[j]));
    return alpha;
  }

  const SdpProblem& p_;
  const SolverOptions& opt_;
  bool correct_dual_;
  int m_ = 0;
  int neq_ = 0;
  Matrix a_;
  Vector b_;
  double nu_ = 0.0;
  double f0_norm_sq_ = 0.0;
};

double inner_sum(const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j].cwiseProduct(b[j]).sum();
  return acc;
}

SdpSolution InteriorPoint::run() {
  const std::size_t nb = p_.blocks.size();
  const Vector& c = p_.objective;
  const double f0_norm = std::sqrt(f0_norm_sq_);
  const double c_norm = c.norm();
  const double b_norm = b_.norm();

  Iterate it;
  it.x = Vector::Zero(m_);
  it.y = Vector::Zero(neq_);
  const double start = std::max(1.0, f0_norm);
  for (const auto& blk : p_.blocks) {
    it.s.push_back(start * Matrix::Identity(blk.spec.dim, blk.spec.dim));
    it.z.push_back(start * Matrix::Identity(blk.spec.dim, blk.spec.dim));
  }

  SdpSolution sol;
  int tiny_steps = 0;
  std::vector<Scaling> sc(nb);
  std::vector<Matrix> rs(nb);

  // Last iterate with gap <= tol and residuals <= 10 tol. Roundoff in the
  // Schur solve can hold the residuals just above tol; such a point is
  // returned as optimal when the iteration stalls.
  std::optional<std::pair<Iterate, SdpSolution>> acceptable;
  int acceptable_streak = 0;
  // Best dual ray whose residual meets the certificate test but not tol. The
  // residual of a diverging dual iterate can stall at roundoff level.
  std::optional<std::pair<double, InfeasibilityCertificate>> best_ray;

  auto finish = [&](SolveStatus st, int iter) {
    if (st == SolveStatus::SlowProgress && acceptable) {
      it = std::move(acceptable->first);
      sol = std::move(acceptable->second);
      st = SolveStatus::Optimal;
      iter = sol.iterations;
    } else if (st == SolveStatus::SlowProgress && best_ray) {
      st = SolveStatus::PrimalInfeasible;
      sol.certificate = std::move(best_ray->second);
    }
    sol.status = st;
    sol.iterations = iter;
    sol.x = it.x;
    sol.equality_duals = it.y;
    sol.block_values.clear();
    for (std::size_t j = 0; j < nb; ++j) sol.block_values.push_back(p_.block_value(j, it.x));
    sol.dual_values = it.z;
    return sol;
  };

  for (int iter = 0; iter <= opt_.max_iterations; ++iter) {
    // Residuals.
    double rs_norm_sq = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      rs[j] = p_.block_value(j, it.x) - it.s[j];
      rs_norm_sq += rs[j].squaredNorm();
    }
    const Vector re = b_ - a_ * it.x;
    const Vector aty = a_.transpose() * it.y;
    const Vector ady = p_.adjoint(it.z);
    const Vector rd = c - ady - aty;

    double f0y = 0.0;
    for (std::size_t j = 0; j < nb; ++j) f0y += p_.blocks[j].constant.cwiseProduct(it.z[j]).sum();
    const double pobj = c.dot(it.x);
    const double dobj = b_.dot(it.y) - f0y;
    const double sz = inner_sum(it.s, it.z);
    const double mu = nu_ > 0 ? sz / nu_ : 0.0;

    sol.objective = pobj;
    sol.dual_objective = dobj;
    sol.duality_gap = pobj - dobj;
    sol.relative_gap = std::max(std::abs(pobj - dobj), sz) / (1.0 + std::abs(pobj) + std::abs(dobj));
    sol.primal_infeasibility =
        std::max(std::sqrt(rs_norm_sq) / (1.0 + f0_norm), re.norm() / (1.0 + b_norm));
    sol.dual_infeasibility = rd.norm() / (1.0 + c_norm);

    if (opt_.verbose) {
      std::cerr << "iter " << iter << " pobj " << pobj << " dobj " << dobj << " gap "
                << sol.relative_gap << " pinf " << sol.primal_infeasibility << " dinf "
                << sol.dual_infeasibility << " mu " << mu << '\n';
    }

    if (sol.relative_gap <= opt_.tol && sol.primal_infeasibility <= opt_.tol &&
        sol.dual_infeasibility <= opt_.tol) {
      return finish(SolveStatus::Optimal, iter);
    }
    if (sol.relative_gap <= opt_.tol && sol.primal_infeasibility <= 10 * opt_.tol &&
        sol.dual_infeasibility <= 10 * opt_.tol) {
      sol.iterations = iter;
      acceptable.emplace(it, sol);
      if (++acceptable_streak >= 3) return finish(SolveStatus::SlowProgress, iter);
    } else {
      acceptable_streak = 0;
    }

    // Primal infeasibility: normalized dual iterate is an improving ray.
    if (dobj > 0.0) {
      const double ray_res = (ady + aty).lpNorm<Eigen::Infinity>() / dobj;
      if (ray_res <= opt_.tol) {
        InfeasibilityCertificate cert;
        for (const auto& zj : it.z) cert.dual_blocks.push_back(zj / dobj);
        cert.equality_multipliers = it.y / dobj;
        sol.certificate = std::move(cert);
        return finish(SolveStatus::PrimalInfeasible, iter);
      }
      if (ray_res <= kCertificateTol && (!best_ray || ray_res < best_ray->first)) {
        InfeasibilityCertificate cert;
        for (const auto& zj : it.z) cert.dual_blocks.push_back(zj / dobj);
        cert.equality_multipliers = it.y / dobj;
        best_ray.emplace(ray_res, std::move(cert));
      }
    }
    // Dual infeasibility: normalized x is a recession direction with c.d = -1.
    if (pobj < 0.0) {
      const Vector dray = it.x / (-pobj);
      bool ok = (a_ * dray).lpNorm<Eigen::Infinity>() <= opt_.tol;
      for (std::size_t j = 0; ok && j < nb; ++j) {
        ok = min_eigenvalue(linear_part(j, dray)) >= -opt_.tol;
      }
      if (ok) {
        sol.unbounded_ray = dray;
        return finish(SolveStatus::DualInfeasibleOrUnbounded, iter);
      }
    }
    if (iter == opt_.max_iterations) break;

    // Scaling and Schur complement.
    bool scaled = true;
    for (std::size_t j = 0; j < nb && scaled; ++j) scaled = nt_scaling(it.s[j], it.z[j], sc[j]);
    if (!scaled) return finish(SolveStatus::SlowProgress, iter);

    Matrix kkt = Matrix::Zero(m_ + neq_, m_ + neq_);
    for (std::size_t j = 0; j < nb; ++j) {
      const auto& terms = p_.blocks[j].terms;
      for (std::size_t tk = 0; tk < terms.size(); ++tk) {
        const Matrix wfw = sym(congruence(sc[j].w, terms[tk].second));
        const int k = terms[tk].first;
        for (std::size_t ti = 0; ti <= tk; ++ti) {
          const int i = terms[ti].first;
          const double v = terms[ti].second.inner(wfw);
          kkt(i, k) += v;
          if (i != k) kkt(k, i) += v;
        }
      }
    }
    kkt.topRightCorner(m_, neq_) = -a_.transpose();
    kkt.bottomLeftCorner(neq_, m_) = a_;
    const Eigen::PartialPivLU<Matrix> lu(kkt);

    // Predictor.
    std::vector<Matrix> rc(nb);
    for (std::size_t j = 0; j < nb; ++j) rc[j] = -it.z[j];
    Vector dx, dy;
    std::vector<Matrix> ds, dz;
    newton_direction(sc, rc, rs, rd, re, kkt, lu, dx, dy, ds, dz);
    if (!dx.allFinite() || !dy.allFinite()) return finish(SolveStatus::SlowProgress, iter);

    const double ap_aff = std::min(1.0, step_length(it.s, ds));
    const double ad_aff = std::min(1.0, step_length(it.z, dz));
    double mu_aff = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      mu_aff += (it.s[j] + ap_aff * ds[j]).cwiseProduct(it.z[j] + ad_aff * dz[j]).sum();
    }
    mu_aff /= nu_;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector in the scaled space, where S and Y are both diag(d).
    for (std::size_t j = 0; j < nb; ++j) {
      const Vector& d = sc[j].d;
      const Matrix dzs = sc[j].g_inv * dz[j] * sc[j].g_inv.transpose();
      const Matrix dss = sc[j].g.transpose() * ds[j] * sc[j].g;
      const Matrix prod = dzs * dss;
      Matrix rt = -(prod + prod.transpose());
      for (Eigen::Index r = 0; r < d.size(); ++r) {
        for (Eigen::Index cc = 0; cc < d.size(); ++cc) rt(r, cc) /= d(r) + d(cc);
      }
      for (Eigen::Index r = 0; r < d.size(); ++r) rt(r, r) += sigma * mu / d(r) - d(r);
      rc[j] = sc[j].g * rt * sc[j].g.transpose();
    }
    newton_direction(sc, rc, rs, rd, re, kkt, lu, dx, dy, ds, dz);
    if (!dx.allFinite() || !dy.allFinite()) return finish(SolveStatus::SlowProgress, iter);

    const double ap = std::min(1.0, opt_.step_fraction * step_length(it.s, ds));
    const double ad = std::min(1.0, opt_.step_fraction * step_length(it.z, dz));

    it.x += ap * dx;
    for (std::size_t j = 0; j < nb; ++j) it.s[j] = sym(it.s[j] + ap * ds[j]);
    it.y += ad * dy;
    for (std::size_t j = 0; j < nb; ++j) it.z[j] = sym(it.z[j] + ad * dz[j]);

    tiny_steps = (ap < 1e-8 && ad < 1e-8) ? tiny_steps + 1 : 0;
    if (tiny_steps >= 5) return finish(SolveStatus::SlowProgress, iter + 1);
  }
  return finish(SolveStatus::SlowProgress, opt_.max_iterations);
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& options) {
  if (!(options.tol >= 1e-10 && options.tol <= 1e-4)) {
    throw InvalidInput("sdp::solve: tol must lie in [1e-10, 1e-4]");
  }
  if (options.max_iterations < 1) throw InvalidInput("sdp::solve: max_iterations < 1");
  problem.validate();
  // The dual correction helps when W grows large but can also stall the
  // centering, so it is only tried when the plain run stalls.
  SdpSolution sol = InteriorPoint(problem, options, false).run();
  if (sol.status != SolveStatus::SlowProgress) return sol;
  SdpSolution retry = InteriorPoint(problem, options, true).run();
  return retry.status == SolveStatus::SlowProgress ? sol : retry;
}

SdpSolution solve(const SdpProblem& problem, double tol) {
  SolverOptions o;
  o.tol = tol;
  return solve(problem, o);
}

// ---------------------------------------------------------------------------
// Verification

double VerificationReport::min_block_eigenvalue() const {
  double v = std::numeric_limits<double>::infinity();
  for (double e : block_min_eigenvalues) v = std::min(v, e);
  return v;
}

VerificationReport verify_solution(const SdpProblem& problem, const SdpSolution& solution) {
  problem.validate();
  if (solution.x.size() != problem.num_vars) {
    throw InvalidInput("verify_solution: solution does not match the problem");
  }
  VerificationReport r;
  const std::size_t nb = problem.blocks.size();
  const bool have_duals = solution.dual_values.size() == nb;
  double f0y = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    const Matrix s = problem.block_value(j, solution.x);
    r.block_min_eigenvalues.push_back(min_eigenvalue(s));
    if (have_duals) {
      r.dual_min_eigenvalues.push_back(min_eigenvalue(solution.dual_values[j]));
      r.complementarity.push_back(s.cwiseProduct(solution.dual_values[j]).sum());
      f0y += problem.blocks[j].constant.cwiseProduct(solution.dual_values[j]).sum();
    }
  }
  Vector aty = Vector::Zero(problem.num_vars);
  double by = 0.0;
  for (std::size_t k = 0; k < problem.equalities.size(); ++k) {
    const auto& eq = problem.equalities[k];
    r.max_equality_residual =
        std::max(r.max_equality_residual, std::abs(eq.a.dot(solution.x) - eq.b));
    if (solution.equality_duals.size() == static_cast<Eigen::Index>(problem.equalities.size())) {
      aty += solution.equality_duals(static_cast<Eigen::Index>(k)) * eq.a;
      by += solution.equality_duals(static_cast<Eigen::Index>(k)) * eq.b;
    }
  }
  r.primal_objective = problem.objective.dot(solution.x);
  if (have_duals) {
    r.dual_residual =
        (problem.objective - problem.adjoint(solution.dual_values) - aty).lpNorm<Eigen::Infinity>();
    r.dual_objective = by - f0y;
    r.gap = r.primal_objective - r.dual_objective;
  }

  if (solution.certificate) {
    const auto& cert = *solution.certificate;
    r.certificate_present = true;
    if (cert.dual_blocks.size() == nb) {
      Vector res = problem.adjoint(cert.dual_blocks);
      double viol = 0.0;
      for (std::size_t k = 0; k < problem.equalities.size(); ++k) {
        const double yk = cert.equality_multipliers(static_cast<Eigen::Index>(k));
        res += yk * problem.equalities[k].a;
        viol += yk * problem.equalities[k].b;
      }
      double min_eig = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < nb; ++j) {
        viol -= problem.blocks[j].constant.cwiseProduct(cert.dual_blocks[j]).sum();
        min_eig = std::min(min_eig, min_eigenvalue(cert.dual_blocks[j]));
      }
      r.certificate_violation = viol;
      r.certificate_residual = res.lpNorm<Eigen::Infinity>();
      r.certificate_min_eigenvalue = min_eig;
      r.certificate_valid = viol > 0.0 && min_eig >= -1e-8 && r.certificate_residual <= kCertificateTol * viol;
    }
  }
  return r;
}

}  // namespace misosec::sdp
