#include <iomanip>
#include <ostream>

#include "misosec/sdp.hpp"

namespace misosec::sdp {

// Layout documented in docs/sdp_dump_format.md.
void write_sparse_dump(const SdpProblem& problem, std::ostream& out) {
  const auto old_flags = out.flags();
  const auto old_prec = out.precision();
  out << std::setprecision(17);

  out << "# misosec sparse SDP dump v1\n";
  out << "vars " << problem.num_vars << '\n';
  out << "blocks " << problem.blocks.size() << '\n';
  for (const auto& blk : problem.blocks) {
    out << (blk.spec.kind == ConeKind::NonnegativeScalar ? "nonneg " : "psd ") << blk.spec.dim
        << '\n';
  }
  out << "objective";
  for (int i = 0; i < problem.num_vars; ++i) out << ' ' << problem.objective(i);
  out << '\n';
  out << "equalities " << problem.equalities.size() << '\n';
  for (const auto& eq : problem.equalities) {
    out << "eq " << eq.b;
    for (int i = 0; i < problem.num_vars; ++i) {
      if (eq.a(i) != 0.0) out << ' ' << i + 1 << ':' << eq.a(i);
    }
    out << '\n';
  }
  // block-index var-index row col value, 1-based; var-index 0 is the constant F0.
  for (std::size_t j = 0; j < problem.blocks.size(); ++j) {
    const auto& blk = problem.blocks[j];
    for (int c = 0; c < blk.spec.dim; ++c) {
      for (int r = 0; r <= c; ++r) {
        if (blk.constant(r, c) != 0.0) {
          out << j + 1 << " 0 " << r + 1 << ' ' << c + 1 << ' ' << blk.constant(r, c) << '\n';
        }
      }
    }
    for (const auto& [var, f] : blk.terms) {
      for (const auto& e : f.entries) {
        out << j + 1 << ' ' << var + 1 << ' ' << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value
            << '\n';
      }
    }
  }
  out.flags(old_flags);
  out.precision(old_prec);
}

}  // namespace misosec::sdp
