#include "cqlqg/lyapunov.hpp"

#include <cmath>
#include <string>

namespace cqlqg {

namespace {

void require_hurwitz(const Matrix& a, const char* who) {
  const StabilityInfo info = stability_info(a);
  if (!info.hurwitz) {
    throw NotHurwitzError(std::string(who) + ": matrix is not Hurwitz (abscissa " +
                          std::to_string(info.abscissa) + ")");
  }
}

Matrix lyap_operator(const Matrix& a) {
  const Eigen::Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  return kron(id, a) + kron(a, id);
}

}  // namespace

Matrix lyap_solve(const Matrix& a, const Matrix& m) {
  if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
    throw ShapeError("lyap_solve: A and M must be square of equal order");
  }
  require_hurwitz(a, "lyap_solve");
  Eigen::PartialPivLU<Matrix> lu(lyap_operator(a));
  if (lu.rcond() < kMinRcond) {
    throw SingularLyapunovError(
        "lyap_solve: vectorized system numerically singular despite Hurwitz check");
  }
  return unvec(lu.solve(-vec(m)), a.rows(), a.rows());
}

LyapunovSolver::LyapunovSolver(const Matrix& a) : a_(a) {
  if (a.rows() != a.cols()) {
    throw ShapeError("LyapunovSolver: matrix must be square");
  }
  require_hurwitz(a, "LyapunovSolver");
  lu_.compute(lyap_operator(a));
  if (lu_.rcond() < kMinRcond) {
    throw SingularLyapunovError("LyapunovSolver: vectorized system singular");
  }
}

Matrix LyapunovSolver::solve(const Matrix& m) const {
  if (m.rows() != a_.rows() || m.cols() != a_.rows()) {
    throw ShapeError("LyapunovSolver::solve: right-hand side shape mismatch");
  }
  return unvec(lu_.solve(-vec(m)), a_.rows(), a_.rows());
}

GramianPair gramians(const StateSpaceTriple& sys) {
  GramianPair out;
  out.p = symmetrize(lyap_solve(sys.a, sys.b * sys.b.transpose()));
  out.q = symmetrize(lyap_solve(sys.a.transpose(), sys.c.transpose() * sys.c));
  out.h = out.q * out.p;
  return out;
}

CostForms lqg_cost_forms(const StateSpaceTriple& sys, const GramianPair& g) {
  CostForms forms;
  forms.trace_cpc = (sys.c * g.p * sys.c.transpose()).trace();
  forms.trace_bqb = (sys.b.transpose() * g.q * sys.b).trace();
  forms.hankel_form = -2.0 * frobenius_inner(sys.a, g.h);
  return forms;
}

double lqg_cost(const StateSpaceTriple& sys) {
  const GramianPair g = gramians(sys);
  const CostForms forms = lqg_cost_forms(sys, g);
  const double scale =
      std::max({1.0, std::abs(forms.trace_cpc), std::abs(forms.trace_bqb),
                std::abs(forms.hankel_form)});
  if (std::abs(forms.trace_cpc - forms.trace_bqb) > 1e-9 * scale ||
      std::abs(forms.trace_cpc - forms.hankel_form) > 1e-9 * scale) {
    throw ConsistencyError("lqg_cost: the three cost expressions disagree");
  }
  return forms.trace_cpc;
}

namespace {

struct GammaBlocks {
  Matrix da, db, dc;
};

GammaBlocks split_gamma(const StateSpaceTriple& sys, const Matrix& dgamma) {
  const Eigen::Index n = sys.a.rows();
  const Eigen::Index m = sys.b.cols();
  const Eigen::Index p = sys.c.rows();
  if (dgamma.rows() != n + p || dgamma.cols() != n + m) {
    throw ShapeError("gramian derivative: perturbation must be Gamma-shaped");
  }
  return {dgamma.topLeftCorner(n, n), dgamma.topRightCorner(n, m),
          dgamma.bottomLeftCorner(p, n)};
}

}  // namespace

Matrix gramian_derivative_p(const StateSpaceTriple& sys, const GramianPair& g,
                            const Matrix& dgamma) {
  const GammaBlocks d = split_gamma(sys, dgamma);
  return 2.0 * lyap_solve(sys.a,
                          symmetrize(d.da * g.p + d.db * sys.b.transpose()));
}

Matrix gramian_derivative_q(const StateSpaceTriple& sys, const GramianPair& g,
                            const Matrix& dgamma) {
  const GammaBlocks d = split_gamma(sys, dgamma);
  return 2.0 * lyap_solve(sys.a.transpose(),
                          symmetrize(g.q * d.da + sys.c.transpose() * d.dc));
}

}  // namespace cqlqg
