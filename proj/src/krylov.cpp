#include "toepfun/krylov.hpp"

namespace toepfun {

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::CG: return "cg";
    case SolverKind::CGNR: return "cgnr";
    case SolverKind::MINRES: return "minres";
    case SolverKind::GMRES: return "gmres";
  }
  return "?";
}

std::string to_string(PreconditionerKind p) {
  switch (p) {
    case PreconditionerKind::None: return "none";
    case PreconditionerKind::CirculantFn: return "circulant_fn";
    case PreconditionerKind::AbsCirculantFn: return "abs_circulant_fn";
  }
  return "?";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIterExceeded: return "max_iter_exceeded";
    case SolveStatus::IndefinitenessDetected: return "indefiniteness_detected";
    case SolveStatus::PreconditionerNotHPD: return "preconditioner_not_hpd";
    case SolveStatus::Breakdown: return "breakdown";
  }
  return "?";
}

CVector random_rhs(Eigen::Index n, std::uint64_t seed, bool complex_entries) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVector b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = normal(rng);
    b(i) = complex_entries ? Complex(re, normal(rng)) : Complex(re, 0.0);
  }
  return b;
}

}  // namespace toepfun
