#pragma once

#include "toepfun/structured.hpp"
#include "toepfun/types.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace toepfun {

/// A linear map on ℂⁿ. The hermitian / positive_definite flags are asserted
/// by the caller; solvers spot-check them with random probes.
template <typename Scalar = Complex>
struct LinearOperator {
  using VectorType = Vector<Scalar>;
  using Apply = std::function<VectorType(const VectorType&)>;

  Eigen::Index n = 0;
  Apply apply;
  Apply apply_adjoint;
  bool hermitian = false;
  bool positive_definite = false;

  VectorType operator()(const VectorType& x) const {
    if (x.size() != n) throw std::invalid_argument("LinearOperator: dimension mismatch");
    return apply(x);
  }

  VectorType adjoint(const VectorType& x) const {
    if (x.size() != n) throw std::invalid_argument("LinearOperator: dimension mismatch");
    if (apply_adjoint) return apply_adjoint(x);
    if (hermitian) return apply(x);
    throw std::logic_error("LinearOperator: adjoint not available");
  }
};

template <typename Scalar>
LinearOperator<Scalar> dense_operator(Matrix<Scalar> m, bool hermitian = false, bool positive_definite = false) {
  if (m.rows() != m.cols()) throw std::invalid_argument("dense_operator: matrix is not square");
  auto shared = std::make_shared<const Matrix<Scalar>>(std::move(m));
  LinearOperator<Scalar> op;
  op.n = shared->rows();
  op.apply = [shared](const Vector<Scalar>& x) -> Vector<Scalar> { return *shared * x; };
  op.apply_adjoint = [shared](const Vector<Scalar>& x) -> Vector<Scalar> { return shared->adjoint() * x; };
  op.hermitian = hermitian;
  op.positive_definite = positive_definite;
  return op;
}

template <typename Scalar>
LinearOperator<Scalar> negated(LinearOperator<Scalar> op) {
  auto f = op.apply;
  auto fa = op.apply_adjoint;
  op.apply = [f](const Vector<Scalar>& x) -> Vector<Scalar> { return -f(x); };
  if (fa) op.apply_adjoint = [fa](const Vector<Scalar>& x) -> Vector<Scalar> { return -fa(x); };
  op.positive_definite = false;
  return op;
}

/// g(C)⁻¹ as an operator.
template <typename Scalar>
LinearOperator<Scalar> inverse_operator(const CirculantFunction<Scalar>& m) {
  auto shared = std::make_shared<const CirculantFunction<Scalar>>(m);
  LinearOperator<Scalar> op;
  op.n = m.size();
  op.apply = [shared](const Vector<Scalar>& x) { return shared->apply_inverse(x); };
  op.apply_adjoint = [shared](const Vector<Scalar>& x) { return shared->apply_inverse_adjoint(x); };
  const auto& ev = m.eigenvalues();
  const auto scale = ev.cwiseAbs().maxCoeff();
  op.hermitian = (ev.imag().cwiseAbs().array() <= 1e-12 * scale).all();
  op.positive_definite = op.hermitian && (ev.real().array() > 0).all();
  return op;
}

/// |g(C)|⁻¹ as an operator (Hermitian positive definite).
template <typename Scalar>
LinearOperator<Scalar> inverse_operator(const AbsCirculant<Scalar>& m) {
  auto shared = std::make_shared<const AbsCirculant<Scalar>>(m);
  LinearOperator<Scalar> op;
  op.n = m.size();
  op.apply = [shared](const Vector<Scalar>& x) { return shared->apply_inverse(x); };
  op.apply_adjoint = op.apply;
  op.hermitian = true;
  op.positive_definite = true;
  return op;
}

enum class SolverKind { CG, CGNR, MINRES, GMRES };
enum class PreconditionerKind { None, CirculantFn, AbsCirculantFn };

enum class SolveStatus { Converged, MaxIterExceeded, IndefinitenessDetected, PreconditionerNotHPD, Breakdown };

std::string to_string(SolverKind s);
std::string to_string(PreconditionerKind p);
std::string to_string(SolveStatus s);

struct SolverConfig {
  double tol = 1e-7;
  int max_iter = 100000;

  void validate() const {
    if (!(tol > 0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be at least 1");
  }
};

/// Outcome of one solve. residual_history[0] is the zero initial guess; each
/// entry is the relative norm the solver monitors (see each solver).
/// relres_final is recomputed from scratch at exit.
template <typename Scalar = Complex>
struct SolveReport {
  std::string solver;
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::MaxIterExceeded;
  std::vector<double> residual_history;
  double relres_final = 1.0;
  /// ‖b − Gx‖₂ / ‖b‖₂ for solvers that work on a transformed system.
  std::optional<double> original_relres;
  double wall_time_seconds = 0.0;
  Vector<Scalar> x;
};

namespace detail {

inline constexpr std::uint64_t kProbeSeed = 0x70e9f00dULL;

template <typename Scalar>
Vector<Scalar> probe_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Scalar(normal(rng), normal(rng));
  return v;
}

/// Three random probes: Im⟨x, Ax⟩ ≈ 0 and Re⟨x, Ax⟩ > 0.
template <typename Scalar>
bool probe_hpd(const LinearOperator<Scalar>& a) {
  std::mt19937_64 rng(kProbeSeed);
  for (int t = 0; t < 3; ++t) {
    const Vector<Scalar> x = probe_vector<Scalar>(a.n, rng);
    const Vector<Scalar> ax = a(x);
    const Scalar q = x.dot(ax);
    const double scale = x.norm() * ax.norm();
    if (std::abs(q.imag()) > 1e-8 * scale || !(q.real() > 0)) return false;
  }
  return true;
}

template <typename Scalar>
double relative(const Vector<Scalar>& r, double bnorm) {
  return r.norm() / bnorm;
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename Scalar>
SolveReport<Scalar> zero_rhs_report(const char* name, Eigen::Index n) {
  SolveReport<Scalar> rep;
  rep.solver = name;
  rep.converged = true;
  rep.status = SolveStatus::Converged;
  rep.residual_history = {0.0};
  rep.relres_final = 0.0;
  rep.x = Vector<Scalar>::Zero(n);
  return rep;
}

template <typename Scalar>
void check_dims(const LinearOperator<Scalar>& a, const Vector<Scalar>& b, const LinearOperator<Scalar>* m) {
  if (b.size() != a.n) throw std::invalid_argument("solver: right-hand side has the wrong dimension");
  if (m && m->n != a.n) throw std::invalid_argument("solver: preconditioner has the wrong dimension");
}

}  // namespace detail

/// Preconditioned conjugate gradients for Hermitian positive definite A.
/// Stops when ‖b − Ax‖₂/‖b‖₂ < tol: the recurrence residual triggers the test
/// and the true residual confirms it.
template <typename Scalar>
SolveReport<Scalar> cg(const LinearOperator<Scalar>& a, const Vector<Scalar>& b,
                       const LinearOperator<Scalar>* m_inv, const SolverConfig& cfg) {
  cfg.validate();
  detail::check_dims(a, b, m_inv);
  detail::Stopwatch clock;
  const double bnorm = b.norm();
  if (bnorm == 0) return detail::zero_rhs_report<Scalar>("cg", a.n);

  SolveReport<Scalar> rep;
  rep.solver = "cg";
  rep.x = Vector<Scalar>::Zero(a.n);
  rep.residual_history.push_back(1.0);

  auto finish = [&](SolveStatus status) {
    rep.status = status;
    rep.relres_final = detail::relative<Scalar>(b - a(rep.x), bnorm);
    rep.converged = status == SolveStatus::Converged;
    rep.wall_time_seconds = clock.seconds();
    return rep;
  };

  if (!detail::probe_hpd(a)) return finish(SolveStatus::IndefinitenessDetected);
  if (m_inv && !detail::probe_hpd(*m_inv)) return finish(SolveStatus::PreconditionerNotHPD);

  Vector<Scalar> r = b;
  Vector<Scalar> z = m_inv ? (*m_inv)(r) : r;
  Vector<Scalar> p = z;
  double rho = std::real(r.dot(z));

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vector<Scalar> q = a(p);
    const double pq = std::real(p.dot(q));
    if (!(pq > 0)) return finish(SolveStatus::IndefinitenessDetected);
    const double alpha = rho / pq;
    rep.x += alpha * p;
    r -= alpha * q;
    rep.iterations = it;
    const double rel = detail::relative(r, bnorm);
    rep.residual_history.push_back(rel);
    if (rel < cfg.tol && detail::relative<Scalar>(b - a(rep.x), bnorm) < cfg.tol) {
      return finish(SolveStatus::Converged);
    }
    z = m_inv ? (*m_inv)(r) : r;
    const double rho_next = std::real(r.dot(z));
    if (m_inv && !(rho_next > 0)) return finish(SolveStatus::PreconditionerNotHPD);
    p = z + (rho_next / rho) * p;
    rho = rho_next;
  }
  return finish(SolveStatus::MaxIterExceeded);
}

/// CG on the normal equations (M⁻¹G)*(M⁻¹G) x = (M⁻¹G)* M⁻¹ b, or G*G x = G*b
/// without a preconditioner. Convergence refers to the normal-equations
/// residual; original_relres carries ‖b − Gx‖/‖b‖.
template <typename Scalar>
SolveReport<Scalar> cgnr(const LinearOperator<Scalar>& g, const Vector<Scalar>& b,
                         const LinearOperator<Scalar>* m_inv, const SolverConfig& cfg) {
  detail::check_dims(g, b, m_inv);
  LinearOperator<Scalar> normal;
  normal.n = g.n;
  normal.hermitian = true;
  normal.positive_definite = true;
  Vector<Scalar> rhs;
  if (m_inv) {
    const LinearOperator<Scalar> m = *m_inv;
    normal.apply = [g, m](const Vector<Scalar>& x) { return g.adjoint(m.adjoint(m(g(x)))); };
    rhs = g.adjoint(m.adjoint((*m_inv)(b)));
  } else {
    normal.apply = [g](const Vector<Scalar>& x) { return g.adjoint(g(x)); };
    rhs = g.adjoint(b);
  }
  normal.apply_adjoint = normal.apply;

  SolveReport<Scalar> rep = cg(normal, rhs, static_cast<const LinearOperator<Scalar>*>(nullptr), cfg);
  rep.solver = "cgnr";
  const double bnorm = b.norm();
  rep.original_relres = bnorm == 0 ? 0.0 : (b - g(rep.x)).norm() / bnorm;
  return rep;
}

/// Preconditioned MINRES for Hermitian (possibly indefinite) A with a
/// Hermitian positive definite M⁻¹. residual_history tracks the minimized
/// M⁻¹-norm of the residual; the solve stops when ‖b − Ax‖₂/‖b‖₂ < tol.
template <typename Scalar>
SolveReport<Scalar> minres(const LinearOperator<Scalar>& a, const Vector<Scalar>& b,
                           const LinearOperator<Scalar>* m_inv, const SolverConfig& cfg) {
  cfg.validate();
  detail::check_dims(a, b, m_inv);
  detail::Stopwatch clock;
  const double bnorm = b.norm();
  if (bnorm == 0) return detail::zero_rhs_report<Scalar>("minres", a.n);

  SolveReport<Scalar> rep;
  rep.solver = "minres";
  rep.x = Vector<Scalar>::Zero(a.n);
  rep.residual_history.push_back(1.0);

  auto finish = [&](SolveStatus status) {
    rep.status = status;
    rep.relres_final = detail::relative<Scalar>(b - a(rep.x), bnorm);
    rep.converged = status == SolveStatus::Converged;
    rep.wall_time_seconds = clock.seconds();
    return rep;
  };
  auto precondition = [&](const Vector<Scalar>& v) { return m_inv ? (*m_inv)(v) : v; };

  if (m_inv && !detail::probe_hpd(*m_inv)) return finish(SolveStatus::PreconditionerNotHPD);

  Vector<Scalar> r1 = b;
  Vector<Scalar> y = precondition(r1);
  const double beta1_sq = std::real(r1.dot(y));
  if (!(beta1_sq > 0)) return finish(SolveStatus::PreconditionerNotHPD);
  const double beta1 = std::sqrt(beta1_sq);

  Vector<Scalar> r2 = r1;
  Vector<Scalar> w = Vector<Scalar>::Zero(a.n);
  Vector<Scalar> w1 = w;
  Vector<Scalar> w2 = w;
  double beta = beta1, oldb = 0, dbar = 0, epsln = 0, phibar = beta1, cs = -1, sn = 0;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Vector<Scalar> v = y / beta;
    y = a(v);
    if (it >= 2) y -= (beta / oldb) * r1;
    const double alfa = std::real(v.dot(y));
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = precondition(r2);
    oldb = beta;
    const double beta_sq = std::real(r2.dot(y));
    if (beta_sq < 0) return finish(SolveStatus::PreconditionerNotHPD);
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;

    const double gamma = std::max(std::hypot(gbar, beta), std::numeric_limits<double>::epsilon());
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar *= sn;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    rep.x += phi * w;
    rep.iterations = it;
    rep.residual_history.push_back(phibar / beta1);

    if (detail::relative<Scalar>(b - a(rep.x), bnorm) < cfg.tol) return finish(SolveStatus::Converged);
    if (beta == 0) return finish(SolveStatus::Breakdown);
  }
  return finish(SolveStatus::MaxIterExceeded);
}

/// Full (unrestarted) left-preconditioned GMRES with modified Gram–Schmidt
/// and one reorthogonalization pass when orthogonality is lost beyond 1e−8.
/// Stops when ‖M⁻¹(b − Ax)‖₂/‖M⁻¹b‖₂ < tol.
template <typename Scalar>
SolveReport<Scalar> gmres(const LinearOperator<Scalar>& a, const Vector<Scalar>& b,
                          const LinearOperator<Scalar>* m_inv, const SolverConfig& cfg) {
  cfg.validate();
  detail::check_dims(a, b, m_inv);
  detail::Stopwatch clock;
  auto precondition = [&](const Vector<Scalar>& v) { return m_inv ? (*m_inv)(v) : v; };

  const Vector<Scalar> r0 = precondition(b);
  const double beta = r0.norm();
  if (beta == 0) return detail::zero_rhs_report<Scalar>("gmres", a.n);

  SolveReport<Scalar> rep;
  rep.solver = "gmres";
  rep.x = Vector<Scalar>::Zero(a.n);
  rep.residual_history.push_back(1.0);

  auto true_relres = [&] { return precondition(b - a(rep.x)).norm() / beta; };
  auto finish = [&](SolveStatus status) {
    rep.status = status;
    rep.relres_final = true_relres();
    rep.converged = status == SolveStatus::Converged;
    rep.wall_time_seconds = clock.seconds();
    if (const double bn = b.norm(); bn > 0) rep.original_relres = (b - a(rep.x)).norm() / bn;
    return rep;
  };

  std::vector<Vector<Scalar>> basis;
  basis.push_back(r0 / beta);
  std::vector<Vector<Scalar>> hess;  // column j holds h_{0..j+1, j}, rotated to upper triangular
  std::vector<double> cs;
  std::vector<Scalar> sn;
  std::vector<Scalar> g{Scalar(beta)};

  auto solve_update = [&](int k) {
    Vector<Scalar> y(k);
    for (int i = k - 1; i >= 0; --i) {
      Scalar s = g[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) s -= hess[static_cast<std::size_t>(j)](i) * y(j);
      y(i) = s / hess[static_cast<std::size_t>(i)](i);
    }
    Vector<Scalar> x = Vector<Scalar>::Zero(a.n);
    for (int i = 0; i < k; ++i) x += y(i) * basis[static_cast<std::size_t>(i)];
    return x;
  };

  for (int j = 0; j < cfg.max_iter; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    Vector<Scalar> w = precondition(a(basis[uj]));
    Vector<Scalar> h = Vector<Scalar>::Zero(j + 2);
    for (int i = 0; i <= j; ++i) {
      h(i) = basis[static_cast<std::size_t>(i)].dot(w);
      w -= h(i) * basis[static_cast<std::size_t>(i)];
    }
    double wnorm = w.norm();
    double loss = 0;
    for (int i = 0; i <= j && wnorm > 0; ++i) {
      loss = std::max(loss, std::abs(basis[static_cast<std::size_t>(i)].dot(w)) / wnorm);
    }
    if (loss > 1e-8) {
      for (int i = 0; i <= j; ++i) {
        const Scalar c = basis[static_cast<std::size_t>(i)].dot(w);
        h(i) += c;
        w -= c * basis[static_cast<std::size_t>(i)];
      }
      wnorm = w.norm();
    }
    h(j + 1) = wnorm;

    for (int i = 0; i < j; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const Scalar t = cs[ui] * h(i) + sn[ui] * h(i + 1);
      h(i + 1) = -std::conj(sn[ui]) * h(i) + cs[ui] * h(i + 1);
      h(i) = t;
    }
    const double habs = std::abs(h(j));
    const double denom = std::hypot(habs, wnorm);
    double c = 0;
    Scalar s(1);
    if (denom == 0) return finish(SolveStatus::Breakdown);
    if (habs != 0) {
      c = habs / denom;
      s = (h(j) / habs) * (wnorm / denom);
    }
    h(j) = c * h(j) + s * h(j + 1);
    h(j + 1) = 0;
    cs.push_back(c);
    sn.push_back(s);
    g.push_back(-std::conj(s) * g[uj]);
    g[uj] = c * g[uj];
    hess.push_back(std::move(h));

    rep.iterations = j + 1;
    const double estimate = std::abs(g[uj + 1]) / beta;
    rep.residual_history.push_back(estimate);

    const bool happy = wnorm <= 1e-14 * beta;
    if (estimate < cfg.tol || happy) {
      if (std::abs(hess[uj](j)) == 0) return finish(SolveStatus::Breakdown);
      rep.x = solve_update(j + 1);
      if (true_relres() < cfg.tol) return finish(SolveStatus::Converged);
      if (happy) return finish(SolveStatus::Breakdown);
    }
    basis.push_back(w / wnorm);
  }
  rep.x = solve_update(rep.iterations);
  return finish(SolveStatus::MaxIterExceeded);
}

template <typename Scalar>
SolveReport<Scalar> solve(SolverKind kind, const LinearOperator<Scalar>& a, const Vector<Scalar>& b,
                          const LinearOperator<Scalar>* m_inv, const SolverConfig& cfg) {
  switch (kind) {
    case SolverKind::CG: return cg(a, b, m_inv, cfg);
    case SolverKind::CGNR: return cgnr(a, b, m_inv, cfg);
    case SolverKind::MINRES: return minres(a, b, m_inv, cfg);
    case SolverKind::GMRES: return gmres(a, b, m_inv, cfg);
  }
  throw std::invalid_argument("solve: unknown solver");
}

/// Standard Gaussian right-hand side: real for real-symbol cases, complex
/// (unit-variance real and imaginary parts) otherwise.
CVector random_rhs(Eigen::Index n, std::uint64_t seed, bool complex_entries);

}  // namespace toepfun
