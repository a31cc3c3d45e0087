#pragma once

#include "toepfun/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace toepfun {

template <typename Derived>
typename Derived::RealScalar one_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Derived>
Vector<typename Derived::RealScalar> singular_values(const Eigen::MatrixBase<Derived>& a) {
  using MatrixType = Matrix<typename Derived::Scalar>;
  Eigen::BDCSVD<MatrixType> svd(a.eval());
  return svd.singularValues();
}

/// ‖A‖_2 by dense SVD.
template <typename Derived>
typename Derived::RealScalar spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0;
  return singular_values(a)(0);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

/// max|A − A*| ≤ tol·‖A‖_F.
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, typename Derived::RealScalar tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * a.norm();
}

namespace detail {

template <typename Scalar>
void require_finite(const Matrix<Scalar>& a, const char* who) {
  if (!a.allFinite()) throw NonFiniteValue(std::string(who) + ": non-finite matrix entry");
}

template <typename Scalar>
void require_square(const Matrix<Scalar>& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
}

// Degree-16 Taylor polynomial of e^B by Paterson–Stockmeyer with blocks of 4:
// 7 matrix products instead of 15.
template <typename Scalar>
Matrix<Scalar> taylor16(const Matrix<Scalar>& b) {
  using Real = typename Scalar::value_type;
  constexpr int kDegree = 16;
  constexpr int kBlock = 4;
  const Eigen::Index n = b.rows();

  Real coef[kDegree + 1];
  coef[0] = 1;
  for (int k = 1; k <= kDegree; ++k) coef[k] = coef[k - 1] / Real(k);

  std::vector<Matrix<Scalar>> pow(kBlock + 1);
  pow[0] = Matrix<Scalar>::Identity(n, n);
  pow[1] = b;
  for (int k = 2; k <= kBlock; ++k) pow[k].noalias() = pow[k - 1] * b;

  auto block = [&](int j) {
    Matrix<Scalar> q = Matrix<Scalar>::Zero(n, n);
    for (int i = 0; i < kBlock && kBlock * j + i <= kDegree; ++i) q += coef[kBlock * j + i] * pow[i];
    return q;
  };

  Matrix<Scalar> r = block(kDegree / kBlock);
  Matrix<Scalar> tmp(n, n);
  for (int j = kDegree / kBlock - 1; j >= 0; --j) {
    tmp.noalias() = r * pow[kBlock];
    r = tmp + block(j);
  }
  return r;
}

}  // namespace detail

/// Matrix exponential by scaling and squaring: e^A = (T16(A/s))^s with
/// s = 2^⌈log₂‖A‖₁⌉ (s ≥ 1) and T16 the degree-16 Taylor polynomial.
template <typename Derived>
Matrix<typename Derived::Scalar> expm(const Eigen::MatrixBase<Derived>& a_in) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  Matrix<Scalar> a = a_in;
  detail::require_square(a, "expm");
  detail::require_finite(a, "expm");
  if (a.size() == 0) return a;

  const Real norm1 = one_norm(a);
  const int squarings = norm1 > Real(1) ? static_cast<int>(std::ceil(std::log2(norm1))) : 0;
  a /= std::ldexp(Real(1), squarings);

  Matrix<Scalar> e = detail::taylor16(a);
  Matrix<Scalar> tmp(e.rows(), e.cols());
  for (int k = 0; k < squarings; ++k) {
    tmp.noalias() = e * e;
    e.swap(tmp);
  }
  return e;
}

namespace detail {

// e^{iA} and e^{−iA}. For Hermitian A the second is the adjoint of the first.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> exp_pm_i(const Matrix<Scalar>& a) {
  const Scalar i(0, 1);
  Matrix<Scalar> plus = expm((i * a).eval());
  Matrix<Scalar> minus = a == a.adjoint() ? Matrix<Scalar>(plus.adjoint()) : expm((-i * a).eval());
  return {std::move(plus), std::move(minus)};
}

}  // namespace detail

/// sin A = (e^{iA} − e^{−iA}) / 2i.
template <typename Derived>
Matrix<typename Derived::Scalar> sinm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  auto [plus, minus] = detail::exp_pm_i(Matrix<Scalar>(a));
  return (plus - minus) / Scalar(0, 2);
}

/// cos A = (e^{iA} + e^{−iA}) / 2.
template <typename Derived>
Matrix<typename Derived::Scalar> cosm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  auto [plus, minus] = detail::exp_pm_i(Matrix<Scalar>(a));
  return (plus + minus) / Scalar(2);
}

template <typename Derived>
Matrix<typename Derived::Scalar> matrix_function(FunctionKind g, const Eigen::MatrixBase<Derived>& a) {
  switch (g) {
    case FunctionKind::Exp: return expm(a);
    case FunctionKind::Sin: return sinm(a);
    case FunctionKind::Cos: return cosm(a);
  }
  throw std::invalid_argument("matrix_function: unknown function");
}

/// P_{r,s} = [Σ_{i=0}^{r} (A/s)^i / i!]^s.
template <typename Derived>
Matrix<typename Derived::Scalar> taylor_exp(const Eigen::MatrixBase<Derived>& a, int r, int s) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Derived::RealScalar;
  if (r < 1 || s < 1) throw std::invalid_argument("taylor_exp: r and s must be positive");
  const Eigen::Index n = a.rows();
  const Matrix<Scalar> b = a / Real(s);

  // Horner: I + B(I + B/2(I + B/3(...))).
  Matrix<Scalar> p = Matrix<Scalar>::Identity(n, n);
  for (int i = r; i >= 1; --i) p = Matrix<Scalar>::Identity(n, n) + (b * p) / Real(i);

  Matrix<Scalar> result = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> base = p;
  for (int e = s; e > 0; e >>= 1) {
    if (e & 1) result = (result * base).eval();
    if (e > 1) base = (base * base).eval();
  }
  return result;
}

/// ‖A‖^{r+1} / (s^r (r+1)!) · e^{‖A‖}, the truncation bound for taylor_exp.
template <typename Real>
Real taylor_exp_bound(Real norm, int r, int s) {
  Real factorial = 1;
  for (int k = 2; k <= r + 1; ++k) factorial *= Real(k);
  return std::pow(norm, r + 1) / (std::pow(Real(s), r) * factorial) * std::exp(norm);
}

/// h(z) = Σ a_k (z − α)^k with radius of convergence r (possibly infinite).
template <typename Scalar = Complex>
struct TaylorSpec {
  using Real = typename Scalar::value_type;

  Scalar center{};
  std::vector<Scalar> coeffs;
  Real radius = std::numeric_limits<Real>::infinity();

  static TaylorSpec exponential(int terms) {
    TaylorSpec h;
    Real c = 1;
    for (int k = 0; k < terms; ++k) {
      if (k > 0) c /= Real(k);
      h.coeffs.push_back(Scalar(c));
    }
    return h;
  }

  /// 1/(1 − z) about 0.
  static TaylorSpec geometric(int terms) {
    TaylorSpec h;
    h.coeffs.assign(static_cast<std::size_t>(terms), Scalar(1));
    h.radius = 1;
    return h;
  }
};

template <typename Scalar>
struct TaylorResult {
  using Real = typename Scalar::value_type;
  Matrix<Scalar> value;
  Real spectral_radius = 0;
  /// ‖a_K (A − αI)^K‖₂ / (1 − ‖A − αI‖₂/r); empty when the geometric proxy
  /// does not apply or a_K is not available.
  std::optional<Real> remainder_proxy;
};

template <typename Derived>
Vector<std::complex<typename Derived::RealScalar>> eigenvalues(const Eigen::MatrixBase<Derived>& a);

/// Partial sum Σ_{k=0}^{K−1} a_k (A − αI)^k, after checking ρ(A − αI) < r.
template <typename Scalar, typename Derived>
TaylorResult<Scalar> taylor_matfun(const TaylorSpec<Scalar>& h, const Eigen::MatrixBase<Derived>& a_in, int terms) {
  using Real = typename Scalar::value_type;
  if (terms < 1) throw std::invalid_argument("taylor_matfun: K must be positive");
  if (static_cast<std::size_t>(terms) > h.coeffs.size()) {
    throw std::invalid_argument("taylor_matfun: K exceeds the number of available coefficients");
  }
  if (!(h.radius > 0)) throw std::invalid_argument("taylor_matfun: radius must be positive");
  for (const auto& c : h.coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw NonFiniteValue("taylor_matfun: coefficient");
  }

  const Matrix<Scalar> a = a_in;
  const Eigen::Index n = a.rows();
  const Matrix<Scalar> shifted = a - h.center * Matrix<Scalar>::Identity(n, n);

  TaylorResult<Scalar> out;
  out.spectral_radius = n == 0 ? Real(0) : eigenvalues(shifted).cwiseAbs().maxCoeff();
  if (!(out.spectral_radius < h.radius)) throw RadiusViolation(out.spectral_radius, h.radius);

  Matrix<Scalar> power = Matrix<Scalar>::Identity(n, n);
  out.value = Matrix<Scalar>::Zero(n, n);
  for (int k = 0; k < terms; ++k) {
    out.value += h.coeffs[static_cast<std::size_t>(k)] * power;
    power = (power * shifted).eval();
  }

  if (static_cast<std::size_t>(terms) < h.coeffs.size()) {
    const Real ratio = std::isinf(h.radius) ? Real(0) : spectral_norm(shifted) / h.radius;
    if (ratio < Real(1)) {
      out.remainder_proxy = spectral_norm((h.coeffs[static_cast<std::size_t>(terms)] * power).eval()) / (1 - ratio);
    }
  }
  return out;
}

template <typename Real>
struct PerturbationGap {
  Real gap = 0;    ///< ‖e^A − e^B‖₂
  Real bound = 0;  ///< ‖A − B‖₂ e^{max(‖A‖₂, ‖B‖₂)}
  bool holds = true;
};

template <typename DerivedA, typename DerivedB>
PerturbationGap<typename DerivedA::RealScalar> expm_perturbation_gap(const Eigen::MatrixBase<DerivedA>& a,
                                                                     const Eigen::MatrixBase<DerivedB>& b) {
  using Real = typename DerivedA::RealScalar;
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("expm_perturbation_gap: dimension mismatch");
  }
  PerturbationGap<Real> out;
  out.gap = spectral_norm((expm(a) - expm(b)).eval());
  out.bound = spectral_norm((a - b).eval()) * std::exp(std::max(spectral_norm(a), spectral_norm(b)));
  out.holds = out.gap <= out.bound + Real(1e-8);
  return out;
}

/// Thrown when a dense eigensolver fails or its output fails the residual check.
class EigenSolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense eigenvalues of a general complex matrix (Hessenberg + shifted QR),
/// certified by ‖Av − λv‖ ≤ 1e−8‖A‖ on every returned pair.
template <typename Derived>
Vector<std::complex<typename Derived::RealScalar>> eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  using Scalar = std::complex<Real>;
  const Matrix<Scalar> m = a.template cast<Scalar>();
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
  if (m.size() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix<Scalar>> solver(m, true);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverFailure("eigenvalues: QR iteration did not converge for n = " + std::to_string(m.rows()));
  }
  const Real scale = std::max(one_norm(m), std::numeric_limits<Real>::min());
  const Matrix<Scalar>& v = solver.eigenvectors();
  const Vector<Scalar>& lambda = solver.eigenvalues();
  const Matrix<Scalar> residual = m * v - v * lambda.asDiagonal();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Real r = residual.col(j).norm() / v.col(j).norm();
    if (!(r <= Real(1e-8) * scale)) {
      throw EigenSolverFailure("eigenvalues: residual " + std::to_string(static_cast<double>(r)) +
                               " exceeds certification bound for eigenpair " + std::to_string(j));
    }
  }
  return lambda;
}

/// Eigenvalues of a Hermitian matrix, ascending.
template <typename Derived>
Vector<typename Derived::RealScalar> hermitian_eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  using MatrixType = Matrix<typename Derived::Scalar>;
  Eigen::SelfAdjointEigenSolver<MatrixType> solver(a.eval(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw EigenSolverFailure("hermitian_eigenvalues: did not converge");
  return solver.eigenvalues();
}

}  // namespace toepfun
