#pragma once

#include "toepfun/fft.hpp"
#include "toepfun/genfn.hpp"
#include "toepfun/types.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <utility>

namespace toepfun {

/// n×n Toeplitz matrix with entry (j, k) = a_{j−k}; coefficients a_{−(n−1)}..a_{n−1}
/// are stored at index k + n − 1.
template <typename Scalar = Complex>
class ToeplitzMatrix {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  explicit ToeplitzMatrix(VectorType coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() < 1 || coeffs_.size() % 2 == 0) {
      throw std::invalid_argument("ToeplitzMatrix: expected 2n-1 coefficients");
    }
  }

  Eigen::Index size() const noexcept { return (coeffs_.size() + 1) / 2; }
  const VectorType& coeffs() const noexcept { return coeffs_; }

  /// a_k for |k| < n.
  Scalar coeff(Eigen::Index k) const { return coeffs_(k + size() - 1); }

  MatrixType dense() const {
    const Eigen::Index n = size();
    if (n > kMaxDenseSize) throw std::length_error("ToeplitzMatrix: too large to materialize");
    MatrixType a(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < n; ++j) a(j, k) = coeff(j - k);
    }
    return a;
  }

  bool is_hermitian() const {
    for (Eigen::Index k = 0; k < size(); ++k) {
      if (coeff(-k) != std::conj(coeff(k))) return false;
    }
    return true;
  }

 private:
  VectorType coeffs_;
};

/// n×n circulant with entry (j, k) = c_{(j−k) mod n}.
template <typename Scalar = Complex>
class CirculantMatrix {
 public:
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  explicit CirculantMatrix(VectorType first_col) : first_col_(std::move(first_col)) {
    if (first_col_.size() < 1) throw std::invalid_argument("CirculantMatrix: empty first column");
  }

  Eigen::Index size() const noexcept { return first_col_.size(); }
  const VectorType& first_col() const noexcept { return first_col_; }

  MatrixType dense() const {
    const Eigen::Index n = size();
    if (n > kMaxDenseSize) throw std::length_error("CirculantMatrix: too large to materialize");
    MatrixType c(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index j = 0; j < n; ++j) c(j, k) = first_col_((j - k + n) % n);
    }
    return c;
  }

  VectorType operator*(const VectorType& x) const {
    if (x.size() != size()) throw std::invalid_argument("CirculantMatrix: dimension mismatch");
    const VectorType lambda = fft::forward(first_col_);
    return fft::inverse<Scalar>(lambda.cwiseProduct(fft::forward(x)));
  }

 private:
  VectorType first_col_;
};

/// Eigenvalues of C: the forward DFT of its first column.
template <typename Scalar>
Vector<Scalar> circulant_eigs(const CirculantMatrix<Scalar>& c) {
  return fft::forward(c.first_col());
}

/// g(C) = F* g(Λ) F for a circulant C, stored by its eigenvalues g(λ_j).
///
/// Construction rejects any |g(λ_j)| ≤ 1e−12·max_j |g(λ_j)|, since the
/// inverse is what a preconditioner applies.
template <typename Scalar = Complex>
class CirculantFunction {
 public:
  using Real = typename Scalar::value_type;
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  static constexpr Real kRelativeFloor = Real(1e-12);

  CirculantFunction(const CirculantMatrix<Scalar>& c, FunctionKind g) : kind_(g) {
    values_ = circulant_eigs(c).unaryExpr([g](const Scalar& z) { return apply_function(g, z); });
    check_floor(values_.cwiseAbs());
  }

  Eigen::Index size() const noexcept { return values_.size(); }
  FunctionKind kind() const noexcept { return kind_; }

  /// g(λ_j), j = 0..n−1.
  const VectorType& eigenvalues() const noexcept { return values_; }

  VectorType apply(const VectorType& d) const { return diagonal_apply(values_, d); }

  VectorType apply_inverse(const VectorType& d) const { return diagonal_apply(values_.cwiseInverse(), d); }

  /// (g(C)*)⁻¹ d.
  VectorType apply_inverse_adjoint(const VectorType& d) const {
    return diagonal_apply(values_.conjugate().cwiseInverse(), d);
  }

  MatrixType dense() const { return dense_from_eigenvalues(values_); }

  static VectorType diagonal_apply(const VectorType& diag, const VectorType& d) {
    if (d.size() != diag.size()) throw std::invalid_argument("circulant apply: dimension mismatch");
    return fft::inverse<Scalar>(diag.cwiseProduct(fft::forward(d)));
  }

  static MatrixType dense_from_eigenvalues(const VectorType& diag) {
    const Eigen::Index n = diag.size();
    if (n > kMaxDenseSize) throw std::length_error("circulant function: too large to materialize");
    VectorType e0 = VectorType::Zero(n);
    e0(0) = Scalar(1);
    return CirculantMatrix<Scalar>(diagonal_apply(diag, e0)).dense();
  }

 private:
  void check_floor(const Vector<Real>& moduli) const {
    const Real floor = kRelativeFloor * moduli.maxCoeff();
    for (Eigen::Index j = 0; j < moduli.size(); ++j) {
      if (!(moduli(j) > floor)) {
        throw NearSingularFunctionValue(j, Complex(values_(j)), static_cast<double>(floor));
      }
    }
  }

  FunctionKind kind_;
  VectorType values_;
};

/// |g(C)| = F*|g(Λ)|F: Hermitian positive definite once past the singularity floor.
template <typename Scalar = Complex>
class AbsCirculant {
 public:
  using Real = typename Scalar::value_type;
  using VectorType = Vector<Scalar>;
  using MatrixType = Matrix<Scalar>;

  explicit AbsCirculant(CirculantFunction<Scalar> base)
      : base_(std::move(base)), abs_eigs_(base_.eigenvalues().cwiseAbs()) {}

  Eigen::Index size() const noexcept { return base_.size(); }
  const CirculantFunction<Scalar>& base() const noexcept { return base_; }
  const Vector<Real>& abs_eigs() const noexcept { return abs_eigs_; }

  VectorType apply(const VectorType& d) const {
    return CirculantFunction<Scalar>::diagonal_apply(abs_eigs_.template cast<Scalar>(), d);
  }

  VectorType apply_inverse(const VectorType& d) const {
    return CirculantFunction<Scalar>::diagonal_apply(abs_eigs_.cwiseInverse().template cast<Scalar>(), d);
  }

  MatrixType dense() const {
    return CirculantFunction<Scalar>::dense_from_eigenvalues(abs_eigs_.template cast<Scalar>());
  }

  /// F* sign(g(Λ)) F with sign(z) = z/|z|; unitary, and Hermitian involutory
  /// when g(Λ) is real.
  MatrixType sign_dense() const {
    return CirculantFunction<Scalar>::dense_from_eigenvalues(base_.eigenvalues().cwiseQuotient(
        abs_eigs_.template cast<Scalar>()));
  }

 private:
  CirculantFunction<Scalar> base_;
  Vector<Real> abs_eigs_;
};

template <typename Scalar>
CirculantFunction<Scalar> circulant_fn(const CirculantMatrix<Scalar>& c, FunctionKind g) {
  return CirculantFunction<Scalar>(c, g);
}

/// g(C)⁻¹ d via two FFTs.
template <typename Scalar>
Vector<Scalar> circulant_apply_fn_inv(const CirculantMatrix<Scalar>& c, FunctionKind g, const Vector<Scalar>& d) {
  return CirculantFunction<Scalar>(c, g).apply_inverse(d);
}

template <typename Scalar>
AbsCirculant<Scalar> abs_circulant_fn(const CirculantMatrix<Scalar>& c, FunctionKind g) {
  return AbsCirculant<Scalar>(CirculantFunction<Scalar>(c, g));
}

/// A·x by embedding A in a circulant of size bit_ceil(2n − 1).
template <typename Scalar>
Vector<Scalar> toeplitz_matvec(const ToeplitzMatrix<Scalar>& a, const Vector<Scalar>& x) {
  const Eigen::Index n = a.size();
  if (x.size() != n) throw std::invalid_argument("toeplitz_matvec: dimension mismatch");
  const auto m = static_cast<Eigen::Index>(std::bit_ceil(static_cast<std::size_t>(2 * n - 1)));
  Vector<Scalar> col = Vector<Scalar>::Zero(m);
  for (Eigen::Index k = 0; k < n; ++k) col(k) = a.coeff(k);
  for (Eigen::Index k = 1; k < n; ++k) col(m - k) = a.coeff(-k);
  Vector<Scalar> padded = Vector<Scalar>::Zero(m);
  padded.head(n) = x;
  const Vector<Scalar> y = fft::inverse<Scalar>(fft::forward(col).cwiseProduct(fft::forward(padded)));
  return y.head(n);
}

/// T. Chan's optimal circulant: c_k = ((n − k)·a_k + k·a_{k−n}) / n.
template <typename Scalar>
CirculantMatrix<Scalar> optimal_circulant(const ToeplitzMatrix<Scalar>& a) {
  using Real = typename Scalar::value_type;
  const Eigen::Index n = a.size();
  Vector<Scalar> c(n);
  c(0) = a.coeff(0);
  for (Eigen::Index k = 1; k < n; ++k) {
    c(k) = (Real(n - k) * a.coeff(k) + Real(k) * a.coeff(k - n)) / Real(n);
  }
  return CirculantMatrix<Scalar>(std::move(c));
}

/// A_n[f]. For real-valued f the coefficients are made exactly conjugate
/// symmetric so that A is Hermitian to the bit.
ToeplitzMatrix<Complex> toeplitz_from_symbol(const GeneratingFunction& f, Eigen::Index n);

/// Explicit U_n, W_n with c_n[p] − A_n[p] = U_n − W_n for a degree-M
/// trigonometric polynomial p and n > 2M. U lives in the two M×M corners,
/// W on the band |j − k| ≤ M.
std::pair<CMatrix, CMatrix> split_correction(const TrigPoly& p, Eigen::Index n);

}  // namespace toepfun
