#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace toepfun {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest size for which dense materialization is offered.
inline constexpr Eigen::Index kMaxDenseSize = 4096;

/// Scalar functions g for which g(A) and g(C) are formed.
enum class FunctionKind { Exp, Sin, Cos };

template <typename Scalar>
Scalar apply_function(FunctionKind g, const Scalar& z) {
  switch (g) {
    case FunctionKind::Exp: return std::exp(z);
    case FunctionKind::Sin: return std::sin(z);
    case FunctionKind::Cos: return std::cos(z);
  }
  return z;
}

std::string to_string(FunctionKind g);
FunctionKind function_kind_from_string(const std::string& name);

/// Raised when a circulant function has an eigenvalue g(λ_j) at or below the
/// singularity floor, so g(C) cannot serve as a preconditioner.
class NearSingularFunctionValue : public std::runtime_error {
 public:
  NearSingularFunctionValue(Eigen::Index index, Complex value, double floor);

  Eigen::Index index() const noexcept { return index_; }
  Complex value() const noexcept { return value_; }
  double floor() const noexcept { return floor_; }

 private:
  Eigen::Index index_;
  Complex value_;
  double floor_;
};

/// Raised when a Taylor expansion is evaluated outside its disc of convergence.
class RadiusViolation : public std::runtime_error {
 public:
  RadiusViolation(double spectral_radius, double radius);

  double spectral_radius() const noexcept { return spectral_radius_; }
  double radius() const noexcept { return radius_; }

 private:
  double spectral_radius_;
  double radius_;
};

class NonFiniteValue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace toepfun
