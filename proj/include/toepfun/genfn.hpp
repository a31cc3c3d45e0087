#pragma once

#include "toepfun/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace toepfun {

/// Finite trigonometric polynomial p(θ) = Σ_{|k|≤M} ρ_k e^{ikθ}.
struct TrigPoly {
  std::map<int, Complex> coeffs;

  int degree() const;
  Complex operator()(double theta) const;
  Complex coeff(int k) const;
};

/// A 2π-periodic complex symbol f, either a closed-form formula sampled on
/// [−π, π) or a finite trigonometric polynomial.
class GeneratingFunction {
 public:
  using Formula = std::function<Complex(double)>;

  static GeneratingFunction trig_poly(TrigPoly p);
  static GeneratingFunction sampled(Formula formula);

  /// Value of the periodic extension; θ is first reduced to [−π, π).
  Complex operator()(double theta) const;

  /// Unreduced formula value. Used for the left limit at +π.
  Complex raw(double theta) const;

  bool is_trig_poly() const noexcept { return poly_ != nullptr; }
  const TrigPoly* as_trig_poly() const noexcept { return poly_.get(); }

  /// ‖f‖_∞ on the default 2^16 grid, computed once at construction; NaN when
  /// some sample is not finite (sup_norm and fourier_coeffs then throw).
  double sup_norm_estimate() const noexcept { return sup_norm_; }

  /// True when every sample on the default grid has zero imaginary part.
  bool real_valued() const noexcept { return real_valued_; }

 private:
  GeneratingFunction() = default;
  void finalize();

  std::shared_ptr<const TrigPoly> poly_;
  Formula formula_;
  double sup_norm_ = 0.0;
  bool real_valued_ = true;
};

inline constexpr std::size_t kDefaultSupNormGrid = std::size_t{1} << 16;

/// Reduce θ to [−π, π).
double reduce_angle(double theta);

/// Fourier coefficients a_{−(n−1)}..a_{n−1} of f, stored at index k + n − 1.
///
/// f is sampled at S uniform points of [−π, π), S = bit_ceil(max(oversample·(2n−1),
/// 4n, 2^16, 2M+1)), and the trapezoid sums are evaluated with one FFT. The
/// sample at −π is the average of both one-sided formula values, which keeps
/// the quadrature second-order for symbols whose periodic extension jumps.
CVector fourier_coeffs(const GeneratingFunction& f, Eigen::Index n, Eigen::Index oversample = 1);

/// Number of sample points used by fourier_coeffs.
std::size_t fourier_sample_count(const GeneratingFunction& f, Eigen::Index n, Eigen::Index oversample = 1);

/// max |f(θ_j)| over the uniform grid θ_j = −π + 2πj/grid_size.
double sup_norm(const GeneratingFunction& f, std::size_t grid_size = kDefaultSupNormGrid);

struct NamedSymbol {
  std::string name;
  std::string formula;
  GeneratingFunction f;
};

/// The six experiment symbols ex1, ex2, ex3, ex4, ex5a, ex5b.
const std::vector<NamedSymbol>& symbol_catalog();

/// Catalog lookup; throws std::invalid_argument for unknown names.
const NamedSymbol& find_symbol(const std::string& name);

}  // namespace toepfun
