#include "toepfun/structured.hpp"

namespace toepfun {

ToeplitzMatrix<Complex> toeplitz_from_symbol(const GeneratingFunction& f, Eigen::Index n) {
  CVector a = fourier_coeffs(f, n);
  if (f.real_valued()) {
    a(n - 1) = a(n - 1).real();
    for (Eigen::Index k = 1; k < n; ++k) a(n - 1 - k) = std::conj(a(n - 1 + k));
  }
  return ToeplitzMatrix<Complex>(std::move(a));
}

std::pair<CMatrix, CMatrix> split_correction(const TrigPoly& p, Eigen::Index n) {
  const int m = p.degree();
  if (n <= 2 * static_cast<Eigen::Index>(m)) {
    throw std::invalid_argument("split_correction: need n > 2M (n = " + std::to_string(n) +
                                ", M = " + std::to_string(m) + ")");
  }
  const double dn = static_cast<double>(n);
  CMatrix u = CMatrix::Zero(n, n);
  CMatrix w = CMatrix::Zero(n, n);
  for (int k = 1; k <= m; ++k) {
    const Complex corner_lower = (dn - k) / dn * p.coeff(-k);
    const Complex corner_upper = (dn - k) / dn * p.coeff(k);
    const Complex band_lower = k / dn * p.coeff(k);
    const Complex band_upper = k / dn * p.coeff(-k);
    // Diagonal at offset n − k wraps to the corners; offset k is the band.
    for (Eigen::Index i = 0; i + (n - k) < n; ++i) {
      u(i + (n - k), i) = corner_lower;
      u(i, i + (n - k)) = corner_upper;
    }
    for (Eigen::Index i = 0; i + k < n; ++i) {
      w(i + k, i) = band_lower;
      w(i, i + k) = band_upper;
    }
  }
  return {std::move(u), std::move(w)};
}

}  // namespace toepfun
