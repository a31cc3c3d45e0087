#pragma once

// Independent reference computations for the unit tests. Nothing here calls
// into the FFT, expm or circulant code paths it is used to check.

#include "toepfun/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace oracle {

using toepfun::CMatrix;
using toepfun::Complex;
using toepfun::CVector;

/// Composite trapezoid rule on [−π, π] with `points` intervals, direct sums.
inline CVector trapezoid_coeffs(const std::function<Complex(double)>& f, Eigen::Index n, std::size_t points) {
  const double pi = std::numbers::pi;
  const double h = 2.0 * pi / static_cast<double>(points);
  CVector a(2 * n - 1);
  for (Eigen::Index k = -(n - 1); k <= n - 1; ++k) {
    Complex sum = 0.5 * (f(-pi) * std::polar(1.0, k * pi) + f(pi) * std::polar(1.0, -k * pi));
    for (std::size_t j = 1; j < points; ++j) {
      const double t = -pi + h * static_cast<double>(j);
      sum += f(t) * std::polar(1.0, -k * t);
    }
    a(k + n - 1) = sum * h / (2.0 * pi);
  }
  return a;
}

/// max |f| on [−π, π) by a fine grid followed by ternary refinement of every
/// local maximum.
inline double refined_sup(const std::function<Complex(double)>& f, std::size_t grid = 1u << 18) {
  const double pi = std::numbers::pi;
  const double h = 2.0 * pi / static_cast<double>(grid);
  auto g = [&](double t) { return std::abs(f(t)); };
  double best = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double t = -pi + h * static_cast<double>(j);
    best = std::max(best, g(t));
    if (j == 0 || j + 1 == grid) continue;
    if (g(t) >= g(t - h) && g(t) >= g(t + h)) {
      double lo = t - h, hi = t + h;
      for (int it = 0; it < 100; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        (g(m1) < g(m2) ? lo : hi) = (g(m1) < g(m2) ? m1 : m2);
      }
      best = std::max(best, g(0.5 * (lo + hi)));
    }
  }
  return best;
}

/// h(H) for Hermitian H through V h(D) V*.
inline CMatrix hermitian_function(const CMatrix& h, const std::function<Complex(double)>& fn) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CVector d = es.eigenvalues().unaryExpr([&](double x) { return fn(x); });
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/// (M*M)^{1/2}.
inline CMatrix abs_matrix(const CMatrix& m) {
  const CMatrix mm = m.adjoint() * m;
  return hermitian_function(0.5 * (mm + mm.adjoint()), [](double x) { return Complex(std::sqrt(std::max(x, 0.0))); });
}

/// e^A by plain Taylor series of A/2^k, then k squarings; long double free,
/// but a different scaling and no Paterson–Stockmeyer.
inline CMatrix taylor_expm(const CMatrix& a, int squarings = 10, int terms = 30) {
  const CMatrix b = a / std::ldexp(1.0, squarings);
  CMatrix sum = CMatrix::Identity(a.rows(), a.cols());
  CMatrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = (term * b / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

inline double norm2(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

/// Frobenius projection of A onto circulants: average of each wrapped diagonal.
inline CVector circulant_projection(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  CVector c = CVector::Zero(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) c((j - k + n) % n) += a(j, k);
  }
  return c / static_cast<double>(n);
}

/// Unitary Fourier matrix [F]_{jk} = e^{−2πi jk/n}/√n.
inline CMatrix fourier_matrix(Eigen::Index n) {
  CMatrix f(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                           -2.0 * std::numbers::pi * static_cast<double>(j * k % n) / static_cast<double>(n));
    }
  }
  return f;
}

/// Greedy nearest matching distance between two eigenvalue multisets.
inline double multiset_distance(CVector a, CVector b) {
  double worst = 0.0;
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double best = INFINITY;
    Eigen::Index arg = -1;
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(a(i) - b(j));
      if (d < best) best = d, arg = j;
    }
    used[static_cast<std::size_t>(arg)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(rows, cols);
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = Complex(normal(rng), normal(rng));
  return m;
}

inline CVector random_vector(Eigen::Index n, std::mt19937_64& rng) { return random_matrix(n, 1, rng).col(0); }

inline CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double norm) {
  CMatrix m = random_matrix(n, n, rng);
  m = (m + m.adjoint()).eval();
  return m * (norm / norm2(m));
}

inline double rel_frobenius(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace oracle
