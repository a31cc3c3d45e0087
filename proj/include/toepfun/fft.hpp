#pragma once

#include "toepfun/types.hpp"

#include <unsupported/Eigen/FFT>

namespace toepfun::fft {

// One DFT convention for the whole library: with [F]_{jk} = e^{−2πi jk/n}/√n
// and C = F*ΛF, Λ is the unnormalized forward DFT of the first column of C.
//
//   forward(x)_j = Σ_k x_k e^{−2πi jk/n}
//   inverse(y)_k = (1/n) Σ_j y_j e^{+2πi jk/n}
//
// Eigen::FFT keeps plan caches inside the object, so each call owns its own.
// Its kissfft backend faults on length 1, where both transforms are the identity.

template <typename Scalar>
Vector<Scalar> forward(const Vector<Scalar>& x) {
  if (x.size() <= 1) return x;
  Eigen::FFT<typename Scalar::value_type> engine;
  Vector<Scalar> y(x.size());
  engine.fwd(y, x);
  return y;
}

template <typename Scalar>
Vector<Scalar> inverse(const Vector<Scalar>& y) {
  if (y.size() <= 1) return y;
  Eigen::FFT<typename Scalar::value_type> engine;
  Vector<Scalar> x(y.size());
  engine.inv(x, y);
  return x;
}

}  // namespace toepfun::fft
