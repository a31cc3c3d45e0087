#include "toepfun/genfn.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>
#include <numbers>

namespace toepfun {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(Complex z, double theta) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw NonFiniteValue("symbol is not finite at theta = " + std::to_string(theta));
  }
}

double grid_point(std::size_t j, std::size_t size) {
  return -kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(size);
}

}  // namespace

int TrigPoly::degree() const {
  int m = 0;
  for (const auto& [k, rho] : coeffs) {
    if (rho != Complex{}) m = std::max(m, std::abs(k));
  }
  return m;
}

Complex TrigPoly::operator()(double theta) const {
  Complex sum{};
  for (const auto& [k, rho] : coeffs) sum += rho * std::polar(1.0, k * theta);
  return sum;
}

Complex TrigPoly::coeff(int k) const {
  auto it = coeffs.find(k);
  return it == coeffs.end() ? Complex{} : it->second;
}

double reduce_angle(double theta) {
  if (theta >= -kPi && theta < kPi) return theta;
  double r = std::fmod(theta + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  r -= kPi;
  return r >= kPi ? -kPi : r;
}

GeneratingFunction GeneratingFunction::trig_poly(TrigPoly p) {
  GeneratingFunction f;
  f.poly_ = std::make_shared<const TrigPoly>(std::move(p));
  f.finalize();
  return f;
}

GeneratingFunction GeneratingFunction::sampled(Formula formula) {
  if (!formula) throw std::invalid_argument("sampled symbol needs a callable");
  GeneratingFunction f;
  f.formula_ = std::move(formula);
  f.finalize();
  return f;
}

void GeneratingFunction::finalize() {
  double m = 0.0;
  bool real = true;
  for (std::size_t j = 0; j < kDefaultSupNormGrid; ++j) {
    const double theta = grid_point(j, kDefaultSupNormGrid);
    const Complex z = raw(theta);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      m = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    m = std::max(m, std::abs(z));
    if (z.imag() != 0.0) real = false;
  }
  sup_norm_ = m;
  // Trig polynomials are real iff ρ_{−k} = conj(ρ_k); roundoff in the samples
  // should not decide this.
  if (poly_) {
    real = true;
    for (const auto& [k, rho] : poly_->coeffs) {
      if (std::abs(rho - std::conj(poly_->coeff(-k))) > 0.0) real = false;
    }
  }
  real_valued_ = real;
}

Complex GeneratingFunction::raw(double theta) const {
  return poly_ ? (*poly_)(theta) : formula_(theta);
}

Complex GeneratingFunction::operator()(double theta) const { return raw(reduce_angle(theta)); }

std::size_t fourier_sample_count(const GeneratingFunction& f, Eigen::Index n, Eigen::Index oversample) {
  if (n < 1) throw std::invalid_argument("fourier_coeffs: n must be positive");
  if (oversample < 1) throw std::invalid_argument("fourier_coeffs: oversample must be positive");
  const auto un = static_cast<std::size_t>(n);
  std::size_t s = std::max({static_cast<std::size_t>(oversample) * (2 * un - 1), 4 * un, std::size_t{1} << 16});
  if (const auto* p = f.as_trig_poly()) s = std::max(s, static_cast<std::size_t>(2 * p->degree() + 1));
  return std::bit_ceil(s);
}

CVector fourier_coeffs(const GeneratingFunction& f, Eigen::Index n, Eigen::Index oversample) {
  const std::size_t s = fourier_sample_count(f, n, oversample);

  std::vector<Complex> samples(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double theta = grid_point(j, s);
    samples[j] = f.raw(theta);
    require_finite(samples[j], theta);
  }
  const Complex right_limit = f.raw(kPi);
  require_finite(right_limit, kPi);
  samples[0] = 0.5 * (samples[0] + right_limit);

  std::vector<Complex> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, samples);

  // θ_j = −π + 2πj/S, so e^{−ikθ_j} = (−1)^k e^{−2πi jk/S}.
  CVector a(2 * n - 1);
  const double inv_s = 1.0 / static_cast<double>(s);
  for (Eigen::Index k = -(n - 1); k <= n - 1; ++k) {
    const std::size_t bin = k >= 0 ? static_cast<std::size_t>(k) : s - static_cast<std::size_t>(-k);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    a(k + n - 1) = sign * inv_s * spectrum[bin];
  }
  return a;
}

double sup_norm(const GeneratingFunction& f, std::size_t grid_size) {
  if (grid_size < 2) throw std::invalid_argument("sup_norm: grid_size must be at least 2");
  double m = 0.0;
  for (std::size_t j = 0; j < grid_size; ++j) {
    const double theta = grid_point(j, grid_size);
    const Complex z = f(theta);
    require_finite(z, theta);
    m = std::max(m, std::abs(z));
  }
  return m;
}

const std::vector<NamedSymbol>& symbol_catalog() {
  static const std::vector<NamedSymbol> catalog = [] {
    using GF = GeneratingFunction;
    constexpr Complex i{0.0, 1.0};
    constexpr double amp = kPi / 2.0 - 1e-4;
    std::vector<NamedSymbol> c;
    c.push_back({"ex1", "(4/3) theta cos(theta)",
                 GF::sampled([](double t) { return Complex{4.0 / 3.0 * t * std::cos(t), 0.0}; })});
    c.push_back({"ex2", "2 theta cos(theta) + theta i",
                 GF::sampled([](double t) { return Complex{2.0 * t * std::cos(t), t}; })});
    c.push_back({"ex3", "-(theta^2/(2 pi) + 1e-3)",
                 GF::sampled([](double t) { return Complex{-(t * t / (2.0 * kPi) + 1e-3), 0.0}; })});
    c.push_back({"ex4", "-(theta^2/(2 pi) i + 1e-3)",
                 GF::sampled([i](double t) { return -(t * t / (2.0 * kPi) * i + 1e-3); })});
    c.push_back({"ex5a", "(pi/2 - 1e-4) cos(theta^2) - pi/4",
                 GF::sampled([](double t) { return Complex{amp * std::cos(t * t) - kPi / 4.0, 0.0}; })});
    c.push_back({"ex5b", "(pi/2 - 1e-4) cos(theta^2) + (theta/pi) i",
                 GF::sampled([](double t) { return Complex{amp * std::cos(t * t), t / kPi}; })});
    return c;
  }();
  return catalog;
}

const NamedSymbol& find_symbol(const std::string& name) {
  for (const auto& s : symbol_catalog()) {
    if (s.name == name) return s;
  }
  throw std::invalid_argument("unknown symbol '" + name + "'");
}

}  // namespace toepfun
