#include "toepfun/analysis.hpp"

#include "toepfun/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace toepfun {

CVector spectrum(const CMatrix& op) {
  if (op.rows() > kMaxDenseSize) throw std::length_error("spectrum: n exceeds the dense limit");
  return eigenvalues(op);
}

SpectrumReport cluster_report(const CVector& eigs, Complex center, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("cluster_report: eps must be positive");
  SpectrumReport rep;
  rep.n = eigs.size();
  rep.cluster_center = center;
  rep.cluster_radius = eps;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(eigs.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(eigs(a) - center) > std::abs(eigs(b) - center);
  });
  rep.eigenvalues.resize(eigs.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    rep.eigenvalues(idx) = eigs(order[i]);
    if (std::abs(rep.eigenvalues(idx) - center) > eps) rep.outlier_indices.push_back(idx);
  }
  rep.outlier_count = static_cast<Eigen::Index>(rep.outlier_indices.size());
  return rep;
}

DecompositionReport decompose_difference(const CMatrix& d, double eps) {
  DecompositionReport rep;
  rep.eps = eps;
  rep.sigma = d.size() == 0 ? Eigen::VectorXd() : singular_values(d);
  const Eigen::Index m = rep.sigma.size();
  Eigen::Index cut = 0;
  while (cut < m && rep.sigma(cut) > eps) ++cut;
  rep.rank_cut = cut;
  rep.tail_norm = cut < m ? rep.sigma(cut) : 0.0;
  rep.frob_tail = cut < m ? rep.sigma.tail(m - cut).norm() : 0.0;
  return rep;
}

namespace {

template <typename Op>
CMatrix columnwise(const Op& m, const CMatrix& g) {
  CMatrix out(g.rows(), g.cols());
  for (Eigen::Index j = 0; j < g.cols(); ++j) out.col(j) = m.apply_inverse(g.col(j));
  return out;
}

}  // namespace

CMatrix left_precondition(const CirculantFunction<Complex>& m, const CMatrix& g) { return columnwise(m, g); }
CMatrix left_precondition(const AbsCirculant<Complex>& m, const CMatrix& g) { return columnwise(m, g); }

MatrixFunctionPair matrix_function_pair(const GeneratingFunction& f, FunctionKind g, Eigen::Index n) {
  auto a = toeplitz_from_symbol(f, n);
  auto c = optimal_circulant(a);
  CMatrix ga = matrix_function(g, a.dense());
  if (a.is_hermitian()) ga = (0.5 * (ga + ga.adjoint())).eval();
  CMatrix gc = matrix_function(g, c.dense());
  return {std::move(a), std::move(c), std::move(ga), std::move(gc)};
}

CMatrix preconditioned_normal_matrix(const GeneratingFunction& f, FunctionKind g, Eigen::Index n) {
  auto a = toeplitz_from_symbol(f, n);
  auto c = optimal_circulant(a);
  CMatrix ga = matrix_function(g, a.dense());
  if (a.is_hermitian()) ga = (0.5 * (ga + ga.adjoint())).eval();
  const CMatrix p = left_precondition(circulant_fn(c, g), ga);
  CMatrix normal = p.adjoint() * p;
  return (0.5 * (normal + normal.adjoint())).eval();
}

UnitaryPlusReport unitary_plus_check(const GeneratingFunction& f, FunctionKind g, Eigen::Index n, double eps) {
  if (g == FunctionKind::Exp) throw std::invalid_argument("unitary_plus_check: g must be sin or cos");
  auto a = toeplitz_from_symbol(f, n);
  auto c = optimal_circulant(a);
  CMatrix ga = matrix_function(g, a.dense());
  if (a.is_hermitian()) ga = (0.5 * (ga + ga.adjoint())).eval();

  const AbsCirculant<Complex> abs_c = abs_circulant_fn(c, g);
  const CMatrix p = left_precondition(abs_c, ga);
  const CMatrix q = abs_c.sign_dense();
  const CMatrix id = CMatrix::Identity(n, n);

  UnitaryPlusReport rep;
  rep.involution_error = (q * q - id).norm();
  rep.hermitian_error = (q - q.adjoint()).norm();
  rep.decomposition = decompose_difference(p - q, eps);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = abs_c.base().eigenvalues()(j).real();
    if (v > 0) ++rep.positive_signs;
    if (v < 0) ++rep.negative_signs;
  }
  const CVector eigs = spectrum(p);
  Eigen::Index near = 0;
  for (Eigen::Index j = 0; j < eigs.size(); ++j) {
    if (std::abs(eigs(j) - 1.0) <= 0.05 || std::abs(eigs(j) + 1.0) <= 0.05) ++near;
  }
  rep.pm_one_fraction = n == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(n);
  return rep;
}

NormBoundAudit norm_bound_audit(const GeneratingFunction& f, Eigen::Index n) {
  constexpr double kSlack = 1e-8;
  NormBoundAudit rep;
  rep.sup_norm = sup_norm(f);
  const auto a = toeplitz_from_symbol(f, n);
  const CMatrix c = optimal_circulant(a).dense();
  rep.toeplitz_norm = spectral_norm(a.dense());
  rep.circulant_norm = spectral_norm(c);
  const CMatrix exp_c = expm(c);
  rep.inverse_exp_norm = spectral_norm(exp_c.partialPivLu().inverse());
  rep.toeplitz_bound_holds = rep.toeplitz_norm <= 2.0 * rep.sup_norm + kSlack;
  rep.circulant_bound_holds = rep.circulant_norm <= 2.0 * rep.sup_norm + kSlack;
  rep.inverse_exp_bound_holds = rep.inverse_exp_norm <= std::exp(2.0 * rep.sup_norm) + kSlack;
  return rep;
}

SplitCorrectionAudit split_correction_audit(const TrigPoly& p, Eigen::Index n, double approx_error, double f_sup) {
  const auto [u, w] = split_correction(p, n);
  const GeneratingFunction pf = GeneratingFunction::trig_poly(p);
  if (f_sup < 0) f_sup = pf.sup_norm_estimate();

  SplitCorrectionAudit rep;
  rep.degree = p.degree();
  const double m = rep.degree;
  rep.w_norm = spectral_norm(w);
  rep.w_bound = m * (m + 1.0) * (approx_error + f_sup) / static_cast<double>(n);

  const Eigen::VectorXd su = singular_values(u);
  rep.u_rank = 0;
  if (su.size() > 0 && su(0) > 0) {
    while (rep.u_rank < su.size() && su(rep.u_rank) > 1e-12 * su(0)) ++rep.u_rank;
  }

  const auto a = toeplitz_from_symbol(pf, n);
  const CMatrix diff = optimal_circulant(a).dense() - a.dense();
  rep.rank_cut = decompose_difference(diff, rep.w_norm + 1e-12).rank_cut;
  rep.holds = rep.w_norm <= rep.w_bound + 1e-8 && rep.u_rank <= 2 * rep.degree && rep.rank_cut <= 2 * rep.degree;
  return rep;
}

int frobenius_optimality_violations(const CirculantBuilder& builder, int trials, Eigen::Index max_n,
                                    std::uint64_t seed, double eps) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<Eigen::Index> size(1, max_n);
  auto gaussian = [&] { return Complex(normal(rng), normal(rng)); };

  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index n = size(rng);
    CVector coeffs(2 * n - 1);
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) = gaussian();
    const ToeplitzMatrix<Complex> a(coeffs);
    const CMatrix dense_a = a.dense();
    const CMatrix c = builder(a).dense();
    const double base = (c - dense_a).norm();

    CVector d(n);
    for (Eigen::Index k = 0; k < n; ++k) d(k) = gaussian();
    const CMatrix dd = CirculantMatrix<Complex>(d).dense();
    const double step = eps / dd.norm();
    const double plus = (c + step * dd - dense_a).norm();
    const double minus = (c - step * dd - dense_a).norm();
    if (std::min(plus, minus) < base * (1.0 - 1e-13)) ++violations;
  }
  return violations;
}

}  // namespace toepfun
