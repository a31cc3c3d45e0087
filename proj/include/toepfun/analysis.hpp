#pragma once

#include "toepfun/genfn.hpp"
#include "toepfun/structured.hpp"
#include "toepfun/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace toepfun {

/// Eigenvalues sorted by distance from a cluster center, farthest first.
struct SpectrumReport {
  Eigen::Index n = 0;
  CVector eigenvalues;
  Complex cluster_center{1.0, 0.0};
  double cluster_radius = 0.1;
  Eigen::Index outlier_count = 0;
  std::vector<Eigen::Index> outlier_indices;  ///< positions in `eigenvalues`
};

struct DecompositionReport {
  Eigen::VectorXd sigma;       ///< singular values, non-increasing
  Eigen::Index rank_cut = 0;   ///< M̂ = min{k : σ_{k+1} ≤ ε}
  double tail_norm = 0.0;      ///< σ_{M̂+1}, i.e. sigma[M̂]
  double frob_tail = 0.0;      ///< ‖(σ_{M̂+1}, σ_{M̂+2}, ...)‖₂
  double eps = 0.0;
};

/// Dense eigenvalues, residual-certified.
CVector spectrum(const CMatrix& op);

SpectrumReport cluster_report(const CVector& eigs, Complex center, double eps);

DecompositionReport decompose_difference(const CMatrix& d, double eps);

/// g(C)⁻¹·G, one circulant solve per column.
CMatrix left_precondition(const CirculantFunction<Complex>& m, const CMatrix& g);
CMatrix left_precondition(const AbsCirculant<Complex>& m, const CMatrix& g);

/// Everything the analysis needs about one (f, g, n) triple.
struct MatrixFunctionPair {
  ToeplitzMatrix<Complex> toeplitz;
  CirculantMatrix<Complex> circulant;
  CMatrix g_toeplitz;   ///< g(A_n[f])
  CMatrix g_circulant;  ///< g(c_n[f]) materialized
};

/// g(A_n[f]) and g(c_n[f]); g(A) is symmetrized when A_n[f] is Hermitian.
MatrixFunctionPair matrix_function_pair(const GeneratingFunction& f, FunctionKind g, Eigen::Index n);

/// [g(c)⁻¹g(A)]*[g(c)⁻¹g(A)] for the pair.
CMatrix preconditioned_normal_matrix(const GeneratingFunction& f, FunctionKind g, Eigen::Index n);

struct UnitaryPlusReport {
  double involution_error = 0.0;  ///< ‖Q² − I‖_F
  double hermitian_error = 0.0;   ///< ‖Q − Q*‖_F
  DecompositionReport decomposition;  ///< of |g(c)|⁻¹g(A) − Q
  double pm_one_fraction = 0.0;   ///< eigenvalues of |g(c)|⁻¹g(A) within 0.05 of ±1
  Eigen::Index positive_signs = 0;
  Eigen::Index negative_signs = 0;
};

/// |g(c)|⁻¹g(A) = Q + low rank + small norm for real-valued f and g ∈ {sin, cos},
/// with Q = F* sign(g(Λ)) F.
UnitaryPlusReport unitary_plus_check(const GeneratingFunction& f, FunctionKind g, Eigen::Index n,
                                     double eps = 0.1);

struct NormBoundAudit {
  double sup_norm = 0.0;
  double toeplitz_norm = 0.0;        ///< ‖A_n[f]‖₂
  double circulant_norm = 0.0;       ///< ‖c_n[f]‖₂
  double inverse_exp_norm = 0.0;     ///< ‖(e^{c_n[f]})⁻¹‖₂
  bool toeplitz_bound_holds = false;     ///< ‖A‖ ≤ 2‖f‖∞
  bool circulant_bound_holds = false;    ///< ‖c‖ ≤ 2‖f‖∞
  bool inverse_exp_bound_holds = false;  ///< ‖(e^c)⁻¹‖ ≤ e^{2‖f‖∞}
  bool all_hold() const { return toeplitz_bound_holds && circulant_bound_holds && inverse_exp_bound_holds; }
};

/// Dense audit of ‖A‖, ‖c‖ ≤ 2‖f‖∞ and ‖(e^c)⁻¹‖ ≤ e^{2‖f‖∞}, 1e−8 slack.
NormBoundAudit norm_bound_audit(const GeneratingFunction& f, Eigen::Index n);

struct SplitCorrectionAudit {
  double w_norm = 0.0;        ///< ‖W_n‖₂
  double w_bound = 0.0;       ///< (1/n)M(M+1)(ε + ‖f‖∞)
  Eigen::Index u_rank = 0;    ///< numerical rank of U_n
  Eigen::Index rank_cut = 0;  ///< M̂ of c − A at ε = ‖W‖₂ + 1e−12
  int degree = 0;
  bool holds = false;
};

/// Checks the U_n − W_n split of c_n[p] − A_n[p]: ‖W‖ bound, rank U ≤ 2M and
/// the rank cut of c − A. `approx_error` is ‖f − p‖∞ (0 when p is the symbol).
SplitCorrectionAudit split_correction_audit(const TrigPoly& p, Eigen::Index n, double approx_error = 0.0,
                                            double f_sup = -1.0);

/// Builds a circulant from a Toeplitz matrix; lets tests substitute a
/// deliberately wrong formula.
using CirculantBuilder = std::function<CirculantMatrix<Complex>(const ToeplitzMatrix<Complex>&)>;

/// Random Toeplitz matrices (n ≤ max_n): counts trials where a circulant
/// perturbation C + εD beats the builder's C in ‖· − A‖_F.
int frobenius_optimality_violations(const CirculantBuilder& builder, int trials, Eigen::Index max_n,
                                    std::uint64_t seed, double eps = 1e-3);

}  // namespace toepfun
