#pragma once

#include "toepfun/analysis.hpp"
#include "toepfun/genfn.hpp"
#include "toepfun/krylov.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toepfun {

inline constexpr std::uint64_t kDefaultSeed = 20160701;

/// One table column, written "solver[+c|+absc]" on the command line.
struct SolverColumn {
  SolverKind solver = SolverKind::CG;
  PreconditionerKind preconditioner = PreconditionerKind::None;

  std::string label() const;
  static SolverColumn parse(const std::string& text);
};

struct ExperimentSpec {
  std::string symbol_name;       ///< catalog name, or "inline"
  nlohmann::json symbol_json;    ///< as given: a name or a trigpoly object
  GeneratingFunction symbol = GeneratingFunction::trig_poly({});
  FunctionKind g = FunctionKind::Exp;
  std::vector<Eigen::Index> sizes;
  std::vector<SolverColumn> columns;
  std::uint64_t seed = kDefaultSeed;
  SolverConfig config;

  /// Catalog name or inline trigpoly JSON.
  static ExperimentSpec make(const nlohmann::json& symbol, FunctionKind g, std::vector<Eigen::Index> sizes,
                             std::vector<SolverColumn> columns, std::uint64_t seed = kDefaultSeed,
                             SolverConfig config = {});

  /// Throws std::invalid_argument when sizes, columns or pairings are invalid.
  void validate() const;
};

struct TableCell {
  std::string column;
  std::optional<SolveReport<Complex>> report;
  std::string error_code;  ///< set when the cell has no report
  std::string error_message;
  bool negated = false;    ///< solved −g(A)x = −b for a negative definite g(A)
};

struct TableRow {
  Eigen::Index n = 0;
  std::uint64_t seed = 0;
  bool complex_rhs = false;
  std::vector<TableCell> cells;
};

struct TableResult {
  ExperimentSpec spec;
  std::vector<TableRow> rows;

  nlohmann::json to_json() const;
  /// Aligned text table, one row per n, one column per solver.
  std::string to_text() const;
};

/// Seed for one table row: seed ⊕ FNV-1a("symbol/g/n").
std::uint64_t cell_seed(std::uint64_t seed, const std::string& cell_id);

/// Worker count from TOEPFUN_THREADS, else hardware concurrency.
unsigned worker_threads();

TableResult run_table(const ExperimentSpec& spec, unsigned threads = worker_threads());

enum class SpectrumVariant { Raw, Preconditioned, NormalEq, AbsPreconditioned };
std::string to_string(SpectrumVariant v);
SpectrumVariant spectrum_variant_from_string(const std::string& name);

struct SpectrumRun {
  CVector eigenvalues;
  std::optional<SpectrumReport> report;  ///< preconditioned variants, center 1, ε = 0.1
  double pm_one_fraction = 0.0;          ///< eigenvalues within 0.05 of ±1
};

SpectrumRun run_spectrum(const GeneratingFunction& f, FunctionKind g, Eigen::Index n, SpectrumVariant variant);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  nlohmann::json to_json() const;
};

struct VerificationOptions {
  bool include_catalog = true;  ///< experiment symbols; otherwise trigonometric polynomials only
  std::uint64_t seed = kDefaultSeed;
  CirculantBuilder circulant_builder = [](const ToeplitzMatrix<Complex>& a) { return optimal_circulant(a); };
};

/// Runs the structured, matfun and analysis property checks over `sizes`.
VerificationReport run_verification_suite(const std::vector<Eigen::Index>& sizes,
                                          const VerificationOptions& options = {});

/// (symbol, g) pairs of the experiments: ex1/exp, ex2/exp, ex3/sin, ex4/sin, ex5a/cos, ex5b/cos.
std::vector<std::pair<std::string, FunctionKind>> experiment_pairs();

}  // namespace toepfun
