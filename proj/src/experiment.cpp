#include "toepfun/experiment.hpp"

#include "toepfun/io.hpp"
#include "toepfun/matfun.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace toepfun {

using nlohmann::json;

std::string SolverColumn::label() const {
  std::string s = to_string(solver);
  if (preconditioner == PreconditionerKind::CirculantFn) s += "+c";
  if (preconditioner == PreconditionerKind::AbsCirculantFn) s += "+absc";
  return s;
}

SolverColumn SolverColumn::parse(const std::string& text) {
  SolverColumn col;
  const auto plus = text.find('+');
  const std::string solver = text.substr(0, plus);
  const std::string prec = plus == std::string::npos ? "" : text.substr(plus + 1);
  if (solver == "cg") col.solver = SolverKind::CG;
  else if (solver == "cgnr") col.solver = SolverKind::CGNR;
  else if (solver == "minres") col.solver = SolverKind::MINRES;
  else if (solver == "gmres") col.solver = SolverKind::GMRES;
  else throw std::invalid_argument("unknown solver '" + solver + "' (cg, cgnr, minres, gmres)");
  if (prec.empty()) col.preconditioner = PreconditionerKind::None;
  else if (prec == "c") col.preconditioner = PreconditionerKind::CirculantFn;
  else if (prec == "absc") col.preconditioner = PreconditionerKind::AbsCirculantFn;
  else throw std::invalid_argument("unknown preconditioner '+" + prec + "' (+c, +absc)");
  return col;
}

ExperimentSpec ExperimentSpec::make(const json& symbol, FunctionKind g, std::vector<Eigen::Index> sizes,
                                    std::vector<SolverColumn> columns, std::uint64_t seed, SolverConfig config) {
  ExperimentSpec spec;
  spec.symbol_json = symbol;
  spec.symbol_name = symbol.is_string() ? symbol.get<std::string>() : "inline";
  spec.symbol = io::symbol_from_json(symbol);
  spec.g = g;
  spec.sizes = std::move(sizes);
  spec.columns = std::move(columns);
  spec.seed = seed;
  spec.config = config;
  spec.validate();
  return spec;
}

void ExperimentSpec::validate() const {
  config.validate();
  if (sizes.empty()) throw std::invalid_argument("experiment: no sizes");
  for (auto n : sizes) {
    if (n < 1) throw std::invalid_argument("experiment: sizes must be positive");
    if (n > kMaxDenseSize) throw std::invalid_argument("experiment: size exceeds the dense limit");
  }
  if (columns.empty()) throw std::invalid_argument("experiment: no solver columns");
  for (const auto& c : columns) {
    if (c.preconditioner == PreconditionerKind::AbsCirculantFn &&
        (c.solver != SolverKind::MINRES || !symbol.real_valued())) {
      throw std::invalid_argument("experiment: " + c.label() +
                                  " needs MINRES and a real-valued symbol (Hermitian g(A))");
    }
  }
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& cell_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : cell_id) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return seed ^ h;
}

unsigned worker_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TOEPFUN_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) return std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

TableCell run_cell(const SolverColumn& column, const LinearOperator<Complex>& op, const CVector& b,
                   const CirculantMatrix<Complex>& c, FunctionKind g, const SolverConfig& cfg) {
  TableCell cell;
  cell.column = column.label();
  try {
    std::optional<LinearOperator<Complex>> m_inv;
    if (column.preconditioner == PreconditionerKind::CirculantFn) m_inv = inverse_operator(circulant_fn(c, g));
    if (column.preconditioner == PreconditionerKind::AbsCirculantFn) m_inv = inverse_operator(abs_circulant_fn(c, g));

    if (column.solver == SolverKind::CG && op.hermitian && !detail::probe_hpd(op) &&
        detail::probe_hpd(negated(op))) {
      // Negative definite g(A): CG on −g(A)x = −b with −g(c) as preconditioner.
      cell.negated = true;
      std::optional<LinearOperator<Complex>> neg_m;
      if (m_inv) neg_m = negated(*m_inv);
      cell.report = solve(column.solver, negated(op), CVector(-b), neg_m ? &*neg_m : nullptr, cfg);
    } else {
      cell.report = solve(column.solver, op, b, m_inv ? &*m_inv : nullptr, cfg);
    }
  } catch (const NearSingularFunctionValue& e) {
    cell.error_code = "near_singular_function_value";
    cell.error_message = e.what();
  } catch (const std::exception& e) {
    cell.error_code = "error";
    cell.error_message = e.what();
  }
  return cell;
}

}  // namespace

TableResult run_table(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  TableResult result;
  result.spec = spec;
  result.rows.resize(spec.sizes.size());

  parallel_for(spec.sizes.size(), threads, [&](std::size_t i) {
    const Eigen::Index n = spec.sizes[i];
    TableRow& row = result.rows[i];
    row.n = n;
    row.seed = cell_seed(spec.seed, spec.symbol_name + "/" + to_string(spec.g) + "/" + std::to_string(n));
    row.complex_rhs = !spec.symbol.real_valued();

    const auto a = toeplitz_from_symbol(spec.symbol, n);
    const auto c = optimal_circulant(a);
    const bool hermitian = a.is_hermitian();
    CMatrix ga = matrix_function(spec.g, a.dense());
    if (hermitian) ga = (0.5 * (ga + ga.adjoint())).eval();
    const auto op = dense_operator(std::move(ga), hermitian, hermitian && spec.g == FunctionKind::Exp);
    const CVector b = random_rhs(n, row.seed, row.complex_rhs);

    for (const auto& column : spec.columns) row.cells.push_back(run_cell(column, op, b, c, spec.g, spec.config));
  });
  return result;
}

json TableResult::to_json() const {
  json cols = json::array();
  for (const auto& c : spec.columns) cols.push_back(c.label());
  json rows_json = json::array();
  for (const auto& row : rows) {
    json cells = json::array();
    for (const auto& cell : row.cells) {
      json jc = {{"column", cell.column}, {"negated", cell.negated}};
      if (cell.report) {
        jc["report"] = io::to_json(*cell.report);
      } else {
        jc["error_code"] = cell.error_code;
        jc["error_message"] = cell.error_message;
      }
      cells.push_back(std::move(jc));
    }
    rows_json.push_back({{"n", row.n}, {"seed", row.seed}, {"complex_rhs", row.complex_rhs}, {"cells", cells}});
  }
  return {{"symbol", spec.symbol_json},
          {"g", to_string(spec.g)},
          {"sizes", spec.sizes},
          {"columns", cols},
          {"seed", spec.seed},
          {"tol", spec.config.tol},
          {"max_iter", spec.config.max_iter},
          {"rows", rows_json}};
}

std::string TableResult::to_text() const {
  std::ostringstream os;
  constexpr int kWidth = 14;
  os << std::left << std::setw(8) << "n";
  for (const auto& c : spec.columns) os << std::right << std::setw(kWidth) << c.label();
  os << '\n';
  for (const auto& row : rows) {
    os << std::left << std::setw(8) << row.n;
    for (const auto& cell : row.cells) {
      std::string text;
      if (!cell.report) {
        text = cell.error_code;
      } else if (cell.report->status == SolveStatus::MaxIterExceeded) {
        text = ">" + std::to_string(spec.config.max_iter);
      } else if (!cell.report->converged) {
        text = to_string(cell.report->status);
      } else {
        text = std::to_string(cell.report->iterations);
      }
      os << std::right << std::setw(kWidth) << text;
    }
    os << '\n';
  }
  return os.str();
}

std::string to_string(SpectrumVariant v) {
  switch (v) {
    case SpectrumVariant::Raw: return "raw";
    case SpectrumVariant::Preconditioned: return "preconditioned";
    case SpectrumVariant::NormalEq: return "normal_eq";
    case SpectrumVariant::AbsPreconditioned: return "abs_preconditioned";
  }
  return "?";
}

SpectrumVariant spectrum_variant_from_string(const std::string& name) {
  for (auto v : {SpectrumVariant::Raw, SpectrumVariant::Preconditioned, SpectrumVariant::NormalEq,
                 SpectrumVariant::AbsPreconditioned}) {
    if (to_string(v) == name) return v;
  }
  throw std::invalid_argument("unknown spectrum variant '" + name + "'");
}

SpectrumRun run_spectrum(const GeneratingFunction& f, FunctionKind g, Eigen::Index n, SpectrumVariant variant) {
  if (n < 1 || n > kMaxDenseSize) throw std::invalid_argument("run_spectrum: n out of range");
  const auto a = toeplitz_from_symbol(f, n);
  const auto c = optimal_circulant(a);
  CMatrix ga = matrix_function(g, a.dense());
  if (a.is_hermitian()) ga = (0.5 * (ga + ga.adjoint())).eval();

  SpectrumRun run;
  switch (variant) {
    case SpectrumVariant::Raw:
      run.eigenvalues = spectrum(ga);
      break;
    case SpectrumVariant::Preconditioned:
      run.eigenvalues = spectrum(left_precondition(circulant_fn(c, g), ga));
      break;
    case SpectrumVariant::NormalEq: {
      const CMatrix p = left_precondition(circulant_fn(c, g), ga);
      const CMatrix normal = p.adjoint() * p;
      run.eigenvalues = hermitian_eigenvalues((0.5 * (normal + normal.adjoint())).eval()).cast<Complex>();
      break;
    }
    case SpectrumVariant::AbsPreconditioned:
      run.eigenvalues = spectrum(left_precondition(abs_circulant_fn(c, g), ga));
      break;
  }
  if (variant != SpectrumVariant::Raw) run.report = cluster_report(run.eigenvalues, Complex(1.0, 0.0), 0.1);
  Eigen::Index near = 0;
  for (Eigen::Index j = 0; j < run.eigenvalues.size(); ++j) {
    const Complex z = run.eigenvalues(j);
    if (std::abs(z - 1.0) <= 0.05 || std::abs(z + 1.0) <= 0.05) ++near;
  }
  run.pm_one_fraction = static_cast<double>(near) / static_cast<double>(n);
  return run;
}

std::vector<std::pair<std::string, FunctionKind>> experiment_pairs() {
  return {{"ex1", FunctionKind::Exp}, {"ex2", FunctionKind::Exp},  {"ex3", FunctionKind::Sin},
          {"ex4", FunctionKind::Sin}, {"ex5a", FunctionKind::Cos}, {"ex5b", FunctionKind::Cos}};
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

json VerificationReport::to_json() const {
  json list = json::array();
  std::size_t failed = 0;
  for (const auto& c : checks) {
    list.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    if (!c.passed) ++failed;
  }
  return {{"passed", failed == 0}, {"total", checks.size()}, {"failed", failed}, {"checks", list}};
}

namespace {

struct SymbolCase {
  std::string name;
  GeneratingFunction f;
  std::vector<FunctionKind> functions;
};

std::vector<SymbolCase> verification_symbols(bool include_catalog) {
  std::vector<SymbolCase> cases;
  constexpr Complex i{0.0, 1.0};
  cases.push_back({"trig:2cos", GeneratingFunction::trig_poly({{{-1, 1.0}, {1, 1.0}}}),
                   {FunctionKind::Exp, FunctionKind::Sin, FunctionKind::Cos}});
  cases.push_back({"trig:real2",
                   GeneratingFunction::trig_poly({{{0, 0.5}, {1, 0.8}, {-1, 0.8}, {2, 0.3 * i}, {-2, -0.3 * i}}}),
                   {FunctionKind::Exp, FunctionKind::Cos}});
  cases.push_back({"trig:complex2",
                   GeneratingFunction::trig_poly({{{0, 1.0}, {1, Complex(0.5, 0.5)}, {-2, 0.25}}}),
                   {FunctionKind::Exp, FunctionKind::Sin}});
  if (include_catalog) {
    for (const auto& [name, g] : experiment_pairs()) {
      std::vector<FunctionKind> fns{FunctionKind::Exp};
      if (g != FunctionKind::Exp) fns.push_back(g);
      cases.push_back({name, find_symbol(name).f, fns});
    }
  }
  return cases;
}

CMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng, double target_norm) {
  std::normal_distribution<double> normal;
  CMatrix m(n, n);
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = Complex(normal(rng), normal(rng));
  return m * (target_norm / spectral_norm(m));
}

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng, double target_norm) {
  CMatrix m = random_matrix(n, rng, 1.0);
  m = (m + m.adjoint()).eval();
  return m * (target_norm / spectral_norm(m));
}

CirculantMatrix<Complex> random_hermitian_circulant(Eigen::Index n, std::mt19937_64& rng, double scale, double shift) {
  std::normal_distribution<double> normal;
  CVector lambda(n);
  for (Eigen::Index j = 0; j < n; ++j) lambda(j) = shift + scale * normal(rng);
  return CirculantMatrix<Complex>(fft::inverse<Complex>(lambda));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

class Collector {
 public:
  void add(std::string name, bool passed, std::string detail) {
    report.checks.push_back({std::move(name), passed, std::move(detail)});
  }
  VerificationReport report;
};

}  // namespace

VerificationReport run_verification_suite(const std::vector<Eigen::Index>& sizes, const VerificationOptions& options) {
  Collector out;
  std::mt19937_64 rng(options.seed);
  const auto cases = verification_symbols(options.include_catalog);
  std::vector<Eigen::Index> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  auto has = [&](Eigen::Index n) { return std::binary_search(sorted.begin(), sorted.end(), n); };

  // structured
  for (const auto& sc : cases) {
    for (auto n : sorted) {
      const auto a = toeplitz_from_symbol(sc.f, n);
      const double bound = 2.0 * sup_norm(sc.f) + 1e-8;
      const double na = spectral_norm(a.dense());
      const double nc = spectral_norm(options.circulant_builder(a).dense());
      out.add("structured.norm_bounds[" + sc.name + ",n=" + std::to_string(n) + "]", na <= bound && nc <= bound,
              "|A|=" + fmt(na) + " |c|=" + fmt(nc) + " 2|f|=" + fmt(bound));
    }
  }
  {
    const int v = frobenius_optimality_violations(options.circulant_builder, 100, 16, rng());
    out.add("structured.frobenius_optimality", v == 0, std::to_string(v) + " of 100 trials improved");
  }
  for (auto n0 : sorted) {
    const Eigen::Index n = std::min<Eigen::Index>(n0, 64);
    double worst = 0.0;
    double min_quad = 1.0;
    for (auto g : {FunctionKind::Exp, FunctionKind::Sin, FunctionKind::Cos}) {
      const double shift = g == FunctionKind::Sin ? std::numbers::pi / 2 : 0.0;
      const auto c = random_hermitian_circulant(n, rng, 0.3, shift);
      const CVector d = random_rhs(n, rng(), true);
      const CMatrix gc = matrix_function(g, c.dense());
      const CVector back = circulant_apply_fn_inv(c, g, CVector(gc * d));
      worst = std::max(worst, (back - d).norm() / d.norm());
      const auto abs_c = abs_circulant_fn(c, g);
      min_quad = std::min(min_quad, d.dot(abs_c.apply_inverse(d)).real() / d.squaredNorm());
    }
    out.add("structured.fn_inverse_round_trip[n=" + std::to_string(n) + "]", worst <= 1e-9, "max rel err " + fmt(worst));
    out.add("structured.abs_inverse_positive[n=" + std::to_string(n) + "]", min_quad > 0,
            "min Re<d,|g(C)|^-1 d>/|d|^2 = " + fmt(min_quad));
  }
  {
    double worst = 0.0;
    for (Eigen::Index n : {1, 2, 3, 7, 33, 64, 100}) {
      CVector coeffs = random_rhs(2 * n - 1, rng(), true);
      const ToeplitzMatrix<Complex> a(coeffs);
      const CVector x = random_rhs(n, rng(), true);
      const CVector dense = a.dense() * x;
      worst = std::max(worst, (toeplitz_matvec(a, x) - dense).norm() / dense.norm());
    }
    out.add("structured.toeplitz_matvec", worst <= 1e-11, "max rel err " + fmt(worst));
  }

  // matfun
  for (auto n0 : sorted) {
    const Eigen::Index n = std::min<Eigen::Index>(n0, 32);
    const std::string tag = "[n=" + std::to_string(n) + "]";
    const CMatrix a = random_matrix(n, rng, 3.0);
    const CMatrix id = CMatrix::Identity(n, n);
    const double inv_err = (expm(a) * expm(CMatrix(-a)) - id).norm() / std::sqrt(double(n));
    out.add("matfun.exp_times_exp_neg" + tag, inv_err <= 1e-10, "rel err " + fmt(inv_err));

    const CMatrix s = sinm(a);
    const CMatrix c = cosm(a);
    const double pyth = (s * s + c * c - id).norm() / std::sqrt(double(n));
    out.add("matfun.pythagorean" + tag, pyth <= 1e-9, "rel err " + fmt(pyth));

    const CMatrix h = random_hermitian(n, rng, 4.0);
    const CMatrix eh = expm(h);
    const double min_eig = hermitian_eigenvalues(CMatrix(0.5 * (eh + eh.adjoint()))).minCoeff();
    out.add("matfun.hermitian_exp_positive" + tag, min_eig > 0, "min eig " + fmt(min_eig));

    const CMatrix b = random_matrix(n, rng, 2.0);
    const CMatrix eb = expm(b);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    std::string errs;
    for (int r : {2, 4, 8, 16}) {
      const double e = spectral_norm(CMatrix(eb - taylor_exp(b, r, 1)));
      if (!(e < prev || e < 1e-13)) monotone = false;
      prev = e;
      errs += fmt(e) + " ";
    }
    out.add("matfun.taylor_exp_converges" + tag, monotone, "errors r=2,4,8,16: " + errs);
  }

  // analysis
  for (const auto& sc : cases) {
    if (sc.f.is_trig_poly()) continue;
    for (auto g : sc.functions) {
      const std::string tag = sc.name + "," + to_string(g);
      for (auto n : sorted) {
        if (!has(2 * n)) continue;
        try {
          auto outliers = [&](Eigen::Index m) {
            const Eigen::VectorXd ev = hermitian_eigenvalues(preconditioned_normal_matrix(sc.f, g, m));
            return cluster_report(ev.cast<Complex>(), 1.0, 0.1).outlier_count;
          };
          const auto o1 = outliers(n);
          const auto o2 = outliers(2 * n);
          out.add("analysis.cluster_growth[" + tag + ",n=" + std::to_string(n) + "]", o2 <= o1 + 2,
                  "outliers " + std::to_string(o1) + " -> " + std::to_string(o2));
        } catch (const NearSingularFunctionValue& e) {
          out.add("analysis.cluster_growth[" + tag + ",n=" + std::to_string(n) + "]", true,
                  std::string("skipped: ") + e.what());
        }
      }
    }
  }
  for (const auto& sc : cases) {
    if (sc.name != "ex1" && sc.name != "ex3" && sc.name != "ex5a") continue;
    for (auto g : {FunctionKind::Exp, FunctionKind::Sin, FunctionKind::Cos}) {
      for (auto n : sorted) {
        if (!has(2 * n)) continue;
        auto cut = [&](Eigen::Index m) {
          const auto pair = matrix_function_pair(sc.f, g, m);
          const CMatrix d = pair.g_circulant - pair.g_toeplitz;
          return decompose_difference(d, 1e-2 * spectral_norm(d)).rank_cut;
        };
        const auto m1 = cut(n);
        const auto m2 = cut(2 * n);
        out.add("analysis.decomposition_growth[" + sc.name + "," + to_string(g) + ",n=" + std::to_string(n) + "]",
                m2 <= m1 + 2, "rank cut " + std::to_string(m1) + " -> " + std::to_string(m2));
      }
    }
  }
  for (const auto& sc : cases) {
    if (!sc.f.real_valued()) continue;
    for (auto g : {FunctionKind::Sin, FunctionKind::Cos}) {
      for (auto n : sorted) {
        const std::string name = "analysis.unitary_plus[" + sc.name + "," + to_string(g) + ",n=" + std::to_string(n) + "]";
        try {
          const auto rep = unitary_plus_check(sc.f, g, n);
          const double tol = 1e-10 * std::sqrt(double(n));
          out.add(name, rep.involution_error <= tol && rep.hermitian_error <= tol,
                  "|Q^2-I|=" + fmt(rep.involution_error) + " |Q-Q*|=" + fmt(rep.hermitian_error));
        } catch (const NearSingularFunctionValue& e) {
          out.add(name, true, std::string("skipped: ") + e.what());
        }
      }
    }
  }
  for (const auto& sc : cases) {
    const TrigPoly* p = sc.f.as_trig_poly();
    if (!p) continue;
    for (auto n : sorted) {
      if (n <= 2 * p->degree()) continue;
      const auto rep = split_correction_audit(*p, n);
      out.add("analysis.split_correction[" + sc.name + ",n=" + std::to_string(n) + "]", rep.holds,
              "|W|=" + fmt(rep.w_norm) + " bound=" + fmt(rep.w_bound) + " rank U=" + std::to_string(rep.u_rank) +
                  " cut=" + std::to_string(rep.rank_cut) + " 2M=" + std::to_string(2 * rep.degree));
    }
  }
  for (const auto& sc : cases) {
    for (auto n : sorted) {
      const auto rep = norm_bound_audit(sc.f, n);
      out.add("analysis.inverse_exp_bound[" + sc.name + ",n=" + std::to_string(n) + "]", rep.inverse_exp_bound_holds,
              "|(e^c)^-1|=" + fmt(rep.inverse_exp_norm) + " e^{2|f|}=" + fmt(std::exp(2 * rep.sup_norm)));
    }
  }
  return out.report;
}

}  // namespace toepfun
