#include "toepfun/experiment.hpp"
#include "toepfun/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <numbers>

using namespace toepfun;
using nlohmann::json;

namespace {

std::vector<SolverColumn> columns(std::initializer_list<const char*> labels) {
  std::vector<SolverColumn> out;
  for (const char* l : labels) out.push_back(SolverColumn::parse(l));
  return out;
}

json constant_symbol(double value) {
  return {{"kind", "trigpoly"}, {"coeffs", json::array({json::array({0, value, 0.0})})}};
}

void strip_wall_time(json& j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [key, value] : j.items()) strip_wall_time(value);
  } else if (j.is_array()) {
    for (auto& value : j) strip_wall_time(value);
  }
}

int iterations(const TableResult& t, std::size_t row, std::size_t col) {
  const auto& cell = t.rows.at(row).cells.at(col);
  REQUIRE(cell.report.has_value());
  return cell.report->iterations;
}

}  // namespace

TEST_CASE("solver column labels") {
  const auto c = SolverColumn::parse("minres+absc");
  CHECK(c.solver == SolverKind::MINRES);
  CHECK(c.preconditioner == PreconditionerKind::AbsCirculantFn);
  CHECK(c.label() == "minres+absc");
  for (const char* l : {"cg", "cg+c", "cgnr", "cgnr+c", "gmres", "gmres+c", "minres", "minres+c"}) {
    CHECK(SolverColumn::parse(l).label() == l);
  }
  CHECK_THROWS_AS(SolverColumn::parse("bicgstab"), std::invalid_argument);
  CHECK_THROWS_AS(SolverColumn::parse("cg+x"), std::invalid_argument);
}

TEST_CASE("experiment spec validation") {
  CHECK_NOTHROW(ExperimentSpec::make("ex3", FunctionKind::Sin, {16}, columns({"minres+absc"})));
  CHECK_THROWS_AS(ExperimentSpec::make("ex2", FunctionKind::Exp, {16}, columns({"minres+absc"})),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex3", FunctionKind::Sin, {16}, columns({"cg+absc"})), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex1", FunctionKind::Exp, {}, columns({"cg"})), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex1", FunctionKind::Exp, {0}, columns({"cg"})), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex1", FunctionKind::Exp, {8}, {}), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex9", FunctionKind::Exp, {8}, columns({"cg"})), std::invalid_argument);
  CHECK_THROWS_AS(ExperimentSpec::make("ex1", FunctionKind::Exp, {8}, columns({"cg"}), 1, SolverConfig{-1.0, 10}),
                  std::invalid_argument);
}

TEST_CASE("cell seeds") {
  CHECK(cell_seed(0, "") == 0xcbf29ce484222325ULL);
  // FNV-1a of "a"
  CHECK(cell_seed(0, "a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cell_seed(5, "a") == (0xaf63dc4c8601ec8cULL ^ 5));
  CHECK(cell_seed(kDefaultSeed, "ex1/exp/128") != cell_seed(kDefaultSeed, "ex1/exp/256"));
}

TEST_CASE("worker_threads honours TOEPFUN_THREADS") {
  setenv("TOEPFUN_THREADS", "1", 1);
  CHECK(worker_threads() == 1);
  setenv("TOEPFUN_THREADS", "junk", 1);
  CHECK(worker_threads() >= 1);
  unsetenv("TOEPFUN_THREADS");
}

TEST_CASE("constant symbol with the circulant preconditioner takes one iteration") {
  const auto spec = ExperimentSpec::make(constant_symbol(1.0), FunctionKind::Exp, {64}, columns({"cg+c"}));
  const auto t = run_table(spec);
  CHECK(iterations(t, 0, 0) == 1);
  CHECK(t.rows[0].cells[0].report->converged);
}

TEST_CASE("near-singular preconditioner is recorded in the cell") {
  const auto spec =
      ExperimentSpec::make(constant_symbol(0.0), FunctionKind::Sin, {8, 16}, columns({"gmres", "gmres+c"}));
  const auto t = run_table(spec);
  REQUIRE(t.rows.size() == 2);
  for (const auto& row : t.rows) {
    REQUIRE(row.cells.size() == 2);
    CHECK(row.cells[1].error_code == "near_singular_function_value");
    CHECK_FALSE(row.cells[1].report.has_value());
  }
  const json j = t.to_json();
  CHECK(j["rows"][0]["cells"][1]["error_code"] == "near_singular_function_value");
  CHECK(t.to_text().find("near_singular_function_value") != std::string::npos);
}

TEST_CASE("table schema") {
  const auto spec = ExperimentSpec::make("ex2", FunctionKind::Exp, {32, 16}, columns({"gmres+c", "cgnr", "gmres"}), 99,
                                         SolverConfig{1e-7, 500});
  const auto t = run_table(spec);
  const json j = t.to_json();
  CHECK(j["symbol"] == "ex2");
  CHECK(j["g"] == "exp");
  CHECK(j["seed"] == 99);
  CHECK(j["max_iter"] == 500);
  CHECK(j["columns"] == json::array({"gmres+c", "cgnr", "gmres"}));
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["n"] == 32);
  CHECK(j["rows"][1]["n"] == 16);
  CHECK(j["rows"][0]["complex_rhs"] == true);
  CHECK(j["rows"][0]["seed"] == cell_seed(99, "ex2/exp/32"));
  for (const auto& row : j["rows"]) {
    REQUIRE(row["cells"].size() == 3);
    CHECK(row["cells"][0]["column"] == "gmres+c");
    CHECK(row["cells"][1]["column"] == "cgnr");
    CHECK(row["cells"][2]["column"] == "gmres");
    for (const auto& cell : row["cells"]) {
      CHECK(cell["report"].contains("iterations"));
      CHECK(cell["report"].contains("residual_history"));
      CHECK(cell["report"].contains("status"));
    }
  }
  const std::string text = t.to_text();
  CHECK(text.find("gmres+c") != std::string::npos);
}

TEST_CASE("max_iter cap is rendered as >max_iter") {
  const auto spec = ExperimentSpec::make("ex2", FunctionKind::Exp, {64}, columns({"cgnr"}), kDefaultSeed,
                                         SolverConfig{1e-7, 50});
  const auto t = run_table(spec);
  CHECK(t.rows[0].cells[0].report->status == SolveStatus::MaxIterExceeded);
  CHECK_FALSE(t.rows[0].cells[0].report->converged);
  CHECK(t.to_text().find(">50") != std::string::npos);
}

TEST_CASE("tables are deterministic and independent of the thread count") {
  const auto spec = ExperimentSpec::make("ex5b", FunctionKind::Cos, {16, 32, 48, 64},
                                         columns({"cgnr+c", "gmres", "gmres+c"}));
  json serial = run_table(spec, 1).to_json();
  json again = run_table(spec, 1).to_json();
  json parallel = run_table(spec, 4).to_json();
  strip_wall_time(serial);
  strip_wall_time(again);
  strip_wall_time(parallel);
  CHECK(serial.dump() == again.dump());
  CHECK(serial.dump() == parallel.dump());
}

TEST_CASE("negative definite sin(A) is solved by CG after negation") {
  const auto spec = ExperimentSpec::make("ex3", FunctionKind::Sin, {64}, columns({"cg", "cg+c", "minres+absc"}));
  const auto t = run_table(spec);
  CHECK(t.rows[0].cells[0].negated);
  CHECK(t.rows[0].cells[1].negated);
  CHECK_FALSE(t.rows[0].cells[2].negated);
  for (const auto& cell : t.rows[0].cells) {
    REQUIRE(cell.report.has_value());
    CHECK(cell.report->converged);
  }
  CHECK(iterations(t, 0, 1) < iterations(t, 0, 0));
}

TEST_CASE("table examples at n = 128") {
  SUBCASE("ex1 exp") {
    const auto t = run_table(ExperimentSpec::make("ex1", FunctionKind::Exp, {128}, columns({"cg", "cg+c"})));
    CHECK(std::abs(iterations(t, 0, 1) - 20) <= 10);
    CHECK(iterations(t, 0, 0) > iterations(t, 0, 1));
  }
  SUBCASE("ex4 sin unpreconditioned cgnr") {
    const auto t = run_table(ExperimentSpec::make("ex4", FunctionKind::Sin, {128}, columns({"cgnr"})));
    // about 1094 in the reference run; b is random
    CHECK(iterations(t, 0, 0) >= 1094 * 0.75);
    CHECK(iterations(t, 0, 0) <= 1094 * 1.25);
  }
}

TEST_CASE("run_spectrum") {
  SUBCASE("constant 0, exp, raw") {
    const auto r = run_spectrum(GeneratingFunction::trig_poly(TrigPoly{{{0, Complex(0.0)}}}), FunctionKind::Exp, 16,
                                SpectrumVariant::Raw);
    CHECK((r.eigenvalues.array() - Complex(1.0)).abs().maxCoeff() < 1e-12);
    CHECK_FALSE(r.report.has_value());
    CHECK(r.pm_one_fraction == 1.0);
  }
  SUBCASE("ex1 exp preconditioned, n = 512") {
    const auto r = run_spectrum(find_symbol("ex1").f, FunctionKind::Exp, 512, SpectrumVariant::Preconditioned);
    REQUIRE(r.report.has_value());
    CHECK(r.report->cluster_radius == 0.1);
    CHECK(double(512 - r.report->outlier_count) / 512.0 >= 0.95);
  }
  SUBCASE("ex5a cos abs_preconditioned, n = 512") {
    const auto r = run_spectrum(find_symbol("ex5a").f, FunctionKind::Cos, 512, SpectrumVariant::AbsPreconditioned);
    CHECK(r.pm_one_fraction >= 0.9);
    Eigen::Index near_plus = 0, near_minus = 0;
    for (Eigen::Index j = 0; j < r.eigenvalues.size(); ++j) {
      near_plus += std::abs(r.eigenvalues(j) - 1.0) <= 0.05;
      near_minus += std::abs(r.eigenvalues(j) + 1.0) <= 0.05;
    }
    CHECK(near_plus > 0);
    CHECK(near_minus > 0);
  }
  SUBCASE("normal equations spectrum is real and nonnegative") {
    const auto r = run_spectrum(find_symbol("ex2").f, FunctionKind::Exp, 32, SpectrumVariant::NormalEq);
    CHECK(r.eigenvalues.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.eigenvalues.real().minCoeff() > 0.0);
  }
  CHECK(spectrum_variant_from_string("abs_preconditioned") == SpectrumVariant::AbsPreconditioned);
  CHECK_THROWS_AS(spectrum_variant_from_string("zoom"), std::invalid_argument);
  CHECK_THROWS_AS(run_spectrum(find_symbol("ex1").f, FunctionKind::Exp, 0, SpectrumVariant::Raw),
                  std::invalid_argument);
}

TEST_CASE("verification suite on trigonometric symbols") {
  VerificationOptions options;
  options.include_catalog = false;
  const auto rep = run_verification_suite({16, 32}, options);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
  CHECK(rep.all_passed());
  const json j = rep.to_json();
  CHECK(j["passed"] == true);
  CHECK(j["failed"] == 0);
  CHECK(j["total"] == rep.checks.size());
}

TEST_CASE("verification suite catches a corrupted circulant formula") {
  VerificationOptions options;
  options.include_catalog = false;
  // off by one: a_{k-n+1} in place of a_{k-n}
  options.circulant_builder = [](const ToeplitzMatrix<Complex>& a) {
    const Eigen::Index n = a.size();
    CVector c(n);
    c(0) = a.coeff(0);
    for (Eigen::Index k = 1; k < n; ++k) {
      c(k) = (double(n - k) * a.coeff(k) + double(k) * a.coeff(k - n + 1)) / double(n);
    }
    return CirculantMatrix<Complex>(c);
  };
  const auto rep = run_verification_suite({16}, options);
  CHECK_FALSE(rep.all_passed());
  bool caught = false;
  for (const auto& c : rep.checks) {
    if (c.name == "structured.frobenius_optimality") caught = !c.passed;
  }
  CHECK(caught);
}
