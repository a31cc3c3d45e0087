#include "toepfun/io.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace toepfun;
using nlohmann::json;

TEST_CASE("trigpoly json round trip") {
  TrigPoly p;
  p.coeffs = {{-2, Complex(0.5, -1.0)}, {0, Complex(3.0, 0.0)}, {1, Complex(0.0, 0.25)}};
  const json j = io::trig_poly_to_json(p);
  CHECK(j["kind"] == "trigpoly");
  CHECK(j["coeffs"].size() == 3);
  const TrigPoly q = io::trig_poly_from_json(j);
  CHECK(q.coeffs == p.coeffs);
  CHECK(io::trig_poly_from_json(json::parse(j.dump())).coeffs == p.coeffs);
}

TEST_CASE("trigpoly json errors") {
  CHECK_THROWS_AS(io::trig_poly_from_json(json{{"kind", "formula"}}), std::invalid_argument);
  CHECK_THROWS_AS(io::trig_poly_from_json(json::parse(R"({"kind":"trigpoly","coeffs":[[1, 2]]})")),
                  std::invalid_argument);
  CHECK_THROWS(io::trig_poly_from_json(json::parse(R"({"kind":"trigpoly","coeffs":[["a", 1, 0]]})")));
}

TEST_CASE("symbol_from_json") {
  const auto ex3 = io::symbol_from_json("ex3");
  CHECK(std::abs(ex3(0.7) - find_symbol("ex3").f(0.7)) == 0.0);
  const auto inline_sym = io::symbol_from_json(json::parse(R"({"kind":"trigpoly","coeffs":[[1,1,0],[-1,1,0]]})"));
  CHECK(inline_sym.is_trig_poly());
  CHECK(std::abs(inline_sym(0.3) - 2.0 * std::cos(0.3)) < 1e-15);
  CHECK_THROWS_AS(io::symbol_from_json("ex9"), std::invalid_argument);
  CHECK_THROWS_AS(io::symbol_from_json(json(3)), std::invalid_argument);
}

TEST_CASE("complex arrays") {
  CVector v(3);
  v << Complex(1, 2), Complex(-0.1, 0), Complex(1e-300, -7e10);
  const json j = io::complex_array(v);
  CHECK(j.size() == 3);
  CHECK(j[0] == json::array({1.0, 2.0}));
  CHECK(io::complex_array_from_json(json::parse(j.dump())) == v);
  CHECK(io::complex_array_from_json(json::array()).size() == 0);
}

TEST_CASE("toeplitz and circulant json round trip") {
  std::mt19937_64 rng(7);
  const CVector coeffs = oracle::random_vector(9, rng);
  const ToeplitzMatrix<Complex> a(coeffs);
  const json ja = io::to_json(a);
  CHECK(ja["n"] == 5);
  CHECK(ja["coeffs"].size() == 9);
  const auto a2 = io::toeplitz_from_json(json::parse(ja.dump()));
  CHECK(a2.coeffs() == coeffs);
  CHECK(a2.dense() == a.dense());

  const CirculantMatrix<Complex> c(oracle::random_vector(6, rng));
  const json jc = io::to_json(c);
  CHECK(jc["n"] == 6);
  CHECK(io::circulant_from_json(json::parse(jc.dump())).first_col() == c.first_col());

  json bad = ja;
  bad["n"] = 4;
  CHECK_THROWS_AS(io::toeplitz_from_json(bad), std::invalid_argument);
  json bad_c = jc;
  bad_c["n"] = 7;
  CHECK_THROWS_AS(io::circulant_from_json(bad_c), std::invalid_argument);
}

TEST_CASE("report json fields") {
  SolveReport<Complex> r;
  r.solver = "cgnr";
  r.iterations = 4;
  r.converged = true;
  r.status = SolveStatus::Converged;
  r.residual_history = {1.0, 0.5, 1e-3, 1e-6, 1e-8};
  r.relres_final = 1e-8;
  r.wall_time_seconds = 0.25;
  json j = io::to_json(r);
  CHECK(j["solver"] == "cgnr");
  CHECK(j["iterations"] == 4);
  CHECK(j["converged"] == true);
  CHECK(j["status"] == "converged");
  CHECK(j["residual_history"].size() == 5);
  CHECK(j["relres_final"] == 1e-8);
  CHECK(j["wall_time"] == 0.25);
  CHECK_FALSE(j.contains("original_relres"));
  r.original_relres = 2e-8;
  CHECK(io::to_json(r)["original_relres"] == 2e-8);

  SpectrumReport s;
  s.n = 2;
  s.eigenvalues = CVector::Ones(2);
  s.outlier_indices = {1};
  s.outlier_count = 1;
  const json js = io::to_json(s);
  CHECK(js["outlier_count"] == 1);
  CHECK(js["cluster_radius"] == 0.1);
  CHECK(js["eigenvalues"].size() == 2);

  DecompositionReport d;
  d.sigma = Eigen::VectorXd::LinSpaced(3, 3.0, 1.0);
  d.rank_cut = 2;
  const json jd = io::to_json(d);
  CHECK(jd["sigma"].size() == 3);
  CHECK(jd["rank_cut"] == 2);
}

TEST_CASE("dense csv round trip") {
  std::mt19937_64 rng(11);
  const CMatrix m = oracle::random_matrix(4, 3, rng) * 1e5;
  std::stringstream ss;
  io::write_dense_csv(ss, m);
  const CMatrix back = io::read_dense_csv(ss);
  CHECK(back.rows() == 4);
  CHECK(back.cols() == 3);
  CHECK(back == m);

  std::stringstream ragged("1,0;2,0\n3,0\n");
  CHECK_THROWS(io::read_dense_csv(ragged));
}

TEST_CASE("points csv") {
  CVector v(2);
  v << Complex(1.5, -2), Complex(0, 0);
  std::stringstream ss;
  io::write_points_csv(ss, v);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "1.5,-2");
  std::getline(ss, line);
  CHECK(line == "0,0");
}
