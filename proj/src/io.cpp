#include "toepfun/io.hpp"

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace toepfun::io {

json trig_poly_to_json(const TrigPoly& p) {
  json coeffs = json::array();
  for (const auto& [k, rho] : p.coeffs) coeffs.push_back({k, rho.real(), rho.imag()});
  return {{"kind", "trigpoly"}, {"coeffs", coeffs}};
}

TrigPoly trig_poly_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "trigpoly") {
    throw std::invalid_argument("symbol JSON: expected {\"kind\":\"trigpoly\", ...}");
  }
  TrigPoly p;
  for (const auto& entry : j.at("coeffs")) {
    if (!entry.is_array() || entry.size() != 3) throw std::invalid_argument("symbol JSON: coeff must be [k, re, im]");
    p.coeffs[entry[0].get<int>()] += Complex(entry[1].get<double>(), entry[2].get<double>());
  }
  return p;
}

GeneratingFunction symbol_from_json(const json& j) {
  if (j.is_string()) return find_symbol(j.get<std::string>()).f;
  return GeneratingFunction::trig_poly(trig_poly_from_json(j));
}

json complex_array(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

CVector complex_array_from_json(const json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = Complex(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  }
  return v;
}

json to_json(const ToeplitzMatrix<Complex>& a) { return {{"n", a.size()}, {"coeffs", complex_array(a.coeffs())}}; }

ToeplitzMatrix<Complex> toeplitz_from_json(const json& j) {
  const auto n = j.at("n").get<Eigen::Index>();
  CVector c = complex_array_from_json(j.at("coeffs"));
  if (c.size() != 2 * n - 1) throw std::invalid_argument("Toeplitz JSON: expected 2n-1 coefficients");
  return ToeplitzMatrix<Complex>(std::move(c));
}

json to_json(const CirculantMatrix<Complex>& c) {
  return {{"n", c.size()}, {"first_col", complex_array(c.first_col())}};
}

CirculantMatrix<Complex> circulant_from_json(const json& j) {
  const auto n = j.at("n").get<Eigen::Index>();
  CVector c = complex_array_from_json(j.at("first_col"));
  if (c.size() != n) throw std::invalid_argument("circulant JSON: expected n entries");
  return CirculantMatrix<Complex>(std::move(c));
}

json to_json(const SolveReport<Complex>& r) {
  json j = {{"solver", r.solver},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"status", to_string(r.status)},
            {"relres_final", r.relres_final},
            {"residual_history", r.residual_history},
            {"wall_time", r.wall_time_seconds}};
  if (r.original_relres) j["original_relres"] = *r.original_relres;
  return j;
}

json to_json(const SpectrumReport& r) {
  return {{"n", r.n},
          {"cluster_center", {r.cluster_center.real(), r.cluster_center.imag()}},
          {"cluster_radius", r.cluster_radius},
          {"outlier_count", r.outlier_count},
          {"outlier_indices", r.outlier_indices},
          {"eigenvalues", complex_array(r.eigenvalues)}};
}

json to_json(const DecompositionReport& r) {
  return {{"sigma", std::vector<double>(r.sigma.data(), r.sigma.data() + r.sigma.size())},
          {"rank_cut", r.rank_cut},
          {"tail_norm", r.tail_norm},
          {"frob_tail", r.frob_tail},
          {"eps", r.eps}};
}

void write_dense_csv(std::ostream& os, const CMatrix& m) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ';';
      os << m(i, j).real() << ',' << m(i, j).imag();
    }
    os << '\n';
  }
  os.precision(old);
}

CMatrix read_dense_csv(std::istream& is) {
  std::vector<std::vector<Complex>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<Complex> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ';')) {
      const auto comma = cell.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("dense CSV: cell must be re,im");
      row.emplace_back(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument("dense CSV: ragged rows");
    rows.push_back(std::move(row));
  }
  CMatrix m(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

void write_points_csv(std::ostream& os, const CVector& points) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < points.size(); ++i) os << points(i).real() << ',' << points(i).imag() << '\n';
  os.precision(old);
}

}  // namespace toepfun::io
