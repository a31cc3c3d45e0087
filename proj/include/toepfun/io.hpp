#pragma once

#include "toepfun/analysis.hpp"
#include "toepfun/genfn.hpp"
#include "toepfun/krylov.hpp"
#include "toepfun/structured.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace toepfun::io {

using nlohmann::json;

/// {"kind":"trigpoly","coeffs":[[k, re, im], ...]}.
json trig_poly_to_json(const TrigPoly& p);
TrigPoly trig_poly_from_json(const json& j);

/// A catalog name ("ex1".."ex5b") or an inline trigpoly object.
GeneratingFunction symbol_from_json(const json& j);

json complex_array(const CVector& v);
CVector complex_array_from_json(const json& j);

/// {"n": n, "coeffs": [[re, im], ...]} with a_{−(n−1)}..a_{n−1}.
json to_json(const ToeplitzMatrix<Complex>& a);
ToeplitzMatrix<Complex> toeplitz_from_json(const json& j);

/// {"n": n, "first_col": [[re, im], ...]}.
json to_json(const CirculantMatrix<Complex>& c);
CirculantMatrix<Complex> circulant_from_json(const json& j);

json to_json(const SolveReport<Complex>& r);
json to_json(const SpectrumReport& r);
json to_json(const DecompositionReport& r);

/// One "re,im" cell per entry, rows separated by newlines, cells by ';'.
void write_dense_csv(std::ostream& os, const CMatrix& m);
CMatrix read_dense_csv(std::istream& is);

/// Headerless "re,im" rows.
void write_points_csv(std::ostream& os, const CVector& points);

}  // namespace toepfun::io
