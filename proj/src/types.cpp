#include "toepfun/types.hpp"

#include <sstream>

namespace toepfun {

std::string to_string(FunctionKind g) {
  switch (g) {
    case FunctionKind::Exp: return "exp";
    case FunctionKind::Sin: return "sin";
    case FunctionKind::Cos: return "cos";
  }
  return "?";
}

FunctionKind function_kind_from_string(const std::string& name) {
  if (name == "exp") return FunctionKind::Exp;
  if (name == "sin") return FunctionKind::Sin;
  if (name == "cos") return FunctionKind::Cos;
  throw std::invalid_argument("unknown function '" + name + "' (expected exp, sin or cos)");
}

namespace {

std::string near_singular_message(Eigen::Index index, Complex value, double floor) {
  std::ostringstream os;
  os << "circulant function value g(lambda_" << index << ") = " << value
     << " has modulus at or below the singularity floor " << floor;
  return os.str();
}

std::string radius_message(double rho, double r) {
  std::ostringstream os;
  os << "spectral radius of (A - alpha I) is " << rho << ", not inside the radius of convergence " << r;
  return os.str();
}

}  // namespace

NearSingularFunctionValue::NearSingularFunctionValue(Eigen::Index index, Complex value, double floor)
    : std::runtime_error(near_singular_message(index, value, floor)), index_(index), value_(value), floor_(floor) {}

RadiusViolation::RadiusViolation(double spectral_radius, double radius)
    : std::runtime_error(radius_message(spectral_radius, radius)), spectral_radius_(spectral_radius), radius_(radius) {}

}  // namespace toepfun
