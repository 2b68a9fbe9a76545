#include "wg/problems.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wg {

std::vector<std::string> problem_names() { return {"sinsin", "quad"}; }

ManufacturedProblem make_problem(const std::string& name, const CoefficientField& a) {
  if (a.kind() == CoefficientField::Kind::Generic)
    throw std::invalid_argument("problem: manufactured sources need a const/affine coefficient");

  ManufacturedProblem p;
  p.name = name;
  p.a = a;
  if (name == "sinsin") {
    p.u = [](const Vec2& x) { return std::sin(M_PI * x.x()) * std::sin(M_PI * x.y()); };
    p.grad_u = [](const Vec2& x) {
      return Vec2(M_PI * std::cos(M_PI * x.x()) * std::sin(M_PI * x.y()),
                  M_PI * std::sin(M_PI * x.x()) * std::cos(M_PI * x.y()));
    };
    p.laplace_u = [](const Vec2& x) {
      return -2.0 * M_PI * M_PI * std::sin(M_PI * x.x()) * std::sin(M_PI * x.y());
    };
  } else if (name == "quad") {
    p.u = [](const Vec2& x) { return x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y()); };
    p.grad_u = [](const Vec2& x) {
      return Vec2((1.0 - 2.0 * x.x()) * x.y() * (1.0 - x.y()),
                  x.x() * (1.0 - x.x()) * (1.0 - 2.0 * x.y()));
    };
    p.laplace_u = [](const Vec2& x) {
      return -2.0 * x.y() * (1.0 - x.y()) - 2.0 * x.x() * (1.0 - x.x());
    };
  } else {
    std::ostringstream msg;
    msg << "unknown problem '" << name << "' (valid:";
    for (const auto& n : problem_names()) msg << " " << n;
    msg << ")";
    throw std::invalid_argument(msg.str());
  }

  const CoefficientField coeff = a;
  const Vec2 grad_a = a.gradient();
  const auto grad_u = p.grad_u;
  const auto laplace_u = p.laplace_u;
  p.f = [coeff, grad_a, grad_u, laplace_u](const Vec2& x) {
    return -grad_a.dot(grad_u(x)) - coeff(x) * laplace_u(x);
  };
  p.flux = [coeff, grad_u](const Vec2& x) { return Vec2(-coeff(x) * grad_u(x)); };
  return p;
}

}  // namespace wg
