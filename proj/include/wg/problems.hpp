// Manufactured problems: a chosen exact u with homogeneous boundary values
// and the analytically derived source f = -div(a grad u).

#ifndef WG_PROBLEMS_HPP
#define WG_PROBLEMS_HPP

#include <functional>
#include <string>
#include <vector>

#include "wg/coefficient.hpp"
#include "wg/mesh.hpp"

namespace wg {

struct ManufacturedProblem {
  std::string name;
  CoefficientField a;
  std::function<double(const Vec2&)> u;
  std::function<Vec2(const Vec2&)> grad_u;
  std::function<double(const Vec2&)> laplace_u;
  std::function<double(const Vec2&)> f;     // -grad(a).grad(u) - a laplace(u)
  std::function<Vec2(const Vec2&)> flux;    // q = -a grad u
};

/// Built-ins on the unit square: "sinsin" (u = sin(pi x) sin(pi y)) and
/// "quad" (u = x(1-x)y(1-y)). The coefficient must be constant or affine so
/// that f stays in closed form.
ManufacturedProblem make_problem(const std::string& name, const CoefficientField& a);
std::vector<std::string> problem_names();

}  // namespace wg

#endif
