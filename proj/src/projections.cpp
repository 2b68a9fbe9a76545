#include "wg/projections.hpp"

#include <stdexcept>

#include "wg/quadrature.hpp"

namespace wg {

Eigen::VectorXd project_edge(const PolygonalMesh& mesh, int e, int s, const ScalarFn& f,
                             int quad_order) {
  if (s < 0) throw std::invalid_argument("project_edge: degree must be >= 0");
  if (mesh.edge(e).length <= 0.0) throw std::invalid_argument("project_edge: degenerate edge");
  if (quad_order < 0) quad_order = effective_quad_order(2 * s + 2, true);
  const EdgeQuad q = edge_quadrature(mesh, e, quad_order);
  const EdgeBasis basis(mesh, e, s);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(s + 1);
  for (int p = 0; p < static_cast<int>(q.points.size()); ++p)
    coeffs += q.weights[p] * f(q.points[p]) * basis.eval_param(q.param[p]);
  return coeffs;  // orthonormal basis: pairings are the projection coefficients
}

Eigen::VectorXd project_cell_scalar(const PolygonalMesh& mesh, int c, int k, const ScalarFn& f,
                                    int quad_order) {
  if (k < 0) throw std::invalid_argument("project_cell_scalar: degree must be >= 0");
  if (mesh.cell(c).area <= 0.0) throw std::invalid_argument("project_cell_scalar: non-positive cell area");
  if (quad_order < 0) quad_order = effective_quad_order(2 * k + 2, true);
  ElementOps ops(mesh, c, quad_order);
  return ops.mass_solve(k, ops.load(k, f));
}

Eigen::VectorXd project_cell_vector(const PolygonalMesh& mesh, int c, int k,
                                    const std::function<Vec2(const Vec2&)>& f, int quad_order) {
  if (k < 0) throw std::invalid_argument("project_cell_vector: degree must be >= 0");
  if (mesh.cell(c).area <= 0.0) throw std::invalid_argument("project_cell_vector: non-positive cell area");
  if (quad_order < 0) quad_order = effective_quad_order(2 * k + 2, true);
  ElementOps ops(mesh, c, quad_order);
  const Eigen::VectorXd b = ops.vector_load(k, f);
  const int n = CellBasis::dimension(k);
  Eigen::VectorXd out(2 * n);
  out.head(n) = ops.mass_solve(k, b.head(n));
  out.tail(n) = ops.mass_solve(k, b.tail(n));
  return out;
}

double eval_edge_poly(const PolygonalMesh& mesh, int e, const Eigen::VectorXd& coeffs, double t) {
  const EdgeBasis basis(mesh, e, static_cast<int>(coeffs.size()) - 1);
  return basis.eval_param(t).dot(coeffs);
}

}  // namespace wg
