// Quadrature rules: Gauss-Legendre on edges, centroid-fan sub-triangulation
// with tensor Gauss rules on cells. A rule of order p integrates polynomials
// of (total) degree <= p exactly.

#ifndef WG_QUADRATURE_HPP
#define WG_QUADRATURE_HPP

#include <vector>

#include <Eigen/Dense>

#include "wg/mesh.hpp"

namespace wg {

// Fixed order used whenever a non-polynomial integrand (variable coefficient,
// generic source callback) participates; see also WG_QUAD_ORDER.
inline constexpr int kGenericQuadOrder = 10;

/// Gauss-Legendre rule on [-1, 1], exact for degree 2n-1.
struct QuadRule1D {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;
};
const QuadRule1D& gauss_legendre(int n);

/// Quadrature on a mesh edge. `param` is the coordinate in [-1,1] along the
/// reference direction verts[0] -> verts[1]; weights include the arclength
/// measure, so sum(weights) == edge length.
struct EdgeQuad {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
  Eigen::VectorXd param;
};
EdgeQuad edge_quadrature(const PolygonalMesh& mesh, int e, int order);

/// Quadrature on a polygonal cell, exact for bivariate polynomials of total
/// degree <= order. sum(weights) == |T|.
struct CellQuad {
  std::vector<Vec2> points;
  Eigen::VectorXd weights;
};
CellQuad cell_quadrature(const PolygonalMesh& mesh, int c, int order);

/// Effective quadrature order for an assembly whose exact polynomial part has
/// degree `poly_degree`: bumped to kGenericQuadOrder when a non-polynomial
/// integrand is present, then overridden by WG_QUAD_ORDER if set.
int effective_quad_order(int poly_degree, bool has_generic_integrand);

}  // namespace wg

#endif
