// Local L^2 projections: Q_b onto P_s(e), Q_0/Q_h onto P_k(T), and the
// componentwise vector projection.

#ifndef WG_PROJECTIONS_HPP
#define WG_PROJECTIONS_HPP

#include <functional>

#include <Eigen/Dense>

#include "wg/element.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Q_b f: coefficients in the orthonormal edge basis of P_s(e).
/// quad_order < 0 selects effective_quad_order(2s+2, generic).
Eigen::VectorXd project_edge(const PolygonalMesh& mesh, int e, int s, const ScalarFn& f,
                             int quad_order = -1);

/// Q_0 f / Q_h f: coefficients in the cell basis of P_k(T).
Eigen::VectorXd project_cell_scalar(const PolygonalMesh& mesh, int c, int k, const ScalarFn& f,
                                    int quad_order = -1);

/// Elementwise vector projection (blocked coefficient layout).
Eigen::VectorXd project_cell_vector(const PolygonalMesh& mesh, int c, int k,
                                    const std::function<Vec2(const Vec2&)>& f,
                                    int quad_order = -1);

/// Evaluate an edge polynomial given by orthonormal-Legendre coefficients at
/// parameter t in [-1,1].
double eval_edge_poly(const PolygonalMesh& mesh, int e, const Eigen::VectorXd& coeffs, double t);

}  // namespace wg

#endif
