// Per-cell assembly workspace: bases and quadrature evaluated once, plus the
// small dense matrices every scheme is built from. Vector-valued bases of
// [P_d(T)]^2 use the blocked layout: the first n functions are (phi_j, 0),
// the next n are (0, phi_j), n = dim P_d(T).

#ifndef WG_ELEMENT_HPP
#define WG_ELEMENT_HPP

#include <functional>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "wg/basis.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

using ScalarFn = std::function<double(const Vec2&)>;

class ElementOps {
public:
  ElementOps(const PolygonalMesh& mesh, int cell, int quad_order);

  const PolygonalMesh& mesh() const { return mesh_; }
  int cell_index() const { return cell_; }
  const MeshCell& geom() const { return mesh_.cell(cell_); }
  int n_edges() const { return static_cast<int>(geom().edges.size()); }
  int quad_order() const { return order_; }

  const CellBasis& basis(int degree);
  const CellQuad& quad() const { return quad_; }
  const EdgeQuad& edge_quad(int le) const { return equads_[le]; }
  const EdgeBasis& edge_basis(int le, int degree);

  // ---- cell integrals ----
  const Eigen::MatrixXd& mass(int degree);                     // (phi_i, phi_j)_T
  Eigen::MatrixXd cross_mass(int d1, int d2);                  // (phi^{d1}_i, phi^{d2}_j)_T
  Eigen::MatrixXd vector_cross_mass(int d1, int d2);           // (V^{d1}_i, V^{d2}_j)_T
  Eigen::MatrixXd weighted_mass(int degree, const ScalarFn& w);
  Eigen::MatrixXd vector_mass(int degree);                     // (V_i, V_j)_T
  Eigen::MatrixXd weighted_vector_mass(int degree, const ScalarFn& w);
  Eigen::VectorXd load(int degree, const ScalarFn& f);         // (f, phi_i)_T
  Eigen::VectorXd vector_load(int degree, const std::function<Vec2(const Vec2&)>& f);

  /// D(i,j) = ((div V_i), phi_j)_T, size 2n_v x n_s.
  Eigen::MatrixXd div_times(int deg_vec, int deg_scalar);
  /// G(i,j) = (V_i, grad phi_j)_T, size 2n_v x n_s.
  Eigen::MatrixXd grad_dot(int deg_vec, int deg_scalar);

  // ---- edge integrals on local edge le, with this cell's outward normal ----
  /// P(i,j) = <Lhat_i, phi_j>_e: also the Q_b projection of cell traces,
  /// since the edge basis is orthonormal. Size (s+1) x n.
  Eigen::MatrixXd edge_poly_trace(int le, int s, int deg_scalar);
  /// N(i,j) = <Lhat_i, V_j . n_T>_e, size (s+1) x 2n.
  Eigen::MatrixXd edge_poly_normal(int le, int s, int deg_vec);
  /// M(i,j) = <phi^{d1}_i, phi^{d2}_j>_e (cell-basis traces).
  Eigen::MatrixXd edge_trace_mass(int le, int d1, int d2);
  /// S(i,j) = <phi^{ds}_i, V^{dv}_j . n_T>_e, size n_s x 2n_v.
  Eigen::MatrixXd edge_scalar_normal(int le, int ds, int dv);

  // ---- weak operators (coefficients of the reconstruction) ----
  /// Weak gradient: maps local dofs [w0 (dim P_k); w_b per edge (s+1)] to
  /// coefficients in [P_r(T)]^2. Solves the local vector mass system.
  Eigen::MatrixXd weak_gradient_op(int k, int s, int r);
  /// Weak divergence: maps [q0 (2 dim P_k); q_b per edge (s+1), q_b already
  /// the scalar flux through n_T] to coefficients in P_r(T).
  Eigen::MatrixXd weak_divergence_op(int k, int s, int r);

  /// Flux lifting: maps [w (dim P_r... degree deg_w); mu per edge (s+1)] to
  /// q in [P_kv(T)]^2 with (c q, v)_T = (w, div v)_T - <mu, v.n>_dT for all v.
  Eigen::MatrixXd lift_flux_op(int deg_w, int s, int kv, const ScalarFn& c);

  /// Cholesky solve against the scalar/vector mass matrix (projections).
  Eigen::VectorXd mass_solve(int degree, const Eigen::VectorXd& rhs);

private:
  struct BasisAtQuad {
    Eigen::MatrixXd val, dx, dy;  // npts x n
  };
  struct EdgeBasisAtQuad {
    Eigen::MatrixXd val;  // npts x (s+1)
  };

  const BasisAtQuad& cell_eval(int degree);
  const Eigen::MatrixXd& cell_trace_eval(int le, int degree);   // cell basis at edge points
  const Eigen::MatrixXd& edge_basis_eval(int le, int degree);   // edge basis at edge points

  const PolygonalMesh& mesh_;
  int cell_;
  int order_;
  CellQuad quad_;
  std::vector<EdgeQuad> equads_;

  std::map<int, CellBasis> bases_;
  std::map<std::pair<int, int>, EdgeBasis> ebases_;
  std::map<int, BasisAtQuad> cell_evals_;
  std::map<int, Eigen::MatrixXd> masses_;
  std::map<int, Eigen::LLT<Eigen::MatrixXd>> mass_llt_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> trace_evals_;
  std::map<std::pair<int, int>, Eigen::MatrixXd> ebasis_evals_;
};

/// Evaluate a scalar cell polynomial (coefficients in the CellBasis of
/// `degree`) at a point.
double eval_cell_poly(const PolygonalMesh& mesh, int cell, int degree,
                      const Eigen::VectorXd& coeffs, const Vec2& x);
/// Evaluate a vector cell polynomial (blocked layout) at a point.
Vec2 eval_cell_poly_vec(const PolygonalMesh& mesh, int cell, int degree,
                        const Eigen::VectorXd& coeffs, const Vec2& x);

}  // namespace wg

#endif
