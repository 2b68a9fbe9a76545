#include "wg/weak_operators.hpp"

#include <stdexcept>

#include "wg/quadrature.hpp"

namespace wg {

namespace {

int op_quad_order(int k, int s, int r) {
  return effective_quad_order(2 * std::max(std::max(k, s), r) + 2, false);
}

}  // namespace

Eigen::VectorXd weak_gradient(const PolygonalMesh& mesh, const WeakScalarFunction& w, int c, int r) {
  ElementOps ops(mesh, c, op_quad_order(w.k, w.s, r));
  const Eigen::MatrixXd G = ops.weak_gradient_op(w.k, w.s, r);
  const int nk = CellBasis::dimension(w.k);
  Eigen::VectorXd loc(G.cols());
  loc.head(nk) = w.cell(c);
  int at = nk;
  const MeshCell& T = mesh.cell(c);
  for (std::size_t le = 0; le < T.edges.size(); ++le) {
    loc.segment(at, w.s + 1) = w.edge(T.edges[le]);
    at += w.s + 1;
  }
  return G * loc;
}

Eigen::VectorXd weak_divergence(const PolygonalMesh& mesh, const WeakVectorField& q, int c, int r) {
  ElementOps ops(mesh, c, op_quad_order(q.k, q.s, r));
  const Eigen::MatrixXd D = ops.weak_divergence_op(q.k, q.s, r);
  const int nk2 = 2 * CellBasis::dimension(q.k);
  Eigen::VectorXd loc(D.cols());
  loc.head(nk2) = q.cell(c);
  int at = nk2;
  const MeshCell& T = mesh.cell(c);
  for (std::size_t le = 0; le < T.edges.size(); ++le) {
    loc.segment(at, q.s + 1) = q.flux_for_cell(mesh, c, static_cast<int>(le));
    at += q.s + 1;
  }
  return D * loc;
}

double stabilizer_primal(const PolygonalMesh& mesh, const WeakScalarFunction& w,
                         const WeakScalarFunction& phi, const StabilizerSpec& spec) {
  if (w.k != phi.k || w.s != phi.s)
    throw std::invalid_argument("stabilizer_primal: arguments live in different spaces");
  if (spec.rho <= 0.0) throw std::invalid_argument("stabilizer: rho must be positive");
  const int s = w.s;
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    ElementOps ops(mesh, c, op_quad_order(w.k, s, 0));
    const MeshCell& T = mesh.cell(c);
    const double weight = spec.rho / T.diameter;
    for (int le = 0; le < static_cast<int>(T.edges.size()); ++le) {
      const int e = T.edges[le];
      const Eigen::MatrixXd P = ops.edge_poly_trace(le, s, w.k);  // Q_b of the trace
      const Eigen::VectorXd dw = P * w.cell(c) - w.edge(e);
      const Eigen::VectorXd dp = P * phi.cell(c) - phi.edge(e);
      total += weight * dw.dot(dp);  // orthonormal edge basis: Gram = I
    }
  }
  return total;
}

double stabilizer_mixed(const PolygonalMesh& mesh, const WeakVectorField& q,
                        const WeakVectorField& v, const StabilizerSpec& spec) {
  if (q.k != v.k || q.s != v.s)
    throw std::invalid_argument("stabilizer_mixed: arguments live in different spaces");
  if (spec.rho <= 0.0) throw std::invalid_argument("stabilizer: rho must be positive");
  const int s = q.s;
  double total = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    ElementOps ops(mesh, c, op_quad_order(q.k, s, 0));
    const MeshCell& T = mesh.cell(c);
    const double weight = spec.rho * std::pow(T.diameter, spec.alpha);
    for (int le = 0; le < static_cast<int>(T.edges.size()); ++le) {
      const Eigen::MatrixXd N = ops.edge_poly_normal(le, s, q.k);
      const Eigen::VectorXd dq = N * q.cell(c) - q.flux_for_cell(mesh, c, le);
      const Eigen::VectorXd dv = N * v.cell(c) - v.flux_for_cell(mesh, c, le);
      total += weight * dq.dot(dv);
    }
  }
  return total;
}

}  // namespace wg
