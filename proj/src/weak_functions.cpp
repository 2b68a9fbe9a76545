#include "wg/weak_functions.hpp"

namespace wg {

WeakScalarFunction WeakScalarFunction::zeros(const PolygonalMesh& mesh, int k, int s,
                                             bool homogeneous) {
  WeakScalarFunction w;
  w.k = k;
  w.s = s;
  w.homogeneous = homogeneous;
  w.cell_dofs = Eigen::VectorXd::Zero(mesh.n_cells() * CellBasis::dimension(k));
  w.edge_dofs = Eigen::VectorXd::Zero(mesh.n_edges() * (s + 1));
  return w;
}

void WeakScalarFunction::validate(const PolygonalMesh& mesh) const {
  if (!homogeneous) return;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge(e).boundary && edge(e).norm() != 0.0)
      throw std::invalid_argument("weak function: homogeneous flag set but w_b != 0 on boundary edge " +
                                  std::to_string(e));
}

WeakVectorField WeakVectorField::zeros(const PolygonalMesh& mesh, int k, int s, Sharing sharing) {
  WeakVectorField q;
  q.k = k;
  q.s = s;
  q.sharing = sharing;
  q.cell_dofs = Eigen::VectorXd::Zero(mesh.n_cells() * 2 * CellBasis::dimension(k));
  if (sharing == Sharing::SingleValued) {
    q.edge_dofs = Eigen::VectorXd::Zero(mesh.n_edges() * (s + 1));
  } else {
    q.cell_edge_offset.resize(mesh.n_cells() + 1, 0);
    for (int c = 0; c < mesh.n_cells(); ++c)
      q.cell_edge_offset[c + 1] =
          q.cell_edge_offset[c] + static_cast<int>(mesh.cell(c).edges.size()) * (s + 1);
    q.edge_dofs = Eigen::VectorXd::Zero(q.cell_edge_offset.back());
  }
  return q;
}

Eigen::VectorXd WeakVectorField::flux_for_cell(const PolygonalMesh& mesh, int c, int le) const {
  if (sharing == Sharing::PerCell)
    return edge_dofs.segment(cell_edge_offset[c] + le * (s + 1), s + 1);
  const int e = mesh.cell(c).edges[le];
  const double sign = mesh.cell(c).edge_sign[le];
  return sign * edge_dofs.segment(e * (s + 1), s + 1);
}

Eigen::VectorBlock<Eigen::VectorXd> WeakVectorField::flux_slot(const PolygonalMesh& mesh, int c,
                                                               int le) {
  if (sharing == Sharing::PerCell)
    return edge_dofs.segment(cell_edge_offset[c] + le * (s + 1), s + 1);
  const int e = mesh.cell(c).edges[le];
  return edge_dofs.segment(e * (s + 1), s + 1);
}

TraceFunction TraceFunction::zeros(const PolygonalMesh& mesh, int s, bool boundary_zero) {
  TraceFunction t;
  t.s = s;
  t.boundary_zero = boundary_zero;
  t.edge_dofs = Eigen::VectorXd::Zero(mesh.n_edges() * (s + 1));
  return t;
}

void TraceFunction::validate(const PolygonalMesh& mesh) const {
  if (!boundary_zero) return;
  for (int e = 0; e < mesh.n_edges(); ++e)
    if (mesh.edge(e).boundary && edge(e).norm() != 0.0)
      throw std::invalid_argument("trace function: boundary-zero flag set but nonzero on boundary edge " +
                                  std::to_string(e));
}

}  // namespace wg
