// Weak finite element functions: scalar pairs {w0, w_b}, vector fields
// {q0, q_b n_T}, and trace functions on the edge partition. Coefficients use
// the cell-monomial and orthonormal-edge bases.

#ifndef WG_WEAK_FUNCTIONS_HPP
#define WG_WEAK_FUNCTIONS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "wg/basis.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Stabilizer parameters. The primal form uses rho * h_T^{-1} regardless of
/// alpha; the mixed form uses rho * h_T^{alpha}.
struct StabilizerSpec {
  enum class Kind { Primal, Mixed };
  Kind kind = Kind::Primal;
  double rho = 1.0;
  double alpha = 1.0;

  double cell_weight(double h) const {
    if (rho <= 0.0) throw std::invalid_argument("stabilizer: rho must be positive");
    return kind == Kind::Primal ? rho / h : rho * std::pow(h, alpha);
  }
};

/// w = {w0, w_b}: w0 in P_k(T) per cell, w_b in P_s(e) per edge
/// (single-valued; one coefficient set per edge shared by both owners).
struct WeakScalarFunction {
  int k = 0, s = 0;
  bool homogeneous = false;  // membership in W_h^0: w_b = 0 on boundary edges
  Eigen::VectorXd cell_dofs;  // n_cells * dim P_k
  Eigen::VectorXd edge_dofs;  // n_edges * (s+1)

  static WeakScalarFunction zeros(const PolygonalMesh& mesh, int k, int s, bool homogeneous = false);

  int n_cell(int) const { return CellBasis::dimension(k); }
  int n_edge() const { return s + 1; }
  Eigen::VectorBlock<Eigen::VectorXd> cell(int c) {
    return cell_dofs.segment(c * CellBasis::dimension(k), CellBasis::dimension(k));
  }
  Eigen::VectorXd cell(int c) const {
    return cell_dofs.segment(c * CellBasis::dimension(k), CellBasis::dimension(k));
  }
  Eigen::VectorBlock<Eigen::VectorXd> edge(int e) { return edge_dofs.segment(e * (s + 1), s + 1); }
  Eigen::VectorXd edge(int e) const { return edge_dofs.segment(e * (s + 1), s + 1); }

  /// Check the W_h^0 invariant; throws if violated.
  void validate(const PolygonalMesh& mesh) const;
};

/// q = {q0, q_b n_T}: q0 in [P_k(T)]^2 per cell, q_b in P_s(e) the scalar
/// normal flux. SingleValued stores one coefficient set per edge relative to
/// the edge's reference normal (so the two owners' fluxes relative to their
/// own outward normals are exact negatives); PerCell stores an independent
/// set per (cell, edge) relative to the owner's outward normal.
struct WeakVectorField {
  enum class Sharing { SingleValued, PerCell };
  int k = 0, s = 0;
  Sharing sharing = Sharing::SingleValued;
  Eigen::VectorXd cell_dofs;  // n_cells * 2 dim P_k (blocked per cell)
  Eigen::VectorXd edge_dofs;  // SingleValued: n_edges*(s+1); PerCell: per cell-edge
  std::vector<int> cell_edge_offset;  // PerCell: offset of cell c's first edge block

  static WeakVectorField zeros(const PolygonalMesh& mesh, int k, int s,
                               Sharing sharing = Sharing::SingleValued);

  int n_cell_vec() const { return 2 * CellBasis::dimension(k); }
  int n_edge() const { return s + 1; }
  Eigen::VectorBlock<Eigen::VectorXd> cell(int c) {
    return cell_dofs.segment(c * n_cell_vec(), n_cell_vec());
  }
  Eigen::VectorXd cell(int c) const { return cell_dofs.segment(c * n_cell_vec(), n_cell_vec()); }

  /// Normal-flux coefficients as seen from cell c on its local edge le,
  /// relative to the cell's outward normal.
  Eigen::VectorXd flux_for_cell(const PolygonalMesh& mesh, int c, int le) const;
  /// Writable storage slot for (c, le); the caller owns sign bookkeeping in
  /// SingleValued mode.
  Eigen::VectorBlock<Eigen::VectorXd> flux_slot(const PolygonalMesh& mesh, int c, int le);
};

/// Piecewise polynomial on the edge partition (Lagrange multipliers, hybrid
/// traces u_b / u-hat).
struct TraceFunction {
  int s = 0;
  bool boundary_zero = false;
  Eigen::VectorXd edge_dofs;  // n_edges * (s+1)

  static TraceFunction zeros(const PolygonalMesh& mesh, int s, bool boundary_zero = false);

  Eigen::VectorBlock<Eigen::VectorXd> edge(int e) { return edge_dofs.segment(e * (s + 1), s + 1); }
  Eigen::VectorXd edge(int e) const { return edge_dofs.segment(e * (s + 1), s + 1); }
  void validate(const PolygonalMesh& mesh) const;
};

}  // namespace wg

#endif
