// Direct solution of assembled systems: Cholesky for SPD matrices, sparse LU
// for the (symmetric indefinite) saddle-point systems, and static
// condensation onto the trace unknowns with local back-substitution.

#ifndef WG_SOLVE_HPP
#define WG_SOLVE_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wg/schemes.hpp"

namespace wg {

/// Direct solve with a relative-residual check (<= 1e-10); throws
/// std::runtime_error with dof diagnostics on a singular matrix or a bad
/// residual.
Eigen::VectorXd solve(const AssembledSystem& system);

/// assemble (done by caller) -> solve -> extract.
DiscreteSolution solve_system(const AssembledSystem& system);

/// Convenience: assemble per config.scheme, solve, extract.
DiscreteSolution solve_scheme(const PolygonalMesh& mesh, const SchemeConfig& config,
                              const CoefficientField& a, const SourceFn& f,
                              Exec exec = default_exec());

/// Schur complement of the cell-local blocks onto the trace unknowns, with
/// the data needed to recover the full solution.
class CondensedSystem {
public:
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> trace_globals;  // full-system index per condensed unknown

  int size() const { return static_cast<int>(rhs.size()); }

  /// Full solution vector from the trace solution.
  Eigen::VectorXd recover(const Eigen::VectorXd& trace_x) const;

private:
  friend CondensedSystem condense(const AssembledSystem&, Exec);
  struct CellBlock {
    std::vector<int> cell_globals;
    std::vector<int> adj;  // condensed trace indices this cell couples to
    Eigen::FullPivLU<Eigen::MatrixXd> lu;
    Eigen::MatrixXd coupling;  // K_c,lambda
    Eigen::VectorXd rhs_c;
  };
  std::vector<CellBlock> cells_;
  int full_size_ = 0;
};

/// Requires every cell dof to couple only to same-cell and trace dofs;
/// throws otherwise (or when a local block is singular, naming the cell).
CondensedSystem condense(const AssembledSystem& system, Exec exec = default_exec());

/// condense -> solve trace system -> back-substitute.
Eigen::VectorXd solve_condensed(const AssembledSystem& system, Exec exec = default_exec());

}  // namespace wg

#endif
