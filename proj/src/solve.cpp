#include "wg/solve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <stdexcept>

#include "wg/parallel.hpp"

namespace wg {

namespace {

void check_residual(const AssembledSystem& sys, const Eigen::VectorXd& x) {
  const double bnorm = sys.rhs.norm();
  const double res = (sys.matrix * x - sys.rhs).norm() / std::max(bnorm, 1.0);
  if (!(res <= 1e-10))
    throw std::runtime_error("solve: relative residual " + std::to_string(res) + " for " +
                             scheme_name(sys.scheme) + " system of size " +
                             std::to_string(sys.size()));
}

}  // namespace

Eigen::VectorXd solve(const AssembledSystem& sys) {
  if (sys.matrix.rows() != sys.matrix.cols() || sys.matrix.rows() != sys.rhs.size())
    throw std::invalid_argument("solve: system is not square");
  Eigen::VectorXd x;
  if (sys.spd) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.matrix);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("solve: Cholesky factorization failed on " +
                               scheme_name(sys.scheme) + " system of size " +
                               std::to_string(sys.size()) + " (matrix not SPD)");
    x = llt.solve(sys.rhs);
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(sys.matrix);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve: LU factorization failed on " + scheme_name(sys.scheme) +
                               " system of size " + std::to_string(sys.size()) +
                               " (singular matrix; " + std::to_string(sys.n_trace_dofs()) +
                               " trace dofs)");
    x = lu.solve(sys.rhs);
  }
  check_residual(sys, x);
  return x;
}

DiscreteSolution solve_system(const AssembledSystem& sys) { return extract_solution(sys, solve(sys)); }

DiscreteSolution solve_scheme(const PolygonalMesh& mesh, const SchemeConfig& config,
                              const CoefficientField& a, const SourceFn& f, Exec exec) {
  return solve_system(assemble(mesh, config, a, f, exec));
}

CondensedSystem condense(const AssembledSystem& sys, Exec exec) {
  const int n = sys.size();
  const int ncells = sys.mesh->n_cells();

  std::vector<int> owner(n, -1), local_of(n, -1), trace_of(n, -1);
  CondensedSystem out;
  out.full_size_ = n;
  out.cells_.resize(ncells);
  for (int i = 0; i < n; ++i) {
    const DofInfo& d = sys.dofs[i];
    if (d.kind == DofInfo::Kind::Cell) {
      owner[i] = d.owner;
      local_of[i] = static_cast<int>(out.cells_[d.owner].cell_globals.size());
      out.cells_[d.owner].cell_globals.push_back(i);
    } else {
      trace_of[i] = static_cast<int>(out.trace_globals.size());
      out.trace_globals.push_back(i);
    }
  }
  const int nt = static_cast<int>(out.trace_globals.size());
  if (nt == 0) throw std::invalid_argument("condense: system has no trace dofs");

  // Gather blocks. Column-major sparse iteration: entry (row i, col j).
  std::vector<Eigen::MatrixXd> Kcc(ncells), Kcl(ncells);
  std::vector<std::vector<Eigen::Triplet<double>>> Klc(ncells);
  std::vector<Eigen::Triplet<double>> Kll;
  std::vector<std::map<int, int>> adj(ncells);  // condensed trace idx -> column slot

  for (int c = 0; c < ncells; ++c) {
    const int nc = static_cast<int>(out.cells_[c].cell_globals.size());
    Kcc[c] = Eigen::MatrixXd::Zero(nc, nc);
  }
  // first pass: adjacency (which trace dofs each cell touches)
  for (int j = 0; j < sys.matrix.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (owner[i] >= 0 && trace_of[j] >= 0) adj[owner[i]].emplace(trace_of[j], 0);
      if (trace_of[i] >= 0 && owner[j] >= 0) adj[owner[j]].emplace(trace_of[i], 0);
    }
  }
  for (int c = 0; c < ncells; ++c) {
    int slot = 0;
    for (auto& kv : adj[c]) kv.second = slot++;
    out.cells_[c].adj.resize(adj[c].size());
    for (const auto& kv : adj[c]) out.cells_[c].adj[kv.second] = kv.first;
    Kcl[c] = Eigen::MatrixXd::Zero(out.cells_[c].cell_globals.size(), adj[c].size());
  }
  // second pass: fill blocks
  for (int j = 0; j < sys.matrix.outerSize(); ++j) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      const double v = it.value();
      if (owner[i] >= 0 && owner[j] >= 0) {
        if (owner[i] != owner[j])
          throw std::invalid_argument("condense: cell dofs of cells " + std::to_string(owner[i]) +
                                      " and " + std::to_string(owner[j]) +
                                      " are directly coupled; system is not condensable");
        Kcc[owner[i]](local_of[i], local_of[j]) += v;
      } else if (owner[i] >= 0) {
        Kcl[owner[i]](local_of[i], adj[owner[i]].at(trace_of[j])) += v;
      } else if (owner[j] >= 0) {
        Klc[owner[j]].emplace_back(trace_of[i], local_of[j], v);
      } else {
        Kll.emplace_back(trace_of[i], trace_of[j], v);
      }
    }
  }

  // Factor cell blocks and form the Schur complement.
  std::vector<Eigen::MatrixXd> SchurPart(ncells);
  std::vector<Eigen::VectorXd> RhsPart(ncells);
  for_each_cell(exec, ncells, [&](int c) {
    auto& blk = out.cells_[c];
    const int nc = static_cast<int>(blk.cell_globals.size());
    Eigen::MatrixXd Klc_d = Eigen::MatrixXd::Zero(blk.adj.size(), nc);
    for (const auto& t : Klc[c]) Klc_d(adj[c].at(t.row()), t.col()) += t.value();
    blk.lu.compute(Kcc[c]);
    if (!blk.lu.isInvertible())
      throw std::runtime_error("condense: singular local block on cell " + std::to_string(c));
    blk.coupling = Kcl[c];
    blk.rhs_c.resize(nc);
    for (int l = 0; l < nc; ++l) blk.rhs_c[l] = sys.rhs[blk.cell_globals[l]];
    SchurPart[c] = Klc_d * blk.lu.solve(blk.coupling);
    RhsPart[c] = Klc_d * blk.lu.solve(blk.rhs_c);
  });

  std::vector<Eigen::Triplet<double>> strips = std::move(Kll);
  out.rhs = Eigen::VectorXd::Zero(nt);
  for (int i = 0; i < nt; ++i) out.rhs[i] = sys.rhs[out.trace_globals[i]];
  for (int c = 0; c < ncells; ++c) {
    const auto& blk = out.cells_[c];
    for (std::size_t ia = 0; ia < blk.adj.size(); ++ia) {
      out.rhs[blk.adj[ia]] -= RhsPart[c][ia];
      for (std::size_t ja = 0; ja < blk.adj.size(); ++ja)
        strips.emplace_back(blk.adj[ia], blk.adj[ja], -SchurPart[c](ia, ja));
    }
  }
  out.matrix.resize(nt, nt);
  out.matrix.setFromTriplets(strips.begin(), strips.end());
  return out;
}

Eigen::VectorXd CondensedSystem::recover(const Eigen::VectorXd& trace_x) const {
  if (trace_x.size() != size()) throw std::invalid_argument("recover: size mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(full_size_);
  for (int i = 0; i < size(); ++i) x[trace_globals[i]] = trace_x[i];
  for (const auto& blk : cells_) {
    Eigen::VectorXd rhs = blk.rhs_c;
    for (std::size_t ja = 0; ja < blk.adj.size(); ++ja)
      rhs -= blk.coupling.col(ja) * trace_x[blk.adj[ja]];
    const Eigen::VectorXd xc = blk.lu.solve(rhs);
    for (std::size_t l = 0; l < blk.cell_globals.size(); ++l) x[blk.cell_globals[l]] = xc[l];
  }
  return x;
}

Eigen::VectorXd solve_condensed(const AssembledSystem& sys, Exec exec) {
  const CondensedSystem cond = condense(sys, exec);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(cond.matrix);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_condensed: trace system singular (size " +
                             std::to_string(cond.size()) + ")");
  const Eigen::VectorXd xt = lu.solve(cond.rhs);
  Eigen::VectorXd x = cond.recover(xt);
  const double res = (sys.matrix * x - sys.rhs).norm() / std::max(sys.rhs.norm(), 1.0);
  if (!(res <= 1e-9))
    throw std::runtime_error("solve_condensed: residual " + std::to_string(res) +
                             " after recovery");
  return x;
}

}  // namespace wg
