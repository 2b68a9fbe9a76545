// Assembly of the discrete systems. Every matrix entry comes from a per-cell
// local system (multiplier rows included, attributed to the owning cells), so
// the element loop is embarrassingly parallel; local systems are merged into
// triplets in cell order, which makes the assembled matrix independent of the
// execution mode.

#include <cmath>
#include <stdexcept>

#include "wg/schemes.hpp"

namespace wg {

namespace {

struct LocalSystem {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<int> global;   // -1: eliminated boundary dof
  std::vector<double> sign;  // orientation factor per local dof
};

ScalarFn checked_coefficient(const CoefficientField& a) {
  return [&a](const Vec2& x) {
    const double v = a(x);
    if (!(v > 0.0))
      throw std::runtime_error("assembly: non-positive coefficient a(" + std::to_string(x.x()) +
                               "," + std::to_string(x.y()) + ") = " + std::to_string(v));
    return v;
  };
}

ScalarFn checked_inverse(const CoefficientField& a) {
  return [&a](const Vec2& x) {
    const double v = a(x);
    if (!(v > 0.0))
      throw std::runtime_error("assembly: non-positive coefficient a(" + std::to_string(x.x()) +
                               "," + std::to_string(x.y()) + ") = " + std::to_string(v));
    return 1.0 / v;
  };
}

AssembledSystem finalize_system(const PolygonalMesh& mesh, const SchemeConfig& cfg,
                                const CoefficientField& a, SchemeLayout layout,
                                std::vector<DofInfo> dofs, const std::vector<LocalSystem>& locals,
                                bool symmetric, bool spd) {
  AssembledSystem sys;
  sys.scheme = cfg.scheme;
  sys.config = cfg;
  sys.coeff = a;
  sys.mesh = &mesh;
  sys.layout = std::move(layout);
  sys.dofs = std::move(dofs);
  sys.symmetric = symmetric;
  sys.spd = spd;

  const int n = sys.layout.n_total;
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trips;
  std::size_t nnz = 0;
  for (const auto& ls : locals) nnz += ls.global.size() * ls.global.size();
  trips.reserve(nnz);

  for (const auto& ls : locals) {
    const int nloc = static_cast<int>(ls.global.size());
    for (int i = 0; i < nloc; ++i) {
      const int gi = ls.global[i];
      if (gi < 0) continue;
      const double si = ls.sign.empty() ? 1.0 : ls.sign[i];
      sys.rhs[gi] += si * ls.b[i];
      for (int j = 0; j < nloc; ++j) {
        const int gj = ls.global[j];
        if (gj < 0) continue;
        const double sj = ls.sign.empty() ? 1.0 : ls.sign[j];
        trips.emplace_back(gi, gj, si * sj * ls.A(i, j));
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

// Stabilizer s_p contribution on the local layout [u0 (nk); u_b per edge].
void add_primal_stabilizer(ElementOps& ops, const SchemeConfig& cfg, Eigen::MatrixXd& A) {
  const int nk = CellBasis::dimension(cfg.k);
  const int ns = cfg.s + 1;
  const double w = cfg.rho / ops.geom().diameter;
  for (int le = 0; le < ops.n_edges(); ++le) {
    const Eigen::MatrixXd P = ops.edge_poly_trace(le, cfg.s, cfg.k);
    const int off = nk + le * ns;
    A.topLeftCorner(nk, nk) += w * P.transpose() * P;
    A.block(0, off, nk, ns) -= w * P.transpose();
    A.block(off, 0, ns, nk) -= w * P;
    A.block(off, off, ns, ns) += w * Eigen::MatrixXd::Identity(ns, ns);
  }
}

// Stabilizer s_m contribution on the local layout [q0 (2nk); q_b per edge].
void add_mixed_stabilizer(ElementOps& ops, const SchemeConfig& cfg, Eigen::MatrixXd& A) {
  const int nk2 = 2 * CellBasis::dimension(cfg.k);
  const int ns = cfg.s + 1;
  const double w = cfg.rho * std::pow(ops.geom().diameter, cfg.alpha);
  for (int le = 0; le < ops.n_edges(); ++le) {
    const Eigen::MatrixXd N = ops.edge_poly_normal(le, cfg.s, cfg.k);
    const int off = nk2 + le * ns;
    A.topLeftCorner(nk2, nk2) += w * N.transpose() * N;
    A.block(0, off, nk2, ns) -= w * N.transpose();
    A.block(off, 0, ns, nk2) -= w * N;
    A.block(off, off, ns, ns) += w * Eigen::MatrixXd::Identity(ns, ns);
  }
}

// ---- layouts ----------------------------------------------------------

// Cell blocks first (q / per-cell flux / u per cell), then edge trace dofs.
// trace_on: 0 = none, 1 = interior edges only, 2 = all edges.
SchemeLayout make_layout(const PolygonalMesh& mesh, int u_deg, int q_deg, int flux_s, int trace_s,
                         int trace_on, std::vector<DofInfo>* dofs) {
  SchemeLayout L;
  L.u_deg = u_deg;
  L.q_deg = q_deg;
  L.flux_s = flux_s;
  L.trace_s = trace_s;
  int at = 0;
  const int nu = u_deg >= 0 ? CellBasis::dimension(u_deg) : 0;
  const int nq = q_deg >= 0 ? 2 * CellBasis::dimension(q_deg) : 0;
  if (q_deg >= 0) L.cell_q_off.resize(mesh.n_cells());
  if (flux_s >= 0) L.cell_flux_off.resize(mesh.n_cells());
  if (u_deg >= 0) L.cell_u_off.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    if (q_deg >= 0) {
      L.cell_q_off[c] = at;
      for (int j = 0; j < nq; ++j) dofs->push_back({DofInfo::Kind::Cell, c, j});
      at += nq;
    }
    if (flux_s >= 0) {
      L.cell_flux_off[c] = at;
      const int nf = static_cast<int>(mesh.cell(c).edges.size()) * (flux_s + 1);
      for (int j = 0; j < nf; ++j) dofs->push_back({DofInfo::Kind::Cell, c, nq + j});
      at += nf;
    }
    if (u_deg >= 0) {
      L.cell_u_off[c] = at;
      for (int j = 0; j < nu; ++j) dofs->push_back({DofInfo::Kind::Cell, c, j});
      at += nu;
    }
  }
  if (trace_on != 0) {
    L.edge_trace_off.assign(mesh.n_edges(), -1);
    for (int e = 0; e < mesh.n_edges(); ++e) {
      if (trace_on == 1 && mesh.edge(e).boundary) continue;
      L.edge_trace_off[e] = at;
      for (int l = 0; l <= trace_s; ++l) dofs->push_back({DofInfo::Kind::Trace, e, l});
      at += trace_s + 1;
    }
  }
  L.n_total = at;
  return L;
}

}  // namespace

// ---- primal WG --------------------------------------------------------

AssembledSystem assemble_primal_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                   const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.k, -1, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn a_fn = checked_coefficient(a);
  const int nk = CellBasis::dimension(cfg.k);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nloc = nk + ne * ns;
    LocalSystem ls;
    const Eigen::MatrixXd G = ops.weak_gradient_op(cfg.k, cfg.s, cfg.r);
    const Eigen::MatrixXd Ar = ops.weighted_vector_mass(cfg.r, a_fn);
    ls.A = G.transpose() * Ar * G;
    add_primal_stabilizer(ops, cfg, ls.A);
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.head(nk) = ops.load(cfg.k, f);
    ls.global.resize(nloc);
    for (int j = 0; j < nk; ++j) ls.global[j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nk + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, true);
}

AssembledSystem assemble_primal_wg_lifted(const PolygonalMesh& mesh, const SchemeConfig& config,
                                          const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.k, -1, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn a_fn = checked_coefficient(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk = CellBasis::dimension(cfg.k);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nloc = nk + ne * ns;
    // q~_{u0,u_b}, then Qh(c q~) projected back onto the gradient space.
    const Eigen::MatrixXd L = ops.lift_flux_op(cfg.k, cfg.s, cfg.r, c_fn);
    const Eigen::MatrixXd McL = ops.weighted_vector_mass(cfg.r, c_fn) * L;
    Eigen::MatrixXd Q(2 * nr, nloc);
    for (int j = 0; j < nloc; ++j) {
      Q.col(j).head(nr) = ops.mass_solve(cfg.r, McL.col(j).head(nr));
      Q.col(j).tail(nr) = ops.mass_solve(cfg.r, McL.col(j).tail(nr));
    }
    const Eigen::MatrixXd Ar = ops.weighted_vector_mass(cfg.r, a_fn);
    LocalSystem ls;
    ls.A = Q.transpose() * Ar * Q;
    add_primal_stabilizer(ops, cfg, ls.A);
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.head(nk) = ops.load(cfg.k, f);
    ls.global.resize(nloc);
    for (int j = 0; j < nk; ++j) ls.global[j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nk + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, true);
}

// ---- primal-mixed WG --------------------------------------------------

AssembledSystem assemble_primal_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                         const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.k, cfg.m, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk = CellBasis::dimension(cfg.k);
  const int nm2 = 2 * CellBasis::dimension(cfg.m);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nu = nk + ne * ns;
    const int nloc = nm2 + nu;
    const Eigen::MatrixXd Mc = ops.weighted_vector_mass(cfg.m, c_fn);
    const Eigen::MatrixXd G = ops.weak_gradient_op(cfg.k, cfg.s, cfg.r);
    const Eigen::MatrixXd B = ops.vector_cross_mass(cfg.m, cfg.r) * G;  // (v, grad_w u)
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nu, nu);
    add_primal_stabilizer(ops, cfg, S);

    LocalSystem ls;
    ls.A = Eigen::MatrixXd::Zero(nloc, nloc);
    ls.A.topLeftCorner(nm2, nm2) = Mc;
    ls.A.topRightCorner(nm2, nu) = B;
    ls.A.bottomLeftCorner(nu, nm2) = B.transpose();
    ls.A.bottomRightCorner(nu, nu) = -S;
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.segment(nm2, nk) = -ops.load(cfg.k, f);  // -(f, w0) in the second equation

    ls.global.resize(nloc);
    for (int j = 0; j < nm2; ++j) ls.global[j] = layout.cell_q_off[c] + j;
    for (int j = 0; j < nk; ++j) ls.global[nm2 + j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nm2 + nk + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, false);
}

// ---- mixed WG ----------------------------------------------------------

AssembledSystem assemble_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                  const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.r, cfg.k, -1, cfg.s, 2, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk2 = 2 * CellBasis::dimension(cfg.k);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nv = nk2 + ne * ns;  // [q0; q_b]
    const int nloc = nv + nr;
    const Eigen::MatrixXd D = ops.weak_divergence_op(cfg.k, cfg.s, cfg.r);
    const Eigen::MatrixXd C = D.transpose() * ops.mass(cfg.r);  // (grad_w . v, u)

    LocalSystem ls;
    ls.A = Eigen::MatrixXd::Zero(nloc, nloc);
    ls.A.block(0, 0, nk2, nk2) = ops.weighted_vector_mass(cfg.k, c_fn);
    {
      Eigen::MatrixXd Aq = ls.A.topLeftCorner(nv, nv);
      add_mixed_stabilizer(ops, cfg, Aq);
      ls.A.topLeftCorner(nv, nv) = Aq;
    }
    ls.A.topRightCorner(nv, nr) = -C;
    ls.A.bottomLeftCorner(nr, nv) = -C.transpose();
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.tail(nr) = -ops.load(cfg.r, f);

    ls.global.resize(nloc);
    ls.sign.assign(nloc, 1.0);
    for (int j = 0; j < nk2; ++j) ls.global[j] = layout.cell_q_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) {
        ls.global[nk2 + le * ns + l] = off + l;
        ls.sign[nk2 + le * ns + l] = T.edge_sign[le];  // stored flux is relative to the reference normal
      }
    }
    for (int j = 0; j < nr; ++j) ls.global[nv + j] = layout.cell_u_off[c] + j;
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, false);
}

// ---- hybridized mixed WG ------------------------------------------------

AssembledSystem assemble_hybrid_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                         const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.r, cfg.k, cfg.s, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk2 = 2 * CellBasis::dimension(cfg.k);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nv = nk2 + ne * ns;          // [q0; q_b per edge] (per-cell flux)
    const int nloc = nv + nr + ne * ns;    // + u + u_b per edge
    const Eigen::MatrixXd D = ops.weak_divergence_op(cfg.k, cfg.s, cfg.r);
    const Eigen::MatrixXd C = D.transpose() * ops.mass(cfg.r);

    LocalSystem ls;
    ls.A = Eigen::MatrixXd::Zero(nloc, nloc);
    ls.A.block(0, 0, nk2, nk2) = ops.weighted_vector_mass(cfg.k, c_fn);
    {
      Eigen::MatrixXd Aq = ls.A.topLeftCorner(nv, nv);
      add_mixed_stabilizer(ops, cfg, Aq);
      ls.A.topLeftCorner(nv, nv) = Aq;
    }
    ls.A.block(0, nv, nv, nr) = -C;
    ls.A.block(nv, 0, nr, nv) = -C.transpose();
    // <u_b, v_b> in the first equation, and the flux-continuity rows
    // sum_T <sigma, q_b> = 0 (identity pairings in the orthonormal basis).
    for (int le = 0; le < ne; ++le) {
      const int qb = nk2 + le * ns;
      const int ub = nv + nr + le * ns;
      ls.A.block(qb, ub, ns, ns) = Eigen::MatrixXd::Identity(ns, ns);
      ls.A.block(ub, qb, ns, ns) = Eigen::MatrixXd::Identity(ns, ns);
    }
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.segment(nv, nr) = -ops.load(cfg.r, f);

    ls.global.resize(nloc);
    for (int j = 0; j < nk2; ++j) ls.global[j] = layout.cell_q_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le)
      for (int l = 0; l < ns; ++l)
        ls.global[nk2 + le * ns + l] = layout.cell_flux_off[c] + le * ns + l;
    for (int j = 0; j < nr; ++j) ls.global[nv + j] = layout.cell_u_off[c] + j;
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nv + nr + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, false);
}

// ---- HDG ----------------------------------------------------------------

AssembledSystem assemble_hdg(const PolygonalMesh& mesh, const SchemeConfig& config,
                             const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.r, cfg.k, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk2 = 2 * CellBasis::dimension(cfg.k);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nloc = nk2 + nr + ne * ns;  // [q~; u; u^ per edge]
    const double tau = cfg.tau_for_cell(ops.geom().diameter);

    LocalSystem ls;
    ls.A = Eigen::MatrixXd::Zero(nloc, nloc);
    ls.A.topLeftCorner(nk2, nk2) = ops.weighted_vector_mass(cfg.k, c_fn);
    const Eigen::MatrixXd Dm = ops.div_times(cfg.k, cfg.r);  // ((div v), u)
    ls.A.block(0, nk2, nk2, nr) = -Dm;
    ls.A.block(nk2, 0, nr, nk2) = -Dm.transpose();
    for (int le = 0; le < ne; ++le) {
      const Eigen::MatrixXd Nk = ops.edge_poly_normal(le, cfg.s, cfg.k);
      const Eigen::MatrixXd Pr = ops.edge_poly_trace(le, cfg.s, cfg.r);
      const int uh = nk2 + nr + le * ns;
      ls.A.block(0, uh, nk2, ns) += Nk.transpose();
      ls.A.block(uh, 0, ns, nk2) += Nk;
      ls.A.block(nk2, nk2, nr, nr) -= tau * ops.edge_trace_mass(le, cfg.r, cfg.r);
      ls.A.block(nk2, uh, nr, ns) += tau * Pr.transpose();
      ls.A.block(uh, nk2, ns, nr) += tau * Pr;
      ls.A.block(uh, uh, ns, ns) -= tau * Eigen::MatrixXd::Identity(ns, ns);
    }
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.segment(nk2, nr) = -ops.load(cfg.r, f);

    ls.global.resize(nloc);
    for (int j = 0; j < nk2; ++j) ls.global[j] = layout.cell_q_off[c] + j;
    for (int j = 0; j < nr; ++j) ls.global[nk2 + j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nk2 + nr + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, false);
}

// ---- HDG version 2 (condensed two-field form) ----------------------------

AssembledSystem assemble_hdg_v2(const PolygonalMesh& mesh, const SchemeConfig& config,
                                const CoefficientField& a, const SourceFn& f, Exec exec) {
  const SchemeConfig cfg = config.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.r, -1, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nloc = nr + ne * ns;  // [u; u^ per edge]
    const double tau = cfg.tau_for_cell(ops.geom().diameter);

    const Eigen::MatrixXd L = ops.lift_flux_op(cfg.r, cfg.s, cfg.k, c_fn);
    const Eigen::MatrixXd Mc = ops.weighted_vector_mass(cfg.k, c_fn);
    LocalSystem ls;
    ls.A = L.transpose() * Mc * L;  // (c q~_{u,u^}, q~_{w,mu})
    for (int le = 0; le < ne; ++le) {
      const Eigen::MatrixXd Pr = ops.edge_poly_trace(le, cfg.s, cfg.r);
      const int uh = nr + le * ns;
      ls.A.topLeftCorner(nr, nr) += tau * ops.edge_trace_mass(le, cfg.r, cfg.r);
      ls.A.block(0, uh, nr, ns) -= tau * Pr.transpose();
      ls.A.block(uh, 0, ns, nr) -= tau * Pr;
      ls.A.block(uh, uh, ns, ns) += tau * Eigen::MatrixXd::Identity(ns, ns);
    }
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.head(nr) = ops.load(cfg.r, f);

    ls.global.resize(nloc);
    for (int j = 0; j < nr; ++j) ls.global[j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nr + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, true, true);
}

// ---- hybridized mixed WG, version-2 equations ----------------------------

AssembledSystem assemble_hybrid_mixed_wg_v2(const PolygonalMesh& mesh, const SchemeConfig& config,
                                            const CoefficientField& a, const SourceFn& f,
                                            Exec exec) {
  SchemeConfig cfg = config;
  cfg.scheme = Scheme::HybridMixedWG;
  cfg = cfg.resolved();
  std::vector<DofInfo> dofs;
  const SchemeLayout layout = make_layout(mesh, cfg.r, cfg.k, -1, cfg.s, 1, &dofs);
  const int order = cfg.quad_order_for(a);
  const ScalarFn c_fn = checked_inverse(a);
  const int nk2 = 2 * CellBasis::dimension(cfg.k);
  const int nr = CellBasis::dimension(cfg.r);
  const int ns = cfg.s + 1;

  auto locals = map_cells<LocalSystem>(exec, mesh.n_cells(), [&](int c) {
    ElementOps ops(mesh, c, order);
    const int ne = ops.n_edges();
    const int nloc = nk2 + nr + ne * ns;  // [q0; u; u_b per edge]
    const double w = 1.0 / (cfg.rho * std::pow(ops.geom().diameter, cfg.alpha));

    LocalSystem ls;
    ls.A = Eigen::MatrixXd::Zero(nloc, nloc);
    ls.A.topLeftCorner(nk2, nk2) = ops.weighted_vector_mass(cfg.k, c_fn);
    ls.A.block(0, nk2, nk2, nr) = -ops.div_times(cfg.k, cfg.r);
    ls.A.block(nk2, 0, nr, nk2) = -ops.grad_dot(cfg.k, cfg.r).transpose();
    for (int le = 0; le < ne; ++le) {
      const Eigen::MatrixXd Nk = ops.edge_poly_normal(le, cfg.s, cfg.k);
      const Eigen::MatrixXd Pr = ops.edge_poly_trace(le, cfg.s, cfg.r);
      const int ub = nk2 + nr + le * ns;
      // first equation: <u_b, v0.n> + <u - Q_b u, v0.n>
      ls.A.block(0, ub, nk2, ns) += Nk.transpose();
      ls.A.block(0, nk2, nk2, nr) +=
          ops.edge_scalar_normal(le, cfg.r, cfg.k).transpose() - Nk.transpose() * Pr;
      // second equation: <q_b, w> with q_b = Q_b(q0.n) + w (Q_b u - u_b)
      ls.A.block(nk2, 0, nr, nk2) += Pr.transpose() * Nk;
      ls.A.block(nk2, nk2, nr, nr) += w * Pr.transpose() * Pr;
      ls.A.block(nk2, ub, nr, ns) -= w * Pr.transpose();
      // continuity rows: sum_T <sigma, q_b> = 0
      ls.A.block(ub, 0, ns, nk2) += Nk;
      ls.A.block(ub, nk2, ns, nr) += w * Pr;
      ls.A.block(ub, ub, ns, ns) -= w * Eigen::MatrixXd::Identity(ns, ns);
    }
    ls.b = Eigen::VectorXd::Zero(nloc);
    ls.b.segment(nk2, nr) = ops.load(cfg.r, f);

    ls.global.resize(nloc);
    for (int j = 0; j < nk2; ++j) ls.global[j] = layout.cell_q_off[c] + j;
    for (int j = 0; j < nr; ++j) ls.global[nk2 + j] = layout.cell_u_off[c] + j;
    const MeshCell& T = mesh.cell(c);
    for (int le = 0; le < ne; ++le) {
      const int off = layout.edge_trace_off[T.edges[le]];
      for (int l = 0; l < ns; ++l) ls.global[nk2 + nr + le * ns + l] = off < 0 ? -1 : off + l;
    }
    return ls;
  });
  return finalize_system(mesh, cfg, a, layout, std::move(dofs), locals, false, false);
}

AssembledSystem assemble(const PolygonalMesh& mesh, const SchemeConfig& config,
                         const CoefficientField& a, const SourceFn& f, Exec exec) {
  switch (config.scheme) {
    case Scheme::PrimalWG: return assemble_primal_wg(mesh, config, a, f, exec);
    case Scheme::PrimalMixedWG: return assemble_primal_mixed_wg(mesh, config, a, f, exec);
    case Scheme::MixedWG: return assemble_mixed_wg(mesh, config, a, f, exec);
    case Scheme::HybridMixedWG: return assemble_hybrid_mixed_wg(mesh, config, a, f, exec);
    case Scheme::HDG: return assemble_hdg(mesh, config, a, f, exec);
    case Scheme::HDGv2: return assemble_hdg_v2(mesh, config, a, f, exec);
  }
  throw std::invalid_argument("assemble: unknown scheme");
}

// ---- solution extraction --------------------------------------------------

DiscreteSolution extract_solution(const AssembledSystem& sys, const Eigen::VectorXd& x) {
  if (x.size() != sys.size()) throw std::invalid_argument("extract_solution: size mismatch");
  const PolygonalMesh& mesh = *sys.mesh;
  const SchemeConfig& cfg = sys.config;
  const SchemeLayout& L = sys.layout;

  DiscreteSolution sol;
  sol.scheme = sys.scheme;
  sol.config = cfg;
  sol.mesh = sys.mesh;
  sol.raw = x;

  sol.u_deg = L.u_deg;
  const int nu = CellBasis::dimension(L.u_deg);
  sol.u_cell.resize(mesh.n_cells() * nu);
  for (int c = 0; c < mesh.n_cells(); ++c)
    sol.u_cell.segment(c * nu, nu) = x.segment(L.cell_u_off[c], nu);

  if (L.q_deg >= 0) {
    sol.q_deg = L.q_deg;
    const int nq = 2 * CellBasis::dimension(L.q_deg);
    sol.q_cell.resize(mesh.n_cells() * nq);
    for (int c = 0; c < mesh.n_cells(); ++c)
      sol.q_cell.segment(c * nq, nq) = x.segment(L.cell_q_off[c], nq);
  }

  const bool has_trace = !L.edge_trace_off.empty();
  const bool trace_is_flux = (sys.scheme == Scheme::MixedWG);
  if (has_trace && !trace_is_flux) {
    TraceFunction t = TraceFunction::zeros(mesh, L.trace_s, true);
    for (int e = 0; e < mesh.n_edges(); ++e)
      if (L.edge_trace_off[e] >= 0)
        t.edge(e) = x.segment(L.edge_trace_off[e], L.trace_s + 1);
    sol.trace = std::move(t);
  }

  switch (sys.scheme) {
    case Scheme::PrimalWG:
    case Scheme::PrimalMixedWG: {
      WeakScalarFunction u = WeakScalarFunction::zeros(mesh, cfg.k, cfg.s, true);
      u.cell_dofs = sol.u_cell;
      u.edge_dofs = sol.trace->edge_dofs;
      sol.u_weak = std::move(u);
      break;
    }
    case Scheme::MixedWG: {
      WeakVectorField q = WeakVectorField::zeros(mesh, cfg.k, cfg.s);
      q.cell_dofs = sol.q_cell;
      for (int e = 0; e < mesh.n_edges(); ++e)
        q.edge_dofs.segment(e * (cfg.s + 1), cfg.s + 1) =
            x.segment(L.edge_trace_off[e], cfg.s + 1);
      sol.flux = std::move(q);
      break;
    }
    case Scheme::HybridMixedWG: {
      WeakVectorField q = WeakVectorField::zeros(mesh, cfg.k, cfg.s, WeakVectorField::Sharing::PerCell);
      q.cell_dofs = sol.q_cell;
      for (int c = 0; c < mesh.n_cells(); ++c) {
        const int nf = static_cast<int>(mesh.cell(c).edges.size()) * (cfg.s + 1);
        q.edge_dofs.segment(q.cell_edge_offset[c], nf) = x.segment(L.cell_flux_off[c], nf);
      }
      sol.flux = std::move(q);
      break;
    }
    case Scheme::HDG:
      break;
    case Scheme::HDGv2: {
      // Recover q~ = q~_{u, u^} per cell from the lifting.
      const ScalarFn c_fn = [&sys](const Vec2& p) { return sys.coeff.inverse_at(p); };
      const int order = cfg.quad_order_for(sys.coeff);
      const int nq = 2 * CellBasis::dimension(cfg.k);
      sol.q_deg = cfg.k;
      sol.q_cell.resize(mesh.n_cells() * nq);
      const int nr = CellBasis::dimension(cfg.r);
      const int ns = cfg.s + 1;
      for (int c = 0; c < mesh.n_cells(); ++c) {
        ElementOps ops(mesh, c, order);
        const Eigen::MatrixXd Lop = ops.lift_flux_op(cfg.r, cfg.s, cfg.k, c_fn);
        Eigen::VectorXd loc(Lop.cols());
        loc.head(nr) = sol.u_on_cell(c);
        const MeshCell& T = mesh.cell(c);
        for (int le = 0; le < static_cast<int>(T.edges.size()); ++le)
          loc.segment(nr + le * ns, ns) = sol.trace->edge(T.edges[le]);
        sol.q_cell.segment(c * nq, nq) = Lop * loc;
      }
      break;
    }
  }
  return sol;
}

}  // namespace wg
