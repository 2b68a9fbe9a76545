#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "wg/projections.hpp"
#include "wg/quadrature.hpp"
#include "wg/schemes.hpp"

namespace wg {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PrimalWG: return "primal-wg";
    case Scheme::PrimalMixedWG: return "primal-mixed-wg";
    case Scheme::MixedWG: return "mixed-wg";
    case Scheme::HybridMixedWG: return "hybrid-mixed-wg";
    case Scheme::HDG: return "hdg";
    case Scheme::HDGv2: return "hdg-v2";
  }
  return "?";
}

std::vector<std::string> scheme_names() {
  return {"primal-wg", "primal-mixed-wg", "mixed-wg", "hybrid-mixed-wg", "hdg", "hdg-v2"};
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::PrimalWG, Scheme::PrimalMixedWG, Scheme::MixedWG,
                   Scheme::HybridMixedWG, Scheme::HDG, Scheme::HDGv2})
    if (scheme_name(s) == name) return s;
  std::ostringstream msg;
  msg << "unknown scheme '" << name << "' (valid:";
  for (const auto& n : scheme_names()) msg << " " << n;
  msg << ")";
  throw std::invalid_argument(msg.str());
}

SchemeConfig SchemeConfig::resolved() const {
  SchemeConfig c = *this;
  if (c.resolved_flag) return c;
  if (c.k < 0) throw std::invalid_argument("config: k must be >= 0");
  if (c.s < 0) c.s = c.k;
  if (c.r < 0) c.r = std::max(c.k - 1, 0);
  if (c.m < 0) c.m = c.r;
  if (c.s < 0 || c.r < 0 || c.m < 0) throw std::invalid_argument("config: degrees must be >= 0");
  if (c.rho <= 0.0) throw std::invalid_argument("config: rho must be positive");

  if (c.scheme == Scheme::PrimalWG && c.k < 1)
    throw std::invalid_argument("config: primal-wg requires k >= 1");
  if (c.scheme == Scheme::PrimalMixedWG) {
    if (c.k < 1) throw std::invalid_argument("config: primal-mixed-wg requires k >= 1");
    if (c.m < c.r)
      throw std::invalid_argument("config: primal-mixed-wg requires m >= r (inf-sup condition)");
  }
  if ((c.scheme == Scheme::HDG || c.scheme == Scheme::HDGv2) && c.tau_rule == TauRule::Constant &&
      c.tau <= 0.0)
    throw std::invalid_argument("config: hdg requires tau > 0 (scheme loses coercivity otherwise)");

  if (c.is_mixed_family() && !(c.k >= c.r - 1 && c.s >= c.r)) {
    c.infsup_warned = true;
    std::cerr << "[wg] warning: (k,s,r)=(" << c.k << "," << c.s << "," << c.r
              << ") violates the inf-sup guideline k >= r-1, s >= r for " << scheme_name(c.scheme)
              << "\n";
  }
  c.resolved_flag = true;
  return c;
}

StabilizerSpec SchemeConfig::stabilizer() const {
  StabilizerSpec spec;
  spec.kind = (scheme == Scheme::PrimalWG || scheme == Scheme::PrimalMixedWG)
                  ? StabilizerSpec::Kind::Primal
                  : StabilizerSpec::Kind::Mixed;
  spec.rho = rho;
  spec.alpha = alpha;
  return spec;
}

double SchemeConfig::tau_for_cell(double h) const {
  switch (tau_rule) {
    case TauRule::Constant: return tau;
    case TauRule::MixedMatch: return 1.0 / (rho * std::pow(h, alpha));
    case TauRule::PrimalMatch: return rho / h;
  }
  return tau;
}

int SchemeConfig::max_degree() const {
  int d = std::max(std::max(k, s), r);
  if (scheme == Scheme::PrimalMixedWG) d = std::max(d, m);
  return d;
}

int SchemeConfig::quad_order_for(const CoefficientField& a) const {
  if (quad_order > 0) {
    // explicit override wins, including over WG_QUAD_ORDER
    return quad_order;
  }
  (void)a;  // source callbacks are generic, so the bump applies regardless
  return effective_quad_order(2 * max_degree() + 2, true);
}

int AssembledSystem::n_trace_dofs() const {
  int n = 0;
  for (const auto& d : dofs)
    if (d.kind == DofInfo::Kind::Trace) ++n;
  return n;
}

double DiscreteSolution::eval_u(int c, const Vec2& x) const {
  return eval_cell_poly(*mesh, c, u_deg, u_on_cell(c), x);
}

Vec2 DiscreteSolution::eval_q(int c, const Vec2& x) const {
  return eval_cell_poly_vec(*mesh, c, q_deg, q_on_cell(c), x);
}

double DiscreteSolution::hat_flux(int c, int le, double t) const {
  if (scheme != Scheme::HDG && scheme != Scheme::HDGv2)
    throw std::invalid_argument("hat_flux: defined for the HDG schemes only");
  const MeshCell& T = mesh->cell(c);
  const int e = T.edges[le];
  const MeshEdge& E = mesh->edge(e);
  const Vec2 x = 0.5 * (1.0 - t) * mesh->vertex(E.verts[0]) + 0.5 * (1.0 + t) * mesh->vertex(E.verts[1]);
  const Vec2 n = mesh->outward_normal(c, le);
  const double tau_T = config.tau_for_cell(T.diameter);
  const double uh = eval_u(c, x);
  const double uhat = trace ? eval_edge_poly(*mesh, e, trace->edge(e), t) : 0.0;
  return eval_q(c, x).dot(n) + tau_T * (uh - uhat);
}

Eigen::VectorXd lift_flux(const PolygonalMesh& mesh, int c, const SchemeConfig& config,
                          const CoefficientField& a, const Eigen::VectorXd& w,
                          const TraceFunction& mu) {
  const SchemeConfig cfg = config.resolved();
  if (w.size() != CellBasis::dimension(cfg.r))
    throw std::invalid_argument("lift_flux: w must hold dim P_r(T) coefficients");
  if (mu.s != cfg.s) throw std::invalid_argument("lift_flux: mu degree mismatch");
  ElementOps ops(mesh, c, cfg.quad_order_for(a));
  const auto c_fn = [&a](const Vec2& x) { return a.inverse_at(x); };
  const Eigen::MatrixXd L = ops.lift_flux_op(cfg.r, cfg.s, cfg.k, c_fn);
  Eigen::VectorXd loc(L.cols());
  loc.head(w.size()) = w;
  int at = static_cast<int>(w.size());
  const MeshCell& T = mesh.cell(c);
  for (std::size_t le = 0; le < T.edges.size(); ++le) {
    loc.segment(at, cfg.s + 1) = mu.edge(T.edges[le]);
    at += cfg.s + 1;
  }
  return L * loc;
}

WeakVectorField recover_wg_flux(const DiscreteSolution& sol) {
  if (sol.scheme != Scheme::HybridMixedWG)
    throw std::invalid_argument("recover_wg_flux: needs a hybrid-mixed-wg solution");
  const PolygonalMesh& mesh = *sol.mesh;
  const SchemeConfig& cfg = sol.config;
  WeakVectorField out = WeakVectorField::zeros(mesh, cfg.k, cfg.s, WeakVectorField::Sharing::PerCell);
  out.cell_dofs = sol.q_cell;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MeshCell& T = mesh.cell(c);
    const double w = 1.0 / (cfg.rho * std::pow(T.diameter, cfg.alpha));
    ElementOps ops(mesh, c, effective_quad_order(2 * cfg.max_degree() + 2, false));
    for (int le = 0; le < static_cast<int>(T.edges.size()); ++le) {
      const int e = T.edges[le];
      const Eigen::VectorXd qb = ops.edge_poly_normal(le, cfg.s, cfg.k) * sol.q_on_cell(c) +
                                 w * (ops.edge_poly_trace(le, cfg.s, cfg.r) * sol.u_on_cell(c) -
                                      sol.trace->edge(e));
      out.flux_slot(mesh, c, le) = qb;
    }
  }
  return out;
}

}  // namespace wg
