// Global assembly, boundary conditions and solution extraction for the five
// discretizations of -div(a grad u) = f, u = 0 on the boundary, plus the
// two-field reformulation of the HDG scheme and the flux recovery formulas.
//
// Homogeneous Dirichlet data is imposed by eliminating the boundary trace
// unknowns from the degree-of-freedom map.

#ifndef WG_SCHEMES_HPP
#define WG_SCHEMES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "wg/coefficient.hpp"
#include "wg/element.hpp"
#include "wg/mesh.hpp"
#include "wg/parallel.hpp"
#include "wg/weak_functions.hpp"

namespace wg {

enum class Scheme { PrimalWG, PrimalMixedWG, MixedWG, HybridMixedWG, HDG, HDGv2 };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);  // throws listing valid names
std::vector<std::string> scheme_names();

/// How the HDG stabilization function tau is chosen per cell.
enum class TauRule {
  Constant,     // the configured tau on every cell
  MixedMatch,   // tau = rho^{-1} h_T^{-alpha}, matching the mixed WG stabilizer
  PrimalMatch,  // tau = rho h_T^{-1}, matching the primal WG stabilizer weight
};

/// Degrees and stabilization parameters. Unset degrees (-1) resolve to the
/// defaults s = k, r = max(k-1, 0), m = r. Scheme-specific meaning:
///   primal-wg:        u0 in P_k, u_b in P_s, weak gradient in [P_r]^2
///   primal-mixed-wg:  flux in [P_m]^2, u as in primal-wg
///   mixed-wg family:  q0 in [P_k]^2, q_b/traces in P_s, u in P_r
///   hdg / hdg-v2:     V(T) = [P_k]^2, W(T) = P_r, M(e) = P_s
struct SchemeConfig {
  Scheme scheme = Scheme::PrimalWG;
  int k = 1, s = -1, r = -1, m = -1;
  double rho = 1.0;
  double alpha = 1.0;
  double tau = 1.0;  // HDG stabilization, constant per cell under TauRule::Constant
  TauRule tau_rule = TauRule::Constant;
  int quad_order = -1;  // explicit override; -1 = automatic

  /// Fill defaults and validate; throws std::invalid_argument on violated
  /// preconditions. Sets infsup_warned when (k,s,r) misses k>=r-1, s>=r for
  /// the mixed family.
  SchemeConfig resolved() const;
  bool resolved_flag = false;
  bool infsup_warned = false;

  bool is_mixed_family() const {
    return scheme == Scheme::MixedWG || scheme == Scheme::HybridMixedWG || scheme == Scheme::HDG ||
           scheme == Scheme::HDGv2;
  }
  StabilizerSpec stabilizer() const;
  /// tau on a cell of diameter h, per tau_rule.
  double tau_for_cell(double h) const;
  int max_degree() const;
  int quad_order_for(const CoefficientField& a) const;
};

struct DofInfo {
  enum class Kind { Cell, Trace };
  Kind kind = Kind::Cell;
  int owner = -1;  // cell index, or edge index for trace dofs
  int comp = 0;
};

/// Field block offsets of an assembled system (-1 entries: not present /
/// eliminated boundary dofs).
struct SchemeLayout {
  int n_total = 0;
  int u_deg = -1, q_deg = -1, flux_s = -1, trace_s = -1;
  std::vector<int> cell_u_off;
  std::vector<int> cell_q_off;
  std::vector<int> cell_flux_off;   // hybrid: first edge block of cell c
  std::vector<int> edge_trace_off;  // -1 on eliminated boundary edges
};

struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<DofInfo> dofs;
  bool symmetric = true;
  bool spd = false;  // saddle-point systems are symmetric indefinite
  Scheme scheme = Scheme::PrimalWG;
  SchemeConfig config;
  CoefficientField coeff;
  const PolygonalMesh* mesh = nullptr;
  SchemeLayout layout;

  int size() const { return static_cast<int>(rhs.size()); }
  int n_trace_dofs() const;
};

using SourceFn = ScalarFn;

AssembledSystem assemble_primal_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                   const CoefficientField& a, const SourceFn& f,
                                   Exec exec = default_exec());
AssembledSystem assemble_primal_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                         const CoefficientField& a, const SourceFn& f,
                                         Exec exec = default_exec());
AssembledSystem assemble_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                  const CoefficientField& a, const SourceFn& f,
                                  Exec exec = default_exec());
AssembledSystem assemble_hybrid_mixed_wg(const PolygonalMesh& mesh, const SchemeConfig& config,
                                         const CoefficientField& a, const SourceFn& f,
                                         Exec exec = default_exec());
AssembledSystem assemble_hdg(const PolygonalMesh& mesh, const SchemeConfig& config,
                             const CoefficientField& a, const SourceFn& f,
                             Exec exec = default_exec());
AssembledSystem assemble_hdg_v2(const PolygonalMesh& mesh, const SchemeConfig& config,
                                const CoefficientField& a, const SourceFn& f,
                                Exec exec = default_exec());
/// Dispatch on config.scheme.
AssembledSystem assemble(const PolygonalMesh& mesh, const SchemeConfig& config,
                         const CoefficientField& a, const SourceFn& f, Exec exec = default_exec());

/// The hybridized mixed WG scheme written in its reformulated (version-2)
/// equations, with the boundary flux eliminated through the recovery
/// formula. Solves for the same (q0, u, u_b); used to cross-check the
/// recovery identity.
AssembledSystem assemble_hybrid_mixed_wg_v2(const PolygonalMesh& mesh, const SchemeConfig& config,
                                            const CoefficientField& a, const SourceFn& f,
                                            Exec exec = default_exec());

/// Primal WG assembled through the flux lifting: (a Qh(c q~_u), Qh(c q~_v))
/// replaces (a grad_w u, grad_w v). An algebraic identity; used to verify
/// the rewrite of the WG system in lifted form.
AssembledSystem assemble_primal_wg_lifted(const PolygonalMesh& mesh, const SchemeConfig& config,
                                          const CoefficientField& a, const SourceFn& f,
                                          Exec exec = default_exec());

/// Flux lifting on one cell: q~_{w,mu} in [P_k(T)]^2 with
/// (a^{-1} q~, v)_T = (w, div v)_T - <mu, v.n>_dT for all v. `w` holds
/// coefficients in P_r(T), mu is read on the cell's edges.
Eigen::VectorXd lift_flux(const PolygonalMesh& mesh, int c, const SchemeConfig& config,
                          const CoefficientField& a, const Eigen::VectorXd& w,
                          const TraceFunction& mu);

struct DiscreteSolution {
  Scheme scheme = Scheme::PrimalWG;
  SchemeConfig config;
  const PolygonalMesh* mesh = nullptr;

  int u_deg = 0;
  Eigen::VectorXd u_cell;  // cellwise scalar coefficients
  int q_deg = -1;
  Eigen::VectorXd q_cell;  // cellwise flux coefficients (blocked), when present

  std::optional<WeakScalarFunction> u_weak;  // primal / primal-mixed
  std::optional<TraceFunction> trace;        // u_b / u-hat, zero on boundary
  std::optional<WeakVectorField> flux;       // mixed (single-valued) / hybrid (per cell)

  Eigen::VectorXd raw;  // the solved coefficient vector

  Eigen::VectorXd u_on_cell(int c) const {
    const int n = CellBasis::dimension(u_deg);
    return u_cell.segment(c * n, n);
  }
  Eigen::VectorXd q_on_cell(int c) const {
    const int n = 2 * CellBasis::dimension(q_deg);
    return q_cell.segment(c * n, n);
  }
  double eval_u(int c, const Vec2& x) const;
  Vec2 eval_q(int c, const Vec2& x) const;

  /// HDG numerical flux q^.n = q~.n + tau (u - u^) evaluated at parameter t
  /// on local edge le of cell c (an evaluation formula, never a stored
  /// polynomial).
  double hat_flux(int c, int le, double t) const;
};

DiscreteSolution extract_solution(const AssembledSystem& system, const Eigen::VectorXd& x);

/// Recover the boundary flux of a hybridized mixed WG solution from
/// q_b = Q_b(q0 . n) + rho^{-1} h_T^{-alpha} (Q_b u|_dT - u_b), per cell-edge.
WeakVectorField recover_wg_flux(const DiscreteSolution& sol);

}  // namespace wg

#endif
