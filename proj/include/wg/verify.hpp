// Error norms, convergence-rate estimation, scheme-equivalence checks, and
// the worked one-element counterexample separating the lifted-flux and
// weak-gradient bilinear forms.

#ifndef WG_VERIFY_HPP
#define WG_VERIFY_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "wg/problems.hpp"
#include "wg/schemes.hpp"
#include "wg/solve.hpp"

namespace wg {

struct ErrorReport {
  double h = 0.0;
  int dofs_total = 0;
  int dofs_trace = 0;
  double err_l2_u = 0.0;
  double err_energy = std::numeric_limits<double>::quiet_NaN();  // primal schemes only
  double err_l2_q = std::numeric_limits<double>::quiet_NaN();    // flux-carrying schemes only
  double seconds = 0.0;
};

/// Solve on one mesh and measure errors against the exact solution.
ErrorReport run_single(const PolygonalMesh& mesh, const SchemeConfig& config,
                       const ManufacturedProblem& problem, Exec exec = default_exec());

struct ConvergenceStudy {
  std::vector<ErrorReport> rows;
  // least-squares slopes of log(err) against log(h) over the last ceil(n/2)
  // levels; NaN when the norm does not apply, "exact" flags when the errors
  // sit at round-off (u exactly representable).
  double rate_l2_u = std::numeric_limits<double>::quiet_NaN();
  double rate_energy = std::numeric_limits<double>::quiet_NaN();
  double rate_l2_q = std::numeric_limits<double>::quiet_NaN();
  bool exact_l2_u = false, exact_energy = false, exact_l2_q = false;
};

/// Runs the scheme over a decreasing-h mesh sequence (at least 2 meshes);
/// solver failures are rethrown with the mesh index attached.
ConvergenceStudy run_convergence(const std::vector<PolygonalMesh>& meshes,
                                 const SchemeConfig& config, const ManufacturedProblem& problem,
                                 Exec exec = default_exec());

/// CSV columns: h,dofs_total,dofs_trace,err_l2_u,rate_l2_u,err_energy,
/// rate_energy,err_l2_q,rate_l2_q,seconds. Rates are per-level; the header
/// row is always written. write_json mirrors the same data.
void write_csv(std::ostream& out, const ConvergenceStudy& study);
void write_json(std::ostream& out, const ConvergenceStudy& study);

struct EquivalenceReport {
  double max_coeff_diff = 0.0;  // over shared coefficient fields
  double solution_scale = 0.0;  // max |coefficient| of the first solution
  bool equivalent = false;      // max diff <= 1e-9 (1 + scale)
  double rel_l2_u_diff = 0.0;   // ||u_A - u_B|| / ||u_A|| by quadrature
  double err_eqn1 = 0.0;        // ||(I-Q_b) u_h||_{L2(boundary set)}
  double err_eqn4 = 0.0;        // ||(I-Q_b)(q0.n) + tau (I-Q_b) u_h||
};

/// Compare two discrete solutions on the same mesh. Shared fields (cell
/// scalar, cell flux, edge trace) are compared coefficientwise when their
/// spaces match; throws std::invalid_argument when nothing is comparable.
EquivalenceReport check_equivalence(const DiscreteSolution& A, const DiscreteSolution& B);

/// Assemble-and-solve convenience wrapper.
EquivalenceReport check_equivalence(const PolygonalMesh& mesh, const SchemeConfig& configA,
                                    const SchemeConfig& configB,
                                    const ManufacturedProblem& problem,
                                    Exec exec = default_exec());

struct Example8Result {
  double hdg_value = 0.0;  // (c q~_u, q~_v) with unit constant lifted fluxes
  double wg_value = 0.0;   // (a Qh(c q~_u), Qh(c q~_v))
};

/// The one-element example: T = [0,1]^2, a = 1 + x, V(T) = [P_0]^2,
/// q~_u = q~_v = (1, 0). The two bilinear forms evaluate to ln 2 and
/// (3/2)(ln 2)^2, so the primal WG and HDG methods cannot coincide for
/// variable coefficients.
Example8Result paper_example_8(int quad_order = 14);

struct RewriteReport {
  double max_entry_diff = 0.0;
  double matrix_scale = 0.0;
  bool equal = false;  // diff <= 1e-12 * (1 + scale)
};

/// Assemble the primal WG system directly and through the lifted-flux form;
/// the two matrices agree entrywise for any coefficient. Requires s >= k.
RewriteReport check_wg_rewrite(const PolygonalMesh& mesh, const SchemeConfig& config,
                               const ManufacturedProblem& problem, Exec exec = default_exec());

/// | integral of f - boundary flux | of the manufactured problem (divergence
/// theorem sanity).
double divergence_theorem_residual(const PolygonalMesh& mesh, const ManufacturedProblem& problem);

/// Value of s_p(u_h, u_h) on a primal solution (consistency indicator;
/// decreases under refinement).
double stabilizer_energy(const DiscreteSolution& sol);

}  // namespace wg

#endif
