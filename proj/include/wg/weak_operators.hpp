// Discrete weak differential operators and stabilizer/smoother forms: the
// cell-local reconstructions of the gradient and the divergence defined
// through integration-by-parts pairings, and the penalty forms providing
// weak continuity. All operations are cell-local and pure.

#ifndef WG_WEAK_OPERATORS_HPP
#define WG_WEAK_OPERATORS_HPP

#include <Eigen/Dense>

#include "wg/element.hpp"
#include "wg/weak_functions.hpp"

namespace wg {

/// Coefficients in [P_r(T)]^2 of the weak gradient of w restricted to cell c:
/// (g, v)_T = -(w0, div v)_T + <w_b, v.n_T>_dT for all v.
Eigen::VectorXd weak_gradient(const PolygonalMesh& mesh, const WeakScalarFunction& w, int c, int r);

/// Coefficients in P_r(T) of the weak divergence of q restricted to cell c:
/// (d, phi)_T = -(q0, grad phi)_T + <q_b, phi>_dT for all phi.
Eigen::VectorXd weak_divergence(const PolygonalMesh& mesh, const WeakVectorField& q, int c, int r);

/// s_p(w, phi) = rho * sum_T h_T^{-1} <Q_b w0 - w_b, Q_b phi0 - phi_b>_dT.
double stabilizer_primal(const PolygonalMesh& mesh, const WeakScalarFunction& w,
                         const WeakScalarFunction& phi, const StabilizerSpec& spec);

/// s_m(q, v) = rho * sum_T h_T^{alpha} <Q_b(q0.n_T) - q_b, Q_b(v0.n_T) - v_b>_dT.
double stabilizer_mixed(const PolygonalMesh& mesh, const WeakVectorField& q,
                        const WeakVectorField& v, const StabilizerSpec& spec);

}  // namespace wg

#endif
