#include "wg/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "wg/projections.hpp"
#include "wg/quadrature.hpp"
#include "wg/weak_operators.hpp"

namespace wg {

namespace {

constexpr double kExactFloor = 1e-10;  // errors at or below this count as "exact"

double l2_u_error(const DiscreteSolution& sol, const ManufacturedProblem& prob, int order) {
  const PolygonalMesh& mesh = *sol.mesh;
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellQuad q = cell_quadrature(mesh, c, order);
    const CellBasis basis(mesh, c, sol.u_deg);
    const Eigen::VectorXd coeffs = sol.u_on_cell(c);
    for (int p = 0; p < static_cast<int>(q.points.size()); ++p) {
      const double d = basis.eval(q.points[p]).dot(coeffs) - prob.u(q.points[p]);
      acc += q.weights[p] * d * d;
    }
  }
  return std::sqrt(acc);
}

double l2_q_error(const DiscreteSolution& sol, const ManufacturedProblem& prob, int order) {
  const PolygonalMesh& mesh = *sol.mesh;
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellQuad q = cell_quadrature(mesh, c, order);
    const CellBasis basis(mesh, c, sol.q_deg);
    const Eigen::VectorXd coeffs = sol.q_on_cell(c);
    const int n = basis.size();
    for (int p = 0; p < static_cast<int>(q.points.size()); ++p) {
      const Eigen::VectorXd v = basis.eval(q.points[p]);
      const Vec2 qh(v.dot(coeffs.head(n)), v.dot(coeffs.tail(n)));
      acc += q.weights[p] * (qh - prob.flux(q.points[p])).squaredNorm();
    }
  }
  return std::sqrt(acc);
}

// Energy norm of u_h - {Q_0 u, Q_b u}: (a grad_w e, grad_w e) + s_p(e, e).
double energy_error(const DiscreteSolution& sol, const ManufacturedProblem& prob, int order) {
  const PolygonalMesh& mesh = *sol.mesh;
  const SchemeConfig& cfg = sol.config;
  const WeakScalarFunction& uh = *sol.u_weak;

  WeakScalarFunction e = uh;
  for (int c = 0; c < mesh.n_cells(); ++c)
    e.cell(c) -= project_cell_scalar(mesh, c, cfg.k, prob.u, order);
  for (int ed = 0; ed < mesh.n_edges(); ++ed)
    e.edge(ed) -= project_edge(mesh, ed, cfg.s, prob.u, order);

  const int nk = CellBasis::dimension(cfg.k);
  const int ns = cfg.s + 1;
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    ElementOps ops(mesh, c, order);
    const MeshCell& T = mesh.cell(c);
    Eigen::VectorXd loc(nk + ops.n_edges() * ns);
    loc.head(nk) = e.cell(c);
    for (int le = 0; le < ops.n_edges(); ++le)
      loc.segment(nk + le * ns, ns) = e.edge(T.edges[le]);
    const Eigen::VectorXd g = ops.weak_gradient_op(cfg.k, cfg.s, cfg.r) * loc;
    acc += g.dot(ops.weighted_vector_mass(cfg.r, [&](const Vec2& x) { return prob.a(x); }) * g);
    const double w = cfg.rho / T.diameter;
    for (int le = 0; le < ops.n_edges(); ++le) {
      const Eigen::VectorXd d =
          ops.edge_poly_trace(le, cfg.s, cfg.k) * e.cell(c) - e.edge(T.edges[le]);
      acc += w * d.squaredNorm();
    }
  }
  return std::sqrt(acc);
}

struct RateFit {
  double rate = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;
};

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  RateFit out;
  const int n = static_cast<int>(h.size());
  if (n < 2) return out;
  const int window = (n + 1) / 2;  // last ceil(n/2) levels = asymptotic regime
  const int from = n - std::max(window, 2);
  bool all_exact = true;
  for (int i = from; i < n; ++i) all_exact &= (err[i] <= kExactFloor);
  if (all_exact) {
    out.exact = true;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = from; i < n; ++i) {
    if (std::isnan(err[i])) return out;
    const double x = std::log(h[i]);
    const double y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  out.rate = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

std::string num_str(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::string rate_cell(double prev_err, double prev_h, double err, double h) {
  if (std::isnan(prev_err) || std::isnan(err)) return "nan";
  if (prev_err <= kExactFloor && err <= kExactFloor) return "exact";
  if (prev_err <= 0.0 || err <= 0.0) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", std::log(prev_err / err) / std::log(prev_h / h));
  return buf;
}

}  // namespace

ErrorReport run_single(const PolygonalMesh& mesh, const SchemeConfig& config,
                       const ManufacturedProblem& problem, Exec exec) {
  const auto t0 = std::chrono::steady_clock::now();
  const AssembledSystem sys = assemble(mesh, config.resolved(), problem.a, problem.f, exec);
  const DiscreteSolution sol = solve_system(sys);
  const int order = effective_quad_order(2 * sys.config.max_degree() + 2, true);

  ErrorReport rep;
  rep.h = mesh.max_diameter();
  rep.dofs_total = sys.size();
  rep.dofs_trace = sys.n_trace_dofs();
  rep.err_l2_u = l2_u_error(sol, problem, order);
  if (sol.u_weak) rep.err_energy = energy_error(sol, problem, order);
  if (sol.q_deg >= 0) rep.err_l2_q = l2_q_error(sol, problem, order);
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

ConvergenceStudy run_convergence(const std::vector<PolygonalMesh>& meshes,
                                 const SchemeConfig& config, const ManufacturedProblem& problem,
                                 Exec exec) {
  if (meshes.size() < 2)
    throw std::invalid_argument("run_convergence: need at least 2 meshes of decreasing h");
  ConvergenceStudy study;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    try {
      study.rows.push_back(run_single(meshes[i], config, problem, exec));
    } catch (const std::exception& ex) {
      throw std::runtime_error("convergence: failure on mesh " + std::to_string(i) + ": " +
                               ex.what());
    }
  }
  std::vector<double> h, eu, ee, eq;
  for (const auto& r : study.rows) {
    h.push_back(r.h);
    eu.push_back(r.err_l2_u);
    ee.push_back(r.err_energy);
    eq.push_back(r.err_l2_q);
  }
  const RateFit fu = fit_rate(h, eu), fe = fit_rate(h, ee), fq = fit_rate(h, eq);
  study.rate_l2_u = fu.rate;
  study.exact_l2_u = fu.exact;
  study.rate_energy = fe.rate;
  study.exact_energy = fe.exact;
  study.rate_l2_q = fq.rate;
  study.exact_l2_q = fq.exact;
  return study;
}

void write_csv(std::ostream& out, const ConvergenceStudy& study) {
  out << "h,dofs_total,dofs_trace,err_l2_u,rate_l2_u,err_energy,rate_energy,"
         "err_l2_q,rate_l2_q,seconds\n";
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    const ErrorReport& r = study.rows[i];
    const ErrorReport* prev = i > 0 ? &study.rows[i - 1] : nullptr;
    char sec[32];
    std::snprintf(sec, sizeof(sec), "%.3f", r.seconds);
    out << num_str(r.h) << "," << r.dofs_total << "," << r.dofs_trace << "," << num_str(r.err_l2_u)
        << "," << (prev ? rate_cell(prev->err_l2_u, prev->h, r.err_l2_u, r.h) : "nan") << ","
        << num_str(r.err_energy) << ","
        << (prev ? rate_cell(prev->err_energy, prev->h, r.err_energy, r.h) : "nan") << ","
        << num_str(r.err_l2_q) << ","
        << (prev ? rate_cell(prev->err_l2_q, prev->h, r.err_l2_q, r.h) : "nan") << "," << sec
        << "\n";
  }
}

void write_json(std::ostream& out, const ConvergenceStudy& study) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  auto jnum = [](double v) -> nlohmann::json {
    if (std::isnan(v)) return nullptr;
    return v;
  };
  for (const auto& r : study.rows) {
    j["rows"].push_back({{"h", r.h},
                         {"dofs_total", r.dofs_total},
                         {"dofs_trace", r.dofs_trace},
                         {"err_l2_u", jnum(r.err_l2_u)},
                         {"err_energy", jnum(r.err_energy)},
                         {"err_l2_q", jnum(r.err_l2_q)},
                         {"seconds", r.seconds}});
  }
  auto jrate = [&](double v, bool exact) -> nlohmann::json {
    if (exact) return "exact";
    return jnum(v);
  };
  j["rates"] = {{"l2_u", jrate(study.rate_l2_u, study.exact_l2_u)},
                {"energy", jrate(study.rate_energy, study.exact_energy)},
                {"l2_q", jrate(study.rate_l2_q, study.exact_l2_q)}};
  out << j.dump(2) << "\n";
}

namespace {

// L2(edge set) magnitudes of the comparison defects on a solution carrying
// (q0, u): ErrorEqn1 ~ (I-Q_b) u_h, ErrorEqn4 = (I-Q_b)(q0.n) + tau (I-Q_b) u_h.
void error_eqn_magnitudes(const DiscreteSolution& sol, double* e1, double* e4) {
  const PolygonalMesh& mesh = *sol.mesh;
  const SchemeConfig& cfg = sol.config;
  const int order = effective_quad_order(2 * cfg.max_degree() + 2, true);
  const bool has_q = sol.q_deg >= 0;
  double acc1 = 0.0, acc4 = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MeshCell& T = mesh.cell(c);
    const double tau = (sol.scheme == Scheme::HDG || sol.scheme == Scheme::HDGv2)
                           ? cfg.tau_for_cell(T.diameter)
                           : 1.0 / (cfg.rho * std::pow(T.diameter, cfg.alpha));
    const CellBasis bu(mesh, c, sol.u_deg);
    for (int le = 0; le < static_cast<int>(T.edges.size()); ++le) {
      const int e = T.edges[le];
      const EdgeQuad q = edge_quadrature(mesh, e, order);
      const EdgeBasis be(mesh, e, cfg.s);
      const Vec2 n = mesh.outward_normal(c, le);
      // Q_b projections of the traces
      Eigen::VectorXd pu = Eigen::VectorXd::Zero(cfg.s + 1);
      Eigen::VectorXd pq = Eigen::VectorXd::Zero(cfg.s + 1);
      for (int p = 0; p < static_cast<int>(q.points.size()); ++p) {
        const Eigen::VectorXd lb = be.eval_param(q.param[p]);
        pu += q.weights[p] * sol.eval_u(c, q.points[p]) * lb;
        if (has_q) pq += q.weights[p] * sol.eval_q(c, q.points[p]).dot(n) * lb;
      }
      for (int p = 0; p < static_cast<int>(q.points.size()); ++p) {
        const Eigen::VectorXd lb = be.eval_param(q.param[p]);
        const double du = sol.eval_u(c, q.points[p]) - lb.dot(pu);
        acc1 += q.weights[p] * du * du;
        if (has_q) {
          const double dq = sol.eval_q(c, q.points[p]).dot(n) - lb.dot(pq);
          acc4 += q.weights[p] * (dq + tau * du) * (dq + tau * du);
        }
      }
    }
  }
  *e1 = std::sqrt(acc1);
  *e4 = has_q ? std::sqrt(acc4) : std::numeric_limits<double>::quiet_NaN();
}

double rel_l2_diff(const DiscreteSolution& A, const DiscreteSolution& B, int order) {
  const PolygonalMesh& mesh = *A.mesh;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellQuad q = cell_quadrature(mesh, c, order);
    for (int p = 0; p < static_cast<int>(q.points.size()); ++p) {
      const double ua = A.eval_u(c, q.points[p]);
      const double d = ua - B.eval_u(c, q.points[p]);
      num += q.weights[p] * d * d;
      den += q.weights[p] * ua * ua;
    }
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

EquivalenceReport check_equivalence(const DiscreteSolution& A, const DiscreteSolution& B) {
  if (A.mesh != B.mesh)
    throw std::invalid_argument("check_equivalence: solutions live on different meshes");
  EquivalenceReport rep;
  bool comparable = false;
  double diff = 0.0;

  if (A.u_deg == B.u_deg) {
    comparable = true;
    diff = std::max(diff, (A.u_cell - B.u_cell).cwiseAbs().maxCoeff());
  }
  if (A.q_deg >= 0 && B.q_deg >= 0 && A.q_deg == B.q_deg)
    diff = std::max(diff, (A.q_cell - B.q_cell).cwiseAbs().maxCoeff()), comparable = true;
  if (A.trace && B.trace && A.trace->s == B.trace->s)
    diff = std::max(diff, (A.trace->edge_dofs - B.trace->edge_dofs).cwiseAbs().maxCoeff()),
        comparable = true;
  if (!comparable)
    throw std::invalid_argument("check_equivalence: schemes " + scheme_name(A.scheme) + " and " +
                                scheme_name(B.scheme) + " share no comparable fields");

  rep.max_coeff_diff = diff;
  rep.solution_scale = A.raw.size() ? A.raw.cwiseAbs().maxCoeff() : 0.0;
  rep.equivalent = diff <= 1e-9 * (1.0 + rep.solution_scale);
  rep.rel_l2_u_diff =
      rel_l2_diff(A, B, effective_quad_order(2 * std::max(A.u_deg, B.u_deg) + 2, true));

  const DiscreteSolution& diag = (A.q_deg >= 0) ? A : B;
  error_eqn_magnitudes(diag, &rep.err_eqn1, &rep.err_eqn4);
  return rep;
}

EquivalenceReport check_equivalence(const PolygonalMesh& mesh, const SchemeConfig& configA,
                                    const SchemeConfig& configB,
                                    const ManufacturedProblem& problem, Exec exec) {
  const DiscreteSolution a = solve_scheme(mesh, configA, problem.a, problem.f, exec);
  const DiscreteSolution b = solve_scheme(mesh, configB, problem.a, problem.f, exec);
  return check_equivalence(a, b);
}

Example8Result paper_example_8(int quad_order) {
  const PolygonalMesh mesh = generate_grid(1, 1, Rect{0, 0, 1, 1});
  const CoefficientField a = CoefficientField::affine(1.0, 1.0, 0.0);
  ElementOps ops(mesh, 0, quad_order);
  const auto a_fn = [&a](const Vec2& x) { return a(x); };
  const auto c_fn = [&a](const Vec2& x) { return a.inverse_at(x); };

  // Unit constant lifted fluxes q~_u = q~_v = (1, 0) in V(T) = [P_0]^2.
  Eigen::VectorXd qt(2);
  qt << 1.0, 0.0;
  const Eigen::MatrixXd Mc = ops.weighted_vector_mass(0, c_fn);
  const Eigen::MatrixXd Ma = ops.weighted_vector_mass(0, a_fn);

  Example8Result out;
  out.hdg_value = qt.dot(Mc * qt);  // (c q~_u, q~_v)

  // Qh(c q~): componentwise projection onto P_0(T).
  const Eigen::VectorXd rhs = Mc * qt;
  Eigen::VectorXd proj(2);
  proj[0] = ops.mass_solve(0, rhs.head(1))[0];
  proj[1] = ops.mass_solve(0, rhs.tail(1))[0];
  out.wg_value = proj.dot(Ma * proj);  // (a Qh(c q~_u), Qh(c q~_v))
  return out;
}

RewriteReport check_wg_rewrite(const PolygonalMesh& mesh, const SchemeConfig& config,
                               const ManufacturedProblem& problem, Exec exec) {
  SchemeConfig cfg = config;
  cfg.scheme = Scheme::PrimalWG;
  cfg = cfg.resolved();
  if (cfg.s < cfg.k)
    throw std::invalid_argument("check_wg_rewrite: requires s >= k (Q_b must act as the identity "
                                "on cell traces)");
  const AssembledSystem direct = assemble_primal_wg(mesh, cfg, problem.a, problem.f, exec);
  const AssembledSystem lifted = assemble_primal_wg_lifted(mesh, cfg, problem.a, problem.f, exec);
  RewriteReport rep;
  const Eigen::SparseMatrix<double> d = direct.matrix - lifted.matrix;
  for (int j = 0; j < d.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(d, j); it; ++it)
      rep.max_entry_diff = std::max(rep.max_entry_diff, std::abs(it.value()));
  for (int j = 0; j < direct.matrix.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(direct.matrix, j); it; ++it)
      rep.matrix_scale = std::max(rep.matrix_scale, std::abs(it.value()));
  rep.equal = rep.max_entry_diff <= 1e-12 * (1.0 + rep.matrix_scale);
  return rep;
}

double divergence_theorem_residual(const PolygonalMesh& mesh, const ManufacturedProblem& problem) {
  const int order = kGenericQuadOrder;
  double volume = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const CellQuad q = cell_quadrature(mesh, c, order);
    for (int p = 0; p < static_cast<int>(q.points.size()); ++p)
      volume += q.weights[p] * problem.f(q.points[p]);
  }
  double boundary = 0.0;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const MeshEdge& E = mesh.edge(e);
    if (!E.boundary) continue;
    const int c = E.cells[0];
    const Vec2 n = E.cell_sign[0] * E.normal;
    const EdgeQuad q = edge_quadrature(mesh, e, order);
    for (int p = 0; p < static_cast<int>(q.points.size()); ++p)
      boundary += q.weights[p] * problem.flux(q.points[p]).dot(n);
  }
  return std::abs(volume - boundary);
}

double stabilizer_energy(const DiscreteSolution& sol) {
  if (!sol.u_weak) throw std::invalid_argument("stabilizer_energy: needs a primal solution");
  return stabilizer_primal(*sol.mesh, *sol.u_weak, *sol.u_weak, sol.config.stabilizer());
}

}  // namespace wg
