#include "wg/element.hpp"

#include <stdexcept>

namespace wg {

ElementOps::ElementOps(const PolygonalMesh& mesh, int cell, int quad_order)
    : mesh_(mesh), cell_(cell), order_(quad_order) {
  quad_ = cell_quadrature(mesh, cell, quad_order);
  const MeshCell& T = mesh.cell(cell);
  equads_.reserve(T.edges.size());
  for (int e : T.edges) equads_.push_back(edge_quadrature(mesh, e, quad_order));
}

const CellBasis& ElementOps::basis(int degree) {
  auto it = bases_.find(degree);
  if (it == bases_.end()) it = bases_.emplace(degree, CellBasis(mesh_, cell_, degree)).first;
  return it->second;
}

const EdgeBasis& ElementOps::edge_basis(int le, int degree) {
  const auto key = std::make_pair(le, degree);
  auto it = ebases_.find(key);
  if (it == ebases_.end())
    it = ebases_.emplace(key, EdgeBasis(mesh_, geom().edges[le], degree)).first;
  return it->second;
}

const ElementOps::BasisAtQuad& ElementOps::cell_eval(int degree) {
  auto it = cell_evals_.find(degree);
  if (it != cell_evals_.end()) return it->second;
  const CellBasis& b = basis(degree);
  const int npts = static_cast<int>(quad_.points.size());
  BasisAtQuad e;
  e.val.resize(npts, b.size());
  e.dx.resize(npts, b.size());
  e.dy.resize(npts, b.size());
  for (int p = 0; p < npts; ++p) {
    e.val.row(p) = b.eval(quad_.points[p]).transpose();
    const Eigen::MatrixXd g = b.eval_grad(quad_.points[p]);
    e.dx.row(p) = g.col(0).transpose();
    e.dy.row(p) = g.col(1).transpose();
  }
  return cell_evals_.emplace(degree, std::move(e)).first->second;
}

const Eigen::MatrixXd& ElementOps::cell_trace_eval(int le, int degree) {
  const auto key = std::make_pair(le, degree);
  auto it = trace_evals_.find(key);
  if (it != trace_evals_.end()) return it->second;
  const CellBasis& b = basis(degree);
  const EdgeQuad& q = equads_[le];
  Eigen::MatrixXd v(static_cast<int>(q.points.size()), b.size());
  for (int p = 0; p < static_cast<int>(q.points.size()); ++p)
    v.row(p) = b.eval(q.points[p]).transpose();
  return trace_evals_.emplace(key, std::move(v)).first->second;
}

const Eigen::MatrixXd& ElementOps::edge_basis_eval(int le, int degree) {
  const auto key = std::make_pair(le, degree);
  auto it = ebasis_evals_.find(key);
  if (it != ebasis_evals_.end()) return it->second;
  const EdgeBasis& b = edge_basis(le, degree);
  const EdgeQuad& q = equads_[le];
  Eigen::MatrixXd v(static_cast<int>(q.points.size()), b.size());
  for (int p = 0; p < static_cast<int>(q.points.size()); ++p)
    v.row(p) = b.eval_param(q.param[p]).transpose();
  return ebasis_evals_.emplace(key, std::move(v)).first->second;
}

const Eigen::MatrixXd& ElementOps::mass(int degree) {
  auto it = masses_.find(degree);
  if (it != masses_.end()) return it->second;
  const BasisAtQuad& e = cell_eval(degree);
  Eigen::MatrixXd m = e.val.transpose() * quad_.weights.asDiagonal() * e.val;
  return masses_.emplace(degree, std::move(m)).first->second;
}

Eigen::MatrixXd ElementOps::cross_mass(int d1, int d2) {
  const BasisAtQuad& e1 = cell_eval(d1);
  const BasisAtQuad& e2 = cell_eval(d2);
  return e1.val.transpose() * quad_.weights.asDiagonal() * e2.val;
}

Eigen::MatrixXd ElementOps::vector_cross_mass(int d1, int d2) {
  const Eigen::MatrixXd m = cross_mass(d1, d2);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m.rows(), 2 * m.cols());
  out.topLeftCorner(m.rows(), m.cols()) = m;
  out.bottomRightCorner(m.rows(), m.cols()) = m;
  return out;
}

Eigen::MatrixXd ElementOps::weighted_mass(int degree, const ScalarFn& w) {
  const BasisAtQuad& e = cell_eval(degree);
  Eigen::VectorXd ww(quad_.weights.size());
  for (int p = 0; p < ww.size(); ++p) ww[p] = quad_.weights[p] * w(quad_.points[p]);
  return e.val.transpose() * ww.asDiagonal() * e.val;
}

Eigen::MatrixXd ElementOps::vector_mass(int degree) {
  const Eigen::MatrixXd& m = mass(degree);
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m;
  out.bottomRightCorner(n, n) = m;
  return out;
}

Eigen::MatrixXd ElementOps::weighted_vector_mass(int degree, const ScalarFn& w) {
  const Eigen::MatrixXd m = weighted_mass(degree, w);
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n) = m;
  out.bottomRightCorner(n, n) = m;
  return out;
}

Eigen::VectorXd ElementOps::load(int degree, const ScalarFn& f) {
  const BasisAtQuad& e = cell_eval(degree);
  Eigen::VectorXd fw(quad_.weights.size());
  for (int p = 0; p < fw.size(); ++p) fw[p] = quad_.weights[p] * f(quad_.points[p]);
  return e.val.transpose() * fw;
}

Eigen::VectorXd ElementOps::vector_load(int degree, const std::function<Vec2(const Vec2&)>& f) {
  const BasisAtQuad& e = cell_eval(degree);
  Eigen::VectorXd fx(quad_.weights.size()), fy(quad_.weights.size());
  for (int p = 0; p < fx.size(); ++p) {
    const Vec2 v = f(quad_.points[p]);
    fx[p] = quad_.weights[p] * v.x();
    fy[p] = quad_.weights[p] * v.y();
  }
  Eigen::VectorXd out(2 * e.val.cols());
  out.head(e.val.cols()) = e.val.transpose() * fx;
  out.tail(e.val.cols()) = e.val.transpose() * fy;
  return out;
}

Eigen::MatrixXd ElementOps::div_times(int deg_vec, int deg_scalar) {
  const BasisAtQuad& v = cell_eval(deg_vec);
  const BasisAtQuad& s = cell_eval(deg_scalar);
  const int nv = static_cast<int>(v.val.cols());
  Eigen::MatrixXd out(2 * nv, s.val.cols());
  out.topRows(nv) = v.dx.transpose() * quad_.weights.asDiagonal() * s.val;
  out.bottomRows(nv) = v.dy.transpose() * quad_.weights.asDiagonal() * s.val;
  return out;
}

Eigen::MatrixXd ElementOps::grad_dot(int deg_vec, int deg_scalar) {
  const BasisAtQuad& v = cell_eval(deg_vec);
  const BasisAtQuad& s = cell_eval(deg_scalar);
  const int nv = static_cast<int>(v.val.cols());
  Eigen::MatrixXd out(2 * nv, s.val.cols());
  out.topRows(nv) = v.val.transpose() * quad_.weights.asDiagonal() * s.dx;
  out.bottomRows(nv) = v.val.transpose() * quad_.weights.asDiagonal() * s.dy;
  return out;
}

Eigen::MatrixXd ElementOps::edge_poly_trace(int le, int s, int deg_scalar) {
  const Eigen::MatrixXd& eb = edge_basis_eval(le, s);
  const Eigen::MatrixXd& tr = cell_trace_eval(le, deg_scalar);
  return eb.transpose() * equads_[le].weights.asDiagonal() * tr;
}

Eigen::MatrixXd ElementOps::edge_poly_normal(int le, int s, int deg_vec) {
  const Eigen::MatrixXd p = edge_poly_trace(le, s, deg_vec);
  const Vec2 n = mesh_.outward_normal(cell_, le);
  Eigen::MatrixXd out(p.rows(), 2 * p.cols());
  out.leftCols(p.cols()) = n.x() * p;
  out.rightCols(p.cols()) = n.y() * p;
  return out;
}

Eigen::MatrixXd ElementOps::edge_trace_mass(int le, int d1, int d2) {
  const Eigen::MatrixXd& t1 = cell_trace_eval(le, d1);
  const Eigen::MatrixXd& t2 = cell_trace_eval(le, d2);
  return t1.transpose() * equads_[le].weights.asDiagonal() * t2;
}

Eigen::MatrixXd ElementOps::edge_scalar_normal(int le, int ds, int dv) {
  const Eigen::MatrixXd m = edge_trace_mass(le, ds, dv);
  const Vec2 n = mesh_.outward_normal(cell_, le);
  Eigen::MatrixXd out(m.rows(), 2 * m.cols());
  out.leftCols(m.cols()) = n.x() * m;
  out.rightCols(m.cols()) = n.y() * m;
  return out;
}

Eigen::VectorXd ElementOps::mass_solve(int degree, const Eigen::VectorXd& rhs) {
  auto it = mass_llt_.find(degree);
  if (it == mass_llt_.end()) {
    Eigen::LLT<Eigen::MatrixXd> llt(mass(degree));
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("element: local mass matrix not SPD on cell " + std::to_string(cell_));
    it = mass_llt_.emplace(degree, std::move(llt)).first;
  }
  return it->second.solve(rhs);
}

Eigen::MatrixXd ElementOps::weak_gradient_op(int k, int s, int r) {
  const int nk = CellBasis::dimension(k);
  const int nr = CellBasis::dimension(r);
  const int ne = n_edges();
  Eigen::MatrixXd rhs(2 * nr, nk + ne * (s + 1));
  rhs.leftCols(nk) = -div_times(r, k);
  int col = nk;
  for (int le = 0; le < ne; ++le) {
    rhs.middleCols(col, s + 1) = edge_poly_normal(le, s, r).transpose();
    col += s + 1;
  }
  // block-diagonal vector mass solve, one scalar solve per component
  Eigen::MatrixXd out(2 * nr, rhs.cols());
  for (int j = 0; j < rhs.cols(); ++j) {
    out.col(j).head(nr) = mass_solve(r, rhs.col(j).head(nr));
    out.col(j).tail(nr) = mass_solve(r, rhs.col(j).tail(nr));
  }
  return out;
}

Eigen::MatrixXd ElementOps::weak_divergence_op(int k, int s, int r) {
  const int nk = CellBasis::dimension(k);
  const int nr = CellBasis::dimension(r);
  const int ne = n_edges();
  Eigen::MatrixXd rhs(nr, 2 * nk + ne * (s + 1));
  rhs.leftCols(2 * nk) = -grad_dot(k, r).transpose();
  int col = 2 * nk;
  for (int le = 0; le < ne; ++le) {
    rhs.middleCols(col, s + 1) = edge_poly_trace(le, s, r).transpose();
    col += s + 1;
  }
  Eigen::MatrixXd out(nr, rhs.cols());
  for (int j = 0; j < rhs.cols(); ++j) out.col(j) = mass_solve(r, rhs.col(j));
  return out;
}

Eigen::MatrixXd ElementOps::lift_flux_op(int deg_w, int s, int kv, const ScalarFn& c) {
  const int nw = CellBasis::dimension(deg_w);
  const int nv = CellBasis::dimension(kv);
  const int ne = n_edges();
  // rows: test functions v in [P_kv]^2; columns: [w; mu per edge]
  Eigen::MatrixXd rhs(2 * nv, nw + ne * (s + 1));
  rhs.leftCols(nw) = div_times(kv, deg_w);
  int col = nw;
  for (int le = 0; le < ne; ++le) {
    rhs.middleCols(col, s + 1) = -edge_poly_normal(le, s, kv).transpose();
    col += s + 1;
  }
  const Eigen::MatrixXd mc = weighted_mass(kv, c);
  Eigen::LLT<Eigen::MatrixXd> llt(mc);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("element: weighted mass matrix not SPD on cell " + std::to_string(cell_) +
                             " (coefficient must be positive)");
  Eigen::MatrixXd out(2 * nv, rhs.cols());
  for (int j = 0; j < rhs.cols(); ++j) {
    out.col(j).head(nv) = llt.solve(rhs.col(j).head(nv));
    out.col(j).tail(nv) = llt.solve(rhs.col(j).tail(nv));
  }
  return out;
}

double eval_cell_poly(const PolygonalMesh& mesh, int cell, int degree,
                      const Eigen::VectorXd& coeffs, const Vec2& x) {
  const CellBasis b(mesh, cell, degree);
  return b.eval(x).dot(coeffs);
}

Vec2 eval_cell_poly_vec(const PolygonalMesh& mesh, int cell, int degree,
                        const Eigen::VectorXd& coeffs, const Vec2& x) {
  const CellBasis b(mesh, cell, degree);
  const Eigen::VectorXd v = b.eval(x);
  const int n = b.size();
  return Vec2(v.dot(coeffs.head(n)), v.dot(coeffs.tail(n)));
}

}  // namespace wg
