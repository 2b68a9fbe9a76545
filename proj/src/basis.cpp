#include "wg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace wg {

CellBasis::CellBasis(const PolygonalMesh& mesh, int cell, int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("CellBasis: degree must be >= 0");
  const MeshCell& T = mesh.cell(cell);
  center_ = T.centroid;
  scale_ = T.diameter;
  exps_.reserve(dimension(degree));
  for (int d = 0; d <= degree; ++d)
    for (int ax = d; ax >= 0; --ax) exps_.emplace_back(ax, d - ax);
}

Eigen::VectorXd CellBasis::eval(const Vec2& x) const {
  const double u = (x.x() - center_.x()) / scale_;
  const double v = (x.y() - center_.y()) / scale_;
  Eigen::VectorXd pu(degree_ + 1), pv(degree_ + 1);
  pu[0] = pv[0] = 1.0;
  for (int d = 1; d <= degree_; ++d) {
    pu[d] = pu[d - 1] * u;
    pv[d] = pv[d - 1] * v;
  }
  Eigen::VectorXd out(size());
  for (int j = 0; j < size(); ++j) out[j] = pu[exps_[j].first] * pv[exps_[j].second];
  return out;
}

Eigen::MatrixXd CellBasis::eval_grad(const Vec2& x) const {
  const double u = (x.x() - center_.x()) / scale_;
  const double v = (x.y() - center_.y()) / scale_;
  Eigen::VectorXd pu(degree_ + 1), pv(degree_ + 1);
  pu[0] = pv[0] = 1.0;
  for (int d = 1; d <= degree_; ++d) {
    pu[d] = pu[d - 1] * u;
    pv[d] = pv[d - 1] * v;
  }
  Eigen::MatrixXd g(size(), 2);
  for (int j = 0; j < size(); ++j) {
    const int a = exps_[j].first, b = exps_[j].second;
    g(j, 0) = (a > 0) ? a * pu[a - 1] * pv[b] / scale_ : 0.0;
    g(j, 1) = (b > 0) ? b * pu[a] * pv[b - 1] / scale_ : 0.0;
  }
  return g;
}

EdgeBasis::EdgeBasis(const PolygonalMesh& mesh, int edge, int degree) : degree_(degree) {
  if (degree < 0) throw std::invalid_argument("EdgeBasis: degree must be >= 0");
  const MeshEdge& e = mesh.edge(edge);
  length_ = e.length;
  a_ = mesh.vertex(e.verts[0]);
  dir_ = (mesh.vertex(e.verts[1]) - a_) / length_;
}

Eigen::VectorXd EdgeBasis::eval_param(double t) const {
  Eigen::VectorXd out(size());
  double p0 = 1.0, p1 = t;
  for (int n = 0; n <= degree_; ++n) {
    double pn;
    if (n == 0)
      pn = p0;
    else if (n == 1)
      pn = p1;
    else {
      pn = ((2.0 * n - 1.0) * t * p1 - (n - 1.0) * p0) / n;
      p0 = p1;
      p1 = pn;
    }
    out[n] = pn * std::sqrt((2.0 * n + 1.0) / length_);
  }
  return out;
}

Eigen::VectorXd EdgeBasis::eval(const Vec2& x) const {
  const double t = 2.0 * (x - a_).dot(dir_) / length_ - 1.0;
  return eval_param(t);
}

}  // namespace wg
