// Local polynomial spaces: scaled centroid-centered monomials P_k(T) on
// cells, orthonormal Legendre polynomials P_s(e) on edges.

#ifndef WG_BASIS_HPP
#define WG_BASIS_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wg/mesh.hpp"

namespace wg {

/// Basis of P_k(T): phi_j(x) = ((x - x_c)/h_T)^alpha, |alpha| <= k, ordered
/// by total degree then by descending x-exponent. The scaling keeps local
/// mass matrices well conditioned on small cells.
class CellBasis {
public:
  CellBasis(const PolygonalMesh& mesh, int cell, int degree);

  static int dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::pair<int, int>& exponent(int j) const { return exps_[j]; }

  Eigen::VectorXd eval(const Vec2& x) const;
  /// Gradients as a size x 2 matrix (rows: basis functions).
  Eigen::MatrixXd eval_grad(const Vec2& x) const;

private:
  int degree_;
  Vec2 center_;
  double scale_;
  std::vector<std::pair<int, int>> exps_;
};

/// Basis of P_s(e): Legendre polynomials in the arclength parameter mapped to
/// [-1,1], normalized so the edge mass matrix is the identity.
class EdgeBasis {
public:
  EdgeBasis(const PolygonalMesh& mesh, int edge, int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  /// Values at parameter t in [-1,1] (reference direction verts[0]->verts[1]).
  Eigen::VectorXd eval_param(double t) const;
  /// Values at a point on the edge.
  Eigen::VectorXd eval(const Vec2& x) const;

private:
  int degree_;
  double length_;
  Vec2 a_, dir_;  // endpoint and unit direction for point->parameter mapping
};

}  // namespace wg

#endif
