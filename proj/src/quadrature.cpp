#include "wg/quadrature.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wg {

namespace {

QuadRule1D compute_gauss_legendre(int n) {
  QuadRule1D rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n with Chebyshev-like initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0, p1;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.points[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadRule1D& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  static std::map<int, QuadRule1D> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

EdgeQuad edge_quadrature(const PolygonalMesh& mesh, int e, int order) {
  const MeshEdge& E = mesh.edge(e);
  const int n = std::max(1, (order + 2) / 2);  // 2n-1 >= order
  const QuadRule1D& g = gauss_legendre(n);
  EdgeQuad q;
  q.points.resize(n);
  q.weights.resize(n);
  q.param.resize(n);
  const Vec2 a = mesh.vertex(E.verts[0]);
  const Vec2 b = mesh.vertex(E.verts[1]);
  for (int i = 0; i < n; ++i) {
    const double t = g.points[i];
    q.param[i] = t;
    q.points[i] = 0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b;
    q.weights[i] = 0.5 * E.length * g.weights[i];
  }
  return q;
}

CellQuad cell_quadrature(const PolygonalMesh& mesh, int c, int order) {
  const MeshCell& T = mesh.cell(c);
  const int n = static_cast<int>(T.verts.size());
  // Duffy split of each fan triangle: x = v0 + u*(v1-v0) + u v*(v2-v1) with
  // Jacobian 2|tri| u is not what we use; we map the collapsed square
  // (u, v) -> (xi, eta) = (u, v(1-u)) on the reference triangle, which keeps
  // polynomial exactness with Gauss points in each direction.
  const int nu = std::max(1, (order + 3) / 2);  // 2nu-1 >= order+1 (Jacobian adds one degree)
  const int nv = std::max(1, (order + 2) / 2);
  const QuadRule1D& gu = gauss_legendre(nu);
  const QuadRule1D& gv = gauss_legendre(nv);

  CellQuad q;
  q.points.reserve(static_cast<std::size_t>(n) * nu * nv);
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(n) * nu * nv);

  for (int i = 0; i < n; ++i) {
    const Vec2 v0 = T.centroid;
    const Vec2 v1 = mesh.vertex(T.verts[i]);
    const Vec2 v2 = mesh.vertex(T.verts[(i + 1) % n]);
    const double two_area = (v1 - v0).x() * (v2 - v0).y() - (v2 - v0).x() * (v1 - v0).y();
    if (std::abs(two_area) < 1e-15) continue;  // collinear fan triangle (split-edge vertices)
    for (int a = 0; a < nu; ++a) {
      const double u = 0.5 * (gu.points[a] + 1.0);
      const double wu = 0.5 * gu.weights[a];
      for (int b = 0; b < nv; ++b) {
        const double v = 0.5 * (gv.points[b] + 1.0);
        const double wv = 0.5 * gv.weights[b];
        const double xi = u;
        const double eta = v * (1.0 - u);
        q.points.push_back(v0 + xi * (v1 - v0) + eta * (v2 - v0));
        w.push_back(wu * wv * (1.0 - u) * two_area);
      }
    }
  }
  q.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<int>(w.size()));
  return q;
}

int effective_quad_order(int poly_degree, bool has_generic_integrand) {
  int order = poly_degree;
  if (has_generic_integrand) order = std::max(order, kGenericQuadOrder);
  if (const char* env = std::getenv("WG_QUAD_ORDER")) {
    const int o = std::atoi(env);
    if (o > 0) order = o;
  }
  return order;
}

}  // namespace wg
