#include "wg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace wg {

namespace {

double signed_area(const std::vector<Vec2>& verts, const std::vector<int>& cell) {
  double a = 0.0;
  const int n = static_cast<int>(cell.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = verts[cell[i]];
    const Vec2& q = verts[cell[(i + 1) % n]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Proper or overlapping intersection of segments pq and rs, excluding shared
// endpoints. Used for the simple-polygon check on non-adjacent cell sides.
bool segments_collide(const Vec2& p, const Vec2& q, const Vec2& r, const Vec2& s) {
  const double eps = 1e-14;
  const Vec2 d1 = q - p, d2 = s - r;
  const double denom = cross(d1, d2);
  if (std::abs(denom) > eps * d1.norm() * d2.norm()) {
    const double t = cross(r - p, d2) / denom;
    const double u = cross(r - p, d1) / denom;
    const double tol = 1e-12;
    return t > tol && t < 1.0 - tol && u > tol && u < 1.0 - tol;
  }
  // Parallel: collide only if collinear and overlapping in more than a point.
  if (std::abs(cross(r - p, d1)) > eps * d1.norm() * (r - p).norm() + eps) return false;
  const double len2 = d1.squaredNorm();
  double t0 = (r - p).dot(d1) / len2;
  double t1 = (s - p).dot(d1) / len2;
  if (t0 > t1) std::swap(t0, t1);
  const double tol = 1e-12;
  return t1 > tol && t0 < 1.0 - tol && (t1 - t0) > tol;
}

}  // namespace

PolygonalMesh::PolygonalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)) {
  cells_.reserve(cells.size());
  for (auto& cv : cells) {
    MeshCell c;
    c.verts = std::move(cv);
    cells_.push_back(std::move(c));
  }
  validate_cells();
  build_edges();
}

void PolygonalMesh::validate_cells() {
  const int nv = n_vertices();
  for (std::size_t ic = 0; ic < cells_.size(); ++ic) {
    MeshCell& c = cells_[ic];
    const int n = static_cast<int>(c.verts.size());
    if (n < 3) throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " has fewer than 3 vertices");
    std::set<int> uniq(c.verts.begin(), c.verts.end());
    if (static_cast<int>(uniq.size()) != n)
      throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " repeats a vertex index");
    for (int v : c.verts)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " references invalid vertex " + std::to_string(v));

    double sa = signed_area(vertices_, c.verts);
    if (std::abs(sa) < 1e-14)
      throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " has zero area");
    if (sa < 0.0) {  // clockwise input: reorient
      std::reverse(c.verts.begin(), c.verts.end());
      sa = -sa;
    }
    c.area = sa;

    // Self-intersection check over non-adjacent sides.
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_collide(vertices_[c.verts[i]], vertices_[c.verts[(i + 1) % n]],
                             vertices_[c.verts[j]], vertices_[c.verts[(j + 1) % n]]))
          throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " is not a simple polygon");
      }
    }

    // Geometry: centroid (area-weighted), diameter, perimeter.
    Vec2 cen = Vec2::Zero();
    for (int i = 0; i < n; ++i) {
      const Vec2& p = vertices_[c.verts[i]];
      const Vec2& q = vertices_[c.verts[(i + 1) % n]];
      const double w = p.x() * q.y() - q.x() * p.y();
      cen += w * (p + q);
    }
    c.centroid = cen / (6.0 * c.area);
    c.diameter = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        c.diameter = std::max(c.diameter, (vertices_[c.verts[i]] - vertices_[c.verts[j]]).norm());
    c.perimeter = 0.0;
    for (int i = 0; i < n; ++i)
      c.perimeter += (vertices_[c.verts[(i + 1) % n]] - vertices_[c.verts[i]]).norm();
  }
}

void PolygonalMesh::build_edges() {
  std::map<std::pair<int, int>, int> edge_of;
  for (int ic = 0; ic < n_cells(); ++ic) {
    MeshCell& c = cells_[ic];
    const int n = static_cast<int>(c.verts.size());
    c.edges.resize(n);
    c.edge_sign.resize(n);
    for (int i = 0; i < n; ++i) {
      const int a = c.verts[i];
      const int b = c.verts[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      int ie;
      if (it == edge_of.end()) {
        MeshEdge e;
        e.verts = {key.first, key.second};
        const Vec2 p = vertices_[key.first], q = vertices_[key.second];
        e.length = (q - p).norm();
        if (e.length < 1e-14)
          throw std::invalid_argument("mesh: degenerate (zero-length) edge in cell " + std::to_string(ic));
        const Vec2 t = (q - p) / e.length;
        e.normal = Vec2(t.y(), -t.x());  // outward for a CCW traversal first->second
        e.midpoint = 0.5 * (p + q);
        ie = n_edges();
        edges_.push_back(e);
        edge_of.emplace(key, ie);
      } else {
        ie = it->second;
      }
      MeshEdge& e = edges_[ie];
      const double sign = (a == e.verts[0]) ? 1.0 : -1.0;
      if (e.cells[0] == -1) {
        e.cells[0] = ic;
        e.cell_sign[0] = sign;
      } else if (e.cells[1] == -1) {
        if (e.cells[0] == ic)
          throw std::invalid_argument("mesh: cell " + std::to_string(ic) + " traverses an edge twice");
        if (e.cell_sign[0] == sign)
          throw std::invalid_argument("mesh: inconsistent orientation on shared edge of cells " +
                                      std::to_string(e.cells[0]) + " and " + std::to_string(ic));
        e.cells[1] = ic;
        e.cell_sign[1] = sign;
      } else {
        throw std::invalid_argument("mesh: edge (" + std::to_string(key.first) + "," +
                                    std::to_string(key.second) + ") has more than two owner cells");
      }
      c.edges[i] = ie;
      c.edge_sign[i] = sign;
    }
  }
  n_interior_edges_ = 0;
  for (auto& e : edges_) {
    e.boundary = (e.cells[1] == -1);
    if (!e.boundary) ++n_interior_edges_;
  }
}

int PolygonalMesh::local_edge_index(int c, int e) const {
  const MeshCell& T = cells_[c];
  for (int i = 0; i < static_cast<int>(T.edges.size()); ++i)
    if (T.edges[i] == e) return i;
  return -1;
}

double PolygonalMesh::max_diameter() const {
  double h = 0.0;
  for (const auto& c : cells_) h = std::max(h, c.diameter);
  return h;
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (const auto& c : cells_) a += c.area;
  return a;
}

PolygonalMesh generate_grid(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_grid: nx and ny must be positive");
  if (domain.width() <= 0.0 || domain.height() <= 0.0)
    throw std::invalid_argument("generate_grid: domain must have positive area");

  std::vector<Vec2> verts;
  verts.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      verts.emplace_back(domain.x0 + domain.width() * i / nx, domain.y0 + domain.height() * j / ny);

  std::vector<std::vector<int>> cells;
  cells.reserve(nx * ny);
  auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});

  return PolygonalMesh(std::move(verts), std::move(cells));
}

PolygonalMesh generate_polygonal(int n, const Rect& domain) {
  if (n < 1) throw std::invalid_argument("generate_polygonal: n must be positive");
  if (domain.width() <= 0.0 || domain.height() <= 0.0)
    throw std::invalid_argument("generate_polygonal: domain must have positive area");

  // Running-bond brick layout on an integer lattice of pitch 1/(2n): rows of
  // height 1, bricks of width 2, odd rows shifted by 1. All vertex
  // coordinates are lattice points, so dedup is exact.
  const int m = 2 * n;  // lattice resolution per direction
  std::map<std::pair<int, int>, int> vid;
  std::vector<Vec2> verts;
  auto vertex_at = [&](int ix, int iy) {
    auto it = vid.find({ix, iy});
    if (it != vid.end()) return it->second;
    const int id = static_cast<int>(verts.size());
    verts.emplace_back(domain.x0 + domain.width() * ix / m, domain.y0 + domain.height() * iy / m);
    vid.emplace(std::make_pair(ix, iy), id);
    return id;
  };

  auto row_cuts = [&](int row) {
    std::vector<int> cuts{0};
    const int off = (row % 2 == 0) ? 0 : 1;
    for (int x = off; x < m; x += 2)
      if (x > 0) cuts.push_back(x);
    cuts.push_back(m);
    return cuts;
  };

  std::vector<std::vector<int>> cells;
  for (int row = 0; row < m; ++row) {
    const std::vector<int> cuts = row_cuts(row);
    const std::vector<int> below = (row > 0) ? row_cuts(row - 1) : std::vector<int>{};
    const std::vector<int> above = (row + 1 < m) ? row_cuts(row + 1) : std::vector<int>{};
    for (std::size_t ib = 0; ib + 1 < cuts.size(); ++ib) {
      const int xa = cuts[ib], xb = cuts[ib + 1];
      std::vector<int> poly;
      poly.push_back(vertex_at(xa, row));
      for (int x : below)
        if (x > xa && x < xb) poly.push_back(vertex_at(x, row));
      poly.push_back(vertex_at(xb, row));
      poly.push_back(vertex_at(xb, row + 1));
      for (auto it = above.rbegin(); it != above.rend(); ++it)
        if (*it > xa && *it < xb) poly.push_back(vertex_at(*it, row + 1));
      poly.push_back(vertex_at(xa, row + 1));
      cells.push_back(std::move(poly));
    }
  }

  return PolygonalMesh(std::move(verts), std::move(cells));
}

PolygonalMesh split_edges(const PolygonalMesh& mesh) {
  std::vector<Vec2> verts = mesh.vertices();
  std::vector<int> mid_of(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    mid_of[e] = static_cast<int>(verts.size());
    verts.push_back(mesh.edge(e).midpoint);
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const MeshCell& T = mesh.cell(c);
    std::vector<int> poly;
    for (std::size_t i = 0; i < T.verts.size(); ++i) {
      poly.push_back(T.verts[i]);
      poly.push_back(mid_of[T.edges[i]]);
    }
    cells.push_back(std::move(poly));
  }
  return PolygonalMesh(std::move(verts), std::move(cells));
}

PolygonalMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_mesh: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::invalid_argument("load_mesh: parse failure in '" + path + "': " + ex.what());
  }
  if (!j.contains("vertices") || !j.contains("cells"))
    throw std::invalid_argument("load_mesh: '" + path + "' is missing \"vertices\" or \"cells\"");

  std::vector<Vec2> verts;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2)
      throw std::invalid_argument("load_mesh: vertex entries must be [x, y] pairs");
    verts.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  std::vector<std::vector<int>> cells;
  for (const auto& c : j.at("cells")) cells.push_back(c.get<std::vector<int>>());

  return PolygonalMesh(std::move(verts), std::move(cells));
}

void save_mesh(const PolygonalMesh& mesh, const std::string& path) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (int i = 0; i < mesh.n_vertices(); ++i)
    j["vertices"].push_back({mesh.vertex(i).x(), mesh.vertex(i).y()});
  j["cells"] = nlohmann::json::array();
  for (int c = 0; c < mesh.n_cells(); ++c) j["cells"].push_back(mesh.cell(c).verts);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_mesh: cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace wg
