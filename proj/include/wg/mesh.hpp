// Polygonal meshes: cells, derived edge partition, geometric queries,
// generators and JSON I/O.

#ifndef WG_MESH_HPP
#define WG_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wg {

using Vec2 = Eigen::Vector2d;

/// Axis-aligned rectangle (x0,y0)-(x1,y1).
struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// One element of the edge partition. Interior edges have two owner cells,
/// boundary edges one. The stored unit normal is the reference normal; the
/// outward normal of owner i is cell_sign[i] * normal, so the two outward
/// normals of an interior edge are exact negatives of each other.
struct MeshEdge {
  std::array<int, 2> verts{-1, -1};  // global vertex indices, verts[0] < verts[1]
  std::array<int, 2> cells{-1, -1};  // owner cells; cells[1] == -1 on the boundary
  std::array<double, 2> cell_sign{0.0, 0.0};
  Vec2 normal = Vec2::Zero();  // unit reference normal
  Vec2 midpoint = Vec2::Zero();
  double length = 0.0;
  bool boundary = false;
};

struct MeshCell {
  std::vector<int> verts;        // counterclockwise
  std::vector<int> edges;        // edge index per consecutive vertex pair
  std::vector<double> edge_sign; // outward normal on edges[i] = edge_sign[i] * edge.normal
  double area = 0.0;
  double diameter = 0.0;  // h_T = max pairwise vertex distance
  double perimeter = 0.0;
  Vec2 centroid = Vec2::Zero();
};

/// A polygonal partition of a 2D domain together with the edge partition of
/// the element-boundary set. Immutable after construction; safe for
/// concurrent reads. Generators produce shape-regular meshes only; shape
/// regularity is assumed, not enforced.
class PolygonalMesh {
public:
  /// Build from raw vertex/cell lists (the JSON schema). Clockwise cells are
  /// reoriented; invalid input (repeated vertex in a cell, zero-area or
  /// self-intersecting cell, an edge with more than two owners) throws.
  PolygonalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  int n_interior_edges() const { return n_interior_edges_; }

  const Vec2& vertex(int i) const { return vertices_[i]; }
  const MeshCell& cell(int i) const { return cells_[i]; }
  const MeshEdge& edge(int i) const { return edges_[i]; }

  /// Outward unit normal of cell `c` on its local edge `le`.
  Vec2 outward_normal(int c, int le) const {
    const MeshCell& T = cells_[c];
    return T.edge_sign[le] * edges_[T.edges[le]].normal;
  }

  /// Local index of global edge `e` within cell `c` (-1 if not incident).
  int local_edge_index(int c, int e) const;

  double max_diameter() const;   // max over h_T
  double total_area() const;     // sum of |T|

  const std::vector<Vec2>& vertices() const { return vertices_; }

private:
  std::vector<Vec2> vertices_;
  std::vector<MeshCell> cells_;
  std::vector<MeshEdge> edges_;
  int n_interior_edges_ = 0;

  void build_edges();
  void validate_cells();
};

/// Uniform nx-by-ny rectangular mesh of `domain`.
PolygonalMesh generate_grid(int nx, int ny, const Rect& domain = Rect{});

/// Polygonal mesh of refinement level n >= 1: a running-bond brick layout
/// whose interior cells are hexagons/pentagons with collinear vertices, i.e.
/// element interfaces that are portions of flat sides. max h_T halves when n
/// doubles.
PolygonalMesh generate_polygonal(int n, const Rect& domain = Rect{});

/// Split every edge at its midpoint, keeping the cells geometrically
/// identical. Exercises edge partitions finer than the cell sides.
PolygonalMesh split_edges(const PolygonalMesh& mesh);

/// JSON I/O: {"vertices": [[x,y],...], "cells": [[i0,i1,...],...]}.
/// Edges are derived, never stored. save->load reproduces vertices and
/// cells exactly.
PolygonalMesh load_mesh(const std::string& path);
void save_mesh(const PolygonalMesh& mesh, const std::string& path);

}  // namespace wg

#endif
