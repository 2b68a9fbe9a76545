#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <set>

#include "wg/mesh.hpp"

using namespace wg;

TEST_CASE("unit grid: single cell geometry") {
  const PolygonalMesh m = generate_grid(1, 1, Rect{0, 0, 1, 1});
  CHECK(m.n_cells() == 1);
  CHECK(m.n_edges() == 4);
  CHECK(m.n_interior_edges() == 0);
  CHECK(m.cell(0).area == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.cell(0).diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(m.cell(0).centroid.x() == doctest::Approx(0.5));
  CHECK(m.cell(0).centroid.y() == doctest::Approx(0.5));
}

TEST_CASE("2x2 grid: counts from hand enumeration") {
  const PolygonalMesh m = generate_grid(2, 2);
  CHECK(m.n_cells() == 4);
  CHECK(m.n_edges() == 12);
  CHECK(m.n_interior_edges() == 4);
}

TEST_CASE("degenerate generator arguments") {
  CHECK_THROWS_AS(generate_grid(0, 1, Rect{0, 0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_grid(2, 2, Rect{0, 0, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_polygonal(0, Rect{0, 0, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(generate_polygonal(1, Rect{0, 0, 1, 0}), std::invalid_argument);
}

TEST_CASE("polygonal generator produces non-quadrilateral cells") {
  const PolygonalMesh m = generate_polygonal(1);
  bool has_poly = false;
  for (int c = 0; c < m.n_cells(); ++c)
    if (m.cell(c).verts.size() > 4) has_poly = true;
  CHECK(has_poly);
}

TEST_CASE("polygonal refinement roughly halves h") {
  const double h1 = generate_polygonal(1).max_diameter();
  const double h2 = generate_polygonal(2).max_diameter();
  CHECK(h2 <= 1.5 * h1 / 2.0);
  CHECK(h2 >= h1 / 2.0 / 1.5);
}

static void check_invariants(const PolygonalMesh& m, double domain_area) {
  double total = 0.0;
  for (int c = 0; c < m.n_cells(); ++c) total += m.cell(c).area;
  CHECK(std::abs(total - domain_area) <= 1e-12 * domain_area);

  // divergence theorem on constants: integral of n over each cell boundary
  for (int c = 0; c < m.n_cells(); ++c) {
    const MeshCell& T = m.cell(c);
    Vec2 acc = Vec2::Zero();
    for (std::size_t le = 0; le < T.edges.size(); ++le)
      acc += m.edge(T.edges[le]).length * m.outward_normal(c, static_cast<int>(le));
    CHECK(acc.norm() <= 1e-12);
  }

  // interior normals are exact negatives (same stored vector, opposite signs)
  for (int e = 0; e < m.n_edges(); ++e) {
    const MeshEdge& E = m.edge(e);
    if (E.boundary) continue;
    CHECK(E.cell_sign[0] == -E.cell_sign[1]);
  }
}

TEST_CASE("mesh invariants on grid, polygonal, and split meshes") {
  check_invariants(generate_grid(3, 4, Rect{0, 0, 2, 1}), 2.0);
  check_invariants(generate_polygonal(2), 1.0);
  check_invariants(split_edges(generate_grid(2, 2)), 1.0);
  check_invariants(generate_polygonal(3, Rect{-1, -1, 1, 1}), 4.0);
}

TEST_CASE("split_edges doubles the edge partition but keeps geometry") {
  const PolygonalMesh base = generate_grid(2, 2);
  const PolygonalMesh fine = split_edges(base);
  CHECK(fine.n_cells() == base.n_cells());
  CHECK(fine.n_edges() == 2 * base.n_edges());
  CHECK(fine.total_area() == doctest::Approx(base.total_area()).epsilon(1e-14));
  // a flat cell side now consists of two collinear edges
  CHECK(fine.cell(0).verts.size() == 8);
}

TEST_CASE("json round trip reproduces vertices and cells exactly") {
  const PolygonalMesh m = generate_polygonal(2);
  const std::string path = "roundtrip_mesh.json";
  save_mesh(m, path);
  const PolygonalMesh m2 = load_mesh(path);
  REQUIRE(m2.n_vertices() == m.n_vertices());
  REQUIRE(m2.n_cells() == m.n_cells());
  for (int i = 0; i < m.n_vertices(); ++i) {
    CHECK(m.vertex(i).x() == m2.vertex(i).x());
    CHECK(m.vertex(i).y() == m2.vertex(i).y());
  }
  for (int c = 0; c < m.n_cells(); ++c) CHECK(m.cell(c).verts == m2.cell(c).verts);
  std::remove(path.c_str());
}

TEST_CASE("loader rejects invalid cells") {
  // repeated vertex index
  CHECK_THROWS_AS(PolygonalMesh({{0, 0}, {1, 0}, {1, 1}}, {{0, 1, 1}}), std::invalid_argument);
  // zero-area cell
  CHECK_THROWS_AS(PolygonalMesh({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), std::invalid_argument);
  // self-intersecting (bowtie)
  CHECK_THROWS_AS(PolygonalMesh({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {{0, 1, 2, 3}}),
                  std::invalid_argument);
  // an edge with three owners
  CHECK_THROWS_AS(PolygonalMesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0}, {0, -1}},
                                {{0, 1, 2, 3}, {0, 1, 4}, {0, 1, 5}}),
                  std::invalid_argument);
}

TEST_CASE("clockwise input is reoriented counterclockwise") {
  const PolygonalMesh m({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{3, 2, 1, 0}});
  CHECK(m.cell(0).area == doctest::Approx(1.0));
  // after reorientation the stored loop is counterclockwise
  CHECK(m.cell(0).verts == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("missing file and parse failures are reported") {
  CHECK_THROWS_AS(load_mesh("does_not_exist.json"), std::invalid_argument);
}
