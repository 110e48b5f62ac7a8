#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bihar/mesh.hpp"
#include "doctest.h"

using namespace bihar;

namespace {

std::set<std::pair<long, long>> vertex_keys(const Mesh& m) {
  std::set<std::pair<long, long>> s;
  for (const auto& p : m.vertices()) s.insert({std::lround(p[0] * 1e9), std::lround(p[1] * 1e9)});
  return s;
}

std::set<std::array<long, 4>> edge_keys(const Mesh& m) {
  std::set<std::array<long, 4>> s;
  for (const auto& e : m.edges()) {
    std::array<long, 2> a{std::lround(m.vertices()[e[0]][0] * 1e9), std::lround(m.vertices()[e[0]][1] * 1e9)};
    std::array<long, 2> b{std::lround(m.vertices()[e[1]][0] * 1e9), std::lround(m.vertices()[e[1]][1] * 1e9)};
    if (b < a) std::swap(a, b);
    s.insert({a[0], a[1], b[0], b[1]});
  }
  return s;
}

}  // namespace

TEST_CASE("structured mesh entity counts") {
  for (int n = 1; n <= 8; ++n) {
    const Mesh m = generate_structured(n);
    CHECK(m.num_vertices() == (n + 1) * (n + 1));
    CHECK(m.num_edges() == 3 * n * n + 2 * n);
    CHECK(m.num_cells() == 2 * n * n);
    CHECK(m.num_vertices() - m.num_edges() + m.num_cells() == 1);
    const auto c = classify(m);
    CHECK(c.interior_vertices == (n - 1) * (n - 1));
    CHECK(c.boundary_edges == 4 * n);
    CHECK(c.interior_edges == 3 * n * n - 2 * n);
  }
}

TEST_CASE("n = 2 and n = 4 classification") {
  const auto c2 = classify(generate_structured(2));
  CHECK(c2.interior_vertices == 1);
  CHECK(c2.interior_edges == 8);
  const auto c4 = classify(generate_structured(4));
  CHECK(c4.interior_vertices == 9);
  REQUIRE(c4.level_counts.size() == 2);
  CHECK(c4.level_counts[0] == 8);
  CHECK(c4.level_counts[1] == 1);
  // centre vertex (1/2, 1/2) has index 2*5+2
  CHECK(c4.vertex_level[12] == 2);
}

TEST_CASE("cells are counter-clockwise and tile the square") {
  const Mesh m = generate_structured(5);
  double total = 0;
  for (int c = 0; c < m.num_cells(); ++c) {
    CHECK(m.cell_area(c) > 0);
    total += m.cell_area(c);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("edge incidences are consistent") {
  const Mesh m = generate_structured(3);
  for (int e = 0; e < m.num_edges(); ++e) {
    for (int s = 0; s < 2; ++s) {
      const int c = m.edge_cells()[e][s];
      if (c < 0) continue;
      const int l = m.local_edge(c, e);
      REQUIRE(l >= 0);
      const auto& t = m.cells()[c];
      const int p = t[(l + 1) % 3], q = t[(l + 2) % 3];
      CHECK(std::min(p, q) == m.edges()[e][0]);
      CHECK(std::max(p, q) == m.edges()[e][1]);
      CHECK(m.cell_edge_signs()[c][l] == (p < q ? 1 : -1));
    }
    const bool on_bdry = [&] {
      const auto& a = m.vertices()[m.edges()[e][0]];
      const auto& b = m.vertices()[m.edges()[e][1]];
      for (int k = 0; k < 2; ++k)
        for (double x : {0.0, 1.0})
          if (a[k] == x && b[k] == x) return true;
      return false;
    }();
    CHECK(m.edge_on_boundary(e) == on_bdry);
  }
}

TEST_CASE("edge numbering is deterministic") {
  const Mesh a = generate_structured(6);
  const Mesh b = generate_structured(6);
  CHECK(a.edges() == b.edges());
  CHECK(a.cell_edges() == b.cell_edges());
}

TEST_CASE("refinement matches the finer structured mesh") {
  for (int n : {1, 2, 4}) {
    const Mesh r = refine_uniform(generate_structured(n));
    const Mesh s = generate_structured(2 * n);
    CHECK(r.num_vertices() == s.num_vertices());
    CHECK(r.num_edges() == s.num_edges());
    CHECK(r.num_cells() == s.num_cells());
    CHECK(vertex_keys(r) == vertex_keys(s));
    CHECK(edge_keys(r) == edge_keys(s));
    const auto cr = classify(r), cs = classify(s);
    CHECK(cr.level_counts == cs.level_counts);
  }
}

TEST_CASE("invalid meshes are rejected") {
  std::vector<Point2> v{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  CHECK_THROWS_AS(Mesh(v, {{0, 2, 1}}), InvalidMesh);
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 1}}), InvalidMesh);
  std::vector<Point2> w{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(Mesh(w, {{0, 1, 2}}), InvalidMesh);
  // edge (0,1) in three cells
  std::vector<Point2> u{{0, 0}, {1, 0}, {0.5, 1}, {0.5, -1}, {0.5, 2}};
  CHECK_THROWS_AS(Mesh(u, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}}), InvalidMesh);
}

TEST_CASE("cell geometry") {
  const CellGeometry g = triangle_geometry({Point2{0, 0}, Point2{1, 0}, Point2{0, 1}});
  CHECK(g.area == doctest::Approx(0.5));
  CHECK(g.grad_lambda[0][0] == doctest::Approx(-1));
  CHECK(g.grad_lambda[0][1] == doctest::Approx(-1));
  CHECK(g.grad_lambda[1][0] == doctest::Approx(1));
  CHECK(g.grad_lambda[1][1] == doctest::Approx(0));
  CHECK(g.grad_lambda[2][1] == doctest::Approx(1));
  CHECK(g.edge_length[0] == doctest::Approx(std::sqrt(2.0)));

  const Mesh m = generate_structured(3);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry h = cell_geometry(m, c);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        // lambda_i(v_j) - lambda_i(v_0) from the gradient
        const double d = h.grad_lambda[i][0] * (h.vertices[j][0] - h.vertices[0][0]) +
                         h.grad_lambda[i][1] * (h.vertices[j][1] - h.vertices[0][1]);
        CHECK(d == doctest::Approx((i == j) - (i == 0)).epsilon(1e-12));
      }
      const double nn = std::hypot(h.normal[i][0], h.normal[i][1]);
      CHECK(nn == doctest::Approx(1.0));
      // outward: the opposite vertex lies on the negative side
      const auto& mid = h.vertices[(i + 1) % 3];
      const double side = h.normal[i][0] * (h.vertices[i][0] - mid[0]) + h.normal[i][1] * (h.vertices[i][1] - mid[1]);
      CHECK(side < 0);
      CHECK(h.grad_norm[i] * h.edge_length[i] == doctest::Approx(h.edge_length[i] * h.edge_length[i] / (2 * h.area)));
    }
  }
  CHECK_THROWS_AS(triangle_geometry({Point2{0, 0}, Point2{1, 0}, Point2{2, 0}}), InvalidMesh);
}

TEST_CASE("mesh text round trip is byte identical") {
  const Mesh m = refine_uniform(generate_structured(3));
  std::ostringstream a;
  write_mesh(a, m);
  std::istringstream in(a.str());
  const Mesh r = read_mesh(in);
  std::ostringstream b;
  write_mesh(b, r);
  CHECK(a.str() == b.str());
  CHECK(r.edges() == m.edges());
  std::istringstream bad("3 1\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(bad), InvalidMesh);
}
