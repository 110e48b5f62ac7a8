#pragma once

// Conforming triangulations of a polygon with entity numbering, boundary
// classification and per-cell affine geometry.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace bihar {

using Point2 = std::array<double, 2>;

struct InvalidMesh : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Local edge i of a cell is opposite local vertex i and runs from local
/// vertex i+1 to i+2 (mod 3).  Cells are counter-clockwise.
class Mesh {
 public:
  Mesh() = default;
  /// Builds edges and incidences; throws InvalidMesh on clockwise or
  /// degenerate cells and on edges shared by more than two cells.
  Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  /// Edges as (lower, higher) vertex index pairs.
  const std::vector<std::array<int, 2>>& edges() const { return edges_; }
  const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }
  /// +1 when local edge i runs from the lower to the higher global vertex.
  const std::vector<std::array<int, 3>>& cell_edge_signs() const { return cell_edge_signs_; }
  /// Adjacent cells of each edge; second entry -1 on the boundary.
  const std::vector<std::array<int, 2>>& edge_cells() const { return edge_cells_; }

  bool vertex_on_boundary(int v) const { return vertex_boundary_[v] != 0; }
  bool edge_on_boundary(int e) const { return edge_cells_[e][1] < 0; }

  /// Local index (0..2) of edge e inside cell c, or -1.
  int local_edge(int c, int e) const;
  /// Local index (0..2) of vertex v inside cell c, or -1.
  int local_vertex(int c, int v) const;
  double cell_area(int c) const;
  double max_diameter() const;

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> cell_edges_;
  std::vector<std::array<int, 3>> cell_edge_signs_;
  std::vector<std::array<int, 2>> edge_cells_;
  std::vector<std::uint8_t> vertex_boundary_;
};

/// Unit square split into n x n squares, each cut along its positive-slope
/// diagonal.  Vertex (i/n, j/n) has index j*(n+1)+i.
Mesh generate_structured(int n);

/// Red refinement: every triangle is cut into four through edge midpoints.
/// Midpoint of edge e becomes vertex num_vertices() + e.
Mesh refine_uniform(const Mesh& m);

struct EntityClassification {
  int interior_vertices = 0;
  int boundary_vertices = 0;
  int interior_edges = 0;
  int boundary_edges = 0;
  /// 0 for boundary vertices, k >= 1 for interior vertices at graph
  /// distance k (through interior edges) from the boundary.
  std::vector<int> vertex_level;
  /// Number of interior vertices per level, index k-1 for level k.
  std::vector<int> level_counts;
};

EntityClassification classify(const Mesh& m);

/// Affine data of one triangle: barycentric gradients, area, and for each
/// local edge i the length, outward unit normal, and tangent (v_{i+1} -> v_{i+2}).
struct CellGeometry {
  std::array<Point2, 3> vertices;
  double area = 0;
  std::array<Point2, 3> grad_lambda;
  std::array<double, 3> grad_norm;
  std::array<double, 3> edge_length;
  std::array<Point2, 3> normal;
  std::array<Point2, 3> tangent;
};

CellGeometry cell_geometry(const Mesh& m, int c);
CellGeometry triangle_geometry(const std::array<Point2, 3>& v);

/// Plain text: "NV NC", NV lines "x y", NC lines "i j k" (0-based, CCW).
void write_mesh(std::ostream& os, const Mesh& m);
Mesh read_mesh(std::istream& is);

}  // namespace bihar
