#include "bihar/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace bihar {

namespace {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double diameter(const Point2& a, const Point2& b, const Point2& c) {
  auto d = [](const Point2& p, const Point2& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); };
  return std::max({d(a, b), d(b, c), d(c, a)});
}

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  std::map<std::pair<int, int>, int> index;
  cell_edges_.resize(cells_.size());
  cell_edge_signs_.resize(cells_.size());
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& t = cells_[c];
    for (int v : t)
      if (v < 0 || v >= nv) throw InvalidMesh("cell " + std::to_string(c) + " has vertex out of range");
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw InvalidMesh("cell " + std::to_string(c) + " repeats a vertex");
    const double a = signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    const double d = diameter(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
    if (!(a > 1e-14 * d * d))
      throw InvalidMesh("cell " + std::to_string(c) + " is clockwise or degenerate");
    for (int i = 0; i < 3; ++i) {
      const int p = t[(i + 1) % 3], q = t[(i + 2) % 3];
      const auto key = std::make_pair(std::min(p, q), std::max(p, q));
      auto it = index.find(key);
      int e;
      if (it == index.end()) {
        e = num_edges();
        index.emplace(key, e);
        edges_.push_back({key.first, key.second});
        edge_cells_.push_back({static_cast<int>(c), -1});
      } else {
        e = it->second;
        if (edge_cells_[e][1] >= 0)
          throw InvalidMesh("edge (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                            ") shared by more than two cells");
        edge_cells_[e][1] = static_cast<int>(c);
      }
      cell_edges_[c][i] = e;
      cell_edge_signs_[c][i] = p < q ? 1 : -1;
    }
  }
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ec = edge_cells_[e];
    if (ec[1] >= 0) {
      // the two cells must traverse a shared edge in opposite directions
      const int l0 = local_edge(ec[0], static_cast<int>(e));
      const int l1 = local_edge(ec[1], static_cast<int>(e));
      if (cell_edge_signs_[ec[0]][l0] == cell_edge_signs_[ec[1]][l1])
        throw InvalidMesh("inconsistent orientation across edge " + std::to_string(e));
    }
  }
  vertex_boundary_.assign(nv, 0);
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (edge_cells_[e][1] < 0) vertex_boundary_[edges_[e][0]] = vertex_boundary_[edges_[e][1]] = 1;
}

int Mesh::local_edge(int c, int e) const {
  for (int i = 0; i < 3; ++i)
    if (cell_edges_[c][i] == e) return i;
  return -1;
}

int Mesh::local_vertex(int c, int v) const {
  for (int i = 0; i < 3; ++i)
    if (cells_[c][i] == v) return i;
  return -1;
}

double Mesh::cell_area(int c) const {
  const auto& t = cells_[c];
  return signed_area(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
}

double Mesh::max_diameter() const {
  double h = 0;
  for (const auto& t : cells_) h = std::max(h, diameter(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
  return h;
}

Mesh generate_structured(int n) {
  if (n < 1) throw std::invalid_argument("generate_structured: n must be >= 1");
  std::vector<Point2> v;
  v.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.push_back({double(i) / n, double(j) / n});
  std::vector<std::array<int, 3>> cells;
  cells.reserve(2 * n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return Mesh(std::move(v), std::move(cells));
}

Mesh refine_uniform(const Mesh& m) {
  std::vector<Point2> v = m.vertices();
  const int nv = m.num_vertices();
  for (const auto& e : m.edges()) {
    const auto& a = m.vertices()[e[0]];
    const auto& b = m.vertices()[e[1]];
    v.push_back({0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])});
  }
  std::vector<std::array<int, 3>> cells;
  cells.reserve(4 * m.num_cells());
  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells()[c];
    const auto& ce = m.cell_edges()[c];
    const int ma = nv + ce[0], mb = nv + ce[1], mc = nv + ce[2];
    cells.push_back({t[0], mc, mb});
    cells.push_back({mc, t[1], ma});
    cells.push_back({mb, ma, t[2]});
    cells.push_back({ma, mb, mc});
  }
  return Mesh(std::move(v), std::move(cells));
}

EntityClassification classify(const Mesh& m) {
  EntityClassification r;
  const int nv = m.num_vertices();
  r.vertex_level.assign(nv, -1);
  std::vector<std::vector<int>> nbr(nv);
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.edge_on_boundary(e)) {
      ++r.boundary_edges;
      continue;
    }
    ++r.interior_edges;
    const auto& ed = m.edges()[e];
    nbr[ed[0]].push_back(ed[1]);
    nbr[ed[1]].push_back(ed[0]);
  }
  std::vector<int> frontier;
  for (int v = 0; v < nv; ++v) {
    if (m.vertex_on_boundary(v)) {
      ++r.boundary_vertices;
      r.vertex_level[v] = 0;
      frontier.push_back(v);
    } else {
      ++r.interior_vertices;
    }
  }
  int assigned = 0;
  for (int level = 1; assigned < r.interior_vertices; ++level) {
    std::vector<int> next;
    for (int v : frontier)
      for (int w : nbr[v])
        if (r.vertex_level[w] < 0) {
          r.vertex_level[w] = level;
          next.push_back(w);
        }
    if (next.empty()) throw InvalidMesh("interior vertices not connected to the boundary");
    std::sort(next.begin(), next.end());
    r.level_counts.push_back(static_cast<int>(next.size()));
    assigned += static_cast<int>(next.size());
    frontier = std::move(next);
  }
  return r;
}

CellGeometry triangle_geometry(const std::array<Point2, 3>& v) {
  CellGeometry g;
  g.vertices = v;
  g.area = signed_area(v[0], v[1], v[2]);
  const double d = diameter(v[0], v[1], v[2]);
  if (!(g.area > 1e-14 * d * d)) throw InvalidMesh("degenerate or clockwise triangle");
  for (int i = 0; i < 3; ++i) {
    const Point2& p = v[(i + 1) % 3];
    const Point2& q = v[(i + 2) % 3];
    // grad lambda_i is the inward normal of edge i scaled by |e_i| / (2|T|)
    const double tx = q[0] - p[0], ty = q[1] - p[1];
    const double len = std::hypot(tx, ty);
    g.edge_length[i] = len;
    g.tangent[i] = {tx / len, ty / len};
    g.normal[i] = {ty / len, -tx / len};
    g.grad_lambda[i] = {-ty / (2 * g.area), tx / (2 * g.area)};
    g.grad_norm[i] = len / (2 * g.area);
  }
  return g;
}

CellGeometry cell_geometry(const Mesh& m, int c) {
  if (c < 0 || c >= m.num_cells()) throw std::out_of_range("cell_geometry: cell index");
  const auto& t = m.cells()[c];
  return triangle_geometry({m.vertices()[t[0]], m.vertices()[t[1]], m.vertices()[t[2]]});
}

void write_mesh(std::ostream& os, const Mesh& m) {
  os << m.num_vertices() << ' ' << m.num_cells() << '\n';
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& p : m.vertices()) os << p[0] << ' ' << p[1] << '\n';
  for (const auto& t : m.cells()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is) {
  int nv = 0, nc = 0;
  if (!(is >> nv >> nc) || nv < 3 || nc < 1) throw InvalidMesh("bad mesh header");
  std::vector<Point2> v(nv);
  for (auto& p : v)
    if (!(is >> p[0] >> p[1])) throw InvalidMesh("truncated vertex list");
  std::vector<std::array<int, 3>> cells(nc);
  for (auto& t : cells)
    if (!(is >> t[0] >> t[1] >> t[2])) throw InvalidMesh("truncated cell list");
  return Mesh(std::move(v), std::move(cells));
}

}  // namespace bihar
