#include "bihar/space.hpp"

#include <Eigen/LU>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "bihar/quadrature.hpp"

namespace bihar {

namespace {

const std::map<SpaceKind, std::string>& kind_names() {
  static const std::map<SpaceKind, std::string> names{
      {SpaceKind::A3, "A3_0"},           {SpaceKind::A4, "A4_0"},           {SpaceKind::G2, "G2_0"},
      {SpaceKind::G3, "G3_0"},           {SpaceKind::P0, "P0_0"},           {SpaceKind::P1, "P1_0"},
      {SpaceKind::P2, "P2_0"},           {SpaceKind::Lagrange1, "Lagrange1_0"}, {SpaceKind::Lagrange2, "Lagrange2_0"},
      {SpaceKind::Lagrange3, "Lagrange3_0"}, {SpaceKind::Lagrange4, "Lagrange4_0"}, {SpaceKind::S2, "S2_0"},
      {SpaceKind::Morley, "Morley_0"},   {SpaceKind::DG0, "DG0"},           {SpaceKind::DG1, "DG1"},
      {SpaceKind::DG2, "DG2"},           {SpaceKind::DG3, "DG3"},           {SpaceKind::DG4, "DG4"},
  };
  return names;
}

using P = PolyBary<double>;

// Which canonical DOFs a DOF-defined space carries per entity.
struct Layout {
  int degree = 0;
  int components = 1;
  bool vertex = false;
  int edge_moments = 0;  // Legendre moments of degree 0..edge_moments-1
  bool edge_normal = false;
  std::vector<P> cell_weights;
  bool bubble = false;  // G2: one extra quadratic bubble per cell
};

Layout layout_of(SpaceKind k) {
  Layout l;
  const P one = P::constant(1.0);
  switch (k) {
    case SpaceKind::A3:
      l.degree = 3, l.vertex = true, l.edge_moments = 1;
      l.cell_weights = {cubic_bubble_edge<double>(0), cubic_bubble_edge<double>(1), cubic_bubble_edge<double>(2), one};
      break;
    case SpaceKind::A4:
      l.degree = 4, l.vertex = true, l.edge_moments = 2, l.edge_normal = true;
      l.cell_weights = {P::lambda(0), P::lambda(1), P::lambda(2)};
      break;
    case SpaceKind::G2:
      l.degree = 2, l.components = 2, l.vertex = true, l.edge_moments = 1, l.bubble = true;
      break;
    case SpaceKind::G3:
      l.degree = 3, l.components = 2, l.edge_moments = 3;
      l.cell_weights = {one};
      break;
    case SpaceKind::S2:
      l.degree = 2, l.components = 2, l.vertex = true, l.edge_moments = 1;
      break;
    case SpaceKind::Morley:
      l.degree = 2, l.vertex = true, l.edge_normal = true;
      break;
    case SpaceKind::Lagrange1:
      l.degree = 1, l.vertex = true;
      break;
    case SpaceKind::Lagrange2:
      l.degree = 2, l.vertex = true, l.edge_moments = 1;
      break;
    case SpaceKind::Lagrange3:
      l.degree = 3, l.vertex = true, l.edge_moments = 2;
      l.cell_weights = {one};
      break;
    case SpaceKind::Lagrange4:
      l.degree = 4, l.vertex = true, l.edge_moments = 3;
      l.cell_weights = {P::lambda(0), P::lambda(1), P::lambda(2)};
      break;
    default:
      throw std::logic_error("not a DOF-defined space");
  }
  return l;
}

bool dof_defined_kind(SpaceKind k) {
  switch (k) {
    case SpaceKind::P0:
    case SpaceKind::P1:
    case SpaceKind::P2:
    case SpaceKind::DG0:
    case SpaceKind::DG1:
    case SpaceKind::DG2:
    case SpaceKind::DG3:
    case SpaceKind::DG4:
      return false;
    default:
      return true;
  }
}

/// Legendre polynomial of degree m on [0,1] in the variable s.
P legendre01(int m, const P& s) {
  const P one = P::constant(1.0);
  switch (m) {
    case 0:
      return one;
    case 1:
      return 2.0 * s - one;
    case 2:
      return 6.0 * (s * s) - 6.0 * s + one;
    default:
      throw std::logic_error("edge moment degree > 2");
  }
}

/// Canonical parameter on local edge i: lambda of the endpoint with the
/// higher global index.
P edge_parameter(int sign, int i) { return sign > 0 ? P::lambda((i + 2) % 3) : P::lambda((i + 1) % 3); }

P g2_bubble() {
  return P::monomial(2, 0, 0) + P::monomial(0, 2, 0) + P::monomial(0, 0, 2) - P::constant(2.0 / 3.0);
}

P raw_poly(int k, int r) {
  const auto e = raw_exponents(k)[r];
  return P::monomial(e[0], e[1], e[2]);
}

std::array<double, 3> bary_of(const CellGeometry& g, const Point2& p) {
  std::array<double, 3> l;
  for (int i = 0; i < 3; ++i) {
    const auto& q = g.vertices[(i + 1) % 3];
    l[i] = g.grad_lambda[i][0] * (p[0] - q[0]) + g.grad_lambda[i][1] * (p[1] - q[1]);
  }
  return l;
}

Point2 point_of(const CellGeometry& g, const std::array<double, 3>& l) {
  Point2 p{0, 0};
  for (int i = 0; i < 3; ++i) {
    p[0] += l[i] * g.vertices[i][0];
    p[1] += l[i] * g.vertices[i][1];
  }
  return p;
}

/// A DOF functional applied to smooth data by quadrature (degree 20).
double eval_dof_numeric(const DofFunctional<double>& d, const ScalarFunction& u, const CellGeometry& g) {
  switch (d.kind) {
    case DofKind::VertexValue: {
      const auto& v = g.vertices[d.entity];
      return d.scale * u.value(v[0], v[1]);
    }
    case DofKind::EdgeMoment:
    case DofKind::EdgeNormalMoment: {
      const auto& rule = edge_rule(20);
      const int i = d.entity;
      double s = 0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        std::array<double, 3> l{0, 0, 0};
        l[(i + 1) % 3] = 1 - rule.points[q];
        l[(i + 2) % 3] = rule.points[q];
        const Point2 x = point_of(g, l);
        double f;
        if (d.kind == DofKind::EdgeMoment) {
          f = u.value(x[0], x[1]);
        } else {
          const auto gr = u.grad(x[0], x[1]);
          f = gr[0] * g.normal[i][0] + gr[1] * g.normal[i][1];
        }
        s += rule.weights[q] * d.weight.evaluate(l) * f;
      }
      return d.scale * s;
    }
    case DofKind::CellMoment: {
      const auto& rule = tri_rule(20);
      double s = 0;
      for (std::size_t q = 0; q < rule.weights.size(); ++q) {
        const Point2 x = point_of(g, rule.bary[q]);
        s += rule.weights[q] * d.weight.evaluate(rule.bary[q]) * u.value(x[0], x[1]);
      }
      return d.scale * s;
    }
    case DofKind::CellVectorMoment:
      break;
  }
  throw std::logic_error("unsupported DOF kind for interpolation");
}

}  // namespace

std::string space_name(SpaceKind k) { return kind_names().at(k); }

SpaceKind space_kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kind_names())
    if (n == name) return k;
  throw std::invalid_argument("unknown space kind: " + name);
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> Space::cell_coeffs(int c) const {
  const int nr = raw_dim(degree_);
  return {coeffs_.data() + static_cast<std::size_t>(c) * num_local_ * nr, num_local_, nr};
}

Space build_space(const Mesh& m, SpaceKind kind, bool eliminate_boundary) {
  Space s;
  s.mesh_ = &m;
  s.kind_ = kind;
  s.eliminate_ = eliminate_boundary;
  const int nc = m.num_cells();
  s.entries_.assign(nc, {});
  s.dofs_.assign(nc, {});
  s.vertex_dof_.assign(m.num_vertices(), -1);
  s.edge_dof_.assign(m.num_edges(), -1);
  s.cell_dof_.assign(nc, -1);

  if (!dof_defined_kind(kind)) {
    int k = 0;
    bool zero_mean = true;
    switch (kind) {
      case SpaceKind::P0: k = 0; break;
      case SpaceKind::P1: k = 1; break;
      case SpaceKind::P2: k = 2; break;
      case SpaceKind::DG0: k = 0, zero_mean = false; break;
      case SpaceKind::DG1: k = 1, zero_mean = false; break;
      case SpaceKind::DG2: k = 2, zero_mean = false; break;
      case SpaceKind::DG3: k = 3, zero_mean = false; break;
      case SpaceKind::DG4: k = 4, zero_mean = false; break;
      default: break;
    }
    s.degree_ = k;
    const int nl = raw_dim(k);
    s.num_local_ = nl;
    s.coeffs_.assign(static_cast<std::size_t>(nc) * nl * nl, 0.0);
    if (!zero_mean) {
      for (int c = 0; c < nc; ++c) {
        for (int l = 0; l < nl; ++l) {
          s.coeffs_[(static_cast<std::size_t>(c) * nl + l) * nl + l] = 1.0;
          s.entries_[c].push_back({l, 0, c * nl + l, 1.0});
        }
        s.cell_dof_[c] = c * nl;
      }
      s.dofs_per_cell_ = nl;
      s.scalar_dofs_ = nc * nl;
      return s;
    }
    // Zero-mean local modes, then telescoping constants over a spanning tree
    // of the cell adjacency graph.
    std::vector<P> local{P::constant(1.0)};
    if (k >= 1) local.push_back(P::lambda(0) - P::constant(1.0 / 3.0)), local.push_back(P::lambda(1) - P::constant(1.0 / 3.0));
    if (k >= 2) {
      for (int i = 0; i < 3; ++i) local.push_back(P::lambda(i) * P::lambda((i + 1) % 3) - P::constant(1.0 / 12.0));
    }
    for (int c = 0; c < nc; ++c)
      for (int l = 0; l < nl; ++l) {
        const auto rc = raw_coefficients(local[l], k);
        for (int r = 0; r < nl; ++r) s.coeffs_[(static_cast<std::size_t>(c) * nl + l) * nl + r] = rc[r];
      }
    std::vector<int> parent(nc, -2);
    std::vector<std::vector<int>> children(nc);
    std::queue<int> bfs;
    parent[0] = -1;
    bfs.push(0);
    while (!bfs.empty()) {
      const int c = bfs.front();
      bfs.pop();
      for (int i = 0; i < 3; ++i) {
        const auto& ec = m.edge_cells()[m.cell_edges()[c][i]];
        const int d = ec[0] == c ? ec[1] : ec[0];
        if (d < 0 || parent[d] != -2) continue;
        parent[d] = c;
        children[c].push_back(d);
        bfs.push(d);
      }
    }
    for (int c = 0; c < nc; ++c)
      if (parent[c] == -2) throw InvalidMesh("cell adjacency graph is disconnected");
    // q_T = 1_T - (|T|/|parent|) 1_parent for T != root, indexed T-1.
    for (int c = 0; c < nc; ++c) {
      if (c != 0) s.entries_[c].push_back({0, 0, c - 1, 1.0});
      for (int d : children[c]) s.entries_[c].push_back({0, 0, d - 1, -m.cell_area(d) / m.cell_area(c)});
      for (int l = 1; l < nl; ++l) s.entries_[c].push_back({l, 0, (nc - 1) + c * (nl - 1) + (l - 1), 1.0});
      s.cell_dof_[c] = (nc - 1) + c * (nl - 1);
    }
    s.dofs_per_cell_ = nl - 1;
    s.scalar_dofs_ = nl * nc - 1;
    return s;
  }

  const Layout lay = layout_of(kind);
  s.degree_ = lay.degree;
  s.components_ = lay.components;
  const int nr = raw_dim(lay.degree);
  const int n_edge = lay.edge_moments + (lay.edge_normal ? 1 : 0);
  const int n_cell = static_cast<int>(lay.cell_weights.size()) + (lay.bubble ? 1 : 0);
  s.dofs_per_edge_ = n_edge;
  s.dofs_per_cell_ = n_cell;

  int next = 0;
  if (lay.vertex)
    for (int v = 0; v < m.num_vertices(); ++v)
      if (!eliminate_boundary || !m.vertex_on_boundary(v)) s.vertex_dof_[v] = next++;
  if (n_edge > 0)
    for (int e = 0; e < m.num_edges(); ++e)
      if (!eliminate_boundary || !m.edge_on_boundary(e)) {
        s.edge_dof_[e] = next;
        next += n_edge;
      }
  if (n_cell > 0)
    for (int c = 0; c < nc; ++c) {
      s.cell_dof_[c] = next;
      next += n_cell;
    }
  s.scalar_dofs_ = next;

  const int n_dof = 3 * (lay.vertex ? 1 : 0) + 3 * n_edge + static_cast<int>(lay.cell_weights.size());
  s.num_local_ = n_dof + (lay.bubble ? 1 : 0);
  if (n_dof != nr && !lay.bubble) throw std::logic_error("layout does not match the raw basis");
  s.coeffs_.assign(static_cast<std::size_t>(nc) * s.num_local_ * nr, 0.0);

  std::vector<P> raw(nr);
  for (int r = 0; r < nr; ++r) raw[r] = raw_poly(lay.degree, r);
  const auto bubble_coeffs = raw_coefficients(g2_bubble(), 2);

  for (int c = 0; c < nc; ++c) {
    const CellGeometry g = cell_geometry(m, c);
    const TriangleFrame<double> frame = make_frame(g);
    auto& dofs = s.dofs_[c];
    if (lay.vertex)
      for (int i = 0; i < 3; ++i) {
        auto d = vertex_dof<double>(i);
        dofs.push_back({d, s.vertex_dof_[m.cells()[c][i]]});
      }
    for (int i = 0; i < 3; ++i) {
      const int e = m.cell_edges()[c][i];
      const int sign = m.cell_edge_signs()[c][i];
      const P sp = edge_parameter(sign, i);
      const int g0 = s.edge_dof_[e];
      for (int k = 0; k < lay.edge_moments; ++k)
        dofs.push_back({edge_dof<double>(i, legendre01(k, sp), "L" + std::to_string(k)), g0 < 0 ? -1 : g0 + k});
      if (lay.edge_normal) {
        auto d = edge_normal_dof<double>(i, P::constant(1.0), "dn");
        d.scale = sign;
        dofs.push_back({d, g0 < 0 ? -1 : g0 + lay.edge_moments});
      }
    }
    for (std::size_t j = 0; j < lay.cell_weights.size(); ++j)
      dofs.push_back({cell_dof<double>(lay.cell_weights[j], "c" + std::to_string(j)), s.cell_dof_[c] + static_cast<int>(j)});

    Eigen::MatrixXd M(n_dof, n_dof);
    for (int i = 0; i < n_dof; ++i)
      for (int r = 0; r < nr; ++r) M(i, r) = eval_dof(dofs[i].functional, raw[r], frame);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    if (!(lu.rcond() > 1e-13)) throw UnisolvenceError(space_name(kind) + ": singular local DOF matrix");
    const Eigen::MatrixXd C = lu.inverse();
    double* out = s.coeffs_.data() + static_cast<std::size_t>(c) * s.num_local_ * nr;
    for (int l = 0; l < n_dof; ++l)
      for (int r = 0; r < nr; ++r) out[l * nr + r] = C(r, l);
    if (lay.bubble)
      for (int r = 0; r < nr; ++r) out[n_dof * nr + r] = bubble_coeffs[r];

    for (int comp = 0; comp < lay.components; ++comp) {
      const int off = comp * s.scalar_dofs_;
      for (int l = 0; l < n_dof; ++l)
        if (dofs[l].global >= 0) s.entries_[c].push_back({l, comp, off + dofs[l].global, 1.0});
      if (lay.bubble) s.entries_[c].push_back({n_dof, comp, off + s.cell_dof_[c], 1.0});
    }
  }
  return s;
}

void raw_values(int k, const std::array<double, 3>& bary, int order, RawValues& out) {
  const int nr = raw_dim(k);
  // pw[j][p] = lambda_j^p
  std::array<std::array<double, 8>, 3> pw{};
  for (int j = 0; j < 3; ++j) {
    pw[j][0] = 1;
    for (int p = 1; p <= k; ++p) pw[j][p] = pw[j][p - 1] * bary[j];
  }
  auto power = [&](int j, int p) { return p < 0 ? 0.0 : pw[j][p]; };
  out.val.assign(nr, 0.0);
  if (order >= 1)
    for (auto& v : out.d1) v.assign(nr, 0.0);
  if (order >= 2)
    for (auto& v : out.d2) v.assign(nr, 0.0);
  int r = 0;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b, ++r) {
      const std::array<int, 3> e{a, b, k - a - b};
      out.val[r] = pw[0][a] * pw[1][b] * pw[2][e[2]];
      if (order < 1) continue;
      for (int j = 0; j < 3; ++j) {
        if (e[j] == 0) continue;
        double v = e[j];
        for (int t = 0; t < 3; ++t) v *= power(t, e[t] - (t == j));
        out.d1[j][r] = v;
      }
      if (order < 2) continue;
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          std::array<int, 3> f = e;
          double v = f[j];
          f[j] -= 1;
          v *= f[l];
          f[l] -= 1;
          if (v == 0) continue;
          for (int t = 0; t < 3; ++t) v *= power(t, f[t]);
          out.d2[j * 3 + l][r] = v;
        }
    }
}

void local_values(const Space& s, int c, const CellGeometry& g, const RawValues& raw, int order, LocalValues& out) {
  const auto C = s.cell_coeffs(c);
  const int nl = s.num_local(), nr = static_cast<int>(raw.val.size());
  out.val.assign(nl, 0.0);
  if (order >= 1) out.grad.assign(nl, {0.0, 0.0});
  if (order >= 2) out.hess.assign(nl, {0.0, 0.0, 0.0});
  // Cartesian derivatives of the raw monomials first.
  thread_local std::vector<double> gx, gy, hxx, hxy, hyy;
  if (order >= 1) {
    gx.assign(nr, 0.0), gy.assign(nr, 0.0);
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < nr; ++r) {
        gx[r] += raw.d1[j][r] * g.grad_lambda[j][0];
        gy[r] += raw.d1[j][r] * g.grad_lambda[j][1];
      }
  }
  if (order >= 2) {
    hxx.assign(nr, 0.0), hxy.assign(nr, 0.0), hyy.assign(nr, 0.0);
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) {
        const auto& d = raw.d2[j * 3 + l];
        const double xx = g.grad_lambda[j][0] * g.grad_lambda[l][0];
        const double xy = g.grad_lambda[j][0] * g.grad_lambda[l][1];
        const double yy = g.grad_lambda[j][1] * g.grad_lambda[l][1];
        for (int r = 0; r < nr; ++r) {
          hxx[r] += d[r] * xx;
          hxy[r] += d[r] * xy;
          hyy[r] += d[r] * yy;
        }
      }
  }
  for (int l = 0; l < nl; ++l) {
    double v = 0, x = 0, y = 0, a = 0, b = 0, cc = 0;
    for (int r = 0; r < nr; ++r) {
      const double w = C(l, r);
      if (w == 0) continue;
      v += w * raw.val[r];
      if (order >= 1) x += w * gx[r], y += w * gy[r];
      if (order >= 2) a += w * hxx[r], b += w * hxy[r], cc += w * hyy[r];
    }
    out.val[l] = v;
    if (order >= 1) out.grad[l] = {x, y};
    if (order >= 2) out.hess[l] = {a, b, cc};
  }
}

int locate_cell(const Mesh& m, const Point2& p, std::array<double, 3>* bary) {
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = cell_geometry(m, c);
    const auto l = bary_of(g, p);
    if (l[0] >= -1e-12 && l[1] >= -1e-12 && l[2] >= -1e-12) {
      if (bary) *bary = l;
      return c;
    }
  }
  throw std::out_of_range("point outside the mesh");
}

FieldValue eval_in_cell(const Space& s, const Eigen::VectorXd& x, int c, const std::array<double, 3>& bary, int order) {
  if (x.size() != s.num_dofs()) throw std::invalid_argument("coefficient vector length does not match the space");
  const CellGeometry g = cell_geometry(s.mesh(), c);
  RawValues raw;
  raw_values(s.degree(), bary, order, raw);
  LocalValues lv;
  local_values(s, c, g, raw, order, lv);
  FieldValue f;
  for (const auto& e : s.cell_entries(c)) {
    const double w = e.coef * x[e.global];
    f.value[e.component] += w * lv.val[e.local];
    if (order >= 1)
      for (int d = 0; d < 2; ++d) f.grad[e.component][d] += w * lv.grad[e.local][d];
    if (order >= 2)
      for (int d = 0; d < 3; ++d) f.hess[e.component][d] += w * lv.hess[e.local][d];
  }
  return f;
}

FieldValue eval_field(const FieldFunction& u, const Point2& p, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
  std::array<double, 3> bary;
  const int c = locate_cell(u.space->mesh(), p, &bary);
  return eval_in_cell(*u.space, u.coeffs, c, bary, order);
}

Eigen::VectorXd interpolate(const Space& s, const std::vector<ScalarFunction>& comps) {
  if (!s.dof_defined()) throw std::invalid_argument(s.name() + " has no canonical DOFs");
  if (static_cast<int>(comps.size()) != s.components()) throw std::invalid_argument("component count mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(s.num_dofs());
  for (int c = 0; c < s.mesh().num_cells(); ++c) {
    const CellGeometry g = cell_geometry(s.mesh(), c);
    for (int comp = 0; comp < s.components(); ++comp)
      for (const auto& d : s.cell_dofs(c))
        if (d.global >= 0) x[comp * s.scalar_dofs() + d.global] = eval_dof_numeric(d.functional, comps[comp], g);
  }
  return x;
}

namespace {

// G2 data: on each cell v_T(a) = s(a) + beta_T / 3 at the vertices (the
// bubble is 1/3 there and has zero edge means).  Propagates over the
// cell-vertex graph starting from eliminated boundary vertices, or from the
// first vertex when nothing is eliminated.
void resolve_g2(const Space& s, int comp, const std::vector<std::array<double, 3>>& vertex_vals, Eigen::VectorXd& x,
                double& worst) {
  const Mesh& m = s.mesh();
  const int nv = m.num_vertices(), nc = m.num_cells();
  const int off = comp * s.scalar_dofs();
  std::vector<std::vector<int>> vcells(nv);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < 3; ++i) vcells[m.cells()[c][i]].push_back(c);
  std::vector<double> sv(nv, 0.0), beta(nc, 0.0);
  std::vector<char> vknown(nv, 0), cknown(nc, 0);
  std::queue<int> q;  // known vertices
  for (int v = 0; v < nv; ++v)
    if (s.vertex_dof(v) < 0) vknown[v] = 1, q.push(v);
  for (int seed = 0; seed < nv; ++seed) {
    if (q.empty()) {
      if (vknown[seed]) continue;
      const int c = vcells[seed][0];
      sv[seed] = vertex_vals[c][m.local_vertex(c, seed)];
      vknown[seed] = 1;
      q.push(seed);
    }
    while (!q.empty()) {
      const int a = q.front();
      q.pop();
      for (int c : vcells[a]) {
        if (cknown[c]) continue;
        beta[c] = 3 * (vertex_vals[c][m.local_vertex(c, a)] - sv[a]);
        cknown[c] = 1;
        for (int i = 0; i < 3; ++i) {
          const int b = m.cells()[c][i];
          const double val = vertex_vals[c][i] - beta[c] / 3;
          if (vknown[b]) {
            worst = std::max(worst, std::abs(sv[b] - val));
          } else {
            sv[b] = val;
            vknown[b] = 1;
            q.push(b);
          }
        }
      }
    }
  }
  for (int v = 0; v < nv; ++v)
    if (s.vertex_dof(v) >= 0) x[off + s.vertex_dof(v)] = sv[v];
  for (int c = 0; c < nc; ++c) x[off + s.cell_dof(c)] = beta[c];
}

}  // namespace

Eigen::VectorXd interpolate_cellwise(const Space& s, const std::function<VecPoly<double>(int)>& cell_poly,
                                     double* mismatch) {
  if (!s.dof_defined()) throw std::invalid_argument(s.name() + " has no canonical DOFs");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(s.num_dofs());
  std::vector<char> set(s.num_dofs(), 0);
  double worst = 0;
  const bool g2 = s.kind() == SpaceKind::G2;
  const int nc = s.mesh().num_cells();
  std::array<std::vector<std::array<double, 3>>, 2> vertex_vals;
  for (auto& v : vertex_vals) v.assign(nc, {0.0, 0.0, 0.0});
  for (int c = 0; c < nc; ++c) {
    const CellGeometry g = cell_geometry(s.mesh(), c);
    const TriangleFrame<double> frame = make_frame(g);
    const VecPoly<double> v = cell_poly(c);
    for (int comp = 0; comp < s.components(); ++comp) {
      const int off = comp * s.scalar_dofs();
      for (const auto& d : s.cell_dofs(c)) {
        const double val = eval_dof(d.functional, v[comp], frame);
        if (g2 && d.functional.kind == DofKind::VertexValue) {
          vertex_vals[comp][c][d.functional.entity] = val;
          continue;
        }
        if (d.global < 0) {
          worst = std::max(worst, std::abs(val));
          continue;
        }
        if (set[off + d.global]) worst = std::max(worst, std::abs(x[off + d.global] - val));
        x[off + d.global] = val;
        set[off + d.global] = 1;
      }
    }
  }
  if (g2)
    for (int comp = 0; comp < 2; ++comp) resolve_g2(s, comp, vertex_vals[comp], x, worst);
  if (mismatch) *mismatch = worst;
  return x;
}

VecPoly<double> cell_polynomial(const Space& s, const Eigen::VectorXd& x, int c) {
  const auto C = s.cell_coeffs(c);
  VecPoly<double> v;
  std::vector<std::array<double, 2>> w(s.num_local(), {0.0, 0.0});
  for (const auto& e : s.cell_entries(c)) w[e.local][e.component] += e.coef * x[e.global];
  for (int comp = 0; comp < s.components(); ++comp) {
    std::vector<double> rc(C.cols(), 0.0);
    for (int l = 0; l < s.num_local(); ++l)
      if (w[l][comp] != 0)
        for (int r = 0; r < C.cols(); ++r) rc[r] += w[l][comp] * C(l, r);
    for (int r = 0; r < C.cols(); ++r)
      if (rc[r] != 0) v[comp] += raw_poly(s.degree(), r) * rc[r];
  }
  return v;
}

PolyBary<double> cartesian_to_bary(const std::vector<std::array<double, 3>>& terms, const CellGeometry& g) {
  P X, Y;
  for (int i = 0; i < 3; ++i) {
    X += P::lambda(i) * g.vertices[i][0];
    Y += P::lambda(i) * g.vertices[i][1];
  }
  P out;
  for (const auto& t : terms) {
    P m = P::constant(t[2]);
    for (int a = 0; a < static_cast<int>(t[0]); ++a) m = m * X;
    for (int b = 0; b < static_cast<int>(t[1]); ++b) m = m * Y;
    out += m;
  }
  return out;
}

void write_field_samples(std::ostream& os, const FieldFunction& u, int n, int component) {
  if (n < 1) throw std::invalid_argument("sample grid needs n >= 1");
  const auto& vs = u.space->mesh().vertices();
  double x0 = vs[0][0], x1 = x0, y0 = vs[0][1], y1 = y0;
  for (const auto& p : vs) {
    x0 = std::min(x0, p[0]), x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]), y1 = std::max(y1, p[1]);
  }
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(12);
  os << "x,y,value\n";
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const Point2 p{x0 + (x1 - x0) * i / n, y0 + (y1 - y0) * j / n};
      os << p[0] << ',' << p[1] << ',' << eval_field(u, p, 0).value[component] << '\n';
    }
  os.flags(flags);
  os.precision(prec);
}

}  // namespace bihar
