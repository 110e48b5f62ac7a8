#include "bihar/stokes.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "bihar/assembly.hpp"
#include "bihar/quadrature.hpp"
#include "bihar/solvers.hpp"

namespace bihar {

namespace {

using P = PolyBary<double>;

void require_g2(const Space& g2) {
  if (g2.kind() != SpaceKind::G2 || !g2.boundary_eliminated()) throw std::invalid_argument("expected a G2_0 space");
}

std::array<double, 3> unit_bary(int j) {
  std::array<double, 3> l{0, 0, 0};
  l[j] = 1;
  return l;
}

double rot_of(const FieldValue& f) { return f.grad[1][0] - f.grad[0][1]; }

// Polynomial in (s, t) = (lambda_1, lambda_2), dense up to degree 3.
using Poly2 = std::array<std::array<double, 4>, 4>;

Poly2 to_poly2(const P& p) {
  Poly2 out{};
  for (const auto& t : p.terms()) {
    const int a = t.e[0], b = t.e[1], c = t.e[2];
    if (a + b + c > 2) throw std::logic_error("gradient inverse expects quadratic data");
    // (1 - s - t)^a = sum_{i+j<=a} a!/(i! j! (a-i-j)!) (-s)^i (-t)^j
    for (int i = 0; i <= a; ++i)
      for (int j = 0; i + j <= a; ++j) {
        const double mult = factorial<double>(a) / (factorial<double>(i) * factorial<double>(j) * factorial<double>(a - i - j));
        const double sign = ((i + j) % 2) ? -1.0 : 1.0;
        out[b + i][c + j] += t.c * mult * sign;
      }
  }
  return out;
}

double eval_poly2(const Poly2& p, double s, double t) {
  double r = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) r += p[i][j] * std::pow(s, i) * std::pow(t, j);
  return r;
}

P from_poly2(const Poly2& p) {
  P r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j)
      if (p[i][j] != 0) r += P::monomial(0, i, j, p[i][j]);
  return r;
}

double legendre01(int m, double s) { return m == 0 ? 1.0 : 2 * s - 1; }

}  // namespace

std::vector<Eigen::VectorXd> WeakRotFreeBasis::all() const {
  std::vector<Eigen::VectorXd> r;
  r.insert(r.end(), phi_x.begin(), phi_x.end());
  r.insert(r.end(), phi_y.begin(), phi_y.end());
  r.insert(r.end(), phi_edge.begin(), phi_edge.end());
  r.insert(r.end(), phi_patch.begin(), phi_patch.end());
  return r;
}

WeakRotFreeBasis weak_rotfree_basis(const Space& g2, bool check_rank) {
  require_g2(g2);
  const Mesh& m = g2.mesh();
  const int ns = g2.scalar_dofs(), nd = g2.num_dofs();
  WeakRotFreeBasis b;
  std::vector<std::vector<int>> vertex_edges(m.num_vertices());
  for (int e = 0; e < m.num_edges(); ++e)
    for (int k = 0; k < 2; ++k) vertex_edges[m.edges()[e][k]].push_back(e);
  for (int v = 0; v < m.num_vertices(); ++v) {
    if (m.vertex_on_boundary(v)) continue;
    b.vertices.push_back(v);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nd), y = x, pa = x;
    x[g2.vertex_dof(v)] = 1;
    y[ns + g2.vertex_dof(v)] = 1;
    for (int e : vertex_edges[v]) {
      const int o = m.edges()[e][0] == v ? m.edges()[e][1] : m.edges()[e][0];
      const Point2 a = m.vertices()[v], c = m.vertices()[o];
      const double len = std::hypot(c[0] - a[0], c[1] - a[1]);
      pa[g2.edge_dof(e)] = (c[0] - a[0]) / (len * len);
      pa[ns + g2.edge_dof(e)] = (c[1] - a[1]) / (len * len);
    }
    b.phi_x.push_back(x);
    b.phi_y.push_back(y);
    b.phi_patch.push_back(pa);
  }
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.edge_on_boundary(e)) continue;
    b.edges.push_back(e);
    const Point2 a = m.vertices()[m.edges()[e][0]], c = m.vertices()[m.edges()[e][1]];
    const double len = std::hypot(c[0] - a[0], c[1] - a[1]);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nd);
    x[g2.edge_dof(e)] = (c[1] - a[1]) / len;
    x[ns + g2.edge_dof(e)] = -(c[0] - a[0]) / len;
    b.phi_edge.push_back(x);
  }
  if (check_rank) {
    const auto all = b.all();
    Eigen::MatrixXd M(nd, static_cast<int>(all.size()));
    for (std::size_t j = 0; j < all.size(); ++j) M.col(static_cast<int>(j)) = all[j];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
    qr.setThreshold(1e-10);
    if (qr.rank() != static_cast<int>(all.size())) throw std::runtime_error("weakly rot-free set is rank deficient");
  }
  return b;
}

std::vector<int> support_cells(const Space& s, const Eigen::VectorXd& x, double tol) {
  std::vector<int> out;
  for (int c = 0; c < s.mesh().num_cells(); ++c)
    for (const auto& e : s.cell_entries(c))
      if (std::abs(x[e.global]) > tol) {
        out.push_back(c);
        break;
      }
  return out;
}

std::vector<double> cell_mean_rot(const Space& g2, const Eigen::VectorXd& v) {
  std::vector<double> r(g2.mesh().num_cells());
  for (int c = 0; c < g2.mesh().num_cells(); ++c)
    r[c] = rot_of(eval_in_cell(g2, v, c, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1));
  return r;
}

double max_pointwise_rot(const Space& g2, const Eigen::VectorXd& v) {
  double worst = 0;
  for (int c = 0; c < g2.mesh().num_cells(); ++c)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(rot_of(eval_in_cell(g2, v, c, unit_bary(j), 1))));
  return worst;
}

Eigen::VectorXd bubble_correct(const Space& g2, const Eigen::VectorXd& v) {
  require_g2(g2);
  const Mesh& m = g2.mesh();
  const int ns = g2.scalar_dofs();
  Eigen::VectorXd out = v;
  const double scale = std::max(1.0, max_pointwise_rot(g2, v));
  for (int c = 0; c < m.num_cells(); ++c) {
    const double mean = rot_of(eval_in_cell(g2, v, c, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 1));
    if (std::abs(mean) > 1e-10 * scale) throw std::runtime_error("cell mean of rot does not vanish");
    const CellGeometry g = cell_geometry(m, c);
    // rot(beta0 b, beta1 b) = beta1 b_x - beta0 b_y with grad b = 2 sum lambda_i grad lambda_i
    Eigen::Matrix2d A;
    Eigen::Vector2d rhs;
    for (int j = 0; j < 2; ++j) {
      A(j, 0) = -2 * g.grad_lambda[j][1];
      A(j, 1) = 2 * g.grad_lambda[j][0];
      rhs[j] = -rot_of(eval_in_cell(g2, v, c, unit_bary(j), 1));
    }
    if (std::abs(A.determinant()) < 1e-14 * A.cwiseAbs().maxCoeff() * A.cwiseAbs().maxCoeff())
      throw std::runtime_error("singular bubble correction system");
    const Eigen::Vector2d beta = A.partialPivLu().solve(rhs);
    out[g2.cell_dof(c)] += beta[0];
    out[ns + g2.cell_dof(c)] += beta[1];
  }
  return out;
}

GradInverse grad_inverse(const Space& g2, const Space& a3, const Eigen::VectorXd& psi) {
  require_g2(g2);
  if (a3.kind() != SpaceKind::A3 || &a3.mesh() != &g2.mesh()) throw std::invalid_argument("expected A3_0 on the same mesh");
  const Mesh& m = g2.mesh();
  const int nc = m.num_cells(), nv = m.num_vertices();
  const double scale = std::max(1.0, psi.cwiseAbs().maxCoeff());
  if (max_pointwise_rot(g2, psi) > 1e-10 * scale / std::min(1.0, m.max_diameter()))
    throw std::runtime_error("input field is not rot-free");

  GradInverse out;
  out.cell_poly.resize(nc);
  std::vector<std::array<double, 3>> local_vals(nc);
  for (int c = 0; c < nc; ++c) {
    const VecPoly<double> v = cell_polynomial(g2, psi, c);
    const CellGeometry geo = cell_geometry(m, c);
    const auto& vs = geo.vertices;
    const double d1x = vs[1][0] - vs[0][0], d1y = vs[1][1] - vs[0][1];
    const double d2x = vs[2][0] - vs[0][0], d2y = vs[2][1] - vs[0][1];
    const Poly2 f1 = to_poly2(v[0] * d1x + v[1] * d1y);
    const Poly2 f2 = to_poly2(v[0] * d2x + v[1] * d2y);
    // w = int_0^s f1(sigma, 0) dsigma + int_0^t f2(s, tau) dtau
    Poly2 w{};
    for (int i = 0; i < 3; ++i) w[i + 1][0] += f1[i][0] / (i + 1);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; i + j < 3; ++j) w[i][j + 1] += f2[i][j] / (j + 1);
    out.cell_poly[c] = from_poly2(w);
    local_vals[c] = {0.0, eval_poly2(w, 1, 0), eval_poly2(w, 0, 1)};
  }

  std::vector<std::vector<int>> vcells(nv);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < 3; ++i) vcells[m.cells()[c][i]].push_back(c);
  std::vector<double> val(nv, 0.0), shift(nc, 0.0);
  std::vector<char> vknown(nv, 0), cknown(nc, 0);
  std::queue<int> q;
  for (int v = 0; v < nv; ++v)
    if (m.vertex_on_boundary(v)) vknown[v] = 1, q.push(v);
  double worst = 0;
  while (!q.empty()) {
    const int a = q.front();
    q.pop();
    for (int c : vcells[a]) {
      if (cknown[c]) continue;
      cknown[c] = 1;
      shift[c] = val[a] - local_vals[c][m.local_vertex(c, a)];
      for (int i = 0; i < 3; ++i) {
        const int b = m.cells()[c][i];
        const double x = local_vals[c][i] + shift[c];
        if (vknown[b]) {
          worst = std::max(worst, std::abs(val[b] - x));
        } else {
          val[b] = x;
          vknown[b] = 1;
          q.push(b);
        }
      }
    }
  }
  for (int c = 0; c < nc; ++c) {
    if (!cknown[c]) throw std::runtime_error("cell not reached from the boundary");
    if (shift[c] != 0) out.cell_poly[c] += P::constant(shift[c]);
  }
  if (worst > 1e-9) throw std::runtime_error("gradient inverse: inconsistent vertex constants");
  double mm = 0;
  out.a3 = interpolate_cellwise(a3, [&](int c) { return VecPoly<double>{out.cell_poly[c], P{}}; }, &mm);
  out.mismatch = std::max(worst, mm);
  if (out.mismatch > 1e-9) throw std::runtime_error("gradient inverse: result is not in A3_0");
  return out;
}

Eigen::VectorXd gradient_to_g2(const Space& a3, const Space& g2, const Eigen::VectorXd& w, double* mismatch) {
  require_g2(g2);
  return interpolate_cellwise(
      g2,
      [&](int c) {
        const TriangleFrame<double> f = make_frame(cell_geometry(a3.mesh(), c));
        return gradient(cell_polynomial(a3, w, c)[0], f);
      },
      mismatch);
}

B3Basis b3_basis(const Space& a3, const Space& g2) {
  const WeakRotFreeBasis wrf = weak_rotfree_basis(g2);
  B3Basis out;
  for (const auto& phi : wrf.all()) {
    const Eigen::VectorXd psi = bubble_correct(g2, phi);
    const GradInverse gi = grad_inverse(g2, a3, psi);
    out.a3.push_back(gi.a3);
    out.g2.push_back(psi);
    out.support.push_back(support_cells(a3, gi.a3, 1e-12 * std::max(1.0, gi.a3.cwiseAbs().maxCoeff())));
    out.source_support.push_back(support_cells(g2, phi));
  }
  return out;
}

double b3_jump_defect(const Space& a3, const Eigen::VectorXd& w) {
  const Mesh& m = a3.mesh();
  const auto& rule = edge_rule(8);
  double worst = 0;
  for (int e = 0; e < m.num_edges(); ++e) {
    const Point2 a = m.vertices()[m.edges()[e][0]], b = m.vertices()[m.edges()[e][1]];
    const double tx = b[0] - a[0], ty = b[1] - a[1], len = std::hypot(tx, ty);
    const Point2 nrm{ty / len, -tx / len};
    std::array<double, 3> mom{0, 0, 0};  // value mean, d_n against L0, L1
    for (int side = 0; side < 2; ++side) {
      const int c = m.edge_cells()[e][side];
      if (c < 0) continue;
      const CellGeometry g = cell_geometry(m, c);
      const double sgn = side == 0 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < rule.weights.size(); ++k) {
        const double s = rule.points[k];
        const Point2 p{a[0] + s * tx, a[1] + s * ty};
        std::array<double, 3> l;
        for (int i = 0; i < 3; ++i) {
          const auto& v = g.vertices[(i + 1) % 3];
          l[i] = g.grad_lambda[i][0] * (p[0] - v[0]) + g.grad_lambda[i][1] * (p[1] - v[1]);
        }
        const FieldValue f = eval_in_cell(a3, w, c, l, 1);
        const double dn = f.grad[0][0] * nrm[0] + f.grad[0][1] * nrm[1];
        mom[0] += sgn * rule.weights[k] * f.value[0];
        mom[1] += sgn * rule.weights[k] * legendre01(0, s) * dn;
        mom[2] += sgn * rule.weights[k] * legendre01(1, s) * dn;
      }
    }
    for (double x : mom) worst = std::max(worst, std::abs(x));
  }
  return worst;
}

bool ExactnessReport::pass() const {
  bool ok = surjective && kernel_matches && enriched_lhs == enriched_rhs;
  if (order == "cubic")
    ok = ok && b3_count == expected_kernel && b3_gradient_rank == kernel && b3_max_jump < 1e-10 && b3_rot_residual < 1e-12;
  return ok;
}

ExactnessReport exactness_report(const Mesh& m, const std::string& order) {
  if (order != "cubic" && order != "quartic") throw std::invalid_argument("order must be cubic or quartic");
  const bool cubic = order == "cubic";
  ExactnessReport r;
  r.order = order;
  const auto cls = classify(m);
  const int X = cls.interior_vertices, E = cls.interior_edges, T = m.num_cells();
  r.n_cells = T, r.interior_vertices = X, r.interior_edges = E;
  const Space vel = build_space(m, cubic ? SpaceKind::G2 : SpaceKind::G3);
  const Space pre = build_space(m, cubic ? SpaceKind::P1 : SpaceKind::P2);
  r.dim_velocity = vel.num_dofs();
  r.dim_pressure = pre.num_dofs();
  const SparseMatrix B = assemble_bilinear(vel, pre, Form::rot_pressure);
  r.rank = numerical_rank(B);
  r.kernel = r.dim_velocity - r.rank;
  r.surjective = r.rank == r.dim_pressure;
  r.expected_kernel = cubic ? 3 * X + E : 3 * X + 2 * E - 3;
  r.euler_kernel = cubic ? 3 * X + E : 4 * X + 2 * E - 3;
  r.kernel_matches = r.kernel == r.expected_kernel;
  // dim grad B^{k+} + dim P^{k-2}_{h0} = dim G^{(k-1)+}_{h0}
  r.enriched_lhs = cubic ? (X + 3 * E) + (3 * T - 1) : (X + 5 * E) + (6 * T - 1);
  r.enriched_rhs = cubic ? 4 * E + 2 * T : 6 * E + 5 * T;
  if (cubic && X + E > 0) {
    const Space a3 = build_space(m, SpaceKind::A3);
    const B3Basis b = b3_basis(a3, vel);
    r.b3_count = static_cast<int>(b.a3.size());
    Eigen::MatrixXd G(vel.num_dofs(), r.b3_count);
    const double bmax = B.max_abs();
    for (int j = 0; j < r.b3_count; ++j) {
      G.col(j) = b.g2[j];
      const double gn = std::max(1e-300, b.g2[j].cwiseAbs().maxCoeff());
      r.b3_rot_residual = std::max(r.b3_rot_residual, B.multiply(b.g2[j]).cwiseAbs().maxCoeff() / (bmax * gn));
      r.b3_max_jump = std::max(r.b3_max_jump, b3_jump_defect(a3, b.a3[j]));
    }
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(G);
    const auto& s = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < s.size(); ++i)
      if (s[i] > 1e-8 * s[0]) ++rank;
    r.b3_gradient_rank = rank;
  }
  return r;
}

}  // namespace bihar
