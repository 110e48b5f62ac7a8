#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bihar/assembly.hpp"
#include "bihar/quadrature.hpp"
#include "bihar/stokes.hpp"
#include "doctest.h"

using namespace bihar;

namespace {

// Structured mesh with interior vertices moved randomly by up to 0.2 h.
Mesh perturbed_mesh(int n, std::uint64_t seed) {
  const Mesh base = generate_structured(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.2 / n, 0.2 / n);
  auto v = base.vertices();
  for (int i = 0; i < base.num_vertices(); ++i)
    if (!base.vertex_on_boundary(i)) v[i] = {v[i][0] + u(rng), v[i][1] + u(rng)};
  return Mesh(v, base.cells());
}

std::set<int> patch(const Mesh& m, int v) {
  std::set<int> s;
  for (int c = 0; c < m.num_cells(); ++c)
    if (m.local_vertex(c, v) >= 0) s.insert(c);
  return s;
}

// Edge mean of a G2 field on edge e seen from its first cell.
std::array<double, 2> edge_mean(const Space& g2, const Eigen::VectorXd& x, int e) {
  const Mesh& m = g2.mesh();
  const int c = m.edge_cells()[e][0];
  const int i = m.local_edge(c, e);
  const auto& rule = edge_rule(6);
  std::array<double, 2> s{0, 0};
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    std::array<double, 3> l{0, 0, 0};
    l[(i + 1) % 3] = 1 - rule.points[q];
    l[(i + 2) % 3] = rule.points[q];
    const FieldValue f = eval_in_cell(g2, x, c, l, 0);
    s[0] += rule.weights[q] * f.value[0];
    s[1] += rule.weights[q] * f.value[1];
  }
  return s;
}

}  // namespace

TEST_CASE("weakly rot-free basis at n = 2") {
  const Mesh m = generate_structured(2);
  const Space g2 = build_space(m, SpaceKind::G2);
  const WeakRotFreeBasis b = weak_rotfree_basis(g2);
  CHECK(b.all().size() == 11);
  CHECK(b.phi_x.size() == 1);
  CHECK(b.phi_edge.size() == 8);
  for (std::size_t k = 0; k < b.edges.size(); ++k) {
    const int e = b.edges[k];
    const Point2 a = m.vertices()[m.edges()[e][0]], c = m.vertices()[m.edges()[e][1]];
    const double len = std::hypot(c[0] - a[0], c[1] - a[1]);
    const std::array<double, 2> t{(c[0] - a[0]) / len, (c[1] - a[1]) / len};
    const auto mean = edge_mean(g2, b.phi_edge[k], e);
    CHECK(std::abs(mean[0] * t[0] + mean[1] * t[1]) < 1e-14);
    CHECK(mean[0] * t[1] - mean[1] * t[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("weak rot-freeness and supports on perturbed meshes") {
  for (std::uint64_t seed : {1u, 2u}) {
    const Mesh m = perturbed_mesh(4, seed);
    const Space g2 = build_space(m, SpaceKind::G2);
    const WeakRotFreeBasis b = weak_rotfree_basis(g2);
    const auto cls = classify(m);
    CHECK(b.all().size() == static_cast<std::size_t>(3 * cls.interior_vertices + cls.interior_edges));
    double worst = 0;
    for (const auto& phi : b.all())
      for (double r : cell_mean_rot(g2, phi)) worst = std::max(worst, std::abs(r));
    CHECK(worst < 1e-12);
    for (std::size_t k = 0; k < b.vertices.size(); ++k) {
      const std::set<int> p = patch(m, b.vertices[k]);
      for (const auto* f : {&b.phi_x[k], &b.phi_y[k], &b.phi_patch[k]}) {
        const auto s = support_cells(g2, *f);
        CHECK(std::includes(p.begin(), p.end(), s.begin(), s.end()));
      }
    }
    for (std::size_t k = 0; k < b.edges.size(); ++k) {
      const auto s = support_cells(g2, b.phi_edge[k]);
      CHECK(s.size() == 2);
    }
  }
}

TEST_CASE("patch functions peel level by level") {
  // mean_e psi . t_e = (alpha_lo - alpha_hi) / |e| for psi = sum alpha_a phi_{P_a}
  const Mesh m = generate_structured(4);
  const Space g2 = build_space(m, SpaceKind::G2);
  const WeakRotFreeBasis b = weak_rotfree_basis(g2);
  std::vector<double> alpha(m.num_vertices(), 0.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(g2.num_dofs());
  for (std::size_t k = 0; k < b.vertices.size(); ++k) {
    alpha[b.vertices[k]] = u(rng);
    psi += alpha[b.vertices[k]] * b.phi_patch[k];
  }
  for (int e : b.edges) {
    const int lo = m.edges()[e][0], hi = m.edges()[e][1];
    const Point2 a = m.vertices()[lo], c = m.vertices()[hi];
    const double len = std::hypot(c[0] - a[0], c[1] - a[1]);
    const auto mean = edge_mean(g2, psi, e);
    const double tm = (mean[0] * (c[0] - a[0]) + mean[1] * (c[1] - a[1])) / len;
    CHECK(tm == doctest::Approx((alpha[lo] - alpha[hi]) / len).epsilon(1e-12));
  }
  // bumping one coefficient changes some edge mean
  for (std::size_t k = 0; k < b.vertices.size(); ++k) {
    double change = 0;
    for (int e : b.edges) {
      const auto mean = edge_mean(g2, b.phi_patch[k], e);
      change = std::max(change, std::hypot(mean[0], mean[1]));
    }
    CHECK(change > 0.5);
  }
}

TEST_CASE("bubble correction") {
  const Mesh m = generate_structured(2);
  const Space g2 = build_space(m, SpaceKind::G2);
  const WeakRotFreeBasis b = weak_rotfree_basis(g2);
  const Eigen::VectorXd f = bubble_correct(g2, b.phi_x[0]);
  CHECK(max_pointwise_rot(g2, f) < 1e-10);
  // the correction leaves rot-free input alone and does not move cell means
  CHECK((bubble_correct(g2, f) - f).cwiseAbs().maxCoeff() < 1e-14);
  const auto before = cell_mean_rot(g2, b.phi_patch[0]);
  const Eigen::VectorXd fp = bubble_correct(g2, b.phi_patch[0]);
  const auto after = cell_mean_rot(g2, fp - b.phi_patch[0]);
  for (std::size_t c = 0; c < after.size(); ++c) CHECK(std::abs(after[c]) < 1e-13);
  CHECK(before.size() == after.size());
  const auto s_in = support_cells(g2, b.phi_patch[0]);
  const auto s_out = support_cells(g2, fp);
  CHECK(std::includes(s_in.begin(), s_in.end(), s_out.begin(), s_out.end()));
  const Eigen::VectorXd bad = Eigen::VectorXd::LinSpaced(g2.num_dofs(), 0.1, 2.0);
  CHECK_THROWS_AS(bubble_correct(g2, bad), std::runtime_error);
}

TEST_CASE("gradient inverse") {
  const Mesh m = perturbed_mesh(3, 4);
  const Space g2 = build_space(m, SpaceKind::G2);
  const Space a3 = build_space(m, SpaceKind::A3);
  const GradInverse z = grad_inverse(g2, a3, Eigen::VectorXd::Zero(g2.num_dofs()));
  CHECK(z.a3.cwiseAbs().maxCoeff() == 0.0);

  const WeakRotFreeBasis b = weak_rotfree_basis(g2);
  for (std::size_t k = 0; k < b.vertices.size(); ++k) {
    const GradInverse w = grad_inverse(g2, a3, bubble_correct(g2, b.phi_patch[k]));
    const std::set<int> p = patch(m, b.vertices[k]);
    const auto s = support_cells(a3, w.a3, 1e-12);
    CHECK(std::includes(p.begin(), p.end(), s.begin(), s.end()));
  }

  // round trip through the gradient
  const B3Basis basis = b3_basis(a3, g2);
  std::mt19937_64 rng(21);
  std::normal_distribution<double> u;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(a3.num_dofs());
  for (const auto& v : basis.a3) w += u(rng) * v;
  double mismatch = 1;
  const Eigen::VectorXd g = gradient_to_g2(a3, g2, w, &mismatch);
  CHECK(mismatch < 1e-12);
  const GradInverse back = grad_inverse(g2, a3, g);
  CHECK((back.a3 - w).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(grad_inverse(g2, a3, b.phi_x[0]), std::runtime_error);
}

TEST_CASE("B3 basis") {
  for (int n : {2, 3}) {
    const Mesh m = generate_structured(n);
    const Space g2 = build_space(m, SpaceKind::G2);
    const Space a3 = build_space(m, SpaceKind::A3);
    const B3Basis b = b3_basis(a3, g2);
    const auto cls = classify(m);
    REQUIRE(b.a3.size() == static_cast<std::size_t>(3 * cls.interior_vertices + cls.interior_edges));
    for (std::size_t k = 0; k < b.a3.size(); ++k) {
      CHECK(b3_jump_defect(a3, b.a3[k]) < 1e-10);
      CHECK(std::includes(b.source_support[k].begin(), b.source_support[k].end(), b.support[k].begin(),
                          b.support[k].end()));
    }
    const SparseMatrix H = assemble_bilinear(a3, a3, Form::hess_hess);
    Eigen::MatrixXd W(a3.num_dofs(), static_cast<int>(b.a3.size()));
    for (std::size_t k = 0; k < b.a3.size(); ++k) W.col(static_cast<int>(k)) = b.a3[k];
    const Eigen::MatrixXd G = W.transpose() * H.to_dense() * W;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    CHECK(es.eigenvalues().minCoeff() > 1e-10 * es.eigenvalues().maxCoeff());
  }
  // a generic A3 field fails the derivative jump conditions
  const Mesh m = generate_structured(2);
  const Space a3 = build_space(m, SpaceKind::A3);
  CHECK(b3_jump_defect(a3, Eigen::VectorXd::Ones(a3.num_dofs())) > 1e-3);
}

TEST_CASE("exactness reports") {
  const Mesh m = generate_structured(2);
  const ExactnessReport c = exactness_report(m, "cubic");
  CHECK(c.rank == 23);
  CHECK(c.kernel == 11);
  CHECK(c.rank + c.kernel == 34);
  CHECK(c.b3_count == 11);
  CHECK(c.b3_gradient_rank == 11);
  CHECK(c.b3_rot_residual < 1e-12);
  CHECK(c.enriched_lhs == c.enriched_rhs);
  CHECK(c.pass());
  const ExactnessReport q = exactness_report(m, "quartic");
  CHECK(q.surjective);
  CHECK(q.rank == 47);
  CHECK(q.kernel == q.euler_kernel);
  CHECK(q.euler_kernel == 17);
  CHECK(q.enriched_lhs == q.enriched_rhs);
  CHECK_THROWS_AS(exactness_report(m, "quintic"), std::invalid_argument);
}
