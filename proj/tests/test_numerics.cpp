#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "bihar/poly.hpp"
#include "bihar/quadrature.hpp"
#include "bihar/rational.hpp"
#include "bihar/solvers.hpp"
#include "bihar/sparse.hpp"
#include "doctest.h"

using namespace bihar;

namespace {

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

double tri_quad(const TriQuadRule& r, int a, int b, int c) {
  double s = 0;
  for (std::size_t q = 0; q < r.weights.size(); ++q)
    s += r.weights[q] * std::pow(r.bary[q][0], a) * std::pow(r.bary[q][1], b) * std::pow(r.bary[q][2], c);
  return s;
}

// quadrature oracle for a barycentric polynomial
double quad_mean(const PolyBary<double>& p) {
  const auto& r = tri_rule(20);
  double s = 0;
  for (std::size_t q = 0; q < r.weights.size(); ++q) s += r.weights[q] * p.evaluate(r.bary[q]);
  return s;
}

double quad_edge_mean(const PolyBary<double>& p, int i) {
  const auto& r = edge_rule(20);
  double s = 0;
  for (std::size_t q = 0; q < r.weights.size(); ++q) {
    std::array<double, 3> lam{};
    lam[i] = 0;
    lam[(i + 1) % 3] = 1 - r.points[q];
    lam[(i + 2) % 3] = r.points[q];
    s += r.weights[q] * p.evaluate(lam);
  }
  return s;
}

SparseMatrix laplacian_1d(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, t);
}

SparseMatrix from_dense(const Eigen::MatrixXd& a) {
  std::vector<Triplet> t;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) t.push_back({i, j, a(i, j)});
  return SparseMatrix::from_triplets(static_cast<int>(a.rows()), static_cast<int>(a.cols()), t);
}

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = nd(rng);
  return a;
}

Eigen::MatrixXd random_spd(int n, std::mt19937_64& rng) {
  const Eigen::MatrixXd g = random_matrix(n, n, rng);
  return g * g.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly") {
  for (int d : {0, 1, 2, 3, 5, 8, 12, 20, 30}) {
    const auto& r = tri_rule(d);
    double wsum = 0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        const int c = d - a - b;
        const double exact = 2 * fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
        CHECK(tri_quad(r, a, b, c) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
  CHECK_THROWS(tri_rule(31));
}

TEST_CASE("edge rules integrate s^p exactly") {
  for (int d : {0, 1, 4, 9, 30}) {
    const auto& r = edge_rule(d);
    for (int p = 0; p <= d; ++p) {
      double s = 0;
      for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], p);
      CHECK(s == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
    }
  }
}

TEST_CASE("barycentric moments agree with quadrature") {
  using P = PolyBary<double>;
  const P a = P::monomial(2, 1, 0) - P::monomial(1, 2, 0);
  CHECK(quad_mean(a * a) == doctest::Approx(1.0 / 840).epsilon(1e-13));
  CHECK((a * a).cell_average() == doctest::Approx(1.0 / 840).epsilon(1e-14));
  // (4,2,0) -> 1/420 individually
  CHECK(P::monomial(4, 2, 0).cell_average() == doctest::Approx(1.0 / 420).epsilon(1e-14));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> ex(0, 4);
  std::uniform_real_distribution<double> co(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    P p;
    for (int k = 0; k < 5; ++k) p += P::monomial(ex(rng), ex(rng), ex(rng), co(rng));
    CHECK(p.cell_average() == doctest::Approx(quad_mean(p)).epsilon(1e-12));
    for (int i = 0; i < 3; ++i) CHECK(p.edge_average(i) == doctest::Approx(quad_edge_mean(p, i)).epsilon(1e-12));
    // derivative by finite differences along lambda_1 holding others fixed
    const std::array<double, 3> x{0.2, 0.3, 0.5};
    const double h = 1e-6;
    const double fd = (p.evaluate({x[0], x[1] + h, x[2]}) - p.evaluate({x[0], x[1] - h, x[2]})) / (2 * h);
    CHECK(p.derivative(1).evaluate(x) == doctest::Approx(fd).epsilon(1e-6));
    // homogenisation preserves values on the simplex
    CHECK(p.homogenized(12).evaluate(x) == doctest::Approx(p.evaluate(x)).epsilon(1e-12));
  }
}

TEST_CASE("polynomial canonical form drops zeros") {
  using P = PolyBary<Rational>;
  const P a = P::monomial(1, 0, 0) + P::monomial(0, 1, 0);
  const P z = a - a;
  CHECK(z.is_zero());
  CHECK((a * a).terms().size() == 3);
  CHECK(raw_coefficients(P::constant(Rational(1)), 1) == std::vector<Rational>{1, 1, 1});
  for (int k = 0; k <= 4; ++k) {
    const auto ex = raw_exponents(k);
    CHECK(static_cast<int>(ex.size()) == raw_dim(k));
    for (std::size_t j = 0; j < ex.size(); ++j) CHECK(raw_index(ex[j], k) == static_cast<int>(j));
  }
}

TEST_CASE("sparse assembly sums duplicates deterministically") {
  std::vector<Triplet> t{{0, 1, 1.0}, {1, 0, 2.0}, {0, 1, 0.5}, {2, 2, 3.0}, {0, 0, -1.0}};
  const SparseMatrix a = SparseMatrix::from_triplets(3, 3, t);
  CHECK(a.nnz() == 4);
  CHECK(a.coeff(0, 1) == 1.5);
  CHECK(a.coeff(0, 0) == -1.0);
  CHECK(a.coeff(1, 1) == 0.0);
  CHECK(a == SparseMatrix::from_triplets(3, 3, t));
  const Eigen::VectorXd x = Eigen::Vector3d(1, 2, 3);
  const Eigen::VectorXd y = a.to_dense() * x;
  CHECK((a.multiply(x) - y).norm() < 1e-15);
  CHECK((a.multiply_transpose(x) - a.to_dense().transpose() * x).norm() < 1e-15);
  CHECK((a.transpose().to_dense() - a.to_dense().transpose()).norm() == 0);
  std::ostringstream os;
  a.write_matrix_market(os);
  CHECK(os.str().rfind("%%MatrixMarket matrix coordinate real general\n3 3 4\n", 0) == 0);
  CHECK_THROWS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}));
}

TEST_CASE("cg and direct SPD solves") {
  const int n = 200;
  const SparseMatrix a = laplacian_1d(n);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(n, 0, 1);
  const Eigen::VectorXd ref = a.to_dense().ldlt().solve(b);
  const Eigen::VectorXd x = cg_solve(a, b, 1e-12);
  CHECK((x - ref).norm() / ref.norm() < 1e-9);
  CHECK((b - a.multiply(x)).norm() <= 1e-12 * b.norm());
  const Eigen::VectorXd y = spd_solve(a, b);
  CHECK((y - ref).norm() / ref.norm() < 1e-12);
  CHECK(cg_solve(a, Eigen::VectorXd::Zero(n)).norm() == 0);
  try {
    cg_solve(a, b, 1e-12, 2);
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.residual > 1e-12);
  }
}

TEST_CASE("saddle point solve") {
  std::mt19937_64 rng(11);
  const int n = 30, m = 8;
  const Eigen::MatrixXd a = random_spd(n, rng);
  const Eigen::MatrixXd b = random_matrix(m, n, rng);
  const Eigen::VectorXd f = random_matrix(n, 1, rng);
  const Eigen::VectorXd g = random_matrix(m, 1, rng);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + m, n + m);
  k.topLeftCorner(n, n) = a;
  k.topRightCorner(n, m) = b.transpose();
  k.bottomLeftCorner(m, n) = b;
  Eigen::VectorXd rhs(n + m);
  rhs << f, g;
  const Eigen::VectorXd ref = k.fullPivLu().solve(rhs);
  SaddleSystem s{from_dense(a), from_dense(b), f, g};
  const SaddleSolution sol = saddle_solve(s);
  CHECK((sol.u - ref.head(n)).norm() < 1e-10 * ref.norm());
  CHECK((sol.p - ref.tail(m)).norm() < 1e-10 * ref.norm());
  CHECK(sol.residual_u < 1e-10);
  CHECK(sol.residual_p < 1e-10);

  // no pressure rows: plain SPD solve
  SaddleSystem s0{from_dense(a), SparseMatrix(0, n), f, Eigen::VectorXd(0)};
  const SaddleSolution sol0 = saddle_solve(s0);
  CHECK((sol0.u - a.ldlt().solve(f)).norm() < 1e-10 * f.norm());

  SaddleSystem sz{from_dense(a), from_dense(b), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(m)};
  CHECK(saddle_solve(sz).u.norm() == 0);

  Eigen::MatrixXd bd = b;
  bd.row(m - 1) = bd.row(0);
  SaddleSystem sd{from_dense(a), from_dense(bd), f, g};
  CHECK_THROWS_AS(saddle_solve(sd), SolverError);
}

TEST_CASE("inf-sup constant") {
  std::mt19937_64 rng(5);
  const int n = 120, m = 40;
  const Eigen::MatrixXd a = random_spd(n, rng);
  const Eigen::MatrixXd b = random_matrix(m, n, rng);
  const Eigen::MatrixXd mp = random_spd(m, rng);
  // oracle: Cholesky-reduced standard eigenproblem
  const Eigen::MatrixXd s = b * a.inverse() * b.transpose();
  const Eigen::MatrixXd l = mp.llt().matrixL();
  const Eigen::MatrixXd linv = l.inverse();
  const Eigen::MatrixXd c = linv * s * linv.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()));
  const double ref = std::sqrt(es.eigenvalues()(0));

  const SparseMatrix as = from_dense(a), bs = from_dense(b), ms = from_dense(mp);
  CHECK(infsup_constant_dense(bs, as, ms) == doctest::Approx(ref).epsilon(1e-10));
  CHECK(infsup_constant_lanczos(bs, as, ms) == doctest::Approx(ref).epsilon(1e-8));
  CHECK(infsup_constant(bs, as, ms) == doctest::Approx(ref).epsilon(1e-10));

  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = (7 * i + 3) % m;
  Eigen::MatrixXd bp(m, n);
  for (int i = 0; i < m; ++i) bp.row(i) = b.row(perm[i]);
  CHECK(infsup_constant(from_dense(bp), as, ms.permuted(perm)) == doctest::Approx(ref).epsilon(1e-10));

  Eigen::MatrixXd bd = b;
  bd.row(1) = bd.row(0);
  CHECK(infsup_constant_dense(from_dense(bd), as, ms) == 0.0);
  CHECK(infsup_constant_lanczos(from_dense(bd), as, ms) == 0.0);
}

TEST_CASE("kernel dimension") {
  std::mt19937_64 rng(3);
  CHECK(kernel_dimension(from_dense(Eigen::MatrixXd::Identity(7, 7))) == 0);
  CHECK(kernel_dimension(SparseMatrix::from_triplets(5, 6, {})) == 6);
  for (int r : {1, 4, 9}) {
    const Eigen::MatrixXd a = random_matrix(12, r, rng) * random_matrix(r, 15, rng);
    CHECK(numerical_rank(from_dense(a)) == r);
    CHECK(kernel_dimension(from_dense(a)) == 15 - r);
  }
}
