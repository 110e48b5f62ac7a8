#include "bihar/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

namespace bihar {

Eigen::VectorXd cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol, int max_iter) {
  const int n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double bn = b.norm();
  if (bn == 0) return x;
  Eigen::VectorXd dinv(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    dinv[i] = d > 0 ? 1 / d : 1.0;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = dinv.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  double res = 1;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd ap = a.multiply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0)) break;
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    res = r.norm() / bn;
    if (res <= tol) {
      // guard against drift in the recursive residual
      res = (b - a.multiply(x)).norm() / bn;
      if (res <= tol) return x;
      r = b - a.multiply(x);
    }
    z = dinv.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res = (b - a.multiply(x)).norm() / bn;
  throw SolverError("cg_solve did not converge, relative residual " + std::to_string(res), res);
}

Eigen::VectorXd spd_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol) {
  if (a.rows() != a.cols() || b.size() != a.rows()) throw std::invalid_argument("spd_solve: size mismatch");
  const double bn = b.norm();
  if (bn == 0) return Eigen::VectorXd::Zero(b.size());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.to_eigen());
  if (ldlt.info() != Eigen::Success) throw SolverError("spd_solve: factorisation failed", INFINITY);
  Eigen::VectorXd x = ldlt.solve(b);
  Eigen::VectorXd r = b - a.multiply(x);
  for (int k = 0; k < 2 && r.norm() > tol * bn; ++k) {
    x += ldlt.solve(r);
    r = b - a.multiply(x);
  }
  const double res = r.norm() / bn;
  if (!(res <= tol)) throw SolverError("spd_solve: relative residual " + std::to_string(res), res);
  return x;
}

namespace {

Eigen::SparseMatrix<double> block_matrix(const SparseMatrix& a, const SparseMatrix& b) {
  const int n = a.rows(), m = b.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(a.nnz() + 2 * b.nnz());
  for (int i = 0; i < n; ++i)
    for (int k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k)
      t.emplace_back(i, a.col_indices()[k], a.values()[k]);
  for (int i = 0; i < m; ++i)
    for (int k = b.row_offsets()[i]; k < b.row_offsets()[i + 1]; ++k) {
      t.emplace_back(n + i, b.col_indices()[k], b.values()[k]);
      t.emplace_back(b.col_indices()[k], n + i, b.values()[k]);
    }
  Eigen::SparseMatrix<double> k(n + m, n + m);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  return k;
}

using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

}  // namespace

SaddleSolution saddle_solve(const SaddleSystem& s, double tol) {
  const int n = s.a.rows(), m = s.b.rows();
  if (s.a.cols() != n || s.b.cols() != n || s.f.size() != n || s.g.size() != m)
    throw std::invalid_argument("saddle_solve: size mismatch");
  SaddleSolution out;
  const double scale = std::max(s.f.norm(), s.g.norm());
  if (scale == 0) {
    out.u = Eigen::VectorXd::Zero(n);
    out.p = Eigen::VectorXd::Zero(m);
    return out;
  }
  if (m == 0) {
    out.u = spd_solve(s.a, s.f, tol);
    out.p = Eigen::VectorXd::Zero(0);
    out.residual_u = (s.f - s.a.multiply(out.u)).norm() / scale;
    return out;
  }
  const Eigen::SparseMatrix<double> k = block_matrix(s.a, s.b);
  LU lu;
  lu.compute(k);
  if (lu.info() != Eigen::Success)
    throw SolverError("saddle_solve: singular block matrix (B rank deficient?)", INFINITY);
  Eigen::VectorXd rhs(n + m);
  rhs << s.f, s.g;
  Eigen::VectorXd x = lu.solve(rhs);
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd r = rhs - k * x;
    if (r.norm() <= 1e-3 * tol * scale) break;
    x += lu.solve(r);
  }
  out.u = x.head(n);
  out.p = x.tail(m);
  out.residual_u = (s.f - s.a.multiply(out.u) - s.b.multiply_transpose(out.p)).norm() / scale;
  out.residual_p = (s.g - s.b.multiply(out.u)).norm() / scale;
  const double res = std::max(out.residual_u, out.residual_p);
  if (!(res <= tol)) throw SolverError("saddle_solve: relative residual " + std::to_string(res), res);
  return out;
}

double infsup_constant_dense(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.to_eigen());
  if (ldlt.info() != Eigen::Success) throw SolverError("infsup: A not SPD", INFINITY);
  const Eigen::MatrixXd bt = b.transpose().to_dense();
  const Eigen::MatrixXd x = ldlt.solve(bt);
  Eigen::MatrixXd s = b.to_dense() * x;
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, mp.to_dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("infsup: eigensolver failed", INFINITY);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(es.eigenvalues().size() - 1);
  if (!(lmin > 1e-12 * lmax)) return 0.0;
  return std::sqrt(lmin);
}

double infsup_constant_lanczos(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp) {
  const int n = a.rows(), m = b.rows();
  const Eigen::SparseMatrix<double> k = block_matrix(a, b);
  LU lu;
  lu.compute(k);
  if (lu.info() != Eigen::Success) return 0.0;
  auto apply = [&](const Eigen::VectorXd& q) {
    // K [u; p] = [0; Mp q]  gives  p = -S^{-1} Mp q
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
    rhs.tail(m) = mp.multiply(q);
    const Eigen::VectorXd x = lu.solve(rhs);
    return Eigen::VectorXd(-x.tail(m));
  };
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> nd;
  Eigen::VectorXd q(m);
  for (int i = 0; i < m; ++i) q[i] = nd(rng);
  q /= std::sqrt(q.dot(mp.multiply(q)));
  std::vector<Eigen::VectorXd> basis{q};
  std::vector<Eigen::VectorXd> mbasis{mp.multiply(q)};
  std::vector<double> alpha, beta;
  double theta = 0, theta_old = -1;
  const int max_steps = std::min(m, 600);
  for (int j = 0; j < max_steps; ++j) {
    Eigen::VectorXd w = apply(basis[j]);
    const double al = mbasis[j].dot(w);
    alpha.push_back(al);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i < basis.size(); ++i) w -= mbasis[i].dot(w) * basis[i];
    const Eigen::VectorXd mw = mp.multiply(w);
    const double be = std::sqrt(std::max(w.dot(mw), 0.0));
    const int sz = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(sz, sz);
    for (int i = 0; i < sz; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < sz) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues()(sz - 1);
    const double est = std::abs(be * es.eigenvectors()(sz - 1, sz - 1));
    if (!(theta > 0)) return 0.0;
    if (est <= 1e-10 * theta || be <= 1e-14 * theta ||
        (j > 5 && std::abs(theta - theta_old) <= 1e-14 * theta))
      break;
    theta_old = theta;
    beta.push_back(be);
    basis.push_back(w / be);
    mbasis.push_back(mw / be);
  }
  return std::sqrt(1.0 / theta);
}

double infsup_constant(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp) {
  if (b.cols() != a.rows() || mp.rows() != b.rows()) throw std::invalid_argument("infsup: size mismatch");
  if (b.rows() <= 600) return infsup_constant_dense(b, a, mp);
  return infsup_constant_lanczos(b, a, mp);
}

Eigen::VectorXd singular_values(const SparseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::VectorXd(0);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a.to_dense());
  return svd.singularValues();
}

int numerical_rank(const SparseMatrix& a, double tol) {
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0 || s[0] == 0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > tol * s[0]) ++r;
  return r;
}

int kernel_dimension(const SparseMatrix& a, double tol) { return a.cols() - numerical_rank(a, tol); }

}  // namespace bihar
