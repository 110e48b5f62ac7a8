#pragma once

#include <stdexcept>
#include <string>

#include "bihar/sparse.hpp"

namespace bihar {

/// Thrown when a solve misses its residual bound or a factorisation fails.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double res) : std::runtime_error(what), residual(res) {}
  double residual;
};

/// Jacobi-preconditioned conjugate gradients.  Stops when
/// ||b - A x|| <= tol * ||b||.
Eigen::VectorXd cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10,
                         int max_iter = 20000);

/// Sparse LDL^T solve with the same residual contract as cg_solve.
Eigen::VectorXd spd_solve(const SparseMatrix& a, const Eigen::VectorXd& b, double tol = 1e-10);

/// [A B^T; B 0] [u; p] = [f; g].  B has one row per pressure DOF.
struct SaddleSystem {
  SparseMatrix a;
  SparseMatrix b;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
};

struct SaddleSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  double residual_u = 0;  // ||f - A u - B^T p|| / max(||f||, ||g||)
  double residual_p = 0;  // ||g - B u|| / max(||f||, ||g||)
};

/// Direct sparse LU on the block matrix plus refinement.  Throws SolverError
/// when the block matrix is singular (B rank deficient) or the residuals
/// exceed tol.
SaddleSolution saddle_solve(const SaddleSystem& s, double tol = 1e-10);

/// sqrt of the smallest eigenvalue of B A^{-1} B^T q = lambda Mp q.
/// Dense generalized eigensolver for small pressure spaces, Lanczos on
/// (B A^{-1} B^T)^{-1} Mp otherwise.  Returns 0 when B is rank deficient.
double infsup_constant(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp);
double infsup_constant_dense(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp);
double infsup_constant_lanczos(const SparseMatrix& b, const SparseMatrix& a, const SparseMatrix& mp);

/// Singular values of the dense matrix, descending.
Eigen::VectorXd singular_values(const SparseMatrix& a);
/// Number of singular values above tol * sigma_max.
int numerical_rank(const SparseMatrix& a, double tol = 1e-8);
/// cols - numerical_rank.
int kernel_dimension(const SparseMatrix& a, double tol = 1e-8);

}  // namespace bihar
