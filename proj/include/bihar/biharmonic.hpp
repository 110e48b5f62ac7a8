#pragma once

// Clamped plate problem Delta^2 u = f on a polygon: the Morley scheme and
// the cubic / quartic schemes solved as Poisson, rotated Stokes, Poisson.

#include <Eigen/Dense>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bihar/assembly.hpp"
#include "bihar/space.hpp"
#include "bihar/stokes.hpp"

namespace bihar {

struct ManufacturedProblem {
  std::string name;
  std::string regularity;
  ScalarField u;
  VectorField grad;
  std::function<std::array<double, 3>(double, double)> hess;
  ScalarField f;  // Delta^2 u
  ExactSolution exact() const { return {u, grad, hess}; }
};

/// poly8: x^2(1-x)^2 y^2(1-y)^2; sin2: sin^2(pi x) sin^2(pi y); zero.
ManufacturedProblem manufactured(const std::string& name);

enum class Scheme { morley, cubic, quartic };
Scheme scheme_from_name(const std::string& name);
const char* scheme_name(Scheme s);

struct SolveOptions {
  double tol = 1e-10;
  Exec exec = Exec::parallel;
};

struct SolveResult {
  Scheme scheme = Scheme::cubic;
  std::shared_ptr<const Space> primal;    // A3_0, A4_0 or Morley_0
  std::shared_ptr<const Space> velocity;  // G2_0 or G3_0 (empty for Morley)
  std::shared_ptr<const Space> pressure;  // P1_0 or P2_0
  Eigen::VectorXd r, phi, p, u;
  double residual_stage1 = 0;
  double residual_stage2 = 0;  // max of the two block residuals
  double residual_stage3 = 0;
  /// max_q |(q, rot_h phi)| over pressure basis functions.
  double constraint_residual = 0;
  FieldFunction u_field() const { return {primal.get(), u}; }
};

/// The mesh must outlive the result.
SolveResult solve_cubic(const Mesh& m, const ScalarField& f, const SolveOptions& opt = {});
SolveResult solve_quartic(const Mesh& m, const ScalarField& f, const SolveOptions& opt = {});
SolveResult solve_morley(const Mesh& m, const ScalarField& f, const SolveOptions& opt = {});
SolveResult solve(const Mesh& m, Scheme s, const ScalarField& f, const SolveOptions& opt = {});

/// L2 norm of f over the mesh.
double l2_norm(const Mesh& m, const ScalarField& f);

/// max_w |(hess_h u, hess_h w) - (f, w)| / (||hess_h w|| max(1, ||f||)) over
/// the B3 basis; cubic results only.
double galerkin_residual(const SolveResult& res, const ScalarField& f, const B3Basis& basis);

struct RateRow {
  int n = 0;
  double h = 0;
  int dofs = 0;
  double err_h2 = 0, rate_h2 = 0;
  double err_h1 = 0, rate_h1 = 0;
  double err_l2 = 0, rate_l2 = 0;  // rates are NaN on the first row
};

struct RateTable {
  std::string problem;
  Scheme scheme = Scheme::cubic;
  std::vector<RateRow> rows;
  /// Header "n,h,dofs,errH2,rateH2,errH1,rateH1,errL2,rateL2"; 12
  /// significant digits; empty rate fields on the first row.
  void write_csv(std::ostream& os) const;
};

/// Structured meshes n in n_list; each n must double the previous one.
RateTable convergence_study(const ManufacturedProblem& prob, Scheme s, const std::vector<int>& n_list,
                            const SolveOptions& opt = {});

enum class Pair { G2_P1, G3_P2, G2_P0 };
Pair pair_from_name(const std::string& name);  // g2p1, g3p2, g2p0
const char* pair_name(Pair p);

/// Discrete inf-sup constant of the velocity/pressure pair, velocity norm
/// the broken H1 seminorm, on each structured mesh.
std::vector<std::pair<int, double>> infsup_study(Pair pair, const std::vector<int>& n_list);

}  // namespace bihar
