#pragma once

// Cell-by-cell assembly of bilinear and linear forms and broken error norms.
// Rows index the test space, columns the trial space.  The parallel variants
// fill per-cell buffers under OpenMP and merge them in cell order, so they
// return results bitwise equal to the serial ones.

#include <Eigen/Dense>
#include <array>
#include <functional>

#include "bihar/space.hpp"
#include "bihar/sparse.hpp"

namespace bihar {

enum class Form {
  grad_grad,      // sum_j (grad u^j, grad v^j)
  hess_hess,      // (hess u, hess v)
  rot_pressure,   // (q, rot v), rot v = dx v^2 - dy v^1; one space vector, the other scalar
  mass,           // (u, v) componentwise
  vecfield_grad,  // (grad w, psi); one space scalar, the other vector
};

enum class Exec { serial, parallel };

const char* form_name(Form f);

/// Throws std::invalid_argument when the spaces live on different meshes or
/// their component counts do not fit the form.
SparseMatrix assemble_bilinear(const Space& trial, const Space& test, Form form, Exec exec = Exec::parallel);

using ScalarField = std::function<double(double, double)>;
using VectorField = std::function<std::array<double, 2>(double, double)>;

/// (f, v) for every global basis function v of a scalar space.  Quadrature
/// degree is the space degree plus `data_degree`.
Eigen::VectorXd assemble_load(const Space& s, const ScalarField& f, Exec exec = Exec::parallel, int data_degree = 10);
/// (f, psi) for a vector space.
Eigen::VectorXd assemble_load(const Space& s, const VectorField& f, Exec exec = Exec::parallel, int data_degree = 10);

struct ExactSolution {
  ScalarField value;
  VectorField grad;
  std::function<std::array<double, 3>(double, double)> hess;  // xx, xy, yy
};

struct ErrorNorms {
  double l2 = 0;
  double h1 = 0;  // broken H1 seminorm
  double h2 = 0;  // broken H2 seminorm
};

/// Errors of a scalar discrete field against exact data.
ErrorNorms error_norms(const Space& s, const Eigen::VectorXd& x, const ExactSolution& exact, Exec exec = Exec::parallel);

}  // namespace bihar
