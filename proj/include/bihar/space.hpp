#pragma once

// Global finite element spaces on a Mesh: per-cell local bases written in
// raw barycentric monomials plus a sparse local-to-global map.  Edge DOFs
// are Legendre moments in the canonical edge parameter (s = 0 at the lower
// global vertex); normal-derivative DOFs use the canonical normal, the
// tangent rotated clockwise.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "bihar/elements.hpp"
#include "bihar/mesh.hpp"

namespace bihar {

enum class SpaceKind {
  A3,         // FE_nsc: vertex values, edge means, cell moments
  A4,         // FE_nsq: vertex values, P1 edge moments, normal means, cell moments
  G2,         // continuous P2 plus one quadratic bubble, vector valued
  G3,         // Crouzeix-Falk, vector valued
  P0,         // piecewise constants with zero mean
  P1,         // piecewise linears with zero mean
  P2,         // piecewise quadratics with zero mean
  Lagrange1,
  Lagrange2,
  Lagrange3,
  Lagrange4,
  S2,         // continuous P2, vector valued
  Morley,
  DG0,
  DG1,
  DG2,
  DG3,
  DG4,
};

/// "A3_0", "G2_0", "P1_0", "Lagrange2_0", "S2_0", "Morley_0", "DG1", ...
std::string space_name(SpaceKind k);
SpaceKind space_kind_from_name(const std::string& name);

struct LocalEntry {
  int local;      // local scalar function
  int component;  // 0 or 1
  int global;     // global DOF
  double coef;
};

/// A canonical DOF of one cell with its global index (-1 when eliminated).
struct CellDof {
  DofFunctional<double> functional;
  int global;
};

class Space {
 public:
  const Mesh& mesh() const { return *mesh_; }
  SpaceKind kind() const { return kind_; }
  std::string name() const { return space_name(kind_); }
  /// Degree of the raw monomial basis used for local functions.
  int degree() const { return degree_; }
  int components() const { return components_; }
  int num_dofs() const { return components_ * scalar_dofs_; }
  int scalar_dofs() const { return scalar_dofs_; }
  int num_local() const { return num_local_; }
  /// Row l holds the raw coefficients of local function l on cell c.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> cell_coeffs(int c) const;
  const std::vector<LocalEntry>& cell_entries(int c) const { return entries_[c]; }
  /// Canonical DOFs of cell c in local order (empty for P^k_0 and DG spaces).
  const std::vector<CellDof>& cell_dofs(int c) const { return dofs_[c]; }
  bool dof_defined() const { return !dofs_.empty() && !dofs_[0].empty(); }

  /// First scalar DOF attached to vertex v / edge e / cell c, or -1.
  int vertex_dof(int v) const { return vertex_dof_[v]; }
  int edge_dof(int e) const { return edge_dof_[e]; }
  int cell_dof(int c) const { return cell_dof_[c]; }
  int dofs_per_edge() const { return dofs_per_edge_; }
  int dofs_per_cell() const { return dofs_per_cell_; }
  bool boundary_eliminated() const { return eliminate_; }

  friend Space build_space(const Mesh& m, SpaceKind kind, bool eliminate_boundary);

 private:
  const Mesh* mesh_ = nullptr;
  SpaceKind kind_ = SpaceKind::A3;
  int degree_ = 0;
  int components_ = 1;
  int scalar_dofs_ = 0;
  int num_local_ = 0;
  bool eliminate_ = true;
  std::vector<double> coeffs_;
  std::vector<std::vector<LocalEntry>> entries_;
  std::vector<std::vector<CellDof>> dofs_;
  std::vector<int> vertex_dof_, edge_dof_, cell_dof_;
  int dofs_per_edge_ = 0;
  int dofs_per_cell_ = 0;
};

/// The mesh must outlive the space.  With eliminate_boundary = false the
/// boundary DOFs are kept (zero-mean constraints of P^k_0 still apply).
/// G2 without elimination is spanning but not a basis: the sum of all cell
/// bubbles lies in continuous P2.
Space build_space(const Mesh& m, SpaceKind kind, bool eliminate_boundary = true);

/// Values and derivatives of the raw degree-k monomials at a barycentric
/// point: val[r], d1[j][r] = d/dlambda_j, d2[j*3+l][r].
struct RawValues {
  std::vector<double> val;
  std::array<std::vector<double>, 3> d1;
  std::array<std::vector<double>, 9> d2;
};
void raw_values(int k, const std::array<double, 3>& bary, int order, RawValues& out);

/// Local scalar functions of a cell at one point: values, Cartesian
/// gradients, Hessians (xx, xy, yy).
struct LocalValues {
  std::vector<double> val;
  std::vector<std::array<double, 2>> grad;
  std::vector<std::array<double, 3>> hess;
};
void local_values(const Space& s, int c, const CellGeometry& g, const RawValues& raw, int order, LocalValues& out);

struct FieldValue {
  std::array<double, 2> value{};
  std::array<std::array<double, 2>, 2> grad{};
  std::array<std::array<double, 3>, 2> hess{};  // xx, xy, yy per component
};

struct FieldFunction {
  const Space* space = nullptr;
  Eigen::VectorXd coeffs;
};

/// Lowest-index cell containing p (tolerance 1e-12 in barycentric
/// coordinates); throws std::out_of_range outside the mesh.
int locate_cell(const Mesh& m, const Point2& p, std::array<double, 3>* bary = nullptr);

/// Evaluation at a barycentric point of a given cell.
FieldValue eval_in_cell(const Space& s, const Eigen::VectorXd& x, int c, const std::array<double, 3>& bary, int order);
FieldValue eval_field(const FieldFunction& u, const Point2& p, int order);

/// A scalar function with its gradient, for interpolation.
struct ScalarFunction {
  std::function<double(double, double)> value;
  std::function<std::array<double, 2>(double, double)> grad;
};

/// Canonical interpolant of smooth data (one ScalarFunction per component).
/// Only for DOF-defined spaces.
Eigen::VectorXd interpolate(const Space& s, const std::vector<ScalarFunction>& comps);

/// Interpolant of piecewise polynomial data given per cell and component.
/// `mismatch` receives the largest disagreement between cells sharing a
/// DOF, or between an eliminated DOF and zero.
Eigen::VectorXd interpolate_cellwise(const Space& s, const std::function<VecPoly<double>(int)>& cell_poly,
                                     double* mismatch = nullptr);

/// Polynomial of local function data on cell c: sum over entries of
/// coef * x[global] * local function, per component.
VecPoly<double> cell_polynomial(const Space& s, const Eigen::VectorXd& x, int c);

/// Cartesian polynomial data mapped to barycentric form on a cell:
/// returns q(x(lambda), y(lambda)) for q(x,y) = sum c_ab x^a y^b.
PolyBary<double> cartesian_to_bary(const std::vector<std::array<double, 3>>& terms, const CellGeometry& g);

/// CSV "x,y,value" on an (n+1) x (n+1) grid over the mesh bounding box;
/// derivative order 0 samples the value of component `component`.
void write_field_samples(std::ostream& os, const FieldFunction& u, int n, int component = 0);

}  // namespace bihar
