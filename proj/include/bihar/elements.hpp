#pragma once

// Local finite elements as Ciarlet triples (T, P_T, D_T).  Everything is
// templated on the scalar so that the element tables can be checked in
// exact rational arithmetic on the reference triangle.

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "bihar/dense.hpp"
#include "bihar/mesh.hpp"
#include "bihar/poly.hpp"

namespace bihar {

/// Affine data of a triangle in scalar type T.
template <class T>
struct TriangleFrame {
  std::array<std::array<T, 2>, 3> vertices;
  T area;
  std::array<std::array<T, 2>, 3> grad_lambda;
  /// normal_dot[k][j] = grad lambda_j . n_k with n_k the outward normal of
  /// edge k.  For exact T (no square roots) the entry is divided by
  /// |grad lambda_k|, so edge normal moments come out in units of
  /// |grad lambda_k|.
  std::array<std::array<T, 3>, 3> normal_dot;
};

template <class T>
TriangleFrame<T> make_frame(const std::array<std::array<T, 2>, 3>& v) {
  TriangleFrame<T> f;
  f.vertices = v;
  f.area = ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1])) / T(2);
  if (!(f.area > T(0))) throw InvalidMesh("degenerate or clockwise triangle");
  for (int i = 0; i < 3; ++i) {
    const auto& p = v[(i + 1) % 3];
    const auto& q = v[(i + 2) % 3];
    f.grad_lambda[i] = {(p[1] - q[1]) / (T(2) * f.area), (q[0] - p[0]) / (T(2) * f.area)};
  }
  for (int k = 0; k < 3; ++k) {
    const T nk2 = f.grad_lambda[k][0] * f.grad_lambda[k][0] + f.grad_lambda[k][1] * f.grad_lambda[k][1];
    for (int j = 0; j < 3; ++j) {
      const T dot = f.grad_lambda[j][0] * f.grad_lambda[k][0] + f.grad_lambda[j][1] * f.grad_lambda[k][1];
      if constexpr (std::is_floating_point_v<T>)
        f.normal_dot[k][j] = -dot / std::sqrt(nk2);
      else
        f.normal_dot[k][j] = T(0) - dot / nk2;
    }
  }
  return f;
}

inline TriangleFrame<double> make_frame(const CellGeometry& g) {
  return make_frame<double>({{{g.vertices[0][0], g.vertices[0][1]},
                              {g.vertices[1][0], g.vertices[1][1]},
                              {g.vertices[2][0], g.vertices[2][1]}}});
}

template <class T>
TriangleFrame<T> reference_frame() {
  return make_frame<T>({{{T(0), T(0)}, {T(1), T(0)}, {T(0), T(1)}}});
}

enum class DofKind { VertexValue, EdgeMoment, EdgeNormalMoment, CellMoment, CellVectorMoment };

/// One degree of freedom.  `entity` is the local vertex or edge; edge
/// weights are polynomials in the cell's barycentric coordinates.  All
/// integrals are means.
template <class T>
struct DofFunctional {
  DofKind kind = DofKind::VertexValue;
  int entity = -1;
  int component = 0;
  PolyBary<T> weight = PolyBary<T>::constant(T(1));
  VecPoly<T> vector_weight{};
  T scale = T(1);
  std::string label;
};

template <class T>
DofFunctional<T> vertex_dof(int i, int comp = 0) {
  DofFunctional<T> d;
  d.kind = DofKind::VertexValue;
  d.entity = i;
  d.component = comp;
  d.label = "v(a" + std::to_string(i + 1) + ")";
  return d;
}

template <class T>
DofFunctional<T> edge_dof(int i, PolyBary<T> w, std::string label, int comp = 0) {
  DofFunctional<T> d;
  d.kind = DofKind::EdgeMoment;
  d.entity = i;
  d.component = comp;
  d.weight = std::move(w);
  d.label = std::move(label);
  return d;
}

template <class T>
DofFunctional<T> edge_normal_dof(int i, PolyBary<T> w, std::string label, int comp = 0) {
  DofFunctional<T> d = edge_dof<T>(i, std::move(w), std::move(label), comp);
  d.kind = DofKind::EdgeNormalMoment;
  return d;
}

template <class T>
DofFunctional<T> cell_dof(PolyBary<T> w, std::string label, int comp = 0) {
  DofFunctional<T> d;
  d.kind = DofKind::CellMoment;
  d.component = comp;
  d.weight = std::move(w);
  d.label = std::move(label);
  return d;
}

/// Gradient of a scalar polynomial as a two-component field.
template <class T>
VecPoly<T> gradient(const PolyBary<T>& q, const TriangleFrame<T>& f) {
  VecPoly<T> g;
  for (int j = 0; j < 3; ++j) {
    const PolyBary<T> d = q.derivative(j);
    g[0] += d * f.grad_lambda[j][0];
    g[1] += d * f.grad_lambda[j][1];
  }
  return g;
}

template <class T>
T eval_dof(const DofFunctional<T>& d, const VecPoly<T>& v, const TriangleFrame<T>& f) {
  T r(0);
  switch (d.kind) {
    case DofKind::VertexValue:
      r = v[d.component].vertex_value(d.entity);
      break;
    case DofKind::EdgeMoment:
      r = (d.weight * v[d.component]).edge_average(d.entity);
      break;
    case DofKind::EdgeNormalMoment:
      for (int j = 0; j < 3; ++j) {
        if (f.normal_dot[d.entity][j] == T(0)) continue;
        r += f.normal_dot[d.entity][j] * (d.weight * v[d.component].derivative(j)).edge_average(d.entity);
      }
      break;
    case DofKind::CellMoment:
      r = (d.weight * v[d.component]).cell_average();
      break;
    case DofKind::CellVectorMoment:
      r = (d.vector_weight[0] * v[0] + d.vector_weight[1] * v[1]).cell_average();
      break;
  }
  return d.scale * r;
}

template <class T>
T eval_dof(const DofFunctional<T>& d, const PolyBary<T>& v, const TriangleFrame<T>& f) {
  return eval_dof(d, VecPoly<T>{v, PolyBary<T>{}}, f);
}

template <class T>
struct ElementDef {
  std::string name;
  int value_dim = 1;
  int dimension = 0;
  std::function<std::vector<VecPoly<T>>(const TriangleFrame<T>&)> shape_basis;
  std::function<std::vector<DofFunctional<T>>(const TriangleFrame<T>&)> dofs;
};

/// M_ij = D_i(phi_j).
template <class T>
DenseMatrix<T> dof_matrix(const ElementDef<T>& e, const TriangleFrame<T>& f) {
  const auto phi = e.shape_basis(f);
  const auto dofs = e.dofs(f);
  if (static_cast<int>(phi.size()) != e.dimension || static_cast<int>(dofs.size()) != e.dimension)
    throw std::logic_error(e.name + ": basis/DOF count mismatch");
  DenseMatrix<T> m(e.dimension, e.dimension);
  for (int i = 0; i < e.dimension; ++i)
    for (int j = 0; j < e.dimension; ++j) m(i, j) = eval_dof(dofs[i], phi[j], f);
  return m;
}

struct UnisolvenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Shape functions dual to the DOFs: D_i(nodal_j) = delta_ij.
template <class T>
std::vector<VecPoly<T>> nodal_basis(const ElementDef<T>& e, const TriangleFrame<T>& f) {
  const auto phi = e.shape_basis(f);
  const DenseMatrix<T> m = dof_matrix(e, f);
  DenseMatrix<T> c;
  try {
    c = m.inverse();
  } catch (const std::runtime_error&) {
    throw UnisolvenceError(e.name + ": DOF matrix is singular");
  }
  std::vector<VecPoly<T>> out(e.dimension);
  for (int j = 0; j < e.dimension; ++j)
    for (int k = 0; k < e.dimension; ++k) {
      if (c(k, j) == T(0)) continue;
      out[j][0] += phi[k][0] * c(k, j);
      out[j][1] += phi[k][1] * c(k, j);
    }
  return out;
}

/// Names accepted by element_catalog.
std::vector<std::string> element_names();

/// nsc, nsq, ec, eq, veq, vec, morley, cr, fs, cf, lagrange1..4, dg0..4.
template <class T>
ElementDef<T> element_catalog(const std::string& name);

/// a_i = lambda_i^2 lambda_{i+1} - lambda_i lambda_{i+1}^2 (0-based i).
template <class T>
PolyBary<T> cubic_bubble_edge(int i) {
  const int j = (i + 1) % 3;
  std::array<int, 3> e1{0, 0, 0}, e2{0, 0, 0};
  e1[i] = 2, e1[j] = 1;
  e2[i] = 1, e2[j] = 2;
  return PolyBary<T>::monomial(e1[0], e1[1], e1[2]) - PolyBary<T>::monomial(e2[0], e2[1], e2[2]);
}

/// Lambda = lambda_0 lambda_1 lambda_2.
template <class T>
PolyBary<T> cell_bubble() {
  return PolyBary<T>::monomial(1, 1, 1);
}

struct UnisolvenceReport {
  std::string element;
  int trials = 0;
  int failures = 0;
  double min_abs_det = 0;
  double max_condition = 0;
  double max_identity_error = 0;  // max |D_i(nodal_j) - delta_ij|
};

/// Random triangle with all angles >= min_angle_deg, counter-clockwise.
std::array<Point2, 3> random_triangle(std::mt19937_64& rng, double min_angle_deg = 20.0);

/// dof_matrix over seeded random shape-regular triangles.  A trial fails
/// when the condition number exceeds 1e12 or the dual basis misses the
/// identity by more than 1e-10.
UnisolvenceReport unisolvence_check(const std::string& element, int trials, std::uint64_t seed = 2024);

/// 2-norm condition number.
double condition_number(const DenseMatrix<double>& m);

}  // namespace bihar
