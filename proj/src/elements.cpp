#include "bihar/elements.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "bihar/rational.hpp"

namespace bihar {

namespace {

template <class T>
using P = PolyBary<T>;

template <class T>
P<T> lam(int i) {
  return P<T>::lambda(((i % 3) + 3) % 3);
}

template <class T>
VecPoly<T> scalar(const P<T>& p) {
  return {p, P<T>{}};
}

template <class T>
VecPoly<T> in_component(const P<T>& p, int c) {
  VecPoly<T> v;
  v[c] = p;
  return v;
}

std::string idx(int i) { return std::to_string(i + 1); }

// {lambda_i^2, lambda_i lambda_{i+1}}
template <class T>
std::vector<P<T>> p2_set() {
  std::vector<P<T>> s;
  for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * lam<T>(i));
  for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * lam<T>(i + 1));
  return s;
}

// P2 set plus a_i: the nine cubic functions dual to the edge/vertex DOFs
template <class T>
std::vector<P<T>> xi_set() {
  auto s = p2_set<T>();
  for (int i = 0; i < 3; ++i) s.push_back(cubic_bubble_edge<T>(i));
  return s;
}

template <class T>
std::vector<P<T>> p3_set() {
  auto s = xi_set<T>();
  s.push_back(cell_bubble<T>());
  return s;
}

template <class T>
P<T> quartic_phi(int i) {
  const int a = i % 3, b = (i + 1) % 3;
  std::array<int, 3> e{0, 0, 0};
  auto mono = [&](int pa, int pb, T c) {
    e = {0, 0, 0};
    e[a] = pa;
    e[b] = pb;
    return P<T>::monomial(e[0], e[1], e[2], c);
  };
  return mono(3, 1, T(1)) + mono(2, 2, T(-3)) + mono(1, 3, T(1));
}

template <class T>
std::vector<P<T>> raw_set(int k) {
  std::vector<P<T>> s;
  for (const auto& e : raw_exponents(k)) s.push_back(P<T>::monomial(e[0], e[1], e[2]));
  return s;
}

template <class T>
std::vector<VecPoly<T>> as_scalar(const std::vector<P<T>>& s) {
  std::vector<VecPoly<T>> v;
  for (const auto& p : s) v.push_back(scalar(p));
  return v;
}

template <class T>
void add_vertex_dofs(std::vector<DofFunctional<T>>& d, int comp = 0) {
  for (int i = 0; i < 3; ++i) d.push_back(vertex_dof<T>(i, comp));
}

// mean of lambda_{i+1}^m v over e_i
template <class T>
void add_edge_dofs(std::vector<DofFunctional<T>>& d, int m, int comp = 0) {
  for (int i = 0; i < 3; ++i) {
    P<T> w = P<T>::constant(T(1));
    for (int k = 0; k < m; ++k) w = w * lam<T>(i + 1);
    std::string lbl = m == 0 ? "mean_e" + idx(i) : "mean_e" + idx(i) + "(l" + idx((i + 1) % 3) + "^" +
                                                         std::to_string(m) + " v)";
    d.push_back(edge_dof<T>(i, w, lbl, comp));
  }
}

template <class T>
void add_edge_normal_dofs(std::vector<DofFunctional<T>>& d, int m) {
  for (int i = 0; i < 3; ++i) {
    P<T> w = P<T>::constant(T(1));
    for (int k = 0; k < m; ++k) w = w * lam<T>(i + 1);
    std::string lbl = m == 0 ? "mean_e" + idx(i) + "(dn v)"
                             : "mean_e" + idx(i) + "(l" + idx((i + 1) % 3) + "^" + std::to_string(m) + " dn v)";
    d.push_back(edge_normal_dof<T>(i, w, lbl));
  }
}

template <class T>
ElementDef<T> make(std::string name, int value_dim, int dim,
                   std::function<std::vector<VecPoly<T>>(const TriangleFrame<T>&)> shapes,
                   std::function<std::vector<DofFunctional<T>>(const TriangleFrame<T>&)> dofs) {
  ElementDef<T> e;
  e.name = std::move(name);
  e.value_dim = value_dim;
  e.dimension = dim;
  e.shape_basis = std::move(shapes);
  e.dofs = std::move(dofs);
  return e;
}

template <class T>
std::vector<VecPoly<T>> vec_shapes(const TriangleFrame<T>& f) {
  std::vector<VecPoly<T>> s;
  const auto p3 = p3_set<T>();
  for (int c = 0; c < 2; ++c)
    for (const auto& p : p3) s.push_back(in_component(p, c));
  for (int i = 0; i < 3; ++i) s.push_back(gradient(cubic_bubble_edge<T>(i) * cell_bubble<T>(), f));
  return s;
}

template <class T>
std::vector<DofFunctional<T>> vec_first_dofs() {
  std::vector<DofFunctional<T>> d;
  for (int c = 0; c < 2; ++c) {
    add_edge_dofs<T>(d, 0, c);
    add_edge_dofs<T>(d, 1, c);
    add_edge_dofs<T>(d, 2, c);
    d.push_back(cell_dof<T>(P<T>::constant(T(1)), "mean_T", c));
  }
  for (std::size_t k = 0; k < d.size(); ++k) d[k].label += k < 10 ? " [v1]" : " [v2]";
  return d;
}

// psi_j spanning the annihilator of the first 20 DOFs, orthogonal in L2(T)
template <class T>
std::vector<VecPoly<T>> vec_interior_weights(const TriangleFrame<T>& f) {
  const auto s = vec_shapes<T>(f);
  const auto d = vec_first_dofs<T>();
  DenseMatrix<T> m(20, 23);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 23; ++j) m(i, j) = eval_dof(d[i], s[j], f);
  const DenseMatrix<T> n = m.nullspace();
  if (n.cols() != 3) throw UnisolvenceError("vec: annihilator of the P3 DOFs is not 3-dimensional");
  std::vector<VecPoly<T>> psi;
  for (int k = 0; k < 3; ++k) {
    VecPoly<T> v;
    for (int j = 0; j < 23; ++j) {
      if (n(j, k) == T(0)) continue;
      v[0] += s[j][0] * n(j, k);
      v[1] += s[j][1] * n(j, k);
    }
    psi.push_back(v);
  }
  auto inner = [](const VecPoly<T>& a, const VecPoly<T>& b) {
    return (a[0] * b[0] + a[1] * b[1]).cell_average();
  };
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < k; ++l) {
      const T c = inner(psi[k], psi[l]) / inner(psi[l], psi[l]);
      psi[k][0] -= psi[l][0] * c;
      psi[k][1] -= psi[l][1] * c;
    }
    if constexpr (std::is_floating_point_v<T>) {
      const T nrm = std::sqrt(inner(psi[k], psi[k]));
      psi[k][0] *= T(1) / nrm;
      psi[k][1] *= T(1) / nrm;
    }
  }
  return psi;
}

}  // namespace

std::vector<std::string> element_names() {
  return {"nsc", "nsq", "ec", "eq", "veq", "vec", "morley", "cr", "fs", "cf",
          "lagrange1", "lagrange2", "lagrange3", "lagrange4", "dg0", "dg1", "dg2", "dg3", "dg4"};
}

template <class T>
ElementDef<T> element_catalog(const std::string& name) {
  using Frame = TriangleFrame<T>;
  using Dofs = std::vector<DofFunctional<T>>;
  const P<T> one = P<T>::constant(T(1));

  if (name == "nsc")
    return make<T>(name, 1, 10, [](const Frame&) { return as_scalar(p3_set<T>()); },
                   [one](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     add_edge_dofs(d, 0);
                     for (int i = 0; i < 3; ++i)
                       d.push_back(cell_dof<T>(cubic_bubble_edge<T>(i), "mean_T(a" + idx(i) + " v)"));
                     d.push_back(cell_dof<T>(one, "mean_T"));
                     return d;
                   });
  if (name == "nsq")
    return make<T>(name, 1, 15,
                   [](const Frame&) {
                     auto s = xi_set<T>();
                     for (int i = 0; i < 3; ++i) s.push_back(quartic_phi<T>(i));
                     for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * cell_bubble<T>());
                     return as_scalar(s);
                   },
                   [](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     add_edge_dofs(d, 0);
                     add_edge_dofs(d, 1);
                     add_edge_normal_dofs(d, 0);
                     for (int i = 0; i < 3; ++i) d.push_back(cell_dof<T>(lam<T>(i), "mean_T(l" + idx(i) + " v)"));
                     return d;
                   });
  if (name == "ec")
    return make<T>(name, 1, 12,
                   [](const Frame&) {
                     std::vector<P<T>> s;
                     for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * lam<T>(i) * T(3) - lam<T>(i) * T(2));
                     for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * lam<T>(i + 1));
                     for (int i = 0; i < 3; ++i) s.push_back(cubic_bubble_edge<T>(i));
                     for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * cell_bubble<T>());
                     return as_scalar(s);
                   },
                   [](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     add_edge_dofs(d, 0);
                     add_edge_normal_dofs(d, 0);
                     add_edge_normal_dofs(d, 1);
                     return d;
                   });
  if (name == "eq")
    return make<T>(name, 1, 18,
                   [](const Frame&) {
                     auto s = xi_set<T>();
                     for (int i = 0; i < 3; ++i) s.push_back(quartic_phi<T>(i));
                     for (int i = 0; i < 3; ++i) s.push_back(lam<T>(i) * cell_bubble<T>());
                     for (int i = 0; i < 3; ++i) s.push_back(cubic_bubble_edge<T>(i) * cell_bubble<T>());
                     return as_scalar(s);
                   },
                   [](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     add_edge_dofs(d, 0);
                     add_edge_dofs(d, 1);
                     add_edge_normal_dofs(d, 0);
                     add_edge_normal_dofs(d, 1);
                     add_edge_normal_dofs(d, 2);
                     return d;
                   });
  if (name == "veq")
    return make<T>(name, 2, 14,
                   [](const Frame& f) {
                     std::vector<VecPoly<T>> s;
                     const auto p2 = p2_set<T>();
                     for (int c = 0; c < 2; ++c)
                       for (const auto& p : p2) s.push_back(in_component(p, c));
                     for (int i = 0; i < 2; ++i) s.push_back(gradient(lam<T>(i) * cell_bubble<T>(), f));
                     return s;
                   },
                   [one](const Frame&) {
                     Dofs d;
                     for (int c = 0; c < 2; ++c) {
                       const std::size_t first = d.size();
                       add_edge_dofs(d, 0, c);
                       add_edge_dofs(d, 1, c);
                       d.push_back(cell_dof<T>(one, "mean_T", c));
                       for (std::size_t k = first; k < d.size(); ++k) d[k].label += c == 0 ? " [v1]" : " [v2]";
                     }
                     return d;
                   });
  if (name == "vec")
    return make<T>(name, 2, 23, [](const Frame& f) { return vec_shapes<T>(f); },
                   [](const Frame& f) {
                     Dofs d = vec_first_dofs<T>();
                     const auto psi = vec_interior_weights<T>(f);
                     for (int j = 0; j < 3; ++j) {
                       DofFunctional<T> q;
                       q.kind = DofKind::CellVectorMoment;
                       q.vector_weight = psi[j];
                       q.label = "mean_T(psi" + idx(j) + " . v)";
                       d.push_back(q);
                     }
                     return d;
                   });
  if (name == "morley")
    return make<T>(name, 1, 6, [](const Frame&) { return as_scalar(p2_set<T>()); },
                   [](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     add_edge_normal_dofs(d, 0);
                     return d;
                   });
  if (name == "cr")
    return make<T>(name, 1, 3,
                   [](const Frame&) {
                     std::vector<P<T>> s{lam<T>(0), lam<T>(1), lam<T>(2)};
                     return as_scalar(s);
                   },
                   [](const Frame&) {
                     Dofs d;
                     add_edge_dofs(d, 0);
                     return d;
                   });
  if (name == "fs")
    return make<T>(name, 1, 6, [](const Frame&) { return as_scalar(p2_set<T>()); },
                   [one](const Frame&) {
                     Dofs d;
                     add_edge_dofs(d, 0);
                     Dofs m1;
                     add_edge_dofs(m1, 1);
                     d.push_back(m1[0]);
                     d.push_back(m1[1]);
                     d.push_back(cell_dof<T>(one, "mean_T"));
                     return d;
                   });
  if (name == "cf")
    return make<T>(name, 1, 10, [](const Frame&) { return as_scalar(p3_set<T>()); },
                   [one](const Frame&) {
                     Dofs d;
                     add_edge_dofs(d, 0);
                     add_edge_dofs(d, 1);
                     add_edge_dofs(d, 2);
                     d.push_back(cell_dof<T>(one, "mean_T"));
                     return d;
                   });
  if (name.rfind("lagrange", 0) == 0 && name.size() == 9) {
    const int k = name[8] - '0';
    if (k < 1 || k > 4) throw std::invalid_argument("unknown element: " + name);
    return make<T>(name, 1, raw_dim(k), [k](const Frame&) { return as_scalar(raw_set<T>(k)); },
                   [k, one](const Frame&) {
                     Dofs d;
                     add_vertex_dofs(d);
                     for (int m = 0; m + 2 <= k; ++m) add_edge_dofs(d, m);
                     if (k == 3) d.push_back(cell_dof<T>(one, "mean_T"));
                     if (k == 4)
                       for (int i = 0; i < 3; ++i) d.push_back(cell_dof<T>(lam<T>(i), "mean_T(l" + idx(i) + " v)"));
                     return d;
                   });
  }
  if (name.rfind("dg", 0) == 0 && name.size() == 3) {
    const int k = name[2] - '0';
    if (k < 0 || k > 4) throw std::invalid_argument("unknown element: " + name);
    return make<T>(name, 1, raw_dim(k), [k](const Frame&) { return as_scalar(raw_set<T>(k)); },
                   [k](const Frame&) {
                     Dofs d;
                     for (const auto& e : raw_exponents(k))
                       d.push_back(cell_dof<T>(P<T>::monomial(e[0], e[1], e[2]),
                                               "mean_T(l^(" + std::to_string(e[0]) + "," + std::to_string(e[1]) +
                                                   "," + std::to_string(e[2]) + ") v)"));
                     return d;
                   });
  }
  throw std::invalid_argument("unknown element: " + name);
}

template ElementDef<double> element_catalog<double>(const std::string&);
template ElementDef<Rational> element_catalog<Rational>(const std::string&);

std::array<Point2, 3> random_triangle(std::mt19937_64& rng, double min_angle_deg) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double min_angle = min_angle_deg * std::numbers::pi / 180;
  for (;;) {
    std::array<Point2, 3> v;
    for (auto& p : v) p = {u(rng), u(rng)};
    const double a2 = (v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]);
    if (a2 < 0) std::swap(v[1], v[2]);
    if (std::abs(a2) < 1e-3) continue;
    double smallest = 10;
    for (int i = 0; i < 3; ++i) {
      const auto& a = v[i];
      const auto& b = v[(i + 1) % 3];
      const auto& c = v[(i + 2) % 3];
      const double x1 = b[0] - a[0], y1 = b[1] - a[1], x2 = c[0] - a[0], y2 = c[1] - a[1];
      const double ang = std::acos((x1 * x2 + y1 * y2) / (std::hypot(x1, y1) * std::hypot(x2, y2)));
      smallest = std::min(smallest, ang);
    }
    if (smallest >= min_angle) return v;
  }
}

double condition_number(const DenseMatrix<double>& m) {
  Eigen::MatrixXd a(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a(i, j) = m(i, j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[s.size() - 1] == 0) return INFINITY;
  return s[0] / s[s.size() - 1];
}

UnisolvenceReport unisolvence_check(const std::string& element, int trials, std::uint64_t seed) {
  const ElementDef<double> e = element_catalog<double>(element);
  UnisolvenceReport r;
  r.element = element;
  r.trials = trials;
  r.min_abs_det = INFINITY;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto v = random_triangle(rng);
    const auto f = make_frame<double>({{{v[0][0], v[0][1]}, {v[1][0], v[1][1]}, {v[2][0], v[2][1]}}});
    const DenseMatrix<double> m = dof_matrix(e, f);
    const double cond = condition_number(m);
    r.min_abs_det = std::min(r.min_abs_det, std::abs(m.determinant()));
    r.max_condition = std::max(r.max_condition, cond);
    bool ok = cond < 1e12;
    if (ok) {
      const auto nodal = nodal_basis(e, f);
      const auto dofs = e.dofs(f);
      double err = 0;
      for (int i = 0; i < e.dimension; ++i)
        for (int j = 0; j < e.dimension; ++j)
          err = std::max(err, std::abs(eval_dof(dofs[i], nodal[j], f) - (i == j ? 1.0 : 0.0)));
      r.max_identity_error = std::max(r.max_identity_error, err);
      ok = err <= 1e-10;
    }
    if (!ok) ++r.failures;
  }
  return r;
}

}  // namespace bihar
