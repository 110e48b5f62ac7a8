#include "bihar/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bihar/quadrature.hpp"

namespace bihar {

namespace {

std::vector<RawValues> raw_table(int k, const TriQuadRule& rule, int order) {
  std::vector<RawValues> t(rule.weights.size());
  for (std::size_t q = 0; q < t.size(); ++q) raw_values(k, rule.bary[q], order, t[q]);
  return t;
}

Point2 point_of(const CellGeometry& g, const std::array<double, 3>& l) {
  return {l[0] * g.vertices[0][0] + l[1] * g.vertices[1][0] + l[2] * g.vertices[2][0],
          l[0] * g.vertices[0][1] + l[1] * g.vertices[1][1] + l[2] * g.vertices[2][1]};
}

// Runs body(c, buffer) for every cell, then concatenates buffers in cell order.
template <class Item, class Body>
std::vector<Item> for_cells(int nc, Exec exec, Body body) {
  std::vector<std::vector<Item>> buf(nc);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < nc; ++c) body(c, buf[c]);
  } else {
    for (int c = 0; c < nc; ++c) body(c, buf[c]);
  }
  std::size_t total = 0;
  for (const auto& b : buf) total += b.size();
  std::vector<Item> out;
  out.reserve(total);
  for (auto& b : buf) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

const char* form_name(Form f) {
  switch (f) {
    case Form::grad_grad: return "grad_grad";
    case Form::hess_hess: return "hess_hess";
    case Form::rot_pressure: return "rot_pressure";
    case Form::mass: return "mass";
    case Form::vecfield_grad: return "vecfield_grad";
  }
  return "?";
}

SparseMatrix assemble_bilinear(const Space& trial, const Space& test, Form form, Exec exec) {
  if (&trial.mesh() != &test.mesh()) throw std::invalid_argument("spaces live on different meshes");
  const bool mixed = form == Form::rot_pressure || form == Form::vecfield_grad;
  if (mixed) {
    if (trial.components() + test.components() != 3)
      throw std::invalid_argument(std::string(form_name(form)) + " needs one scalar and one vector space");
  } else if (trial.components() != test.components()) {
    throw std::invalid_argument(std::string(form_name(form)) + " needs spaces with equal component counts");
  }
  const Mesh& m = trial.mesh();
  int order = 0, drop = 0;
  switch (form) {
    case Form::grad_grad: order = 1, drop = 2; break;
    case Form::hess_hess: order = 2, drop = 4; break;
    case Form::mass: order = 0, drop = 0; break;
    case Form::rot_pressure:
    case Form::vecfield_grad: order = 1, drop = 1; break;
  }
  const int degree = std::max(0, trial.degree() + test.degree() - drop);
  const TriQuadRule& rule = tri_rule(degree);
  const auto raw_u = raw_table(trial.degree(), rule, order);
  const auto raw_v = raw_table(test.degree(), rule, order);
  const int nq = static_cast<int>(rule.weights.size());
  const int nu = trial.num_local(), nv = test.num_local();

  // For mixed forms: the differentiated side is the vector space for
  // rot_pressure and the scalar space for vecfield_grad.
  const bool trial_vector = trial.components() == 2;

  auto body = [&](int c, std::vector<Triplet>& out) {
    const CellGeometry g = cell_geometry(m, c);
    std::vector<LocalValues> lu(nq), lv(nq);
    for (int q = 0; q < nq; ++q) {
      local_values(trial, c, g, raw_u[q], order, lu[q]);
      local_values(test, c, g, raw_v[q], order, lv[q]);
    }
    // block[k][i * nu + j]: test local i, trial local j, k = vector component
    // for mixed forms.
    std::array<std::vector<double>, 2> block;
    block[0].assign(static_cast<std::size_t>(nu) * nv, 0.0);
    if (mixed) block[1].assign(static_cast<std::size_t>(nu) * nv, 0.0);
    for (int q = 0; q < nq; ++q) {
      const double w = rule.weights[q] * g.area;
      for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nu; ++j) {
          const std::size_t ij = static_cast<std::size_t>(i) * nu + j;
          switch (form) {
            case Form::mass:
              block[0][ij] += w * lu[q].val[j] * lv[q].val[i];
              break;
            case Form::grad_grad:
              block[0][ij] += w * (lu[q].grad[j][0] * lv[q].grad[i][0] + lu[q].grad[j][1] * lv[q].grad[i][1]);
              break;
            case Form::hess_hess: {
              const auto& a = lu[q].hess[j];
              const auto& b = lv[q].hess[i];
              block[0][ij] += w * (a[0] * b[0] + 2 * a[1] * b[1] + a[2] * b[2]);
              break;
            }
            case Form::rot_pressure: {
              // differentiate the vector side
              const auto& dv = trial_vector ? lu[q].grad[j] : lv[q].grad[i];
              const double s = trial_vector ? lv[q].val[i] : lu[q].val[j];
              block[0][ij] -= w * s * dv[1];
              block[1][ij] += w * s * dv[0];
              break;
            }
            case Form::vecfield_grad: {
              const auto& dw = trial_vector ? lv[q].grad[i] : lu[q].grad[j];
              const double s = trial_vector ? lu[q].val[j] : lv[q].val[i];
              block[0][ij] += w * s * dw[0];
              block[1][ij] += w * s * dw[1];
              break;
            }
          }
        }
    }
    const auto& eu = trial.cell_entries(c);
    const auto& ev = test.cell_entries(c);
    for (const auto& b : ev)
      for (const auto& a : eu) {
        double val;
        const std::size_t ij = static_cast<std::size_t>(b.local) * nu + a.local;
        if (mixed) {
          val = block[trial_vector ? a.component : b.component][ij];
        } else {
          if (a.component != b.component) continue;
          val = block[0][ij];
        }
        val *= a.coef * b.coef;
        if (val != 0) out.push_back({b.global, a.global, val});
      }
  };
  const auto trip = for_cells<Triplet>(m.num_cells(), exec, body);
  return SparseMatrix::from_triplets(test.num_dofs(), trial.num_dofs(), trip);
}

namespace {

struct IndexedValue {
  int index;
  double value;
};

Eigen::VectorXd load_impl(const Space& s, const VectorField& f, Exec exec, int data_degree) {
  const Mesh& m = s.mesh();
  const TriQuadRule& rule = tri_rule(std::min(30, s.degree() + data_degree));
  const auto raw = raw_table(s.degree(), rule, 0);
  const int nq = static_cast<int>(rule.weights.size());
  const int nl = s.num_local();
  auto body = [&](int c, std::vector<IndexedValue>& out) {
    const CellGeometry g = cell_geometry(m, c);
    std::vector<std::array<double, 2>> loc(nl, {0.0, 0.0});
    LocalValues lv;
    for (int q = 0; q < nq; ++q) {
      local_values(s, c, g, raw[q], 0, lv);
      const Point2 x = point_of(g, rule.bary[q]);
      const auto fx = f(x[0], x[1]);
      const double w = rule.weights[q] * g.area;
      for (int l = 0; l < nl; ++l) {
        loc[l][0] += w * fx[0] * lv.val[l];
        loc[l][1] += w * fx[1] * lv.val[l];
      }
    }
    for (const auto& e : s.cell_entries(c)) out.push_back({e.global, e.coef * loc[e.local][e.component]});
  };
  const auto vals = for_cells<IndexedValue>(m.num_cells(), exec, body);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(s.num_dofs());
  for (const auto& v : vals) b[v.index] += v.value;
  return b;
}

}  // namespace

Eigen::VectorXd assemble_load(const Space& s, const ScalarField& f, Exec exec, int data_degree) {
  if (s.components() != 1) throw std::invalid_argument("scalar load on a vector space");
  return load_impl(s, [&](double x, double y) { return std::array<double, 2>{f(x, y), 0.0}; }, exec, data_degree);
}

Eigen::VectorXd assemble_load(const Space& s, const VectorField& f, Exec exec, int data_degree) {
  if (s.components() != 2) throw std::invalid_argument("vector load on a scalar space");
  return load_impl(s, f, exec, data_degree);
}

ErrorNorms error_norms(const Space& s, const Eigen::VectorXd& x, const ExactSolution& exact, Exec exec) {
  if (s.components() != 1) throw std::invalid_argument("error norms need a scalar space");
  if (x.size() != s.num_dofs()) throw std::invalid_argument("coefficient vector length does not match the space");
  const Mesh& m = s.mesh();
  const TriQuadRule& rule = tri_rule(std::min(30, 2 * (s.degree() + 8)));
  const auto raw = raw_table(s.degree(), rule, 2);
  const int nq = static_cast<int>(rule.weights.size());
  const int nl = s.num_local();
  auto body = [&](int c, std::vector<std::array<double, 3>>& out) {
    const CellGeometry g = cell_geometry(m, c);
    std::vector<double> w(nl, 0.0);
    for (const auto& e : s.cell_entries(c)) w[e.local] += e.coef * x[e.global];
    LocalValues lv;
    std::array<double, 3> acc{0, 0, 0};
    for (int q = 0; q < nq; ++q) {
      local_values(s, c, g, raw[q], 2, lv);
      double u = 0, ux = 0, uy = 0, hxx = 0, hxy = 0, hyy = 0;
      for (int l = 0; l < nl; ++l) {
        u += w[l] * lv.val[l];
        ux += w[l] * lv.grad[l][0];
        uy += w[l] * lv.grad[l][1];
        hxx += w[l] * lv.hess[l][0];
        hxy += w[l] * lv.hess[l][1];
        hyy += w[l] * lv.hess[l][2];
      }
      const Point2 p = point_of(g, rule.bary[q]);
      const double e0 = exact.value ? exact.value(p[0], p[1]) - u : -u;
      const auto gr = exact.grad ? exact.grad(p[0], p[1]) : std::array<double, 2>{0, 0};
      const auto he = exact.hess ? exact.hess(p[0], p[1]) : std::array<double, 3>{0, 0, 0};
      const double wq = rule.weights[q] * g.area;
      acc[0] += wq * e0 * e0;
      acc[1] += wq * ((gr[0] - ux) * (gr[0] - ux) + (gr[1] - uy) * (gr[1] - uy));
      acc[2] += wq * ((he[0] - hxx) * (he[0] - hxx) + 2 * (he[1] - hxy) * (he[1] - hxy) + (he[2] - hyy) * (he[2] - hyy));
    }
    out.push_back(acc);
  };
  const auto parts = for_cells<std::array<double, 3>>(m.num_cells(), exec, body);
  std::array<double, 3> sum{0, 0, 0};
  for (const auto& p : parts)
    for (int k = 0; k < 3; ++k) sum[k] += p[k];
  return {std::sqrt(sum[0]), std::sqrt(sum[1]), std::sqrt(sum[2])};
}

}  // namespace bihar
