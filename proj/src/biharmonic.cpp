#include "bihar/biharmonic.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "bihar/solvers.hpp"

namespace bihar {

namespace {

double rel_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double r = (b - a.multiply(x)).norm();
  return nb > 0 ? r / nb : r;
}

// One-dimensional factor of a separable solution with derivatives 0..4.
struct Factor {
  std::function<std::array<double, 5>(double)> d;
};

ManufacturedProblem separable(const std::string& name, const Factor& fx) {
  ManufacturedProblem p;
  p.name = name;
  p.regularity = "H5";
  const auto d = fx.d;
  p.u = [d](double x, double y) { return d(x)[0] * d(y)[0]; };
  p.grad = [d](double x, double y) {
    const auto a = d(x), b = d(y);
    return std::array<double, 2>{a[1] * b[0], a[0] * b[1]};
  };
  p.hess = [d](double x, double y) {
    const auto a = d(x), b = d(y);
    return std::array<double, 3>{a[2] * b[0], a[1] * b[1], a[0] * b[2]};
  };
  p.f = [d](double x, double y) {
    const auto a = d(x), b = d(y);
    return a[4] * b[0] + 2 * a[2] * b[2] + a[0] * b[4];
  };
  return p;
}

}  // namespace

ManufacturedProblem manufactured(const std::string& name) {
  if (name == "poly8")
    return separable(name, {[](double x) {
                       return std::array<double, 5>{x * x * (1 - x) * (1 - x), 2 * x - 6 * x * x + 4 * x * x * x,
                                                    2 - 12 * x + 12 * x * x, -12 + 24 * x, 24.0};
                     }});
  if (name == "sin2") {
    constexpr double pi = std::numbers::pi;
    return separable(name, {[](double x) {
                       const double s = std::sin(2 * pi * x), c = std::cos(2 * pi * x);
                       return std::array<double, 5>{(1 - c) / 2, pi * s, 2 * pi * pi * c, -4 * pi * pi * pi * s,
                                                    -8 * pi * pi * pi * pi * c};
                     }});
  }
  if (name == "zero") {
    ManufacturedProblem p;
    p.name = name;
    p.regularity = "H5";
    p.u = [](double, double) { return 0.0; };
    p.grad = [](double, double) { return std::array<double, 2>{0, 0}; };
    p.hess = [](double, double) { return std::array<double, 3>{0, 0, 0}; };
    p.f = [](double, double) { return 0.0; };
    return p;
  }
  throw std::invalid_argument("unknown problem: " + name);
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "morley") return Scheme::morley;
  if (name == "cubic") return Scheme::cubic;
  if (name == "quartic") return Scheme::quartic;
  throw std::invalid_argument("unknown scheme: " + name);
}

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::morley: return "morley";
    case Scheme::cubic: return "cubic";
    case Scheme::quartic: return "quartic";
  }
  return "?";
}

namespace {

SolveResult solve_three_stage(const Mesh& m, const ScalarField& f, const SolveOptions& opt, Scheme scheme) {
  const bool cubic = scheme == Scheme::cubic;
  SolveResult res;
  res.scheme = scheme;
  res.primal = std::make_shared<const Space>(build_space(m, cubic ? SpaceKind::A3 : SpaceKind::A4));
  res.velocity = std::make_shared<const Space>(build_space(m, cubic ? SpaceKind::G2 : SpaceKind::G3));
  res.pressure = std::make_shared<const Space>(build_space(m, cubic ? SpaceKind::P1 : SpaceKind::P2));
  const Space& A = *res.primal;
  const Space& G = *res.velocity;
  const Space& P = *res.pressure;

  // (1) (grad r, grad s) = (f, s)
  const SparseMatrix K = assemble_bilinear(A, A, Form::grad_grad, opt.exec);
  const Eigen::VectorXd F = assemble_load(A, f, opt.exec);
  res.r = spd_solve(K, F, opt.tol);
  res.residual_stage1 = rel_residual(K, res.r, F);

  // (2) (grad phi, grad psi) + (p, rot psi) = (grad r, psi), (q, rot phi) = 0
  const SparseMatrix C = assemble_bilinear(A, G, Form::vecfield_grad, opt.exec);  // rows G, cols A
  SaddleSystem sys;
  sys.a = assemble_bilinear(G, G, Form::grad_grad, opt.exec);
  sys.b = assemble_bilinear(G, P, Form::rot_pressure, opt.exec);
  sys.f = C.multiply(res.r);
  sys.g = Eigen::VectorXd::Zero(P.num_dofs());
  const SaddleSolution s = saddle_solve(sys, opt.tol);
  res.phi = s.u;
  res.p = s.p;
  res.residual_stage2 = std::max(s.residual_u, s.residual_p);
  res.constraint_residual = res.phi.size() ? sys.b.multiply(res.phi).cwiseAbs().maxCoeff() : 0.0;

  // (3) (grad u, grad v) = (phi, grad v)
  const Eigen::VectorXd F3 = C.multiply_transpose(res.phi);
  res.u = spd_solve(K, F3, opt.tol);
  res.residual_stage3 = rel_residual(K, res.u, F3);
  return res;
}

}  // namespace

SolveResult solve_cubic(const Mesh& m, const ScalarField& f, const SolveOptions& opt) {
  return solve_three_stage(m, f, opt, Scheme::cubic);
}

SolveResult solve_quartic(const Mesh& m, const ScalarField& f, const SolveOptions& opt) {
  return solve_three_stage(m, f, opt, Scheme::quartic);
}

SolveResult solve_morley(const Mesh& m, const ScalarField& f, const SolveOptions& opt) {
  SolveResult res;
  res.scheme = Scheme::morley;
  res.primal = std::make_shared<const Space>(build_space(m, SpaceKind::Morley));
  const SparseMatrix H = assemble_bilinear(*res.primal, *res.primal, Form::hess_hess, opt.exec);
  const Eigen::VectorXd F = assemble_load(*res.primal, f, opt.exec);
  res.u = spd_solve(H, F, opt.tol);
  res.residual_stage1 = rel_residual(H, res.u, F);
  return res;
}

SolveResult solve(const Mesh& m, Scheme s, const ScalarField& f, const SolveOptions& opt) {
  switch (s) {
    case Scheme::morley: return solve_morley(m, f, opt);
    case Scheme::cubic: return solve_cubic(m, f, opt);
    case Scheme::quartic: return solve_quartic(m, f, opt);
  }
  throw std::invalid_argument("unknown scheme");
}

double l2_norm(const Mesh& m, const ScalarField& f) {
  const Space dg = build_space(m, SpaceKind::DG0);
  return error_norms(dg, Eigen::VectorXd::Zero(dg.num_dofs()), ExactSolution{f, nullptr, nullptr}).l2;
}

double galerkin_residual(const SolveResult& res, const ScalarField& f, const B3Basis& basis) {
  if (res.scheme != Scheme::cubic) throw std::invalid_argument("galerkin residual needs a cubic result");
  const Space& A = *res.primal;
  if (!basis.a3.empty() && basis.a3.front().size() != A.num_dofs())
    throw std::invalid_argument("basis and result live on different meshes");
  const SparseMatrix H = assemble_bilinear(A, A, Form::hess_hess);
  const Eigen::VectorXd F = assemble_load(A, f);
  const Eigen::VectorXd r = H.multiply(res.u) - F;
  const double fn = std::max(1.0, l2_norm(A.mesh(), f));
  double worst = 0;
  for (const auto& w : basis.a3) {
    const double hw = std::sqrt(w.dot(H.multiply(w)));
    worst = std::max(worst, std::abs(w.dot(r)) / (hw * fn));
  }
  return worst;
}

void RateTable::write_csv(std::ostream& os) const {
  const auto flags = os.flags();
  const auto prec = os.precision();
  os << std::setprecision(12);
  os << "n,h,dofs,errH2,rateH2,errH1,rateH1,errL2,rateL2\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const RateRow& r = rows[i];
    auto rate = [&](double v) {
      if (i > 0) os << v;
    };
    os << r.n << ',' << r.h << ',' << r.dofs << ',' << r.err_h2 << ',';
    rate(r.rate_h2);
    os << ',' << r.err_h1 << ',';
    rate(r.rate_h1);
    os << ',' << r.err_l2 << ',';
    rate(r.rate_l2);
    os << '\n';
  }
  os.flags(flags);
  os.precision(prec);
}

RateTable convergence_study(const ManufacturedProblem& prob, Scheme s, const std::vector<int>& n_list,
                            const SolveOptions& opt) {
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw std::invalid_argument("mesh size must be positive");
    if (i > 0 && n_list[i] != 2 * n_list[i - 1]) throw std::invalid_argument("each n must double the previous one");
  }
  RateTable t;
  t.problem = prob.name;
  t.scheme = s;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const Mesh m = generate_structured(n_list[i]);
    const SolveResult res = solve(m, s, prob.f, opt);
    const ErrorNorms e = error_norms(*res.primal, res.u, prob.exact(), opt.exec);
    RateRow row;
    row.n = n_list[i];
    row.h = 1.0 / n_list[i];
    row.dofs = res.primal->num_dofs();
    row.err_h2 = e.h2, row.err_h1 = e.h1, row.err_l2 = e.l2;
    row.rate_h2 = row.rate_h1 = row.rate_l2 = nan;
    if (i > 0) {
      const RateRow& p = t.rows.back();
      row.rate_h2 = std::log2(p.err_h2 / row.err_h2);
      row.rate_h1 = std::log2(p.err_h1 / row.err_h1);
      row.rate_l2 = std::log2(p.err_l2 / row.err_l2);
    }
    t.rows.push_back(row);
  }
  return t;
}

Pair pair_from_name(const std::string& name) {
  if (name == "g2p1") return Pair::G2_P1;
  if (name == "g3p2") return Pair::G3_P2;
  if (name == "g2p0") return Pair::G2_P0;
  throw std::invalid_argument("unknown pair: " + name);
}

const char* pair_name(Pair p) {
  switch (p) {
    case Pair::G2_P1: return "g2p1";
    case Pair::G3_P2: return "g3p2";
    case Pair::G2_P0: return "g2p0";
  }
  return "?";
}

std::vector<std::pair<int, double>> infsup_study(Pair pair, const std::vector<int>& n_list) {
  std::vector<std::pair<int, double>> out;
  for (int n : n_list) {
    const Mesh m = generate_structured(n);
    const Space v = build_space(m, pair == Pair::G3_P2 ? SpaceKind::G3 : SpaceKind::G2);
    const Space q = build_space(m, pair == Pair::G2_P1 ? SpaceKind::P1 : pair == Pair::G3_P2 ? SpaceKind::P2 : SpaceKind::P0);
    const SparseMatrix a = assemble_bilinear(v, v, Form::grad_grad);
    const SparseMatrix b = assemble_bilinear(v, q, Form::rot_pressure);
    const SparseMatrix mp = assemble_bilinear(q, q, Form::mass);
    out.emplace_back(n, infsup_constant(b, a, mp));
  }
  return out;
}

}  // namespace bihar
