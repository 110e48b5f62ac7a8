#include "bihar/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bihar {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1, p1 = 0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2 * k - 1) * z * p1 - (k - 1) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
}

namespace {

constexpr int kMaxDegree = 30;

TriQuadRule make_tri(int degree) {
  TriQuadRule r;
  r.degree = degree;
  if (degree <= 1) {
    r.bary.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3});
    r.weights.push_back(1.0);
    return r;
  }
  // p(u, v(1-u)) (1-u) has degree <= degree+1 in u
  const int m = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  for (int i = 0; i < m; ++i) {
    const double u = 0.5 * (x[i] + 1);
    for (int j = 0; j < m; ++j) {
      const double v = 0.5 * (x[j] + 1);
      const double px = u, py = v * (1 - u);
      r.bary.push_back({1 - px - py, px, py});
      // 0.25 from the interval maps, 2 from dividing by the reference area
      r.weights.push_back(0.5 * w[i] * w[j] * (1 - u));
    }
  }
  return r;
}

EdgeQuadRule make_edge(int degree) {
  EdgeQuadRule r;
  r.degree = degree;
  const int m = degree / 2 + 1;
  std::vector<double> x, w;
  gauss_legendre(m, x, w);
  for (int i = 0; i < m; ++i) {
    r.points.push_back(0.5 * (x[i] + 1));
    r.weights.push_back(0.5 * w[i]);
  }
  return r;
}

template <class Rule, class Make>
const Rule& cached(int degree, Make make) {
  static const std::vector<Rule> table = [&] {
    std::vector<Rule> t;
    for (int d = 0; d <= kMaxDegree; ++d) t.push_back(make(d));
    return t;
  }();
  if (degree < 0 || degree > kMaxDegree)
    throw std::invalid_argument("quadrature degree " + std::to_string(degree) + " not supported");
  return table[degree];
}

}  // namespace

const TriQuadRule& tri_rule(int degree) { return cached<TriQuadRule>(degree, make_tri); }
const EdgeQuadRule& edge_rule(int degree) { return cached<EdgeQuadRule>(degree, make_edge); }

}  // namespace bihar
