#pragma once

#include <array>
#include <vector>

namespace bihar {

/// Rule on the reference triangle; weights sum to 1 so that
/// sum_q w_q f(lambda_q) approximates the cell mean.
struct TriQuadRule {
  int degree = 0;
  std::vector<std::array<double, 3>> bary;
  std::vector<double> weights;
};

/// Rule on [0,1]; weights sum to 1.
struct EdgeQuadRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Exact for total degree <= degree, 0 <= degree <= 30.  Degree 0 and 1 use
/// the centroid; higher degrees a collapsed Gauss-Legendre product rule.
const TriQuadRule& tri_rule(int degree);
const EdgeQuadRule& edge_rule(int degree);

}  // namespace bihar
