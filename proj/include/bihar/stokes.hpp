#pragma once

// Discrete Stokes complexes 0 -> B^k_{h0} -> G^{k-1}_{h0} -> P^{k-2}_{h0} -> 0
// for k = 3, 4: the weakly rot-free basis of S2_{h0}, bubble correction,
// the cell-wise gradient inverse and a locally supported B3_{h0} basis.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "bihar/space.hpp"
#include "bihar/sparse.hpp"

namespace bihar {

/// Members of S2_{h0} as G2_{h0} coefficient vectors (zero bubble part).
struct WeakRotFreeBasis {
  std::vector<int> vertices;  // interior vertices, in index order
  std::vector<int> edges;     // interior edges, in index order
  std::vector<Eigen::VectorXd> phi_x, phi_y, phi_patch;  // one per interior vertex
  std::vector<Eigen::VectorXd> phi_edge;                 // one per interior edge
  /// phi_x, phi_y, phi_edge, phi_patch concatenated.
  std::vector<Eigen::VectorXd> all() const;
};

/// phi_a^x, phi_a^y: vertex value e_x / e_y at a, all other vertex values and
/// edge means zero.  phi_e: edge mean n_e on e, everything else zero.
/// phi_{P_a}: edge mean t_{e,a} / |e| on each edge e at a (t_{e,a} the unit
/// tangent leaving a), everything else zero.  Throws std::runtime_error on
/// rank deficiency when check_rank is set.
WeakRotFreeBasis weak_rotfree_basis(const Space& g2, bool check_rank = true);

/// Cells on which some entry of x is nonzero.
std::vector<int> support_cells(const Space& s, const Eigen::VectorXd& x, double tol = 0.0);

/// Cell means of rot v for a G2 field.
std::vector<double> cell_mean_rot(const Space& g2, const Eigen::VectorXd& v);
/// Largest |rot v| over cells, sampled at the vertices (rot is linear).
double max_pointwise_rot(const Space& g2, const Eigen::VectorXd& v);

/// Adds a G2 bubble field so that rot v vanishes pointwise.  Requires the
/// cell means of rot v to vanish to 1e-10.
Eigen::VectorXd bubble_correct(const Space& g2, const Eigen::VectorXd& v);

struct GradInverse {
  Eigen::VectorXd a3;                       // coefficients in A3_{h0}
  std::vector<PolyBary<double>> cell_poly;  // cubic per cell
  double mismatch = 0;                      // worst vertex-constant disagreement
};

/// w with grad_h w = psi.  Antidifferentiates each cell exactly, fixes
/// constants breadth-first from boundary vertices (value 0), and
/// interpolates into A3_{h0}.  Throws std::runtime_error when rot psi is not
/// zero or the constants disagree by more than 1e-9.
GradInverse grad_inverse(const Space& g2, const Space& a3, const Eigen::VectorXd& psi);

/// Broken gradient of an A3 field written in G2_{h0}; `mismatch` receives
/// the largest DOF disagreement (zero when grad_h w lies in G2_{h0}).
Eigen::VectorXd gradient_to_g2(const Space& a3, const Space& g2, const Eigen::VectorXd& w, double* mismatch = nullptr);

struct B3Basis {
  std::vector<Eigen::VectorXd> a3;  // A3_{h0} coefficients
  std::vector<Eigen::VectorXd> g2;  // bubble-corrected gradients in G2_{h0}
  std::vector<std::vector<int>> support;
  std::vector<std::vector<int>> source_support;  // support of the rot-free input
};

/// (grad^{-1} o F) applied to the weakly rot-free basis.
B3Basis b3_basis(const Space& a3, const Space& g2);

/// Largest B3_{h0} jump defect of an A3 field: |mean_e [w]| on interior
/// edges and |mean_e p [d_n w]| for p in P1(e) on all edges (one-sided on
/// the boundary), by edge quadrature.
double b3_jump_defect(const Space& a3, const Eigen::VectorXd& w);

struct ExactnessReport {
  std::string order;  // "cubic" or "quartic"
  int n_cells = 0, interior_vertices = 0, interior_edges = 0;
  int dim_velocity = 0, dim_pressure = 0;
  int rank = 0, kernel = 0;
  int expected_kernel = 0;      // 3X+E (cubic), 3X+2E-3 (quartic)
  int euler_kernel = 0;         // dim G - dim P from Euler's formula
  bool surjective = false;      // rank == dim P^{k-2}_{h0}
  bool kernel_matches = false;  // kernel == expected_kernel
  // cubic only
  int b3_count = 0;
  int b3_gradient_rank = 0;      // rank of the B3 gradients inside G2_{h0}
  double b3_rot_residual = 0;    // max |B g| / ||B||
  double b3_max_jump = 0;
  // enriched complexes, dimension counting only
  int enriched_lhs = 0, enriched_rhs = 0;
  bool pass() const;
};

/// Rank/kernel of rot_h: G^{k-1}_{h0} -> P^{k-2}_{h0} and, for cubic, the
/// B3 basis checks.
ExactnessReport exactness_report(const Mesh& m, const std::string& order);

}  // namespace bihar
