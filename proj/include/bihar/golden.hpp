#pragma once

// Closed-form element tables on the reference triangle, checked in exact
// rational arithmetic, and the FE_veq determinant identity.

#include <cstdint>
#include <string>
#include <vector>

namespace bihar {

struct GoldenEntry {
  std::string element;   // nsc, nsq, ec, eq, veq
  std::string label;     // functional(shape), relation between k and i
  std::string expected;  // printed value
  std::string computed;  // exact value, or "varies" when it depends on i
  bool pass = false;
  bool informational = false;  // corrected values, not a printed constant
};

/// Every table entry for the five macro elements.  Vector entries carrying
/// d_l lambda_k are divided by it and checked on three rational triangles.
std::vector<GoldenEntry> golden_tables();

struct VeqDeterminantCheck {
  int trials = 0;
  std::string printed;    // det M / (grad l1 . curl l2) as printed
  std::string exact;      // exact ratio on the reference triangle
  double max_rel_printed = 0;  // worst relative deviation over random trials
  double max_rel_exact = 0;
};

/// det M / (grad lambda_1 . curl lambda_2) on seeded random triangles.
VeqDeterminantCheck veq_determinant_check(int trials, std::uint64_t seed = 2024);

}  // namespace bihar
