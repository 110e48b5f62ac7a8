#include "bihar/golden.hpp"

#include <cmath>
#include <random>

#include "bihar/elements.hpp"
#include "bihar/rational.hpp"

namespace bihar {

namespace {

using Q = Rational;
using P = PolyBary<Q>;

int mod3(int i) { return ((i % 3) + 3) % 3; }
P lam(int i) { return P::lambda(mod3(i)); }
P Lambda() { return cell_bubble<Q>(); }
P a(int i) { return cubic_bubble_edge<Q>(mod3(i)); }
P one() { return P::constant(Q(1)); }

P phi4(int i) {
  const P x = lam(i), y = lam(i + 1);
  return x * x * x * y - Q(3) * x * x * y * y + x * y * y * y;
}

const TriangleFrame<Q>& ref() {
  static const TriangleFrame<Q> f = reference_frame<Q>();
  return f;
}

Q dn(int k, const P& w, const P& v) { return eval_dof(edge_normal_dof<Q>(mod3(k), w, ""), v, ref()); }
Q dn(int k, int m, const P& v) {
  P w = one();
  for (int j = 0; j < m; ++j) w = w * lam(k + 1);
  return dn(k, w, v);
}
Q edge_mean(int k, const P& w, const P& v) { return eval_dof(edge_dof<Q>(mod3(k), w, ""), v, ref()); }
Q cell_mean(const P& w, const P& v) { return eval_dof(cell_dof<Q>(w, ""), v, ref()); }

const char* rel_name(int r) { return r == 0 ? "k=i" : r == 1 ? "k=i+1" : "k=i+2"; }

class Collector {
 public:
  explicit Collector(std::vector<GoldenEntry>& out) : out_(out) {}

  // values over all (i, k) with the given relation must equal `expected`
  void add(const std::string& element, const std::string& label, const Q& expected, const std::vector<Q>& values,
           bool informational = false) {
    GoldenEntry e;
    e.element = element;
    e.label = label;
    e.expected = expected.str();
    e.informational = informational;
    bool same = true;
    for (const Q& v : values) same = same && v == values.front();
    e.computed = values.empty() ? "none" : same ? values.front().str() : "varies";
    e.pass = !values.empty() && same && values.front() == expected;
    out_.push_back(e);
  }

 private:
  std::vector<GoldenEntry>& out_;
};

// Gathers f(i, k) over i, k = 0..2 with (k - i) mod 3 == r.
template <class F>
std::vector<Q> by_rel(int r, F f) {
  std::vector<Q> v;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      if (mod3(k - i) == r) v.push_back(f(i, k));
  return v;
}

template <class F>
std::vector<Q> all_pairs(F f) {
  std::vector<Q> v;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) v.push_back(f(i, k));
  return v;
}

TriangleFrame<Q> rational_triangle(int a0, int a1, int b0, int b1, int c0, int c1, int den) {
  return make_frame<Q>({{{Q(a0, den), Q(a1, den)}, {Q(b0, den), Q(b1, den)}, {Q(c0, den), Q(c1, den)}}});
}

std::vector<TriangleFrame<Q>> veq_frames() {
  return {ref(), rational_triangle(0, 0, 3, 1, 1, 2, 1), rational_triangle(1, 0, 5, 2, -1, 7, 3)};
}

Q cross(const TriangleFrame<Q>& f) {
  return f.grad_lambda[0][0] * f.grad_lambda[1][1] - f.grad_lambda[0][1] * f.grad_lambda[1][0];
}

const Q& printed_veq_det() {
  static const Q q = Q(103) / Q(boost::multiprecision::cpp_int("501530650214400"));
  return q;
}

}  // namespace

std::vector<GoldenEntry> golden_tables() {
  std::vector<GoldenEntry> out;
  Collector c(out);
  const Q f7 = factorial<Q>(7);

  // FE_nsc
  c.add("nsc", "cell(a_k a_i), k=i", Q(6) / f7, by_rel(0, [](int i, int k) { return cell_mean(a(k), a(i)); }));
  for (int r : {1, 2})
    c.add("nsc", std::string("cell(a_k a_i), ") + rel_name(r), Q(-2) / f7,
          by_rel(r, [](int i, int k) { return cell_mean(a(k), a(i)); }));
  c.add("nsc", "cell(Lambda)", Q(1, 60), {cell_mean(one(), Lambda())});

  // FE_nsq
  for (int r : {0, 1})
    c.add("nsq", std::string("dn_k(phi_i), ") + rel_name(r), Q(-1, 4),
          by_rel(r, [](int i, int k) { return dn(k, 0, phi4(i)); }));
  c.add("nsq", "dn_k(phi_i), k=i+2", Q(0), by_rel(2, [](int i, int k) { return dn(k, 0, phi4(i)); }));
  c.add("nsq", "cell(lambda_k psi_i), k=i", Q(12) / f7,
        by_rel(0, [](int i, int k) { return cell_mean(lam(k), lam(i) * Lambda()); }));
  for (int r : {1, 2})
    c.add("nsq", std::string("cell(lambda_k psi_i), ") + rel_name(r), Q(8) / f7,
          by_rel(r, [](int i, int k) { return cell_mean(lam(k), lam(i) * Lambda()); }));

  // FE_ec
  const Q ec_a[3] = {Q(1, 3), Q(-1, 3), Q(0)};
  const Q ec_psi0[3] = {Q(0), Q(-1, 12), Q(-1, 12)};
  const Q ec_psi1[3] = {Q(0), Q(-1, 120), Q(1, 120)};
  for (int r = 0; r < 3; ++r) {
    const std::string rn = rel_name(r);
    c.add("ec", "dn_k(a_i), " + rn, ec_a[r], by_rel(r, [](int i, int k) { return dn(k, 0, a(i)); }));
    c.add("ec", "dn_k(psi_i), " + rn, ec_psi0[r], by_rel(r, [](int i, int k) { return dn(k, 0, lam(i) * Lambda()); }));
    c.add("ec", "dn_k[(1/2 - lambda_{k+1}) psi_i], " + rn, ec_psi1[r], by_rel(r, [](int i, int k) {
            return dn(k, P::constant(Q(1, 2)) - lam(k + 1), lam(i) * Lambda());
          }));
  }

  // FE_eq
  const Q eq_phi[3][3] = {{Q(-1, 4), Q(-1, 4), Q(0)}, {Q(-1, 5), Q(-1, 20), Q(0)}, {Q(-1, 6), Q(-1, 60), Q(1, 60)}};
  const Q eq_psi[3][3] = {{Q(0), Q(-1, 12), Q(-1, 12)}, {Q(0), Q(-1, 30), Q(-1, 20)}, {Q(0), Q(-1, 60), Q(-1, 30)}};
  const Q eq_eta[3][3] = {{Q(0), Q(0), Q(0)}, {Q(0), Q(0), Q(-1, 420)}, {Q(0), Q(0), Q(-1, 420)}};
  const char* moment[3] = {"dn_k", "dn_k[lambda_{k+1}]", "dn_k[lambda_{k+1}^2]"};
  for (int m = 0; m < 3; ++m)
    for (int r = 0; r < 3; ++r) {
      const std::string suffix = ", " + std::string(rel_name(r));
      c.add("eq", std::string(moment[m]) + "(phi_i)" + suffix, eq_phi[m][r],
            by_rel(r, [m](int i, int k) { return dn(k, m, phi4(i)); }));
      c.add("eq", std::string(moment[m]) + "(psi_i)" + suffix, eq_psi[m][r],
            by_rel(r, [m](int i, int k) { return dn(k, m, lam(i) * Lambda()); }));
      c.add("eq", std::string(moment[m]) + "(eta_i)" + suffix, eq_eta[m][r],
            by_rel(r, [m](int i, int k) { return dn(k, m, a(i) * Lambda()); }));
    }

  // FE_veq, scalar shape functions
  for (int r = 0; r < 3; ++r) {
    const std::string rn = rel_name(r);
    c.add("veq", "d_k(lambda_i^2), " + rn, r == 0 ? Q(0) : Q(1, 3),
          by_rel(r, [](int i, int k) { return edge_mean(k, one(), lam(i) * lam(i)); }));
    c.add("veq", "f_k(lambda_i^2), " + rn, r == 0 ? Q(0) : r == 1 ? Q(1, 12) : Q(1, 4),
          by_rel(r, [](int i, int k) { return edge_mean(k, lam(k + 1), lam(i) * lam(i)); }));
    c.add("veq", "d_k(lambda_i lambda_{i+1}), " + rn, r == 2 ? Q(1, 6) : Q(0),
          by_rel(r, [](int i, int k) { return edge_mean(k, one(), lam(i) * lam(i + 1)); }));
    c.add("veq", "f_k(lambda_i lambda_{i+1}), " + rn, r == 2 ? Q(1, 12) : Q(0),
          by_rel(r, [](int i, int k) { return edge_mean(k, lam(k + 1), lam(i) * lam(i + 1)); }));
  }
  c.add("veq", "g(lambda_i^2)", Q(1, 6), all_pairs([](int i, int) { return cell_mean(one(), lam(i) * lam(i)); }));
  c.add("veq", "g(lambda_i lambda_{i+1})", Q(1, 12),
        all_pairs([](int i, int) { return cell_mean(one(), lam(i) * lam(i + 1)); }));

  // FE_veq, gradient bubbles: ratios to d_l lambda_k on several triangles
  const auto frames = veq_frames();
  auto grad_ratio = [&frames](int r, bool first_moment) {
    std::vector<Q> v;
    for (const auto& f : frames)
      for (int i = 0; i < 3; ++i) {
        const VecPoly<Q> g = gradient(lam(i) * Lambda(), f);
        for (int k = 0; k < 3; ++k) {
          if (mod3(k - i) != r) continue;
          for (int l = 0; l < 2; ++l) {
            const Q dl = f.grad_lambda[k][l];
            if (dl == 0) continue;
            const P w = first_moment ? lam(k + 1) : one();
            v.push_back(eval_dof(edge_dof<Q>(k, w, "", l), g, f) / dl);
          }
        }
      }
    return v;
  };
  for (int r = 0; r < 3; ++r) {
    const std::string rn = rel_name(r);
    c.add("veq", "d_k(d_l(lambda_i Lambda)) / d_l lambda_k, " + rn, r == 0 ? Q(0) : Q(1, 12), grad_ratio(r, false));
  }
  c.add("veq", "f_k(d_l(lambda_i Lambda)), k=i", Q(0), by_rel(0, [](int i, int k) {
          const VecPoly<Q> g = gradient(lam(i) * Lambda(), ref());
          return eval_dof(edge_dof<Q>(k, lam(k + 1), "", 0), g, ref());
        }));
  c.add("veq", "f_k(d_l(lambda_i Lambda)) / d_l lambda_k, k=i+1", Q(1, 90), grad_ratio(1, true));
  c.add("veq", "f_k(d_l(lambda_i Lambda)) / d_l lambda_k, k=i+2", Q(1, 60), grad_ratio(2, true));
  c.add("veq", "g(d_l(lambda_i Lambda))", Q(0), all_pairs([](int i, int l) {
          const VecPoly<Q> g = gradient(lam(i) * Lambda(), ref());
          return eval_dof(cell_dof<Q>(one(), "", l % 2), g, ref());
        }));

  const auto e = element_catalog<Q>("veq");
  std::vector<Q> dets;
  for (const auto& f : frames) dets.push_back(dof_matrix(e, f).determinant() / cross(f));
  c.add("veq", "det(M) / (grad lambda_1 . curl lambda_2)", printed_veq_det(), dets);

  // corrected values
  c.add("veq", "f_k(d_l(lambda_i Lambda)) / d_l lambda_k, k=i+1 (exact)", Q(1, 30), grad_ratio(1, true), true);
  c.add("veq", "f_k(d_l(lambda_i Lambda)) / d_l lambda_k, k=i+2 (exact)", Q(1, 20), grad_ratio(2, true), true);
  c.add("veq", "det(M) / (grad lambda_1 . curl lambda_2) (exact)", Q(1) / Q(boost::multiprecision::cpp_int("18575209267200")),
        dets, true);
  return out;
}

VeqDeterminantCheck veq_determinant_check(int trials, std::uint64_t seed) {
  VeqDeterminantCheck r;
  r.trials = trials;
  r.printed = printed_veq_det().str();
  const auto eq = element_catalog<Q>("veq");
  const Q exact = dof_matrix(eq, ref()).determinant() / cross(ref());
  r.exact = exact.str();
  const double printed = printed_veq_det().convert_to<double>();
  const double exact_d = exact.convert_to<double>();
  const auto e = element_catalog<double>("veq");
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto v = random_triangle(rng);
    const auto f = make_frame<double>({{{v[0][0], v[0][1]}, {v[1][0], v[1][1]}, {v[2][0], v[2][1]}}});
    const double cr = f.grad_lambda[0][0] * f.grad_lambda[1][1] - f.grad_lambda[0][1] * f.grad_lambda[1][0];
    const double ratio = dof_matrix(e, f).determinant() / cr;
    r.max_rel_printed = std::max(r.max_rel_printed, std::abs(ratio - printed) / std::abs(printed));
    r.max_rel_exact = std::max(r.max_rel_exact, std::abs(ratio - exact_d) / std::abs(exact_d));
  }
  return r;
}

}  // namespace bihar
