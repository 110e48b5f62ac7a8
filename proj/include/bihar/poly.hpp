#pragma once

// Polynomials in the barycentric coordinates (lambda_0, lambda_1, lambda_2)
// of a triangle, with closed-form edge and cell averages.  Templated on the
// scalar so the element tables can be built in exact rational arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace bihar {

template <class T>
T factorial(int n) {
  T r(1);
  for (int k = 2; k <= n; ++k) r *= T(k);
  return r;
}

template <class T>
class PolyBary {
 public:
  struct Term {
    std::array<int, 3> e;
    T c;
  };

  PolyBary() = default;

  static PolyBary constant(const T& c) { return monomial(0, 0, 0, c); }
  static PolyBary lambda(int i) {
    std::array<int, 3> e{0, 0, 0};
    e[i] = 1;
    return monomial(e[0], e[1], e[2], T(1));
  }
  static PolyBary monomial(int a, int b, int c, const T& coef = T(1)) {
    PolyBary p;
    if (coef != T(0)) p.terms_.push_back({{a, b, c}, coef});
    return p;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.e[0] + t.e[1] + t.e[2]);
    return d;
  }

  PolyBary& operator+=(const PolyBary& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
  }
  PolyBary& operator-=(const PolyBary& o) { return *this += o * T(-1); }
  PolyBary& operator*=(const T& s) {
    for (auto& t : terms_) t.c *= s;
    canonicalize();
    return *this;
  }
  friend PolyBary operator+(PolyBary a, const PolyBary& b) { return a += b; }
  friend PolyBary operator-(PolyBary a, const PolyBary& b) { return a -= b; }
  friend PolyBary operator*(PolyBary a, const T& s) { return a *= s; }
  friend PolyBary operator*(const T& s, PolyBary a) { return a *= s; }
  friend PolyBary operator*(const PolyBary& a, const PolyBary& b) {
    PolyBary r;
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_)
        r.terms_.push_back({{x.e[0] + y.e[0], x.e[1] + y.e[1], x.e[2] + y.e[2]}, x.c * y.c});
    r.canonicalize();
    return r;
  }

  /// Formal partial derivative with respect to lambda_i.
  PolyBary derivative(int i) const {
    PolyBary r;
    for (const auto& t : terms_) {
      if (t.e[i] == 0) continue;
      Term d = t;
      d.c *= T(t.e[i]);
      d.e[i] -= 1;
      r.terms_.push_back(d);
    }
    r.canonicalize();
    return r;
  }

  T evaluate(const std::array<T, 3>& lam) const {
    T s(0);
    for (const auto& t : terms_) {
      T v = t.c;
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < t.e[j]; ++k) v *= lam[j];
      s += v;
    }
    return s;
  }

  T vertex_value(int i) const {
    std::array<T, 3> lam{T(0), T(0), T(0)};
    lam[i] = T(1);
    return evaluate(lam);
  }

  /// Mean over edge e_i (the edge opposite vertex i).
  T edge_average(int i) const {
    T s(0);
    for (const auto& t : terms_) {
      if (t.e[i] != 0) continue;
      int p = t.e[(i + 1) % 3], q = t.e[(i + 2) % 3];
      s += t.c * factorial<T>(p) * factorial<T>(q) / factorial<T>(p + q + 1);
    }
    return s;
  }

  /// Mean over the triangle.
  T cell_average() const {
    T s(0);
    for (const auto& t : terms_) {
      int n = t.e[0] + t.e[1] + t.e[2];
      s += t.c * T(2) * factorial<T>(t.e[0]) * factorial<T>(t.e[1]) * factorial<T>(t.e[2]) /
           factorial<T>(n + 2);
    }
    return s;
  }

  /// Same function written with homogeneous monomials of degree k, using
  /// lambda_0 + lambda_1 + lambda_2 = 1.  Requires degree() <= k.
  PolyBary homogenized(int k) const {
    PolyBary r;
    PolyBary one = lambda(0) + lambda(1) + lambda(2);
    for (const auto& t : terms_) {
      int n = t.e[0] + t.e[1] + t.e[2];
      PolyBary m = monomial(t.e[0], t.e[1], t.e[2], t.c);
      for (int j = n; j < k; ++j) m = m * one;
      r.terms_.insert(r.terms_.end(), m.terms_.begin(), m.terms_.end());
    }
    r.canonicalize();
    return r;
  }

  bool operator==(const PolyBary& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (terms_[i].e != o.terms_[i].e || terms_[i].c != o.terms_[i].c) return false;
    return true;
  }

 private:
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.e < b.e; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!out.empty() && out.back().e == t.e)
        out.back().c += t.c;
      else
        out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.c == T(0); }),
              out.end());
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

/// Two-component polynomial field; scalar elements leave component 1 empty.
template <class T>
using VecPoly = std::array<PolyBary<T>, 2>;

/// Index of the homogeneous monomial lambda^e in the degree-k raw basis.
/// Ordering: a from k down to 0, then b from k-a down to 0.
inline int raw_index(const std::array<int, 3>& e, int k) {
  int a = e[0], b = e[1];
  int before = 0;
  for (int aa = k; aa > a; --aa) before += k - aa + 1;
  return before + (k - a - b);
}

inline int raw_dim(int k) { return (k + 1) * (k + 2) / 2; }

inline std::vector<std::array<int, 3>> raw_exponents(int k) {
  std::vector<std::array<int, 3>> r;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b) r.push_back({a, b, k - a - b});
  return r;
}

/// Coefficients of p in the degree-k raw basis.
template <class T>
std::vector<T> raw_coefficients(const PolyBary<T>& p, int k) {
  std::vector<T> c(raw_dim(k), T(0));
  const PolyBary<T> h = p.homogenized(k);
  for (const auto& t : h.terms()) c[raw_index(t.e, k)] += t.c;
  return c;
}

}  // namespace bihar
