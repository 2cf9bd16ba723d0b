#pragma once

// Monomial bases and restriction helpers. Degree-d forms on P^3 are indexed
// by exponent vectors in descending lexicographic order; bidegree (alpha,
// beta) forms on P^1 x P^1 by (i, j) with s^i t^(alpha-i) u^j v^(beta-j),
// both factors descending. Column order everywhere else follows these.

#include <array>
#include <utility>
#include <vector>

#include "hpl/gf.hpp"
#include "hpl/postulation.hpp"

namespace hpl {

using Vec4 = std::array<u32, 4>;
using Exps = std::array<int, 4>;

inline std::vector<Exps> p3_monomials(long d) {
  std::vector<Exps> out;
  out.reserve(static_cast<std::size_t>(forms_dim(d)));
  for (int e0 = static_cast<int>(d); e0 >= 0; --e0)
    for (int e1 = static_cast<int>(d) - e0; e1 >= 0; --e1)
      for (int e2 = static_cast<int>(d) - e0 - e1; e2 >= 0; --e2)
        out.push_back({e0, e1, e2, static_cast<int>(d) - e0 - e1 - e2});
  return out;
}

// (i, j) pairs for s^i t^(alpha-i) u^j v^(beta-j).
inline std::vector<std::pair<int, int>> q_monomials(long alpha, long beta) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(forms_dim_q(alpha, beta)));
  for (int i = static_cast<int>(alpha); i >= 0; --i)
    for (int j = static_cast<int>(beta); j >= 0; --j) out.emplace_back(i, j);
  return out;
}

inline u32 eval_monomial(const PrimeField& f, const Exps& e, const Vec4& x) {
  u32 r = 1;
  for (int i = 0; i < 4; ++i)
    if (e[i] > 0) r = f.mul(r, f.pow(x[i], static_cast<u64>(e[i])));
  return r;
}

namespace detail {

// Binary forms in (s, t): coeffs[k] is the coefficient of s^(D-k) t^k where
// D = coeffs.size() - 1.

inline std::vector<u32> binary_mul(const PrimeField& f,
                                   const std::vector<u32>& a,
                                   const std::vector<u32>& b) {
  std::vector<u32> c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = f.reduce(u64{c[i + j]} + u64{a[i]} * b[j]);
  }
  return c;
}

// (a s + b t)^e
inline std::vector<u32> binary_power(const PrimeField& f, u32 a, u32 b,
                                     int e) {
  std::vector<u32> c{1};
  for (int k = 0; k < e; ++k) {
    std::vector<u32> n(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0) continue;
      n[i] = f.add(n[i], f.mul(a, c[i]));
      n[i + 1] = f.add(n[i + 1], f.mul(b, c[i]));
    }
    c = std::move(n);
  }
  return c;
}

}  // namespace detail

// Coefficients of the monomial x^e pulled back along the line
// (s : t) -> s*A + t*B, as a binary form of degree e0+e1+e2+e3.
inline std::vector<u32> restrict_monomial(const PrimeField& f, const Exps& e,
                                          const Vec4& A, const Vec4& B) {
  std::vector<u32> c{1};
  for (int i = 0; i < 4; ++i)
    if (e[i] > 0)
      c = detail::binary_mul(f, c, detail::binary_power(f, A[i], B[i], e[i]));
  return c;
}

}  // namespace hpl
