#pragma once

// Postulation bookkeeping for unions of a double lines and b lines in P^3:
// dimension counts, the two Euclidean splits of the leftover dimension by
// line degree, the critical degree, and the numeric feasibility checks the
// induction over degrees relies on.

#include <limits>

#include "hpl/common.hpp"

namespace hpl {

namespace detail {

inline long checked_mul(long a, long b) {
  long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("overflow in product");
  return r;
}

inline long checked_add(long a, long b) {
  long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("overflow in sum");
  return r;
}

}  // namespace detail

// dim of degree-d forms on P^3, i.e. C(d+3, 3).
inline long forms_dim(long d) {
  if (d < 0) return 0;
  using detail::checked_mul;
  long t = checked_mul(d + 3, d + 2);
  t = checked_mul(t, d + 1);
  return t / 6;
}

// dim of bidegree-(alpha, beta) forms on P^1 x P^1.
inline long forms_dim_q(long alpha, long beta) {
  if (alpha < 0 || beta < 0) return 0;
  return detail::checked_mul(alpha + 1, beta + 1);
}

// h^0 of the degree-d twist of the structure sheaf of a double lines plus
// b lines: a(3d+1) + b(d+1). Also the number of independent conditions the
// union imposes when its postulation is maximal and below forms_dim(d).
inline long curve_sheaf_dim(long a, long b, long d) {
  using detail::checked_add;
  using detail::checked_mul;
  if (a < 0 || b < 0 || d < 0) throw Error("curve_sheaf_dim: negative input");
  return checked_add(checked_mul(a, 3 * d + 1), checked_mul(b, d + 1));
}

struct SplitBC {
  long b;  // how many lines of degree d+1 fit under the leftover dimension
  long c;  // remainder, 0 <= c <= d
};

struct SplitUV {
  long u;  // fewest lines of degree d+1 that cover the leftover dimension
  long v;  // excess u(d+1) - leftover, 0 <= v <= d
};

// Floor split: a(3d+1) + b(d+1) + c = forms_dim(d) with 0 <= c <= d.
inline SplitBC split_bc(long a, long d) {
  if (a < 0 || d < 0) throw Infeasible("split_bc: negative input");
  long rest = forms_dim(d) - detail::checked_mul(a, 3 * d + 1);
  if (rest < 0) throw Infeasible("split_bc: a(3d+1) exceeds forms_dim(d)");
  return {rest / (d + 1), rest % (d + 1)};
}

// Ceiling split: a(3d+1) + u(d+1) - v = forms_dim(d) with 0 <= v <= d.
inline SplitUV split_uv(long a, long d) {
  if (a < 0 || d < 0) throw Infeasible("split_uv: negative input");
  long rest = forms_dim(d) - detail::checked_mul(a, 3 * d + 1);
  if (rest + d < 0) throw Infeasible("split_uv: no non-negative cover");
  long u = (rest + d) / (d + 1);
  return {u, u * (d + 1) - rest};
}

// Least degree d >= 2 at which a(3d+1) + b(d+1) fits inside forms_dim(d),
// with the two degenerate families pinned at 1. Outside the domain
// (a >= 2, or a = 1 with b > 0, or b >= 3, or (1,0), (0,2)) the notion is
// not used and is rejected.
inline long critical_value(long a, long b) {
  if ((a == 1 && b == 0) || (a == 0 && b == 2)) return 1;
  if (!(a >= 2 || (a == 1 && b > 0) || b >= 3))
    throw UndefinedCriticalValue("critical_value: (a,b) outside domain");
  for (long d = 2;; ++d) {
    if (curve_sheaf_dim(a, b, d) <= forms_dim(d)) return d;
    if (d > (1 << 20)) throw Error("critical_value: runaway scan");
  }
}

struct Expected {
  long h0;
  long h1;
};

// Maximal-rank prediction for a double lines plus b lines at degree d:
// one of h^0, h^1 vanishes and the other is the dimension gap.
inline Expected expected_values(long a, long b, long d) {
  if (a < 0 || b < 0 || d < 0) throw Infeasible("expected_values: negative");
  if (a == 0 && b == 0)
    throw Infeasible("expected_values: empty configuration");
  long n = forms_dim(d);
  long s = curve_sheaf_dim(a, b, d);
  return {n > s ? n - s : 0, s > n ? s - n : 0};
}

// Feasibility pair behind the degree induction: the double lines fit at
// degree d, and the floor split leaves at least u_{0,d-2} - a plain lines,
// enough to place u_{0,d-2} - a of them on a quadric two degrees down.
inline bool line_supply_check(long a, long d) {
  if (a < 1 || d < 2) throw Infeasible("line_supply_check: need a>=1, d>=2");
  if (detail::checked_mul(a, 3 * d + 1) > forms_dim(d)) return false;
  return split_bc(a, d).b >= split_uv(0, d - 2).u - a;
}

// Identity tying the floor split at (a, d) to the ceiling split two degrees
// down: a(3d+1) + 2u + (d+1)(b - u) + c + v = (d+1)^2 where (b, c) =
// split_bc(a, d) and (u, v) = split_uv(0, d-2). Exact bookkeeping for what
// a degree-d system leaves on a quadric after the residual step.
inline bool split_transfer_identity(long a, long d) {
  if (a < 0 || d < 2) throw Infeasible("split_transfer_identity: need d>=2");
  SplitBC bc = split_bc(a, d);
  SplitUV uv = split_uv(0, d - 2);
  long lhs = detail::checked_mul(a, 3 * d + 1);
  lhs = detail::checked_add(lhs, 2 * uv.u);
  lhs = detail::checked_add(lhs, detail::checked_mul(d + 1, bc.b - uv.u));
  lhs = detail::checked_add(lhs, bc.c + uv.v);
  return lhs == detail::checked_mul(d + 1, d + 1);
}

// For a >= 4 double lines: a line count beyond which maximal rank holds at
// the critical degree without further case analysis.
//   ceil((C(3a+4,3) - 27a - 12) / (3a+2)) + 3 - a
inline long line_threshold(long a) {
  if (a < 4) throw Infeasible("line_threshold: need a >= 4");
  long num = forms_dim(3 * a + 1) - 27 * a - 12;
  long den = 3 * a + 2;
  long q = (num + den - 1) / den;
  return q + 3 - a;
}

}  // namespace hpl
