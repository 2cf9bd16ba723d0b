#pragma once

// Projective geometry over GF(p): points, lines, planes and quadrics in P^3,
// the reference quadric x0 x3 = x1 x2 with its Segre product structure, and
// the rejection samplers. Coordinate vectors are canonicalized (first
// nonzero coordinate scaled to 1) so equality is plain comparison and
// sampled data prints reproducibly.

#include <algorithm>
#include <optional>
#include <span>

#include "hpl/matrix.hpp"
#include "hpl/monomials.hpp"
#include "hpl/rng.hpp"

namespace hpl {

inline constexpr int sample_retry_budget = 100;

inline Vec4 canonical(const PrimeField& f, Vec4 v) {
  for (u32 c : v)
    if (c != 0) {
      u32 s = f.inv(c);
      for (u32& x : v) x = f.mul(x, s);
      return v;
    }
  throw Error("canonical: zero vector");
}

struct Point {
  Vec4 x{};
  bool operator==(const Point&) const = default;
};

struct Plane {
  Vec4 n{};  // the plane {x : n . x = 0}
  bool operator==(const Plane&) const = default;
};

// A point of P^1, canonicalized like Vec4.
struct P1 {
  u32 c0 = 1, c1 = 0;
  bool operator==(const P1&) const = default;
};

inline P1 canonical_p1(const PrimeField& f, u32 c0, u32 c1) {
  if (c0 != 0) return {1, f.mul(c1, f.inv(c0))};
  if (c1 != 0) return {0, 1};
  throw Error("canonical_p1: zero vector");
}

inline Point make_point(const PrimeField& f, Vec4 v) {
  return Point{canonical(f, v)};
}

inline Plane make_plane(const PrimeField& f, Vec4 n) {
  return Plane{canonical(f, n)};
}

inline u32 dot(const PrimeField& f, const Vec4& a, const Vec4& b) {
  u64 acc = 0;
  for (int i = 0; i < 4; ++i) acc += u64{a[i]} * b[i];
  return f.reduce(acc);
}

// Rank of up to a handful of Vec4 rows; small-scale Gaussian elimination.
inline int span_rank(const PrimeField& f, std::span<const Vec4> rows) {
  std::vector<Vec4> m(rows.begin(), rows.end());
  int r = 0;
  for (int c = 0; c < 4 && r < static_cast<int>(m.size()); ++c) {
    int piv = r;
    while (piv < static_cast<int>(m.size()) && m[piv][c] == 0) ++piv;
    if (piv == static_cast<int>(m.size())) continue;
    std::swap(m[piv], m[r]);
    u32 inv = f.inv(m[r][c]);
    for (int i = r + 1; i < static_cast<int>(m.size()); ++i) {
      if (m[i][c] == 0) continue;
      u32 t = f.neg(f.mul(m[i][c], inv));
      for (int j = c; j < 4; ++j)
        m[i][j] = f.add(m[i][j], f.mul(t, m[r][j]));
    }
    ++r;
  }
  return r;
}

struct Line {
  Point a, b;  // span; always rank 2
};

inline Line make_line(const PrimeField& f, Point a, Point b) {
  Vec4 rows[2] = {a.x, b.x};
  if (span_rank(f, rows) != 2) throw DegenerateComponent("line: span rank < 2");
  return Line{a, b};
}

inline bool point_on_line(const PrimeField& f, const Point& p, const Line& l) {
  Vec4 rows[3] = {l.a.x, l.b.x, p.x};
  return span_rank(f, rows) == 2;
}

inline bool point_on_plane(const PrimeField& f, const Point& p,
                           const Plane& pl) {
  return dot(f, pl.n, p.x) == 0;
}

inline bool lines_meet(const PrimeField& f, const Line& l1, const Line& l2) {
  Vec4 rows[4] = {l1.a.x, l1.b.x, l2.a.x, l2.b.x};
  return span_rank(f, rows) < 4;
}

inline bool same_line(const PrimeField& f, const Line& l1, const Line& l2) {
  return point_on_line(f, l2.a, l1) && point_on_line(f, l2.b, l1);
}

// Extends the given independent vectors to a basis of GF(p)^4 with standard
// basis vectors, chosen greedily in index order. Returns only the additions.
inline std::vector<Vec4> complete_basis(const PrimeField& f,
                                        std::span<const Vec4> given) {
  std::vector<Vec4> have(given.begin(), given.end());
  std::vector<Vec4> added;
  for (int i = 0; i < 4 && have.size() < 4; ++i) {
    Vec4 e{};
    e[i] = 1;
    std::vector<Vec4> trial = have;
    trial.push_back(e);
    if (span_rank(f, trial) == static_cast<int>(trial.size())) {
      have.push_back(e);
      added.push_back(e);
    }
  }
  if (have.size() != 4) throw Error("complete_basis: input not independent");
  return added;
}

struct Quadric {
  std::array<Vec4, 4> gram{};  // symmetric; canonicalized up to scale
};

inline Quadric make_quadric(const PrimeField& f, std::array<Vec4, 4> gram) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (gram[i][j] != gram[j][i]) throw Error("quadric: gram not symmetric");
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (gram[i][j] != 0) {
        u32 s = f.inv(gram[i][j]);
        for (auto& row : gram)
          for (u32& x : row) x = f.mul(x, s);
        return Quadric{gram};
      }
  throw Error("quadric: zero gram matrix");
}

// x0 x3 - x1 x2 = 0, the image of the Segre map.
inline Quadric standard_quadric(const PrimeField& f) {
  std::array<Vec4, 4> g{};
  u32 h = f.half();
  g[0][3] = g[3][0] = h;
  g[1][2] = g[2][1] = f.neg(h);
  return make_quadric(f, g);
}

inline Vec4 quadric_normal(const PrimeField& f, const Quadric& q,
                           const Vec4& x) {
  Vec4 n{};
  for (int i = 0; i < 4; ++i) n[i] = dot(f, q.gram[i], x);
  return n;
}

inline u32 quadric_eval(const PrimeField& f, const Quadric& q, const Vec4& x) {
  return dot(f, x, quadric_normal(f, q, x));
}

inline bool on_quadric(const PrimeField& f, const Quadric& q, const Point& p) {
  return quadric_eval(f, q, p.x) == 0;
}

inline bool smooth_quadric(const PrimeField& f, const Quadric& q) {
  return span_rank(f, q.gram) == 4;
}

inline Plane tangent_plane(const PrimeField& f, const Quadric& q,
                           const Point& p) {
  if (!on_quadric(f, q, p)) throw NotOnQuadric("tangent_plane: point off q");
  return make_plane(f, quadric_normal(f, q, p.x));
}

inline bool is_standard_quadric(const PrimeField& f, const Quadric& q) {
  return q.gram == standard_quadric(f).gram;
}

// ((s : t), (u : v)) -> (su, sv, tu, tv); lands on the standard quadric.
inline Point segre(const PrimeField& f, const P1& s, const P1& u) {
  return make_point(f, {f.mul(s.c0, u.c0), f.mul(s.c0, u.c1),
                        f.mul(s.c1, u.c0), f.mul(s.c1, u.c1)});
}

struct SegreCoords {
  P1 s, u;
};

inline SegreCoords segre_coords(const PrimeField& f, const Point& p) {
  const Vec4& x = p.x;
  P1 s = (x[0] != 0 || x[2] != 0) ? canonical_p1(f, x[0], x[2])
                                  : canonical_p1(f, x[1], x[3]);
  P1 u = (x[0] != 0 || x[1] != 0) ? canonical_p1(f, x[0], x[1])
                                  : canonical_p1(f, x[2], x[3]);
  if (segre(f, s, u) != p)
    throw NotOnQuadric("segre_coords: point off the standard quadric");
  return {s, u};
}

// Ruling 1 fixes the first factor: {(s0 : t0)} x P^1. Ruling 2 fixes the
// second. Both rulings sweep out the standard quadric.
inline Line ruling_line(const PrimeField& f, int ruling, const P1& param) {
  if (ruling != 1 && ruling != 2) throw Error("ruling must be 1 or 2");
  P1 p0{1, 0}, p1{0, 1};
  if (ruling == 1)
    return make_line(f, segre(f, param, p0), segre(f, param, p1));
  return make_line(f, segre(f, p0, param), segre(f, p1, param));
}

struct RulingId {
  int ruling;
  P1 param;
  bool operator==(const RulingId&) const = default;
};

// Identifies a line contained in the standard quadric as a ruling line.
inline std::optional<RulingId> identify_ruling(const PrimeField& f,
                                               const Line& l) {
  Quadric q0 = standard_quadric(f);
  if (!on_quadric(f, q0, l.a) || !on_quadric(f, q0, l.b)) return std::nullopt;
  SegreCoords ca = segre_coords(f, l.a), cb = segre_coords(f, l.b);
  if (ca.s == cb.s && same_line(f, l, ruling_line(f, 1, ca.s)))
    return RulingId{1, ca.s};
  if (ca.u == cb.u && same_line(f, l, ruling_line(f, 2, ca.u)))
    return RulingId{2, ca.u};
  return std::nullopt;
}

// How a line meets a quadric, over the base field.
enum class MeetKind {
  contained,
  two_points,   // two distinct rational points
  tangent,      // double point
  non_rational  // conjugate pair, no rational point
};

struct LineQuadricMeet {
  MeetKind kind;
  Point p1{}, p2{};  // populated for two_points (sorted); p1 for tangent
};

inline Point line_point(const PrimeField& f, const Line& l, const P1& t) {
  Vec4 v{};
  for (int i = 0; i < 4; ++i)
    v[i] = f.add(f.mul(t.c0, l.a.x[i]), f.mul(t.c1, l.b.x[i]));
  return make_point(f, v);
}

inline LineQuadricMeet intersect_line_quadric(const PrimeField& f,
                                              const Line& l,
                                              const Quadric& q) {
  // Restricting the form to s*A + t*B gives
  //   qa s^2 + 2 qab s t + qb t^2.
  u32 qa = quadric_eval(f, q, l.a.x);
  u32 qb = quadric_eval(f, q, l.b.x);
  u32 qab = dot(f, l.a.x, quadric_normal(f, q, l.b.x));
  if (qa == 0 && qb == 0 && qab == 0) return {MeetKind::contained};
  auto at = [&](u32 s, u32 t) { return line_point(f, l, canonical_p1(f, s, t)); };
  if (qa == 0) {
    // (s : t) = (1 : 0) is a root; the other solves 2 qab s + qb t = 0.
    if (qab == 0) return {MeetKind::tangent, at(1, 0)};
    Point r1 = at(1, 0);
    Point r2 = at(qb, f.neg(f.mul(2, qab)));
    if (r1 == r2) return {MeetKind::tangent, r1};
    if (r2.x < r1.x) std::swap(r1, r2);
    return {MeetKind::two_points, r1, r2};
  }
  // t = 1: qa s^2 + 2 qab s + qb = 0.
  u32 disc = f.sub(f.mul(f.mul(2, qab), f.mul(2, qab)),
                   f.mul(4, f.mul(qa, qb)));
  if (disc == 0) {
    Point r = at(f.neg(qab), qa);
    return {MeetKind::tangent, r};
  }
  std::optional<u32> root = f.sqrt(disc);
  if (!root) return {MeetKind::non_rational};
  u32 inv2a = f.inv(f.mul(2, qa));
  u32 s1 = f.mul(f.sub(*root, f.mul(2, qab)), inv2a);
  u32 s2 = f.mul(f.sub(f.neg(*root), f.mul(2, qab)), inv2a);
  Point r1 = at(s1, 1), r2 = at(s2, 1);
  if (r2.x < r1.x) std::swap(r1, r2);
  return {MeetKind::two_points, r1, r2};
}

// ---- samplers ----------------------------------------------------------

inline Point sample_point(const PrimeField& f, Rng& rng) {
  for (int k = 0; k < sample_retry_budget; ++k) {
    Vec4 v{};
    bool nonzero = false;
    for (u32& c : v) {
      c = static_cast<u32>(rng.below(f.p()));
      nonzero |= (c != 0);
    }
    if (nonzero) return make_point(f, v);
  }
  throw RetriesExhausted("sample_point");
}

inline P1 sample_p1(const PrimeField& f, Rng& rng) {
  u64 k = rng.below(f.p() + 1);
  return k < f.p() ? P1{1, static_cast<u32>(k)} : P1{0, 1};
}

inline Point sample_point_on_quadric(const PrimeField& f, Rng& rng) {
  return segre(f, sample_p1(f, rng), sample_p1(f, rng));
}

inline Line sample_line(const PrimeField& f, Rng& rng) {
  for (int k = 0; k < sample_retry_budget; ++k) {
    Point a = sample_point(f, rng);
    Point b = sample_point(f, rng);
    Vec4 rows[2] = {a.x, b.x};
    if (span_rank(f, rows) == 2) return Line{a, b};
  }
  throw RetriesExhausted("sample_line");
}

// A line disjoint from every line in `avoid` and through none of `avoid_pts`.
inline Line sample_line_disjoint(const PrimeField& f, Rng& rng,
                                 std::span<const Line> avoid,
                                 std::span<const Point> avoid_pts = {}) {
  for (int k = 0; k < sample_retry_budget; ++k) {
    Line l = sample_line(f, rng);
    bool ok = true;
    for (const Line& m : avoid)
      if (lines_meet(f, l, m)) {
        ok = false;
        break;
      }
    if (ok)
      for (const Point& p : avoid_pts)
        if (point_on_line(f, p, l)) {
          ok = false;
          break;
        }
    if (ok) return l;
  }
  throw RetriesExhausted("sample_line_disjoint");
}

inline Line sample_line_on_quadric(const PrimeField& f, const Quadric& q,
                                   int ruling, Rng& rng) {
  if (!is_standard_quadric(f, q))
    throw Error("sample_line_on_quadric: only the standard quadric carries "
                "the ruling parametrization");
  return ruling_line(f, ruling, sample_p1(f, rng));
}

// The unique quadric through three pairwise skew lines, found as the kernel
// of evaluation at three points per line.
inline Quadric quadric_through_lines(const PrimeField& f, const Line& l1,
                                     const Line& l2, const Line& l3) {
  const std::vector<Exps> mons = p3_monomials(2);
  Matrix m = Matrix::with_row_capacity(f, 9, mons.size());
  const P1 params[3] = {{1, 0}, {0, 1}, {1, 1}};
  std::vector<u32> row(mons.size());
  for (const Line* l : {&l1, &l2, &l3})
    for (const P1& t : params) {
      Point p = line_point(f, *l, t);
      for (std::size_t c = 0; c < mons.size(); ++c)
        row[c] = eval_monomial(f, mons[c], p.x);
      m.append_row(row);
    }
  std::vector<std::vector<u32>> ker = nullspace_basis(m);
  if (ker.size() != 1)
    throw NotUnique("quadric_through_lines: kernel dimension " +
                    std::to_string(ker.size()));
  std::array<Vec4, 4> gram{};
  u32 h = f.half();
  for (std::size_t c = 0; c < mons.size(); ++c) {
    int i = -1, j = -1;
    for (int k = 0; k < 4; ++k) {
      if (mons[c][k] >= 1) {
        if (i < 0) i = k;
        j = k;
      }
      if (mons[c][k] == 2) j = k;
    }
    u32 coeff = ker[0][c];
    if (i == j) {
      gram[i][i] = coeff;
    } else {
      gram[i][j] = gram[j][i] = f.mul(coeff, h);
    }
  }
  return make_quadric(f, gram);
}

}  // namespace hpl
