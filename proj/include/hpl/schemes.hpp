#pragma once

// Zero- and one-dimensional subschemes of P^3 as components of a
// configuration, plus the exact linear conditions each imposes on degree-d
// forms. Row counts per component at degree d:
//
//   Point              1        value
//   SpaceDoublePoint   4        value + 3 first derivatives
//   PlanarDoublePoint  3        value + 2 derivatives inside the plane
//   Arrow              2        value + 1 directional derivative
//   Line               d+1      coefficients of the restricted binary form
//   DoubleLine         3d+1     restriction + 2 derivative restrictions
//   NodalConic         2d+2     both line restrictions (generic rank 2d+1,
//                               the value at the node is shared)
//   Sundial            2d+6     conic rows + full double point at the node
//                               (generic rank 2d+2)
//
// Trace components live on the standard quadric and impose conditions on
// bidegree (alpha, beta) forms:
//
//   QPoint             1
//   QDoublePoint       3        value + one partial per factor
//   RulingLine         beta+1 (ruling 1) or alpha+1 (ruling 2)
//   DoubleRulingLine   2(beta+1) or 2(alpha+1)
//
// Emitters require the degree to be smaller than the field characteristic;
// derivative coefficients are exponents and must not vanish mod p.

#include <algorithm>
#include <variant>
#include <vector>

#include "hpl/geometry.hpp"

namespace hpl {

struct PointComp {
  Point p;
};

// Full first infinitesimal neighborhood of a point in P^3 (degree 4).
struct SpaceDoublePoint {
  Point p;
};

// First neighborhood inside a plane through the point (degree 3).
struct PlanarDoublePoint {
  Point p;
  Plane plane;
};

// Degree-2 scheme: a point plus one tangent direction.
struct Arrow {
  Point p;
  Point direction;
};

struct LineComp {
  Line l;
};

// First neighborhood of a line (the double line 2L, degree 3d+1 at level d).
struct DoubleLineComp {
  Line l;
};

// Two lines meeting at the node only.
struct NodalConic {
  Line l1, l2;
  Point node;
};

// Nodal conic plus the full double point at its node; flat limit of two
// skew lines.
struct Sundial {
  Line l1, l2;
  Point node;
};

using Component =
    std::variant<PointComp, SpaceDoublePoint, PlanarDoublePoint, Arrow,
                 LineComp, DoubleLineComp, NodalConic, Sundial>;

// ---- validation ---------------------------------------------------------

inline void validate_component(const PrimeField& f, const Component& comp) {
  struct V {
    const PrimeField& f;
    void check_line(const Line& l) const {
      Vec4 rows[2] = {l.a.x, l.b.x};
      if (span_rank(f, rows) != 2)
        throw DegenerateComponent("line span has rank < 2");
    }
    void check_conic(const Line& l1, const Line& l2, const Point& n) const {
      check_line(l1);
      check_line(l2);
      if (same_line(f, l1, l2))
        throw DegenerateComponent("conic legs coincide");
      if (!point_on_line(f, n, l1) || !point_on_line(f, n, l2))
        throw DegenerateComponent("node off a conic leg");
    }
    void operator()(const PointComp&) const {}
    void operator()(const SpaceDoublePoint&) const {}
    void operator()(const PlanarDoublePoint& c) const {
      if (!point_on_plane(f, c.p, c.plane))
        throw DegenerateComponent("planar double point off its plane");
    }
    void operator()(const Arrow& c) const {
      Vec4 rows[2] = {c.p.x, c.direction.x};
      if (span_rank(f, rows) != 2)
        throw DegenerateComponent("arrow direction equals its base point");
    }
    void operator()(const LineComp& c) const { check_line(c.l); }
    void operator()(const DoubleLineComp& c) const { check_line(c.l); }
    void operator()(const NodalConic& c) const {
      check_conic(c.l1, c.l2, c.node);
    }
    void operator()(const Sundial& c) const {
      check_conic(c.l1, c.l2, c.node);
    }
  };
  std::visit(V{f}, comp);
}

// Reduced support, for pairwise disjointness checks: isolated points and/or
// lines. Arrow directions and double-point planes carry no extra support.
struct Support {
  std::vector<Point> points;
  std::vector<Line> lines;
};

inline Support component_support(const Component& comp) {
  struct V {
    Support operator()(const PointComp& c) const { return {{c.p}, {}}; }
    Support operator()(const SpaceDoublePoint& c) const { return {{c.p}, {}}; }
    Support operator()(const PlanarDoublePoint& c) const {
      return {{c.p}, {}};
    }
    Support operator()(const Arrow& c) const { return {{c.p}, {}}; }
    Support operator()(const LineComp& c) const { return {{}, {c.l}}; }
    Support operator()(const DoubleLineComp& c) const { return {{}, {c.l}}; }
    Support operator()(const NodalConic& c) const {
      return {{}, {c.l1, c.l2}};
    }
    Support operator()(const Sundial& c) const { return {{}, {c.l1, c.l2}}; }
  };
  return std::visit(V{}, comp);
}

inline bool supports_disjoint(const PrimeField& f, const Support& s1,
                              const Support& s2) {
  for (const Point& p : s1.points) {
    for (const Point& q : s2.points)
      if (p == q) return false;
    for (const Line& l : s2.lines)
      if (point_on_line(f, p, l)) return false;
  }
  for (const Line& l : s1.lines) {
    for (const Point& q : s2.points)
      if (point_on_line(f, q, l)) return false;
    for (const Line& m : s2.lines)
      if (lines_meet(f, l, m)) return false;
  }
  return true;
}

// Length (for point schemes) resp. h^0 of the degree-d twist of the
// structure sheaf (for curve schemes). Always the number of independent
// conditions the component imposes in the generic position.
inline long component_sheaf_dim(const Component& comp, long d) {
  struct V {
    long d;
    long operator()(const PointComp&) const { return 1; }
    long operator()(const SpaceDoublePoint&) const { return 4; }
    long operator()(const PlanarDoublePoint&) const { return 3; }
    long operator()(const Arrow&) const { return 2; }
    long operator()(const LineComp&) const { return d + 1; }
    long operator()(const DoubleLineComp&) const { return 3 * d + 1; }
    long operator()(const NodalConic&) const { return 2 * d + 1; }
    long operator()(const Sundial&) const { return 2 * d + 2; }
  };
  return std::visit(V{d}, comp);
}

// ---- configurations -----------------------------------------------------

// A finite union of components, pairwise disjoint except for the incidences
// a variant encodes internally. `with_reference_quadric` marks that the
// standard quadric plays a role (residual/trace splitting, on-quadric
// placements); it is not itself a component.
class Configuration {
 public:
  explicit Configuration(PrimeField f, bool with_reference_quadric = false)
      : f_(f), quadric_(with_reference_quadric) {}

  const PrimeField& field() const { return f_; }
  bool has_reference_quadric() const { return quadric_; }
  const std::vector<Component>& components() const { return comps_; }
  bool empty() const { return comps_.empty(); }

  void add(Component comp) {
    validate_component(f_, comp);
    Support s = component_support(comp);
    for (const Component& other : comps_)
      if (!supports_disjoint(f_, s, component_support(other)))
        throw DegenerateComponent("components not pairwise disjoint");
    comps_.push_back(std::move(comp));
  }

  long sheaf_dim(long d) const {
    long s = 0;
    for (const Component& c : comps_) s += component_sheaf_dim(c, d);
    return s;
  }

 private:
  PrimeField f_;
  std::vector<Component> comps_;
  bool quadric_;
};

// ---- condition rows on P^3 ----------------------------------------------

namespace detail {

inline void emit_point_value(const PrimeField& f,
                             const std::vector<Exps>& mons, const Vec4& p,
                             Matrix& out) {
  std::vector<u32> row(mons.size());
  for (std::size_t c = 0; c < mons.size(); ++c)
    row[c] = eval_monomial(f, mons[c], p);
  out.append_row(row);
}

// Row of (D_dir F)(p) = sum_i dir_i dF/dx_i (p).
inline void emit_point_derivative(const PrimeField& f,
                                  const std::vector<Exps>& mons,
                                  const Vec4& p, const Vec4& dir,
                                  Matrix& out) {
  std::vector<u32> row(mons.size());
  for (std::size_t c = 0; c < mons.size(); ++c) {
    const Exps& e = mons[c];
    u64 acc = 0;
    for (int i = 0; i < 4; ++i) {
      if (e[i] == 0 || dir[i] == 0) continue;
      Exps de = e;
      de[i] -= 1;
      u32 term = f.mul(f.from_int(e[i]), eval_monomial(f, de, p));
      acc += u64{f.mul(dir[i], term)};
    }
    row[c] = f.reduce(acc);
  }
  out.append_row(row);
}

// d+1 rows: coefficients of F(s A + t B), one row per binary coefficient.
inline void emit_line_restriction(const PrimeField& f,
                                  const std::vector<Exps>& mons, long d,
                                  const Line& l, Matrix& out) {
  const std::size_t w = mons.size();
  std::vector<u32> block((d + 1) * w, 0);
  for (std::size_t c = 0; c < w; ++c) {
    std::vector<u32> coeffs = restrict_monomial(f, mons[c], l.a.x, l.b.x);
    for (long k = 0; k <= d; ++k) block[k * w + c] = coeffs[k];
  }
  for (long k = 0; k <= d; ++k)
    out.append_row({block.data() + k * w, w});
}

// d rows: coefficients of (D_dir F)(s A + t B), a degree d-1 binary form.
inline void emit_line_derivative(const PrimeField& f,
                                 const std::vector<Exps>& mons, long d,
                                 const Line& l, const Vec4& dir,
                                 Matrix& out) {
  const std::size_t w = mons.size();
  std::vector<u32> block(d * w, 0);
  for (std::size_t c = 0; c < w; ++c) {
    const Exps& e = mons[c];
    std::vector<u32> acc(d, 0);
    for (int i = 0; i < 4; ++i) {
      if (e[i] == 0 || dir[i] == 0) continue;
      Exps de = e;
      de[i] -= 1;
      u32 scale = f.mul(dir[i], f.from_int(e[i]));
      std::vector<u32> coeffs = restrict_monomial(f, de, l.a.x, l.b.x);
      for (long k = 0; k < d; ++k)
        acc[k] = f.reduce(u64{acc[k]} + u64{scale} * coeffs[k]);
    }
    for (long k = 0; k < d; ++k) block[k * w + c] = acc[k];
  }
  for (long k = 0; k < d; ++k)
    out.append_row({block.data() + k * w, w});
}

// Directions spanning the first neighborhood at p: the full space for a
// space double point, the plane's directions for a planar one. Any basis
// completing p yields the same row space together with the value row
// (the radial derivative is d times the value).
inline std::vector<Vec4> double_point_directions(const PrimeField& f,
                                                 const Point& p) {
  Vec4 given[1] = {p.x};
  return complete_basis(f, given);
}

inline std::vector<Vec4> planar_directions(const PrimeField& f,
                                           const Point& p,
                                           const Plane& plane) {
  // Basis of the plane's 3-dim cone {x : n.x = 0} that extends p.
  Matrix m(f, 1, 4);
  for (int i = 0; i < 4; ++i) m(0, i) = plane.n[i];
  std::vector<std::vector<u32>> ker = nullspace_basis(m);
  std::vector<Vec4> dirs;
  std::vector<Vec4> have = {p.x};
  for (const auto& v : ker) {
    if (dirs.size() == 2) break;
    Vec4 w{v[0], v[1], v[2], v[3]};
    std::vector<Vec4> trial = have;
    trial.push_back(w);
    if (span_rank(f, trial) == static_cast<int>(trial.size())) {
      have.push_back(w);
      dirs.push_back(w);
    }
  }
  if (dirs.size() != 2)
    throw DegenerateComponent("planar double point: degenerate plane");
  return dirs;
}

}  // namespace detail

// Appends the component's condition rows on degree-d forms to `out`, whose
// column count must be forms_dim(d). Requires 1 <= d < p.
inline void p3_condition_rows(const PrimeField& f, const Component& comp,
                              long d, Matrix& out) {
  if (d < 1 || static_cast<u64>(d) >= f.p())
    throw Error("p3_condition_rows: need 1 <= d < p");
  if (out.cols() != static_cast<std::size_t>(forms_dim(d)))
    throw Error("p3_condition_rows: column count mismatch");
  validate_component(f, comp);
  const std::vector<Exps> mons = p3_monomials(d);

  struct V {
    const PrimeField& f;
    const std::vector<Exps>& mons;
    long d;
    Matrix& out;
    void line_rows(const Line& l) const {
      detail::emit_line_restriction(f, mons, d, l, out);
    }
    void double_line_rows(const Line& l) const {
      detail::emit_line_restriction(f, mons, d, l, out);
      Vec4 given[2] = {l.a.x, l.b.x};
      for (const Vec4& dir : complete_basis(f, given))
        detail::emit_line_derivative(f, mons, d, l, dir, out);
    }
    void double_point_rows(const Point& p) const {
      detail::emit_point_value(f, mons, p.x, out);
      for (const Vec4& dir : detail::double_point_directions(f, p))
        detail::emit_point_derivative(f, mons, p.x, dir, out);
    }
    void operator()(const PointComp& c) const {
      detail::emit_point_value(f, mons, c.p.x, out);
    }
    void operator()(const SpaceDoublePoint& c) const {
      double_point_rows(c.p);
    }
    void operator()(const PlanarDoublePoint& c) const {
      detail::emit_point_value(f, mons, c.p.x, out);
      for (const Vec4& dir : detail::planar_directions(f, c.p, c.plane))
        detail::emit_point_derivative(f, mons, c.p.x, dir, out);
    }
    void operator()(const Arrow& c) const {
      detail::emit_point_value(f, mons, c.p.x, out);
      detail::emit_point_derivative(f, mons, c.p.x, c.direction.x, out);
    }
    void operator()(const LineComp& c) const { line_rows(c.l); }
    void operator()(const DoubleLineComp& c) const { double_line_rows(c.l); }
    void operator()(const NodalConic& c) const {
      line_rows(c.l1);
      line_rows(c.l2);
    }
    void operator()(const Sundial& c) const {
      line_rows(c.l1);
      line_rows(c.l2);
      double_point_rows(c.node);
    }
  };
  std::visit(V{f, mons, d, out}, comp);
}

// Stacked condition matrix of a whole configuration at degree d.
inline Matrix condition_matrix(const Configuration& cfg, long d) {
  const PrimeField& f = cfg.field();
  Matrix m = Matrix::with_row_capacity(
      f, static_cast<std::size_t>(cfg.sheaf_dim(d) + 8),
      static_cast<std::size_t>(forms_dim(d)));
  for (const Component& c : cfg.components()) p3_condition_rows(f, c, d, m);
  return m;
}

// ---- trace components on the standard quadric ---------------------------

struct QPoint {
  P1 s, u;
};

// First neighborhood of a quadric point inside the quadric (degree 3).
struct QDoublePoint {
  P1 s, u;
};

struct RulingLine {
  int ruling;
  P1 param;
};

// Divisor 2E for a ruling line E; degree 2(beta+1) resp. 2(alpha+1).
struct DoubleRulingLine {
  int ruling;
  P1 param;
};

using TraceComponent =
    std::variant<QPoint, QDoublePoint, RulingLine, DoubleRulingLine>;

namespace detail {

// Value of s^i t^(a-i) at (c0 : c1) with the convention 0^0 = 1.
inline u32 p1_monomial(const PrimeField& f, const P1& x, int i, int a) {
  u32 r = 1;
  if (i > 0) r = f.mul(r, f.pow(x.c0, static_cast<u64>(i)));
  if (a - i > 0) r = f.mul(r, f.pow(x.c1, static_cast<u64>(a - i)));
  return r;
}

// Derivative of s^i t^(a-i) in the direction transverse to x, evaluated at
// x. The transverse direction is (0,1) when x = (1,*), else (1,0).
inline u32 p1_monomial_deriv(const PrimeField& f, const P1& x, int i, int a) {
  P1 t = (x.c0 != 0) ? P1{0, 1} : P1{1, 0};
  u64 acc = 0;
  if (i > 0 && t.c0 != 0) {
    u32 v = f.mul(f.from_int(i), p1_monomial(f, x, i - 1, a - 1));
    acc += u64{f.mul(t.c0, v)};
  }
  if (a - i > 0 && t.c1 != 0) {
    u32 v = f.mul(f.from_int(a - i), p1_monomial(f, x, i, a - 1));
    acc += u64{f.mul(t.c1, v)};
  }
  return f.reduce(acc);
}

}  // namespace detail

// Appends the trace component's condition rows on bidegree (alpha, beta)
// forms; column count of `out` must be (alpha+1)(beta+1). Requires
// 0 <= alpha, beta < p.
inline void q_condition_rows(const PrimeField& f, const TraceComponent& tc,
                             long alpha, long beta, Matrix& out) {
  if (alpha < 0 || beta < 0 || static_cast<u64>(alpha) >= f.p() ||
      static_cast<u64>(beta) >= f.p())
    throw Error("q_condition_rows: need 0 <= alpha, beta < p");
  if (out.cols() != static_cast<std::size_t>(forms_dim_q(alpha, beta)))
    throw Error("q_condition_rows: column count mismatch");
  const auto mons = q_monomials(alpha, beta);
  const int a = static_cast<int>(alpha), b = static_cast<int>(beta);

  struct V {
    const PrimeField& f;
    const std::vector<std::pair<int, int>>& mons;
    int a, b;
    Matrix& out;

    void value_row(const P1& s, const P1& u) const {
      std::vector<u32> row(mons.size());
      for (std::size_t c = 0; c < mons.size(); ++c)
        row[c] = f.mul(detail::p1_monomial(f, s, mons[c].first, a),
                       detail::p1_monomial(f, u, mons[c].second, b));
      out.append_row(row);
    }
    // Partial in the chosen factor, transverse direction, at the point.
    void deriv_row(const P1& s, const P1& u, int factor) const {
      std::vector<u32> row(mons.size());
      for (std::size_t c = 0; c < mons.size(); ++c) {
        auto [i, j] = mons[c];
        row[c] =
            factor == 1
                ? f.mul(detail::p1_monomial_deriv(f, s, i, a),
                        detail::p1_monomial(f, u, j, b))
                : f.mul(detail::p1_monomial(f, s, i, a),
                        detail::p1_monomial_deriv(f, u, j, b));
      }
      out.append_row(row);
    }
    // Rows of G restricted to a ruling line, one per coefficient of the
    // residual binary form; `deriv` first applies the transverse partial.
    void ruling_rows(int ruling, const P1& param, bool deriv) const {
      const int other_deg = (ruling == 1) ? b : a;
      std::vector<u32> row(mons.size());
      for (int k = 0; k <= other_deg; ++k) {
        for (std::size_t c = 0; c < mons.size(); ++c) {
          auto [i, j] = mons[c];
          int along = (ruling == 1) ? j : i;
          if (along != k) {
            row[c] = 0;
            continue;
          }
          int fixed_i = (ruling == 1) ? i : j;
          int fixed_deg = (ruling == 1) ? a : b;
          row[c] = deriv ? detail::p1_monomial_deriv(f, param, fixed_i,
                                                     fixed_deg)
                         : detail::p1_monomial(f, param, fixed_i, fixed_deg);
        }
        out.append_row(row);
      }
    }

    void operator()(const QPoint& t) const { value_row(t.s, t.u); }
    void operator()(const QDoublePoint& t) const {
      value_row(t.s, t.u);
      deriv_row(t.s, t.u, 1);
      deriv_row(t.s, t.u, 2);
    }
    void operator()(const RulingLine& t) const {
      ruling_rows(t.ruling, t.param, false);
    }
    void operator()(const DoubleRulingLine& t) const {
      ruling_rows(t.ruling, t.param, false);
      ruling_rows(t.ruling, t.param, true);
    }
  };
  std::visit(V{f, mons, a, b, out}, tc);
}

inline Matrix trace_condition_matrix(const PrimeField& f,
                                     std::span<const TraceComponent> trace,
                                     long alpha, long beta) {
  Matrix m = Matrix::with_row_capacity(
      f, 0, static_cast<std::size_t>(forms_dim_q(alpha, beta)));
  for (const TraceComponent& tc : trace)
    q_condition_rows(f, tc, alpha, beta, m);
  return m;
}

// h^0 of the (alpha, beta) twist of the trace component's structure sheaf.
// Divisor classes cap at the ambient width in their ruling direction.
inline long trace_sheaf_dim(const TraceComponent& tc, long alpha, long beta) {
  struct V {
    long alpha, beta;
    long width(int ruling, long mult) const {
      long across = (ruling == 1) ? alpha : beta;
      long along = (ruling == 1) ? beta : alpha;
      return std::min(mult, across + 1) * (along + 1);
    }
    long operator()(const QPoint&) const { return 1; }
    long operator()(const QDoublePoint&) const { return 3; }
    long operator()(const RulingLine& t) const { return width(t.ruling, 1); }
    long operator()(const DoubleRulingLine& t) const {
      return width(t.ruling, 2);
    }
  };
  return std::visit(V{alpha, beta}, tc);
}

}  // namespace hpl
