#include <catch2/catch_amalgamated.hpp>

#include <hpl/schemes.hpp>

#include <vector>

using namespace hpl;

namespace {

Matrix rows_of(const PrimeField& f, const Component& c, long d) {
  Matrix m(f, 0, static_cast<std::size_t>(forms_dim(d)));
  p3_condition_rows(f, c, d, m);
  return m;
}

Line axis_line(const PrimeField& f) {  // x2 = x3 = 0
  return make_line(f, make_point(f, {1, 0, 0, 0}), make_point(f, {0, 1, 0, 0}));
}

Plane plane_through(const PrimeField& f, const Point& p, Rng& rng) {
  for (int k = 0; k < sample_retry_budget; ++k) {
    Vec4 n{};
    for (int i = 0; i < 3; ++i) n[i] = static_cast<u32>(rng.below(f.p()));
    // Solve n . p = 0 for the last nonzero coordinate of p.
    int pivot = -1;
    for (int i = 3; i >= 0; --i)
      if (p.x[i] != 0) {
        pivot = i;
        break;
      }
    u64 rest = 0;
    for (int i = 0; i < 4; ++i)
      if (i != pivot) rest += u64{n[i]} * p.x[i];
    n[pivot] = f.mul(f.neg(f.reduce(rest)), f.inv(p.x[pivot]));
    if (n != Vec4{}) return make_plane(f, n);
  }
  throw RetriesExhausted("plane_through");
}

Line line_through(const PrimeField& f, const Point& p, Rng& rng) {
  for (int k = 0; k < sample_retry_budget; ++k) {
    const Point q = sample_point(f, rng);
    Vec4 rows[2] = {p.x, q.x};
    if (span_rank(f, rows) == 2) return Line{p, q};
  }
  throw RetriesExhausted("line_through");
}

}  // namespace

TEST_CASE("row counts per component") {
  const PrimeField f(32003);
  Rng rng(1);
  const Point p = sample_point(f, rng);
  const Line l = sample_line(f, rng);
  const Point node = sample_point(f, rng);
  const Line c1 = line_through(f, node, rng), c2 = line_through(f, node, rng);
  for (long d : {1L, 2L, 3L, 5L}) {
    CHECK(rows_of(f, PointComp{p}, d).rows() == 1);
    CHECK(rows_of(f, SpaceDoublePoint{p}, d).rows() == 4);
    CHECK(rows_of(f, PlanarDoublePoint{p, plane_through(f, p, rng)}, d).rows() ==
          3);
    CHECK(rows_of(f, Arrow{p, sample_point(f, rng)}, d).rows() == 2);
    CHECK(rows_of(f, LineComp{l}, d).rows() == static_cast<std::size_t>(d + 1));
    CHECK(rows_of(f, DoubleLineComp{l}, d).rows() ==
          static_cast<std::size_t>(3 * d + 1));
    CHECK(rows_of(f, NodalConic{c1, c2, node}, d).rows() ==
          static_cast<std::size_t>(2 * d + 2));
    CHECK(rows_of(f, Sundial{c1, c2, node}, d).rows() ==
          static_cast<std::size_t>(2 * d + 6));
  }
}

TEST_CASE("coordinate line kernel is the ideal in plain monomials") {
  const PrimeField f(32003);
  const Line l = axis_line(f);  // x2 = x3 = 0
  const Matrix m = rows_of(f, LineComp{l}, 3);
  CHECK(rank(m) == 4);  // d+1 independent conditions
  // Kernel = monomials divisible by x2 or x3: dim 20 - 4 = 16.
  CHECK(nullspace_basis(m).size() == 16);
}

TEST_CASE("coordinate double line kernel is the squared ideal") {
  const PrimeField f(32003);
  const Line l = axis_line(f);
  const Matrix m = rows_of(f, DoubleLineComp{l}, 2);
  REQUIRE(m.rows() == 7);
  CHECK(rank(m) == 7);
  const auto mons = p3_monomials(2);
  REQUIRE(mons.size() == 10);
  const auto ker = nullspace_basis(m);
  REQUIRE(ker.size() == 3);
  // x2^2, x2 x3, x3^2 each kill every row.
  for (const Exps& want : {Exps{0, 0, 2, 0}, Exps{0, 0, 1, 1}, Exps{0, 0, 0, 2}}) {
    std::vector<u32> v(mons.size(), 0);
    for (std::size_t c = 0; c < mons.size(); ++c)
      if (mons[c] == want) v[c] = 1;
    for (u32 y : m.apply(v)) CHECK(y == 0);
  }
}

TEST_CASE("each component imposes independent conditions generically") {
  for (u32 prime : {u32{32003}, u32{65521}}) {
    const PrimeField f(prime);
    Rng rng(prime);
    for (long d : {2L, 3L, 4L, 6L, 10L}) {
      const Point p = sample_point(f, rng);
      const Line l = sample_line(f, rng);
      const Point node = sample_point(f, rng);
      const Line c1 = line_through(f, node, rng);
      Line c2 = line_through(f, node, rng);
      while (same_line(f, c1, c2)) c2 = line_through(f, node, rng);
      const std::vector<Component> comps = {
          PointComp{p},
          SpaceDoublePoint{p},
          PlanarDoublePoint{p, plane_through(f, p, rng)},
          Arrow{p, sample_point(f, rng)},
          LineComp{l},
          DoubleLineComp{l},
          NodalConic{c1, c2, node},
          Sundial{c1, c2, node},
      };
      for (const Component& c : comps) {
        const long expected =
            std::min(component_sheaf_dim(c, d), forms_dim(d));
        CHECK(rank(rows_of(f, c, d)) == expected);
      }
    }
  }
}

TEST_CASE("double line row space does not depend on the completion basis") {
  const PrimeField f(32003);
  Rng rng(77);
  const Line l = sample_line(f, rng);
  const long d = 4;
  const auto mons = p3_monomials(d);

  Vec4 given[2] = {l.a.x, l.b.x};
  const auto basis = complete_basis(f, given);
  REQUIRE(basis.size() == 2);

  auto assemble = [&](const Vec4& d1, const Vec4& d2) {
    Matrix m(f, 0, mons.size());
    detail::emit_line_restriction(f, mons, d, l, m);
    detail::emit_line_derivative(f, mons, d, l, d1, m);
    detail::emit_line_derivative(f, mons, d, l, d2, m);
    return m;
  };

  // Mix the two transverse directions; the row space must not move.
  Vec4 mix1{}, mix2{};
  for (int i = 0; i < 4; ++i) {
    mix1[i] = f.add(basis[0][i], basis[1][i]);
    mix2[i] = f.sub(basis[0][i], f.mul(2, basis[1][i]));
  }
  Matrix a = assemble(basis[0], basis[1]);
  const Matrix b = assemble(mix1, mix2);
  const long ra = rank(a), rb = rank(b);
  a.append_rows(b);
  CHECK(ra == rb);
  CHECK(rank(a) == ra);
}

TEST_CASE("sundial conditions match two skew lines in count") {
  const PrimeField f(32003);
  Rng rng(5);
  const Point node = sample_point(f, rng);
  const Line c1 = line_through(f, node, rng);
  Line c2 = line_through(f, node, rng);
  while (same_line(f, c1, c2)) c2 = line_through(f, node, rng);
  std::vector<Line> skew;
  while (skew.size() < 2) skew.push_back(sample_line_disjoint(f, rng, skew));

  for (long d : {2L, 3L, 4L, 5L}) {
    const long sundial_rank = rank(rows_of(f, Sundial{c1, c2, node}, d));
    Matrix two(f, 0, static_cast<std::size_t>(forms_dim(d)));
    p3_condition_rows(f, LineComp{skew[0]}, d, two);
    p3_condition_rows(f, LineComp{skew[1]}, d, two);
    CHECK(sundial_rank == rank(two));
    CHECK(sundial_rank == 2 * d + 2);
    // The underlying nodal conic sees one condition fewer.
    CHECK(rank(rows_of(f, NodalConic{c1, c2, node}, d)) == 2 * d + 1);
  }
}

TEST_CASE("emitters reject unusable degrees") {
  const PrimeField tiny(5);
  Rng rng(3);
  const Point p = sample_point(tiny, rng);
  Matrix m(tiny, 0, static_cast<std::size_t>(forms_dim(5)));
  CHECK_THROWS_AS(p3_condition_rows(tiny, PointComp{p}, 5, m), Error);
  Matrix z(tiny, 0, 1);
  CHECK_THROWS_AS(p3_condition_rows(tiny, PointComp{p}, 0, z), Error);
  const PrimeField f(32003);
  Matrix wrong(f, 0, 7);  // forms_dim(2) = 10
  CHECK_THROWS_AS(p3_condition_rows(f, PointComp{make_point(f, {1, 0, 0, 0})},
                                    2, wrong),
                  Error);
}

TEST_CASE("configuration add validates and enforces disjointness") {
  const PrimeField f(32003);
  Configuration cfg(f);
  const Line l = axis_line(f);  // through e0 and e1
  cfg.add(LineComp{l});
  // A second line through e0 meets the first.
  const Line m = make_line(f, make_point(f, {1, 0, 0, 0}),
                           make_point(f, {0, 0, 1, 0}));
  CHECK_THROWS_AS(cfg.add(LineComp{m}), DegenerateComponent);
  // A point on the line collides too.
  CHECK_THROWS_AS(cfg.add(PointComp{make_point(f, {1, 5, 0, 0})}),
                  DegenerateComponent);
  // Skew line and off-line point are fine.
  cfg.add(LineComp{make_line(f, make_point(f, {0, 0, 1, 0}),
                             make_point(f, {0, 0, 0, 1}))});
  cfg.add(PointComp{make_point(f, {1, 1, 1, 1})});
  CHECK(cfg.components().size() == 3);
  CHECK(cfg.sheaf_dim(3) == 4 + 4 + 1);
  const Matrix cm = condition_matrix(cfg, 3);
  CHECK(cm.rows() == 9);
  CHECK(rank(cm) == 9);

  // Malformed components are rejected before any disjointness check.
  Configuration c2(f);
  CHECK_THROWS_AS(
      c2.add(PlanarDoublePoint{make_point(f, {1, 0, 0, 0}),
                               make_plane(f, {1, 0, 0, 0})}),
      DegenerateComponent);
  CHECK_THROWS_AS(c2.add(Arrow{make_point(f, {1, 2, 3, 4}),
                               make_point(f, {1, 2, 3, 4})}),
                  DegenerateComponent);
  const Point n0 = make_point(f, {1, 0, 0, 0});
  CHECK_THROWS_AS(
      c2.add(NodalConic{axis_line(f), axis_line(f), n0}),
      DegenerateComponent);
  CHECK_THROWS_AS(
      c2.add(NodalConic{axis_line(f),
                        make_line(f, make_point(f, {0, 0, 1, 0}),
                                  make_point(f, {0, 0, 0, 1})),
                        n0}),
      DegenerateComponent);
}

TEST_CASE("trace row counts and ranks on the quadric") {
  const PrimeField f(32003);
  Rng rng(9);
  const P1 s = sample_p1(f, rng), u = sample_p1(f, rng);

  auto qrows = [&](const TraceComponent& tc, long alpha, long beta) {
    Matrix m(f, 0, static_cast<std::size_t>(forms_dim_q(alpha, beta)));
    q_condition_rows(f, tc, alpha, beta, m);
    return m;
  };

  CHECK(qrows(QPoint{s, u}, 3, 3).rows() == 1);
  CHECK(qrows(QDoublePoint{s, u}, 3, 3).rows() == 3);
  CHECK(qrows(RulingLine{1, s}, 3, 5).rows() == 6);   // beta + 1
  CHECK(qrows(RulingLine{2, u}, 3, 5).rows() == 4);   // alpha + 1
  CHECK(qrows(DoubleRulingLine{1, s}, 3, 5).rows() == 12);
  CHECK(qrows(DoubleRulingLine{2, u}, 3, 5).rows() == 8);

  // Generic full rank at ample bidegrees.
  CHECK(rank(qrows(QDoublePoint{s, u}, 3, 3)) == 3);
  CHECK(rank(qrows(RulingLine{1, s}, 3, 5)) == 6);
  CHECK(rank(qrows(DoubleRulingLine{1, s}, 3, 5)) == 12);
  CHECK(trace_sheaf_dim(QDoublePoint{s, u}, 3, 3) == 3);
  CHECK(trace_sheaf_dim(RulingLine{1, s}, 3, 5) == 6);
  CHECK(trace_sheaf_dim(DoubleRulingLine{1, s}, 3, 5) == 12);

  // Degenerate widths: a double ruling line on a (1, beta) surface class
  // caps at the ambient width.
  CHECK(trace_sheaf_dim(DoubleRulingLine{1, s}, 0, 5) == 6);
  CHECK(rank(qrows(DoubleRulingLine{1, s}, 0, 5)) == 6);

  // A quadric double point only reaches rank 2 on bidegree (0, beta):
  // the first-factor partial of a constant-in-s form vanishes identically.
  CHECK(rank(qrows(QDoublePoint{s, u}, 0, 6)) == 2);
  Matrix two(f, 0, static_cast<std::size_t>(forms_dim_q(0, 6)));
  const P1 s2 = sample_p1(f, rng), u2 = sample_p1(f, rng);
  q_condition_rows(f, QDoublePoint{s, u}, 0, 6, two);
  q_condition_rows(f, QDoublePoint{s2, u2}, 0, 6, two);
  CHECK(rank(two) == 4);
}

TEST_CASE("ruling restriction rows vanish exactly on multiples") {
  const PrimeField f(101);
  Rng rng(13);
  const P1 t = sample_p1(f, rng);
  // Bidegree (2, 3), ruling 1 at parameter t: kernel of the beta+1 = 4 rows
  // is bidegree (1, 3) times the linear form vanishing at t: dim 8.
  Matrix m(f, 0, static_cast<std::size_t>(forms_dim_q(2, 3)));
  q_condition_rows(f, RulingLine{1, t}, 2, 3, m);
  CHECK(rank(m) == 4);
  CHECK(nullspace_basis(m).size() == 8);
  // The double structure halves what remains once more.
  Matrix dm(f, 0, static_cast<std::size_t>(forms_dim_q(2, 3)));
  q_condition_rows(f, DoubleRulingLine{1, t}, 2, 3, dm);
  CHECK(rank(dm) == 8);
  CHECK(nullspace_basis(dm).size() == 4);
}

TEST_CASE("trace emitters reject bad bidegrees") {
  const PrimeField tiny(5);
  Matrix m(tiny, 0, 6);
  CHECK_THROWS_AS(
      q_condition_rows(tiny, QPoint{{1, 0}, {1, 0}}, 5, 0, m), Error);
  const PrimeField f(32003);
  Matrix wrong(f, 0, 5);  // (1+1)(2+1) = 6
  CHECK_THROWS_AS(
      q_condition_rows(f, QPoint{{1, 0}, {1, 0}}, 1, 2, wrong), Error);
}
