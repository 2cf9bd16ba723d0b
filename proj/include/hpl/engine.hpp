#pragma once

// Exact Hilbert function computation for a configuration at one degree, and
// the sampling layer that turns single computations into one-sided
// certificates: a sample never imposes more conditions than the general
// member, so any sample achieving the expected (maximal-rank) values proves
// the general member achieves them. Defects can only be reported, never
// proved, which is why they require agreement across every trial of at
// least two primes.

#include <optional>

#include "hpl/schemes.hpp"

namespace hpl {

struct HilbertReport {
  long d = 0;
  long n = 0;          // forms_dim(d)
  long sheaf_dim = 0;  // sum of component sheaf dims
  long rows = 0;       // rows emitted (>= rank)
  long rank = 0;
  long h0 = 0;  // n - rank
  long h1 = 0;  // sheaf_dim - rank
  long expected_h0 = 0;
  long expected_h1 = 0;
  bool maximal_rank_at_d = false;
};

// h^0 and h^1 of the degree-d twist of the configuration's ideal sheaf by
// exact rank over GF(p). Degree 0 is the trivial case: any nonempty
// configuration kills the constants.
inline HilbertReport hilbert_report(const Configuration& cfg, long d) {
  if (cfg.empty()) throw Error("hilbert_report: empty configuration");
  if (d < 0) throw Error("hilbert_report: negative degree");
  HilbertReport r;
  r.d = d;
  r.n = forms_dim(d);
  r.sheaf_dim = cfg.sheaf_dim(d);
  if (d == 0) {
    r.rows = 1;
    r.rank = 1;
  } else {
    Matrix m = condition_matrix(cfg, d);
    r.rows = static_cast<long>(m.rows());
    r.rank = rank(std::move(m));
  }
  r.h0 = r.n - r.rank;
  r.h1 = r.sheaf_dim - r.rank;
  r.expected_h0 = std::max(r.n - r.sheaf_dim, long{0});
  r.expected_h1 = std::max(r.sheaf_dim - r.n, long{0});
  // h0 - h1 = n - sheaf_dim holds by construction; maximal rank at d means
  // the expected pair is achieved (equivalently rank = min(n, sheaf_dim)).
  r.maximal_rank_at_d = (r.h0 == r.expected_h0 && r.h1 == r.expected_h1);
  return r;
}

// ---- families and sampling ----------------------------------------------

// One entry of a custom family: a fixed component reused in every trial, or
// a component kind resampled per trial, optionally placed on the standard
// quadric (lines become ruling lines, points land on the quadric).
struct TemplateEntry {
  std::optional<Component> fixed;
  // Used when `fixed` is empty:
  enum class Kind { point, space_double_point, arrow, line, double_line };
  Kind kind = Kind::line;
  bool on_quadric = false;
};

// A family of configurations closed under the group action that moves
// general position around: `double_lines` + `lines` in general position
// (the first `lines_on_quadric` of the lines are ruling lines of the
// standard quadric), `conics` nodal conics with nodes on the quadric,
// `arrows` at general points, plus custom entries.
struct FamilySpec {
  long double_lines = 0;
  long lines = 0;
  long conics = 0;
  long lines_on_quadric = 0;         // of `lines`, placed as ruling lines
  long double_lines_on_quadric = 0;  // of `double_lines`, doubled rulings
  long arrows = 0;
  std::vector<TemplateEntry> custom;

  static FamilySpec lines_family(long a, long b) {
    FamilySpec s;
    s.double_lines = a;
    s.lines = b;
    return s;
  }

  void validate() const {
    if (double_lines < 0 || lines < 0 || conics < 0 || arrows < 0 ||
        lines_on_quadric < 0 || double_lines_on_quadric < 0)
      throw Infeasible("family: negative count");
    if (lines_on_quadric > lines || double_lines_on_quadric > double_lines)
      throw Infeasible("family: more on-quadric components than components");
    if (double_lines + lines + conics + arrows == 0 && custom.empty())
      throw Infeasible("family: empty");
  }

  bool needs_quadric() const {
    if (conics > 0 || lines_on_quadric > 0 || double_lines_on_quadric > 0)
      return true;
    for (const TemplateEntry& t : custom)
      if (t.on_quadric) return true;
    return false;
  }

  long sheaf_dim(long d) const {
    long s = curve_sheaf_dim(double_lines, lines, d) + arrows * 2 +
             conics * (2 * d + 1);
    for (const TemplateEntry& t : custom) {
      if (t.fixed) {
        s += component_sheaf_dim(*t.fixed, d);
        continue;
      }
      switch (t.kind) {
        case TemplateEntry::Kind::point: s += 1; break;
        case TemplateEntry::Kind::space_double_point: s += 4; break;
        case TemplateEntry::Kind::arrow: s += 2; break;
        case TemplateEntry::Kind::line: s += d + 1; break;
        case TemplateEntry::Kind::double_line: s += 3 * d + 1; break;
      }
    }
    return s;
  }
};

namespace detail {

// Pairwise-disjoint sampling helper; collects supports as it goes.
class DisjointSampler {
 public:
  DisjointSampler(const PrimeField& f, Rng& rng) : f_(f), rng_(rng) {}

  // A ruling-1 line with parameter distinct from previous on-quadric lines
  // and disjoint from everything sampled so far.
  Line ruling1_line() {
    const Quadric q0 = standard_quadric(f_);
    for (int k = 0; k < sample_retry_budget; ++k) {
      Line l = sample_line_on_quadric(f_, q0, 1, rng_);
      if (fits(l)) return remember(l);
    }
    throw RetriesExhausted("sample: ruling line");
  }

  Line general_line(bool split_on_quadric) {
    const Quadric q0 = standard_quadric(f_);
    for (int k = 0; k < sample_retry_budget; ++k) {
      Line l = sample_line(f_, rng_);
      if (!fits(l)) continue;
      if (split_on_quadric &&
          intersect_line_quadric(f_, l, q0).kind != MeetKind::two_points)
        continue;
      return remember(l);
    }
    throw RetriesExhausted("sample: general line");
  }

  // Nodal conic with node on the standard quadric; each leg meets the
  // quadric in the node plus one further rational point.
  NodalConic conic_on_quadric() {
    const Quadric q0 = standard_quadric(f_);
    for (int k = 0; k < sample_retry_budget; ++k) {
      Point node = sample_point_on_quadric(f_, rng_);
      if (!point_fits(node)) continue;
      auto leg = [&]() -> std::optional<Line> {
        for (int t = 0; t < sample_retry_budget; ++t) {
          Point q = sample_point(f_, rng_);
          Vec4 rows[2] = {node.x, q.x};
          if (span_rank(f_, rows) != 2) continue;
          Line l{node, q};
          auto meet = intersect_line_quadric(f_, l, q0);
          if (meet.kind != MeetKind::two_points) continue;
          if (!fits(l, /*through=*/node)) continue;
          return l;
        }
        return std::nullopt;
      };
      std::optional<Line> l1 = leg();
      if (!l1) continue;
      // Distinct lines through the node meet exactly at the node.
      std::optional<Line> l2;
      for (int t = 0; t < sample_retry_budget && !l2; ++t) {
        std::optional<Line> cand = leg();
        if (cand && !same_line(f_, *cand, *l1)) l2 = cand;
      }
      if (!l2) continue;
      lines_.push_back(*l1);
      lines_.push_back(*l2);
      points_.push_back(node);
      return NodalConic{*l1, *l2, node};
    }
    throw RetriesExhausted("sample: nodal conic");
  }

  Point general_point(bool on_quadric) {
    for (int k = 0; k < sample_retry_budget; ++k) {
      Point p = on_quadric ? sample_point_on_quadric(f_, rng_)
                           : sample_point(f_, rng_);
      if (!point_fits(p)) continue;
      points_.push_back(p);
      return p;
    }
    throw RetriesExhausted("sample: point");
  }

  Point free_direction(const Point& base) {
    for (int k = 0; k < sample_retry_budget; ++k) {
      Point q = sample_point(f_, rng_);
      Vec4 rows[2] = {base.x, q.x};
      if (span_rank(f_, rows) == 2) return q;
    }
    throw RetriesExhausted("sample: direction");
  }

  void remember_fixed(const Component& c) {
    Support s = component_support(c);
    for (const Point& p : s.points) points_.push_back(p);
    for (const Line& l : s.lines) lines_.push_back(l);
  }

 private:
  bool fits(const Line& l, std::optional<Point> through = std::nullopt) {
    for (const Line& m : lines_)
      if (lines_meet(f_, l, m)) return false;
    for (const Point& p : points_) {
      if (through && p == *through) continue;
      if (point_on_line(f_, p, l)) return false;
    }
    return true;
  }
  bool point_fits(const Point& p) {
    for (const Point& q : points_)
      if (p == q) return false;
    for (const Line& m : lines_)
      if (point_on_line(f_, p, m)) return false;
    return true;
  }
  Line remember(const Line& l) {
    lines_.push_back(l);
    return l;
  }

  const PrimeField& f_;
  Rng& rng_;
  std::vector<Line> lines_;
  std::vector<Point> points_;
};

}  // namespace detail

// Draws one configuration from the family. Component order is fixed:
// on-quadric double lines, free double lines, on-quadric lines, free lines,
// conics, arrows, custom.
// When `split_lines` is set, free lines are resampled until they meet the
// standard quadric in two rational points, so the residual/trace split is
// defined; this restricts sampling to a dense open subset of the family.
inline Configuration sample_configuration(const PrimeField& f,
                                          const FamilySpec& spec, Rng& rng,
                                          bool split_lines = false) {
  spec.validate();
  Configuration cfg(f, spec.needs_quadric() || split_lines);
  detail::DisjointSampler s(f, rng);
  for (const TemplateEntry& t : spec.custom)
    if (t.fixed) s.remember_fixed(*t.fixed);

  for (long i = 0; i < spec.double_lines_on_quadric; ++i)
    cfg.add(DoubleLineComp{s.ruling1_line()});
  for (long i = 0; i < spec.double_lines - spec.double_lines_on_quadric; ++i)
    cfg.add(DoubleLineComp{s.general_line(split_lines)});
  for (long i = 0; i < spec.lines_on_quadric; ++i)
    cfg.add(LineComp{s.ruling1_line()});
  for (long i = 0; i < spec.lines - spec.lines_on_quadric; ++i)
    cfg.add(LineComp{s.general_line(split_lines)});
  for (long i = 0; i < spec.conics; ++i) cfg.add(s.conic_on_quadric());
  for (long i = 0; i < spec.arrows; ++i) {
    Point p = s.general_point(false);
    cfg.add(Arrow{p, s.free_direction(p)});
  }
  for (const TemplateEntry& t : spec.custom) {
    if (t.fixed) {
      cfg.add(*t.fixed);
      continue;
    }
    switch (t.kind) {
      case TemplateEntry::Kind::point:
        cfg.add(PointComp{s.general_point(t.on_quadric)});
        break;
      case TemplateEntry::Kind::space_double_point:
        cfg.add(SpaceDoublePoint{s.general_point(t.on_quadric)});
        break;
      case TemplateEntry::Kind::arrow: {
        Point p = s.general_point(t.on_quadric);
        cfg.add(Arrow{p, s.free_direction(p)});
        break;
      }
      case TemplateEntry::Kind::line:
        cfg.add(LineComp{t.on_quadric ? s.ruling1_line()
                                      : s.general_line(split_lines)});
        break;
      case TemplateEntry::Kind::double_line:
        cfg.add(DoubleLineComp{t.on_quadric ? s.ruling1_line()
                                            : s.general_line(split_lines)});
        break;
    }
  }
  return cfg;
}

// ---- certificates --------------------------------------------------------

enum class Verdict {
  maximal_rank_certified,
  defect_observed,
  inconclusive,
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::maximal_rank_certified: return "MaximalRankCertified";
    case Verdict::defect_observed: return "DefectObserved";
    case Verdict::inconclusive: return "Inconclusive";
  }
  return "?";
}

struct TrialRecord {
  u64 prime = 0;
  u64 seed = 0;
  long h0 = 0, h1 = 0, rank = 0;
};

struct TrialCertificate {
  long d = 0;
  std::vector<u64> primes;
  long trials_requested = 0;
  u64 seed = 0;
  long expected_h0 = 0, expected_h1 = 0;
  long min_h0 = 0, min_h1 = 0;
  Verdict verdict = Verdict::inconclusive;
  long defect_h0 = 0, defect_h1 = 0;  // set when defect_observed
  std::vector<TrialRecord> log;       // in execution order
  HilbertReport witness;              // trial attaining min_h0
  u64 witness_prime = 0, witness_seed = 0;
};

inline constexpr u64 default_seed = 0xB10C5EED;
inline const std::vector<u64> default_primes = {32003, 65521};
inline constexpr long default_trials = 3;

// Runs `trials` samples of the family per prime. Certifies maximal rank as
// soon as one sample attains the expected pair (further samples add no
// information); reports a defect only when every sample of at least two
// primes agrees on the same super-expected pair.
inline TrialCertificate general_hilbert(
    const FamilySpec& spec, long d, long trials = default_trials,
    const std::vector<u64>& primes = default_primes, u64 seed = default_seed,
    bool split_lines = false) {
  spec.validate();
  if (trials < 1) throw Error("general_hilbert: need trials >= 1");
  if (primes.empty()) throw Error("general_hilbert: need a prime");
  TrialCertificate cert;
  cert.d = d;
  cert.primes = primes;
  cert.trials_requested = trials;
  cert.seed = seed;
  {
    long n = forms_dim(d), s = spec.sheaf_dim(d);
    cert.expected_h0 = std::max(n - s, long{0});
    cert.expected_h1 = std::max(s - n, long{0});
  }
  Rng root(seed);
  bool first = true;
  bool all_agree = true;
  long agree_h0 = 0, agree_h1 = 0;
  for (std::size_t pi = 0; pi < primes.size(); ++pi) {
    PrimeField f(primes[pi]);
    for (long t = 0; t < trials; ++t) {
      Rng cell = root.child(pi * static_cast<u64>(trials) + t);
      u64 cell_seed = cell.seed();
      Configuration cfg = sample_configuration(f, spec, cell, split_lines);
      HilbertReport rep = hilbert_report(cfg, d);
      cert.log.push_back({primes[pi], cell_seed, rep.h0, rep.h1, rep.rank});
      if (first || rep.h0 < cert.min_h0) {
        cert.witness = rep;
        cert.witness_prime = primes[pi];
        cert.witness_seed = cell_seed;
      }
      cert.min_h0 = first ? rep.h0 : std::min(cert.min_h0, rep.h0);
      cert.min_h1 = first ? rep.h1 : std::min(cert.min_h1, rep.h1);
      if (first) {
        agree_h0 = rep.h0;
        agree_h1 = rep.h1;
      } else if (rep.h0 != agree_h0 || rep.h1 != agree_h1) {
        all_agree = false;
      }
      first = false;
      if (rep.maximal_rank_at_d) {
        cert.verdict = Verdict::maximal_rank_certified;
        return cert;
      }
    }
  }
  if (all_agree && primes.size() >= 2 && agree_h0 > cert.expected_h0) {
    cert.verdict = Verdict::defect_observed;
    cert.defect_h0 = agree_h0;
    cert.defect_h1 = agree_h1;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

// ---- degree sweep ---------------------------------------------------------

struct SweepCell {
  long d = 0;
  TrialCertificate cert;
};

struct SweepResult {
  long a = 0, b = 0;
  long critical = 0;
  bool vanishing_below_critical = false;  // h0 = 0 certified at critical-1
  bool regular_at_critical = false;       // h1 = 0 certified at critical
  bool maximal_rank = false;
  std::vector<SweepCell> cells;     // degrees 1..d_max
  std::vector<long> flagged;        // degrees whose cell is not certified
};

// Certifies maximal rank for a double lines + b lines in all degrees at
// once via the two-point criterion (h^0 vanishes just below the critical
// degree, h^1 vanishes at it), and tabulates every degree up to d_max.
// d_max = 0 means critical + 1.
inline SweepResult maximal_rank_sweep(
    long a, long b, long d_max = 0, long trials = default_trials,
    const std::vector<u64>& primes = default_primes, u64 seed = default_seed) {
  SweepResult res;
  res.a = a;
  res.b = b;
  res.critical = critical_value(a, b);
  if (d_max <= 0) d_max = res.critical + 1;
  FamilySpec spec = FamilySpec::lines_family(a, b);
  Rng root(seed);
  for (long d = 1; d <= d_max; ++d) {
    SweepCell cell;
    cell.d = d;
    cell.cert = general_hilbert(spec, d, trials, primes,
                                root.child(static_cast<u64>(d)).seed());
    if (cell.cert.verdict != Verdict::maximal_rank_certified)
      res.flagged.push_back(d);
    res.cells.push_back(std::move(cell));
  }
  const long dc = res.critical;
  if (dc - 1 == 0) {
    // Nonempty scheme: constants vanish on it, nothing to sample.
    res.vanishing_below_critical = true;
  } else if (dc - 1 <= d_max) {
    const TrialCertificate& c = res.cells[dc - 2].cert;
    res.vanishing_below_critical =
        (c.verdict == Verdict::maximal_rank_certified && c.expected_h0 == 0);
  } else {
    TrialCertificate c = general_hilbert(spec, dc - 1, trials, primes,
                                         root.child(static_cast<u64>(dc - 1))
                                             .seed());
    res.vanishing_below_critical =
        (c.verdict == Verdict::maximal_rank_certified && c.expected_h0 == 0);
  }
  {
    const TrialCertificate* c = nullptr;
    TrialCertificate extra;
    if (dc <= d_max) {
      c = &res.cells[dc - 1].cert;
    } else {
      extra = general_hilbert(spec, dc, trials, primes,
                              root.child(static_cast<u64>(dc)).seed());
      c = &extra;
    }
    res.regular_at_critical =
        (c->verdict == Verdict::maximal_rank_certified &&
         c->expected_h1 == 0);
  }
  res.maximal_rank = res.vanishing_below_critical && res.regular_at_critical;
  return res;
}

}  // namespace hpl
