// Acceptance battery: nine numbered checks, one [PASS]/[FAIL] line per
// check, nonzero exit if any fails. Checks 1..8 exercise the library's
// headline claims end to end; check 9 runs the whole battery a second time
// with the same seeds and requires both serialized record streams to match
// byte for byte.

#include <hpl/hpl.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace hpl;

// Every certificate, report, and bound produced by the battery is appended
// to this stream; the determinism check compares two full runs of it.
struct Battery {
  std::ostringstream json;

  void put_cert(const std::string& tag, const TrialCertificate& c) {
    json << "{\"tag\":\"" << tag << "\",\"d\":" << c.d << ",\"expected\":["
         << c.expected_h0 << ',' << c.expected_h1 << "],\"verdict\":\""
         << verdict_name(c.verdict) << "\",\"trials\":[";
    for (size_t i = 0; i < c.log.size(); ++i) {
      const TrialRecord& t = c.log[i];
      json << (i ? "," : "") << '[' << t.prime << ',' << t.seed << ','
           << t.rank << ',' << t.h0 << ',' << t.h1 << ']';
    }
    json << "],\"witness\":[" << c.witness_prime << ',' << c.witness_seed
         << ',' << c.witness.h0 << ',' << c.witness.h1 << "]}\n";
  }

  void put_report(const std::string& tag, const HilbertReport& r) {
    json << "{\"tag\":\"" << tag << "\",\"d\":" << r.d << ",\"n\":" << r.n
         << ",\"sheaf_dim\":" << r.sheaf_dim << ",\"rank\":" << r.rank
         << ",\"h0\":" << r.h0 << ",\"h1\":" << r.h1 << "}\n";
  }

  void put_bounds(const std::string& tag, const HoraceBounds& hb) {
    json << "{\"tag\":\"" << tag << "\",\"d\":" << hb.d << ",\"lower\":"
         << hb.lower << ",\"upper\":" << hb.upper << ",\"lower_refined\":"
         << hb.lower_refined << ",\"residual\":[" << hb.residual_h0 << ','
         << hb.residual_h1 << "],\"trace\":[" << hb.trace_h0 << ','
         << hb.trace_h1 << "],\"exact\":" << (hb.exact ? "true" : "false")
         << "}\n";
  }

  void put_value(const std::string& tag, long v) {
    json << "{\"tag\":\"" << tag << "\",\"value\":" << v << "}\n";
  }

  void put_pair(const std::string& tag, long x, long y) {
    json << "{\"tag\":\"" << tag << "\",\"value\":[" << x << ',' << y
         << "]}\n";
  }
};

// 1. The four defect cells: free sampling observes the super-expected pair
// across both primes, the adapted configuration reproduces it by direct
// rank, and its residual/trace split pins h0 two-sided at the same value.
bool check_defect_quadruple(Battery& B) {
  const std::pair<ExceptionalCase, std::pair<long, long>> cases[] = {
      {ExceptionalCase::x22_d4, {1, 2}},
      {ExceptionalCase::x30_d4, {1, 5}},
      {ExceptionalCase::x31_d5, {4, 2}},
      {ExceptionalCase::x40_d6, {10, 2}},
  };
  bool ok = true;
  for (const auto& [id, pair] : cases) {
    const auto [h0, h1] = pair;
    try {
      ExceptionalCertificate ec = exceptional_certificate(id);
      ok = ok && ec.ok;
      ok = ok && ec.adapted.h0 == h0 && ec.adapted.h1 == h1;
      ok = ok && ec.bounds.exact && ec.bounds.upper == h0 &&
           ec.bounds.lower_refined == h0 && ec.bounds.lower <= h0;
      ok = ok && ec.sampled.verdict == Verdict::defect_observed &&
           ec.sampled.defect_h0 == h0 && ec.sampled.defect_h1 == h1;
      B.put_cert(ec.info.name, ec.sampled);
      B.put_bounds(ec.info.name, ec.bounds);
    } catch (const Error&) {
      ok = false;
    }
  }
  return ok;
}

// 2. Z(4,1) at degree 6: both cohomology groups stay nonzero in every
// sampled trial, and the adapted two-sided certificate agrees.
bool check_z41_positivity(Battery& B) {
  TrialCertificate c = general_hilbert(FamilySpec::lines_family(4, 1), 6);
  B.put_cert("Z41_d6", c);
  bool ok = !c.log.empty();
  for (const TrialRecord& t : c.log) ok = ok && t.h0 > 0 && t.h1 > 0;
  try {
    ExceptionalCertificate ec =
        exceptional_certificate(ExceptionalCase::x41_d6);
    ok = ok && ec.ok && ec.bounds.exact && ec.adapted.h0 > 0 &&
         ec.adapted.h1 > 0;
    B.put_bounds(ec.info.name, ec.bounds);
  } catch (const Error&) {
    ok = false;
  }
  return ok;
}

// 3. a = 2 sweep over b = 0..20, all degrees up to critical + 1: only
// (b, d) = (2, 4) is flagged, with defect pair (1, 2); every other b is
// certified outright by the two-point criterion.
bool check_sweep_a2(Battery& B) {
  bool ok = true;
  for (long b = 0; b <= 20; ++b) {
    SweepResult res = maximal_rank_sweep(2, b);
    const std::string tag = "sweep_a2_b" + std::to_string(b);
    for (const SweepCell& cell : res.cells) B.put_cert(tag, cell.cert);
    if (b == 2) {
      ok = ok && res.flagged == std::vector<long>{4} && !res.maximal_rank;
      bool found = false;
      for (const SweepCell& cell : res.cells)
        if (cell.d == 4) {
          found = true;
          ok = ok && cell.cert.verdict == Verdict::defect_observed &&
               cell.cert.defect_h0 == 1 && cell.cert.defect_h1 == 2;
        }
      ok = ok && found;
    } else {
      ok = ok && res.flagged.empty() && res.maximal_rank &&
           res.vanishing_below_critical && res.regular_at_critical;
    }
  }
  return ok;
}

// 4. a = 3 sweep over b = 0..12: exactly (0, 4) and (1, 5) are flagged,
// and Z(3,2) already has h0 = 0 at degree 5.
bool check_sweep_a3(Battery& B) {
  bool ok = true;
  for (long b = 0; b <= 12; ++b) {
    SweepResult res = maximal_rank_sweep(3, b);
    const std::string tag = "sweep_a3_b" + std::to_string(b);
    for (const SweepCell& cell : res.cells) B.put_cert(tag, cell.cert);
    if (b == 0) {
      ok = ok && res.flagged == std::vector<long>{4} && !res.maximal_rank;
    } else if (b == 1) {
      ok = ok && res.flagged == std::vector<long>{5} && !res.maximal_rank;
    } else {
      ok = ok && res.flagged.empty() && res.maximal_rank;
    }
  }
  TrialCertificate c = general_hilbert(FamilySpec::lines_family(3, 2), 5);
  B.put_cert("Z32_d5", c);
  ok = ok && c.verdict == Verdict::maximal_rank_certified &&
       c.expected_h0 == 0 && c.min_h0 == 0;
  return ok;
}

// 5. Larger spot checks: for (a, d) in {(4, 14), (5, 17)} and b in
// {0, b*, b* + 1} with b* the floor split's line count, maximal rank is
// certified at d, each cell in under a minute.
bool check_spot_cells(Battery& B) {
  bool ok = true;
  const std::pair<long, long> spots[] = {{4, 14}, {5, 17}};
  for (const auto& [a, d] : spots) {
    const long bstar = split_bc(a, d).b;
    for (long b : {long{0}, bstar, bstar + 1}) {
      const auto t0 = std::chrono::steady_clock::now();
      TrialCertificate c = general_hilbert(FamilySpec::lines_family(a, b), d);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      B.put_cert("spot_a" + std::to_string(a) + "_b" + std::to_string(b) +
                     "_d" + std::to_string(d),
                 c);
      ok = ok && c.verdict == Verdict::maximal_rank_certified && secs < 60.0;
    }
  }
  return ok;
}

// 6. Postulation combinatorics: the frozen floor-split table, the ceiling
// split closed forms, the transfer identity wherever the split is feasible,
// and the line-supply inequality across the lemma range.
bool check_combinatorics(Battery& B) {
  bool ok = true;
  const struct {
    long a, d, b, c;
  } frozen[] = {
      {2, 4, 1, 4},   {2, 6, 6, 4},    {2, 8, 12, 7},  {2, 10, 20, 4},
      {0, 8, 18, 3},  {3, 6, 3, 6},    {3, 7, 6, 6},   {3, 8, 10, 0},
      {3, 9, 13, 6},  {3, 10, 17, 6},  {3, 11, 21, 10}, {3, 13, 31, 6},
      {1, 5, 6, 4},   {1, 8, 15, 5},
  };
  for (const auto& t : frozen) {
    SplitBC s = split_bc(t.a, t.d);
    ok = ok && s.b == t.b && s.c == t.c;
    B.put_pair("split_a" + std::to_string(t.a) + "_d" + std::to_string(t.d),
               s.b, s.c);
  }
  for (long k = 1; k <= 13; ++k) {
    SplitUV uv = split_uv(0, 3 * k);
    ok = ok && uv.v == 0 && uv.u == (k + 1) * (3 * k + 2) / 2;
    uv = split_uv(0, 3 * k + 1);
    ok = ok && uv.v == 0 && uv.u == (3 * k + 4) * (k + 1) / 2;
    uv = split_uv(0, 3 * k - 1);
    ok = ok && uv.v == 2 * k && uv.u == (3 * k * k + 3 * k + 2) / 2;
  }
  long feasible = 0;
  for (long a = 0; a <= 10; ++a)
    for (long d = 2; d <= 30; ++d) {
      if (a * (3 * d + 1) > forms_dim(d)) continue;
      ok = ok && split_transfer_identity(a, d);
      ++feasible;
    }
  ok = ok && feasible > 0;
  B.put_value("transfer_feasible_pairs", feasible);
  for (long a = 1; a <= 30; ++a)
    ok = ok && line_supply_check(a, 3 * a + 1) &&
         line_supply_check(a, 3 * a + 2);
  return ok;
}

// 7. Assertion battery: the balanced assertions hold for a = 0 across
// degrees and arrow counts, regularity and vanishing hold for a = 2 on
// 5 <= d <= 9 except that vanishing at d = 5 is refuted by the (2, 4)
// defect, which the check must detect rather than certify.
bool check_assertions(Battery& B) {
  bool ok = true;
  for (long d = 5; d <= 10; ++d) {
    AssertionCheck c = check_assertion(AssertionKind::balanced, 0, d, 0);
    ok = ok && c.side_ok && c.certified;
    B.put_cert("C0_d" + std::to_string(d), c.cert);
  }
  for (long e = 0; e <= 5; ++e)
    for (long d : {long{6}, long{7}}) {
      AssertionCheck c = check_assertion(AssertionKind::balanced, 0, d, e);
      ok = ok && c.side_ok && c.certified;
      B.put_cert("C" + std::to_string(e) + "_d" + std::to_string(d), c.cert);
    }
  for (long d = 5; d <= 9; ++d) {
    AssertionCheck e2 = check_assertion(AssertionKind::regularity, 2, d);
    ok = ok && e2.side_ok && e2.certified;
    B.put_cert("E_a2_d" + std::to_string(d), e2.cert);
    AssertionCheck f2 = check_assertion(AssertionKind::vanishing, 2, d);
    B.put_cert("F_a2_d" + std::to_string(d), f2.cert);
    if (d == 5)
      ok = ok && f2.side_ok && !f2.certified && f2.check_degree == 4 &&
           f2.cert.verdict == Verdict::defect_observed &&
           f2.cert.defect_h0 == 1 && f2.cert.defect_h1 == 2;
    else
      ok = ok && f2.side_ok && f2.certified;
  }
  return ok;
}

// 8. Property suites: Euler identity and full component rank on fixed
// single components, the arrow condition count, the residual/trace
// sandwich on decomposable samples, the a = 0 grid, h0(2) = 0 once two
// double lines are present, and h1 regularity of Z(2,0) from degree 3 on.
bool check_properties(Battery& B) {
  bool ok = true;

  // Single components impose independent conditions in every degree here:
  // rank equals sheaf dim, and h0 - h1 = n - sheaf_dim throughout.
  for (u64 p : default_primes) {
    PrimeField f(p);
    const Point e0 = make_point(f, {1, 0, 0, 0});
    const Point e1 = make_point(f, {0, 1, 0, 0});
    const Point e2 = make_point(f, {0, 0, 1, 0});
    const Line l01 = make_line(f, e0, e1);
    const Line l02 = make_line(f, e0, e2);
    const std::vector<Component> comps = {
        PointComp{e0},
        SpaceDoublePoint{e0},
        PlanarDoublePoint{e0, make_plane(f, {0, 0, 0, 1})},
        Arrow{e0, e1},
        LineComp{l01},
        DoubleLineComp{l01},
        NodalConic{l01, l02, e0},
        Sundial{l01, l02, e0},
    };
    for (size_t i = 0; i < comps.size(); ++i)
      for (long d = 1; d <= 10; ++d) {
        Configuration cfg(f, false);
        cfg.add(comps[i]);
        HilbertReport r = hilbert_report(cfg, d);
        ok = ok && r.rank == r.sheaf_dim;
        ok = ok && r.h0 - r.h1 == r.n - r.sheaf_dim;
        B.put_report("comp" + std::to_string(i) + "_p" + std::to_string(p), r);
      }
  }

  // e general arrows impose exactly min(n, 2e) conditions.
  for (long e = 1; e <= 20; ++e)
    for (long d = 1; d <= 8; ++d) {
      FamilySpec spec;
      spec.arrows = e;
      TrialCertificate c = general_hilbert(spec, d);
      ok = ok && c.verdict == Verdict::maximal_rank_certified;
      B.put_cert("arrows" + std::to_string(e) + "_d" + std::to_string(d), c);
    }

  // Residual/trace sandwich on decomposable samples; when the bound is
  // exact the upper end is attained.
  {
    FamilySpec specs[4];
    specs[0].double_lines = 1;
    specs[0].double_lines_on_quadric = 1;
    specs[0].lines = 2;
    specs[1].double_lines = 2;
    specs[1].double_lines_on_quadric = 2;
    specs[2].lines = 3;
    specs[2].lines_on_quadric = 1;
    specs[3].conics = 2;
    Rng root(default_seed);
    u64 idx = 0;
    for (u64 p : default_primes) {
      PrimeField f(p);
      for (int si = 0; si < 4; ++si)
        for (long d = 2; d <= 6; ++d) {
          Rng cell = root.child(idx++);
          Configuration cfg = sample_configuration(f, specs[si], cell, true);
          HilbertReport rep = hilbert_report(cfg, d);
          HoraceBounds hb = horace_bounds(cfg, d);
          ok = ok && hb.lower <= rep.h0 && rep.h0 <= hb.upper;
          if (hb.exact) ok = ok && rep.h0 == hb.upper;
          const std::string tag = "sandwich" + std::to_string(si) + "_p" +
                                  std::to_string(p) + "_d" + std::to_string(d);
          B.put_report(tag, rep);
          B.put_bounds(tag, hb);
        }
    }
  }

  // Plain line unions: maximal rank across the whole small grid.
  for (long b = 1; b <= 12; ++b)
    for (long d = 1; d <= 8; ++d) {
      TrialCertificate c = general_hilbert(FamilySpec::lines_family(0, b), d);
      ok = ok && c.verdict == Verdict::maximal_rank_certified;
      B.put_cert("lines_b" + std::to_string(b) + "_d" + std::to_string(d), c);
    }

  // No quadric contains two or more general double lines.
  for (long a = 2; a <= 6; ++a)
    for (long b = 0; b <= 2; ++b) {
      TrialCertificate c = general_hilbert(FamilySpec::lines_family(a, b), 2);
      ok = ok && c.verdict == Verdict::maximal_rank_certified && c.min_h0 == 0;
      B.put_cert("q2_a" + std::to_string(a) + "_b" + std::to_string(b), c);
    }

  // Z(2,0): n = sheaf_dim at d = 3 (so both groups vanish), h1 = 0 onward.
  for (long d = 3; d <= 8; ++d) {
    TrialCertificate c = general_hilbert(FamilySpec::lines_family(2, 0), d);
    ok = ok && c.verdict == Verdict::maximal_rank_certified &&
         c.expected_h1 == 0;
    if (d == 3) ok = ok && c.min_h0 == 0;
    B.put_cert("Z20_d" + std::to_string(d), c);
  }
  return ok;
}

struct Outcome {
  std::vector<std::pair<std::string, bool>> checks;
  std::string stream;
};

Outcome run_battery() {
  Battery B;
  Outcome out;
  out.checks.emplace_back(
      "defect quadruple (2,2)@4 (3,0)@4 (3,1)@5 (4,0)@6 certified two-sided",
      check_defect_quadruple(B));
  out.checks.emplace_back("Z(4,1)@6 keeps h0 > 0 and h1 > 0 in every trial",
                          check_z41_positivity(B));
  out.checks.emplace_back(
      "a=2 sweep b=0..20: only (2,4) flagged, rest certified",
      check_sweep_a2(B));
  out.checks.emplace_back(
      "a=3 sweep b=0..12: exactly (0,4),(1,5) flagged; h0(Z(3,2),5)=0",
      check_sweep_a3(B));
  out.checks.emplace_back(
      "spot cells (4,14),(5,17) x {0,b*,b*+1} certified under 60s each",
      check_spot_cells(B));
  out.checks.emplace_back(
      "split tables, closed forms, transfer identity, line supply",
      check_combinatorics(B));
  out.checks.emplace_back(
      "assertion battery certified; vanishing(2,5) correctly refuted",
      check_assertions(B));
  out.checks.emplace_back(
      "property suites: ranks, arrows, sandwich, line grid, quadrics",
      check_properties(B));
  out.stream = B.json.str();
  return out;
}

}  // namespace

int main() {
  const Outcome first = run_battery();
  const Outcome second = run_battery();

  bool all = true;
  int num = 1;
  for (const auto& [label, ok] : first.checks) {
    std::printf("[%s] %d: %s\n", ok ? "PASS" : "FAIL", num++, label.c_str());
    all = all && ok;
  }

  bool same = !first.stream.empty() && first.stream == second.stream;
  for (size_t i = 0; i < first.checks.size(); ++i)
    same = same && first.checks[i].second == second.checks[i].second;
  std::printf("[%s] %d: identical seeds give byte-identical record streams "
              "(%zu bytes)\n",
              same ? "PASS" : "FAIL", num, first.stream.size());
  all = all && same;

  return all ? 0 : 1;
}
