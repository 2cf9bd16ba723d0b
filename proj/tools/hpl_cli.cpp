// hpl: exact Hilbert functions of unions of lines and double lines in P^3
// over GF(p), from the command line.
//
// Subcommands:
//   hilbert   h^0/h^1 of a sampled family (or an --input file) at given degrees
//   table     per-degree verdict sweep, certified by the two-point criterion
//   assert    check one of the parametric assertions C / E / F
//   horace    residual/trace bounds; certify the exceptional defect cases
//   split     floor split (b, c) and ceiling split (u, v) at (a, d)
//
// Records are emitted on stdout, one JSON object per line by default
// (--format csv|text for flat views). Without --timing the output is a pure
// function of the arguments and seed: two identical invocations are
// byte-identical. Exit codes: 0 all cells certified / expectations met,
// 1 computation or certificate failure, 2 usage.

#include <hpl/hpl.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

using hpl::u32;
using hpl::u64;
using nlohmann::ordered_json;

// Argument problems found after CLI11 parsing; mapped to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- ranges ---------------------------------------------------------------

struct Range {
  long lo = 0, hi = 0;
};

Range parse_range(const std::string& s, const std::string& flag) {
  auto num = [&](const std::string& t) -> long {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(t, &pos);
    } catch (...) {
      pos = std::string::npos;
    }
    if (pos != t.size() || t.empty())
      throw UsageError(flag + ": expected N or LO..HI, got '" + s + "'");
    return v;
  };
  std::size_t dots = s.find("..");
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = num(s);
  } else {
    r.lo = num(s.substr(0, dots));
    r.hi = num(s.substr(dots + 2));
  }
  if (r.hi < r.lo) throw UsageError(flag + ": empty range '" + s + "'");
  return r;
}

// ---- common options ---------------------------------------------------------

struct Common {
  std::vector<u64> primes = hpl::default_primes;
  long trials = hpl::default_trials;
  u64 seed = hpl::default_seed;
  std::string format = "json";
  std::string expect_path;
  bool timing = false;

  // raw parse state, resolved by finish()
  std::vector<u64> primes_arg;
  std::string seed_arg;
};

u64 parse_seed(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  u64 v = 0;
  try {
    if (s.empty() || s[0] == '-') throw UsageError("");
    v = std::stoull(s, &pos, 0);
  } catch (...) {
    pos = std::string::npos;
  }
  if (pos != s.size())
    throw UsageError(what + ": expected an unsigned integer (decimal or 0x...), got '" +
                     s + "'");
  return v;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--prime", c.primes_arg,
                  "prime modulus, repeatable (default: 32003 65521)");
  cmd->add_option("--trials", c.trials, "samples per prime (default: 3)");
  cmd->add_option("--seed", c.seed_arg,
                  "root seed, decimal or 0x hex (default: 0xB10C5EED, or HPL_SEED)");
  cmd->add_option("--format", c.format, "output format (default: json)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  cmd->add_option("--expect", c.expect_path,
                  "JSON records to compare against, exact integer equality");
  cmd->add_flag("--timing", c.timing,
                "append elapsed_ms to records (output no longer byte-stable)");
}

void finish_common(Common& c) {
  if (!c.primes_arg.empty()) c.primes = c.primes_arg;
  for (u64 p : c.primes) {
    try {
      hpl::PrimeField probe(p);
    } catch (const hpl::Error& e) {
      throw UsageError(std::string("--prime: ") + e.what());
    }
  }
  if (c.trials < 1) throw UsageError("--trials: need at least 1");
  if (!c.seed_arg.empty()) {
    c.seed = parse_seed(c.seed_arg, "--seed");
  } else if (const char* env = std::getenv("HPL_SEED")) {
    c.seed = parse_seed(env, "HPL_SEED");
  }
}

ordered_json common_params(const Common& c) {
  ordered_json p;
  p["trials"] = c.trials;
  p["primes"] = c.primes;
  p["seed"] = c.seed;
  return p;
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  long long ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

// ---- record building --------------------------------------------------------

ordered_json base_record(const char* command, ordered_json params) {
  ordered_json r;
  r["schema"] = 1;
  r["command"] = command;
  r["params"] = std::move(params);
  return r;
}

void put_report(ordered_json& r, const hpl::HilbertReport& rep, u64 prime,
                ordered_json seed, const char* verdict) {
  r["prime"] = prime;
  r["seed"] = std::move(seed);
  r["n"] = rep.n;
  r["sheaf_dim"] = rep.sheaf_dim;
  r["rank"] = rep.rank;
  r["h0"] = rep.h0;
  r["h1"] = rep.h1;
  r["expected_h0"] = rep.expected_h0;
  r["expected_h1"] = rep.expected_h1;
  r["verdict"] = verdict;
}

void put_certificate(ordered_json& r, const hpl::TrialCertificate& cert) {
  put_report(r, cert.witness, cert.witness_prime, cert.witness_seed,
             hpl::verdict_name(cert.verdict));
}

void put_no_report(ordered_json& r, const char* verdict) {
  for (const char* k : {"prime", "seed", "n", "sheaf_dim", "rank", "h0", "h1",
                        "expected_h0", "expected_h1"})
    r[k] = nullptr;
  r["verdict"] = verdict;
}

ordered_json bounds_json(const hpl::HoraceBounds& hb) {
  ordered_json b;
  b["lower"] = hb.lower;
  b["upper"] = hb.upper;
  b["lower_refined"] = hb.lower_refined;
  b["residual_h0"] = hb.residual_h0;
  b["residual_h1"] = hb.residual_h1;
  b["trace_h0"] = hb.trace_h0;
  b["trace_h1"] = hb.trace_h1;
  b["trace_scheme_exact"] = hb.trace_scheme_exact;
  b["exact"] = hb.exact;
  return b;
}

// ---- output -----------------------------------------------------------------

class Emitter {
 public:
  Emitter(std::string format, std::vector<std::string> columns)
      : format_(std::move(format)), columns_(std::move(columns)) {}

  void add(ordered_json rec) { recs_.push_back(std::move(rec)); }

  // Column lookup: record root first, then params, then bounds, so the
  // per-cell seed wins over the echoed root seed.
  static const ordered_json* find(const ordered_json& rec,
                                  const std::string& key) {
    auto it = rec.find(key);
    if (it != rec.end()) return &*it;
    for (const char* scope : {"params", "bounds"}) {
      auto st = rec.find(scope);
      if (st != rec.end() && st->is_object()) {
        auto jt = st->find(key);
        if (jt != st->end()) return &*jt;
      }
    }
    return nullptr;
  }

  static std::string scalar(const ordered_json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_null()) return "";
    return v.dump();
  }

  void print(std::ostream& out, bool timing) const {
    if (format_ == "json") {
      for (const ordered_json& r : recs_) out << r.dump() << "\n";
      return;
    }
    std::vector<std::string> cols = columns_;
    if (timing) cols.push_back("elapsed_ms");
    if (format_ == "csv") {
      for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
      out << "\n";
      for (const ordered_json& r : recs_) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
          const ordered_json* v = find(r, cols[i]);
          out << (i ? "," : "") << (v ? scalar(*v) : "");
        }
        out << "\n";
      }
      return;
    }
    for (const ordered_json& r : recs_) {
      out << r["command"].get<std::string>();
      for (const std::string& c : cols) {
        if (c == "command") continue;
        const ordered_json* v = find(r, c);
        if (!v || v->is_null()) continue;
        out << " " << c << "=" << scalar(*v);
      }
      out << "\n";
    }
  }

  bool check_expect(const std::string& path) const;

  bool any_record() const { return !recs_.empty(); }

 private:
  std::string format_;
  std::vector<std::string> columns_;
  std::vector<ordered_json> recs_;
};

std::vector<ordered_json> load_expect(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--expect: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string body = ss.str();
  std::size_t first = body.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw UsageError("--expect: empty file " + path);
  std::vector<ordered_json> out;
  try {
    if (body[first] == '[') {
      ordered_json arr = ordered_json::parse(body);
      for (auto& e : arr) out.push_back(std::move(e));
    } else {
      std::istringstream lines(body);
      std::string line;
      while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(ordered_json::parse(line));
      }
    }
  } catch (const ordered_json::parse_error& e) {
    throw UsageError("--expect: " + path + ": " + e.what());
  }
  return out;
}

// Every key present in `want` must exist in `got` and match exactly;
// extra keys in `got` are fine, so baselines may pin any subset of fields.
bool subset_match(const ordered_json& want, const ordered_json& got,
                  const std::string& path, std::string* why) {
  if (want.is_object()) {
    if (!got.is_object()) {
      *why = path + ": expected an object";
      return false;
    }
    for (auto it = want.begin(); it != want.end(); ++it) {
      auto jt = got.find(it.key());
      if (jt == got.end()) {
        *why = path + "/" + it.key() + ": missing";
        return false;
      }
      if (!subset_match(it.value(), *jt, path + "/" + it.key(), why))
        return false;
    }
    return true;
  }
  if (want != got) {
    *why = path + ": expected " + want.dump() + ", got " + got.dump();
    return false;
  }
  return true;
}

bool Emitter::check_expect(const std::string& path) const {
  std::vector<ordered_json> want = load_expect(path);
  if (want.size() != recs_.size()) {
    std::cerr << "hpl: expect: " << path << " holds " << want.size()
              << " records, the run produced " << recs_.size() << "\n";
    return false;
  }
  for (std::size_t i = 0; i < want.size(); ++i) {
    std::string why;
    if (!subset_match(want[i], recs_[i], "record " + std::to_string(i),
                      &why)) {
      std::cerr << "hpl: expect mismatch: " << why << "\n";
      return false;
    }
  }
  return true;
}

int finish(Emitter& em, const Common& c, bool failed) {
  em.print(std::cout, c.timing);
  if (!c.expect_path.empty() && !em.check_expect(c.expect_path)) return 1;
  return failed ? 1 : 0;
}

// ---- custom configurations (--input) ----------------------------------------

// One record of the input file: either a fully specified component, rebuilt
// over each prime from its raw integers, or a template entry sampled per
// trial (optionally on the standard quadric).
struct InputEntry {
  ordered_json raw;
  std::string type;
  bool sampled = false;
  hpl::TemplateEntry::Kind kind = hpl::TemplateEntry::Kind::line;
  bool on_quadric = false;
};

hpl::Vec4 vec4_value(const hpl::PrimeField& f, const ordered_json& a,
                     const std::string& what) {
  if (!a.is_array() || a.size() != 4)
    throw UsageError("--input: " + what + " must be an array of 4 integers");
  hpl::Vec4 v{};
  const long long m = static_cast<long long>(f.p());
  for (int i = 0; i < 4; ++i) {
    if (!a[i].is_number_integer())
      throw UsageError("--input: " + what + " must hold integers");
    long long x = a[i].get<long long>();
    v[static_cast<std::size_t>(i)] = static_cast<u32>(((x % m) + m) % m);
  }
  return v;
}

hpl::Component fixed_component(const hpl::PrimeField& f, const InputEntry& e) {
  const ordered_json& rec = e.raw;
  const std::string& type = e.type;
  auto field = [&](const char* key) -> const ordered_json& {
    auto it = rec.find(key);
    if (it == rec.end())
      throw UsageError("--input: '" + type + "' needs '" + key + "'");
    return *it;
  };
  auto pt = [&](const char* key) {
    return hpl::make_point(f, vec4_value(f, field(key), key));
  };
  auto two_points = [&](const char* key) -> std::array<hpl::Point, 2> {
    const ordered_json& v = field(key);
    if (!v.is_array() || v.size() != 2)
      throw UsageError("--input: '" + std::string(key) +
                       "' must be a pair of points");
    return {hpl::make_point(f, vec4_value(f, v[0], key)),
            hpl::make_point(f, vec4_value(f, v[1], key))};
  };
  if (type == "point") return hpl::PointComp{pt("point")};
  if (type == "space_double_point") return hpl::SpaceDoublePoint{pt("point")};
  if (type == "planar_double_point")
    return hpl::PlanarDoublePoint{
        pt("point"), hpl::make_plane(f, vec4_value(f, field("plane"), "plane"))};
  if (type == "arrow") return hpl::Arrow{pt("point"), pt("direction")};
  if (type == "line" || type == "double_line") {
    auto s = two_points("span");
    hpl::Line l = hpl::make_line(f, s[0], s[1]);
    if (type == "line") return hpl::LineComp{l};
    return hpl::DoubleLineComp{l};
  }
  if (type == "nodal_conic" || type == "sundial") {
    hpl::Point node = pt("node");
    auto legs = two_points("legs");
    hpl::Line l1 = hpl::make_line(f, node, legs[0]);
    hpl::Line l2 = hpl::make_line(f, node, legs[1]);
    if (type == "nodal_conic") return hpl::NodalConic{l1, l2, node};
    return hpl::Sundial{l1, l2, node};
  }
  throw UsageError("--input: unknown component type '" + type + "'");
}

bool has_coordinates(const ordered_json& rec, const std::string& type) {
  if (type == "line" || type == "double_line") return rec.contains("span");
  if (type == "nodal_conic" || type == "sundial")
    return rec.contains("node") || rec.contains("legs");
  return rec.contains("point");
}

std::vector<InputEntry> load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--input: cannot open " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const ordered_json::parse_error& e) {
    throw UsageError("--input: " + path + ": " + e.what());
  }
  if (!doc.is_array() || doc.empty())
    throw UsageError("--input: expected a non-empty array of component records");
  std::vector<InputEntry> out;
  for (const ordered_json& rec : doc) {
    if (!rec.is_object() || !rec.contains("type") || !rec["type"].is_string())
      throw UsageError("--input: every record needs a string 'type'");
    InputEntry e;
    e.raw = rec;
    e.type = rec["type"].get<std::string>();
    bool oq = false;
    if (auto it = rec.find("on_quadric"); it != rec.end()) {
      if (!it->is_boolean())
        throw UsageError("--input: 'on_quadric' must be a boolean");
      oq = it->get<bool>();
    }
    if (has_coordinates(rec, e.type)) {
      if (oq)
        throw UsageError(
            "--input: 'on_quadric' directs sampling; drop it or drop the "
            "coordinates");
      e.sampled = false;
    } else {
      e.sampled = true;
      e.on_quadric = oq;
      if (e.type == "point")
        e.kind = hpl::TemplateEntry::Kind::point;
      else if (e.type == "space_double_point")
        e.kind = hpl::TemplateEntry::Kind::space_double_point;
      else if (e.type == "arrow")
        e.kind = hpl::TemplateEntry::Kind::arrow;
      else if (e.type == "line")
        e.kind = hpl::TemplateEntry::Kind::line;
      else if (e.type == "double_line")
        e.kind = hpl::TemplateEntry::Kind::double_line;
      else
        throw UsageError("--input: '" + e.type +
                         "' needs explicit coordinates");
    }
    out.push_back(std::move(e));
  }
  return out;
}

hpl::FamilySpec spec_of(const hpl::PrimeField& f,
                        const std::vector<InputEntry>& entries) {
  hpl::FamilySpec s;
  for (const InputEntry& e : entries) {
    hpl::TemplateEntry t;
    if (e.sampled) {
      t.kind = e.kind;
      t.on_quadric = e.on_quadric;
    } else {
      t.fixed = fixed_component(f, e);
    }
    s.custom.push_back(std::move(t));
  }
  return s;
}

// ---- hilbert ----------------------------------------------------------------

// Same protocol as the engine's certificate, with the family respecified per
// prime so fixed coordinates reduce mod the right modulus. Child indices
// match the engine's, so a cell is reproducible in isolation.
struct CellOutcome {
  hpl::HilbertReport witness;
  u64 witness_prime = 0;
  u64 witness_seed = 0;
  hpl::Verdict verdict = hpl::Verdict::inconclusive;
};

CellOutcome input_cell(const std::vector<InputEntry>& entries, long d,
                       const Common& c) {
  hpl::Rng root(c.seed);
  CellOutcome out;
  bool first = true, all_agree = true;
  long agree_h0 = 0, agree_h1 = 0, expected_h0 = 0;
  for (std::size_t pi = 0; pi < c.primes.size(); ++pi) {
    hpl::PrimeField f(c.primes[pi]);
    hpl::FamilySpec spec = spec_of(f, entries);
    spec.validate();
    if (pi == 0)
      expected_h0 = std::max(hpl::forms_dim(d) - spec.sheaf_dim(d), long{0});
    for (long t = 0; t < c.trials; ++t) {
      hpl::Rng cell = root.child(pi * static_cast<u64>(c.trials) +
                                 static_cast<u64>(t));
      u64 cell_seed = cell.seed();
      hpl::Configuration cfg = hpl::sample_configuration(f, spec, cell);
      hpl::HilbertReport rep = hpl::hilbert_report(cfg, d);
      if (first || rep.h0 < out.witness.h0) {
        out.witness = rep;
        out.witness_prime = c.primes[pi];
        out.witness_seed = cell_seed;
      }
      if (first) {
        agree_h0 = rep.h0;
        agree_h1 = rep.h1;
      } else if (rep.h0 != agree_h0 || rep.h1 != agree_h1) {
        all_agree = false;
      }
      first = false;
      if (rep.maximal_rank_at_d) {
        out.verdict = hpl::Verdict::maximal_rank_certified;
        return out;
      }
    }
  }
  if (all_agree && c.primes.size() >= 2 && agree_h0 > expected_h0)
    out.verdict = hpl::Verdict::defect_observed;
  return out;
}

int cmd_hilbert(const Common& c, const std::string& a_s, const std::string& b_s,
                const std::string& d_s, const std::string& input_path,
                bool ab_given) {
  Emitter em(c.format,
             {"command", "a", "b", "input", "d", "prime", "seed", "n",
              "sheaf_dim", "rank", "h0", "h1", "expected_h0", "expected_h1",
              "verdict"});
  Range rd = parse_range(d_s, "--d");
  if (rd.lo < 0) throw UsageError("--d: need non-negative degrees");
  bool failed = false;
  if (!input_path.empty()) {
    if (ab_given)
      throw UsageError("hilbert: --input replaces --a/--b");
    std::vector<InputEntry> entries = load_input(input_path);
    for (long d = rd.lo; d <= rd.hi; ++d) {
      Stopwatch sw;
      CellOutcome cell = input_cell(entries, d, c);
      ordered_json params;
      params["input"] = input_path;
      params["d"] = d;
      params.update(common_params(c));
      ordered_json r = base_record("hilbert", std::move(params));
      put_report(r, cell.witness, cell.witness_prime, cell.witness_seed,
                 hpl::verdict_name(cell.verdict));
      if (c.timing) r["elapsed_ms"] = sw.ms();
      if (cell.verdict == hpl::Verdict::inconclusive) failed = true;
      em.add(std::move(r));
    }
    return finish(em, c, failed);
  }
  Range ra = parse_range(a_s, "--a");
  Range rb = parse_range(b_s, "--b");
  if (ra.lo < 0 || rb.lo < 0)
    throw UsageError("--a/--b: need non-negative counts");
  if (ra.hi == 0 && rb.hi == 0)
    throw UsageError("hilbert: need --a, --b, or --input");
  for (long a = ra.lo; a <= ra.hi; ++a)
    for (long b = rb.lo; b <= rb.hi; ++b)
      for (long d = rd.lo; d <= rd.hi; ++d) {
        Stopwatch sw;
        hpl::TrialCertificate cert =
            hpl::general_hilbert(hpl::FamilySpec::lines_family(a, b), d,
                                 c.trials, c.primes, c.seed);
        ordered_json params;
        params["a"] = a;
        params["b"] = b;
        params["d"] = d;
        params.update(common_params(c));
        ordered_json r = base_record("hilbert", std::move(params));
        put_certificate(r, cert);
        if (c.timing) r["elapsed_ms"] = sw.ms();
        if (cert.verdict == hpl::Verdict::inconclusive) failed = true;
        em.add(std::move(r));
      }
  return finish(em, c, failed);
}

// ---- table ------------------------------------------------------------------

int cmd_table(const Common& c, const std::string& a_s, const std::string& b_s,
              long dmax) {
  Emitter em(c.format,
             {"command", "a", "b", "d", "critical", "prime", "seed", "n",
              "sheaf_dim", "rank", "h0", "h1", "expected_h0", "expected_h1",
              "verdict"});
  Range ra = parse_range(a_s, "--a");
  Range rb = parse_range(b_s, "--b");
  if (ra.lo < 0 || rb.lo < 0)
    throw UsageError("--a/--b: need non-negative counts");
  if (dmax < 0) throw UsageError("--dmax: need a non-negative degree");
  bool failed = false;
  for (long a = ra.lo; a <= ra.hi; ++a)
    for (long b = rb.lo; b <= rb.hi; ++b) {
      long critical = -1;
      try {
        critical = hpl::critical_value(a, b);
      } catch (const hpl::UndefinedCriticalValue&) {
        if (dmax <= 0)
          throw UsageError("table: no critical value at a=" +
                           std::to_string(a) + " b=" + std::to_string(b) +
                           "; give --dmax");
      }
      auto cell_params = [&](long d) {
        ordered_json params;
        params["a"] = a;
        params["b"] = b;
        params["d"] = d;
        params["dmax"] = dmax;
        if (critical >= 0)
          params["critical"] = critical;
        else
          params["critical"] = nullptr;
        return params;
      };
      Stopwatch sw;
      if (critical < 0) {
        // Degenerate family without the two-point shortcut: tabulate each
        // degree directly, seeded exactly like the sweep.
        hpl::FamilySpec spec = hpl::FamilySpec::lines_family(a, b);
        hpl::Rng root(c.seed);
        for (long d = 1; d <= dmax; ++d) {
          hpl::TrialCertificate cert = hpl::general_hilbert(
              spec, d, c.trials, c.primes,
              root.child(static_cast<u64>(d)).seed());
          ordered_json params = cell_params(d);
          params["sweep_maximal_rank"] = nullptr;
          params.update(common_params(c));
          ordered_json r = base_record("table", std::move(params));
          put_certificate(r, cert);
          if (c.timing) r["elapsed_ms"] = sw.ms();
          if (cert.verdict == hpl::Verdict::inconclusive) failed = true;
          em.add(std::move(r));
        }
        continue;
      }
      hpl::SweepResult res =
          hpl::maximal_rank_sweep(a, b, dmax, c.trials, c.primes, c.seed);
      long long ms = sw.ms();  // whole sweep; cells are computed in one call
      for (const hpl::SweepCell& cell : res.cells) {
        ordered_json params = cell_params(cell.d);
        params["sweep_maximal_rank"] = res.maximal_rank;
        params["sweep_vanishing_below_critical"] =
            res.vanishing_below_critical;
        params["sweep_regular_at_critical"] = res.regular_at_critical;
        params.update(common_params(c));
        ordered_json r = base_record("table", std::move(params));
        put_certificate(r, cell.cert);
        if (c.timing) r["elapsed_ms"] = ms;
        if (cell.cert.verdict == hpl::Verdict::inconclusive) failed = true;
        em.add(std::move(r));
      }
    }
  return finish(em, c, failed);
}

// ---- assert -------------------------------------------------------------------

int cmd_assert(const Common& c, const std::string& kind_s,
               const std::string& a_s, const std::string& d_s,
               const std::string& e_s, bool e_given) {
  Emitter em(c.format,
             {"command", "kind", "a", "d", "e", "side_ok", "certified",
              "check_degree", "prime", "seed", "n", "sheaf_dim", "rank", "h0",
              "h1", "expected_h0", "expected_h1", "verdict"});
  hpl::AssertionKind kind;
  if (kind_s == "C")
    kind = hpl::AssertionKind::balanced;
  else if (kind_s == "E")
    kind = hpl::AssertionKind::regularity;
  else
    kind = hpl::AssertionKind::vanishing;
  if (e_given && kind != hpl::AssertionKind::balanced)
    throw UsageError("--e applies to kind C only");
  Range ra = parse_range(a_s, "--a");
  Range rd = parse_range(d_s, "--d");
  Range re = parse_range(e_s, "--e");
  if (ra.lo < 0 || rd.lo < 0 || re.lo < 0)
    throw UsageError("assert: need non-negative --a/--d/--e");
  bool failed = false;
  for (long a = ra.lo; a <= ra.hi; ++a)
    for (long d = rd.lo; d <= rd.hi; ++d)
      for (long e = re.lo; e <= re.hi; ++e) {
        Stopwatch sw;
        hpl::AssertionCheck chk =
            hpl::check_assertion(kind, a, d, e, c.trials, c.primes, c.seed);
        ordered_json params;
        params["kind"] = kind_s;
        params["a"] = a;
        params["d"] = d;
        params["e"] = e;
        params["side_ok"] = chk.side_ok;
        params["certified"] = chk.certified;
        params["check_degree"] = chk.check_degree;
        if (chk.side_ok) {
          ordered_json fam;
          fam["double_lines"] = chk.family.double_lines;
          fam["lines"] = chk.family.lines;
          fam["conics"] = chk.family.conics;
          fam["lines_on_quadric"] = chk.family.lines_on_quadric;
          params["family"] = std::move(fam);
        }
        params.update(common_params(c));
        ordered_json r = base_record("assert", std::move(params));
        if (!chk.cert.log.empty())
          put_certificate(r, chk.cert);
        else
          put_no_report(r, "SideConditionFailed");
        if (c.timing) r["elapsed_ms"] = sw.ms();
        if (!chk.certified) failed = true;
        em.add(std::move(r));
      }
  return finish(em, c, failed);
}

// ---- horace -------------------------------------------------------------------

int cmd_horace(const Common& c, const std::string& case_s,
               const std::string& input_path, const std::string& d_s) {
  Emitter em(c.format,
             {"command", "case", "input", "a", "b", "d", "lower", "upper",
              "lower_refined", "residual_h0", "residual_h1", "trace_h0",
              "trace_h1", "trace_scheme_exact", "exact", "prime", "seed", "n",
              "sheaf_dim", "rank", "h0", "h1", "expected_h0", "expected_h1",
              "verdict"});
  if (!case_s.empty() && !input_path.empty())
    throw UsageError("horace: --case and --input are exclusive");
  if (case_s.empty() && input_path.empty())
    throw UsageError("horace: need --case or --input");
  if (!case_s.empty()) {
    std::optional<hpl::ExceptionalCase> id =
        hpl::exceptional_case_by_name(case_s);
    if (!id)
      throw UsageError("horace: unknown case '" + case_s +
                       "' (X22_d4, X30_d4, X31_d5, X40_d6, X41_d6)");
    Stopwatch sw;
    hpl::ExceptionalCertificate ec =
        hpl::exceptional_certificate(*id, c.trials, c.primes, c.seed);
    ordered_json params;
    params["case"] = ec.info.name;
    params["a"] = ec.info.a;
    params["b"] = ec.info.b;
    params["d"] = ec.info.d;
    params["exact_pair"] = ec.info.exact_pair;
    params["ok"] = ec.ok;
    params.update(common_params(c));
    ordered_json r = base_record("horace", std::move(params));
    put_report(r, ec.adapted, ec.adapted_prime, ec.adapted_seed,
               hpl::verdict_name(ec.sampled.verdict));
    r["bounds"] = bounds_json(ec.bounds);
    if (c.timing) r["elapsed_ms"] = sw.ms();
    em.add(std::move(r));
    return finish(em, c, /*failed=*/false);
  }
  if (d_s.empty()) throw UsageError("horace --input: need --d");
  Range rd = parse_range(d_s, "--d");
  if (rd.lo < 2) throw UsageError("horace --input: need degrees >= 2");
  std::vector<InputEntry> entries = load_input(input_path);
  for (const InputEntry& e : entries)
    if (e.sampled)
      throw UsageError(
          "horace --input: every record needs explicit coordinates");
  bool failed = false;
  for (long d = rd.lo; d <= rd.hi; ++d)
    for (u64 p : c.primes) {
      Stopwatch sw;
      hpl::PrimeField f(p);
      hpl::Configuration cfg(f, /*with_reference_quadric=*/true);
      for (const InputEntry& e : entries) cfg.add(fixed_component(f, e));
      hpl::HilbertReport rep = hpl::hilbert_report(cfg, d);
      hpl::HoraceBounds hb = hpl::horace_bounds(cfg, d);
      if (rep.h0 < hb.lower || rep.h0 > hb.upper)
        throw hpl::CertificateMismatch(
            "horace: direct rank escapes the bounds at p=" +
            std::to_string(p) + ", d=" + std::to_string(d));
      ordered_json params;
      params["input"] = input_path;
      params["d"] = d;
      params["primes"] = c.primes;
      ordered_json r = base_record("horace", std::move(params));
      put_report(r, rep, p, nullptr,
                 rep.maximal_rank_at_d ? "MaximalRankCertified"
                                       : "Inconclusive");
      r["bounds"] = bounds_json(hb);
      if (c.timing) r["elapsed_ms"] = sw.ms();
      em.add(std::move(r));
    }
  return finish(em, c, failed);
}

// ---- split --------------------------------------------------------------------

int cmd_split(const Common& c, const std::string& a_s, const std::string& d_s) {
  Emitter em(c.format, {"command", "a", "d", "b", "c", "u", "v"});
  Range ra = parse_range(a_s, "--a");
  Range rd = parse_range(d_s, "--d");
  if (ra.lo < 0 || rd.lo < 0) throw UsageError("split: need non-negative --a/--d");
  bool failed = false;
  for (long a = ra.lo; a <= ra.hi; ++a)
    for (long d = rd.lo; d <= rd.hi; ++d) {
      ordered_json params;
      params["a"] = a;
      params["d"] = d;
      ordered_json r = base_record("split", std::move(params));
      try {
        hpl::SplitBC bc = hpl::split_bc(a, d);
        r["b"] = bc.b;
        r["c"] = bc.c;
      } catch (const hpl::Infeasible& e) {
        r["b"] = nullptr;
        r["c"] = nullptr;
        r["error"] = e.what();
        failed = true;
      }
      try {
        hpl::SplitUV uv = hpl::split_uv(a, d);
        r["u"] = uv.u;
        r["v"] = uv.v;
      } catch (const hpl::Infeasible&) {
        r["u"] = nullptr;
        r["v"] = nullptr;
      }
      em.add(std::move(r));
    }
  return finish(em, c, failed);
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{
      "exact Hilbert functions of unions of lines and double lines in P^3 "
      "over GF(p)"};
  app.require_subcommand(1);

  Common hc;
  std::string ha = "0", hb = "0", hd, hinput;
  CLI::App* hil = app.add_subcommand(
      "hilbert", "h^0/h^1 of a sampled family or an --input file");
  hil->add_option("--a", ha, "double lines, N or LO..HI");
  hil->add_option("--b", hb, "lines, N or LO..HI");
  hil->add_option("--d", hd, "degree, N or LO..HI")->required();
  hil->add_option("--input", hinput, "JSON component records instead of --a/--b");
  add_common(hil, hc);

  Common tc;
  std::string ta, tb = "0";
  long tdmax = 0;
  CLI::App* tab = app.add_subcommand(
      "table", "per-degree verdicts with the two-point criterion");
  tab->add_option("--a", ta, "double lines, N or LO..HI")->required();
  tab->add_option("--b", tb, "lines, N or LO..HI");
  tab->add_option("--dmax", tdmax, "top degree (default: critical value + 1)");
  add_common(tab, tc);

  Common ac;
  std::string ak, aa, ad, ae = "0";
  CLI::App* asrt =
      app.add_subcommand("assert", "check a parametric assertion");
  asrt->add_option("--kind", ak, "C (balanced), E (regularity), F (vanishing)")
      ->required()
      ->check(CLI::IsMember({"C", "E", "F"}));
  asrt->add_option("--a", aa, "double lines, N or LO..HI")->required();
  asrt->add_option("--d", ad, "degree, N or LO..HI")->required();
  asrt->add_option("--e", ae, "ruling lines for kind C, N or LO..HI");
  add_common(asrt, ac);

  Common oc;
  std::string ocase, oinput, od;
  CLI::App* hor = app.add_subcommand(
      "horace", "residual/trace bounds and exceptional-case certificates");
  hor->add_option("--case", ocase,
                  "exceptional case (X22_d4, X30_d4, X31_d5, X40_d6, X41_d6)");
  hor->add_option("--input", oinput,
                  "JSON component records with explicit coordinates");
  hor->add_option("--d", od, "degree for --input, N or LO..HI");
  add_common(hor, oc);

  Common sc;
  std::string sa, sd;
  CLI::App* spl =
      app.add_subcommand("split", "floor and ceiling splits at (a, d)");
  spl->add_option("--a", sa, "double lines, N or LO..HI")->required();
  spl->add_option("--d", sd, "degree, N or LO..HI")->required();
  add_common(spl, sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "hpl: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(hil)) {
      finish_common(hc);
      bool ab_given = hil->count("--a") > 0 || hil->count("--b") > 0;
      return cmd_hilbert(hc, ha, hb, hd, hinput, ab_given);
    }
    if (app.got_subcommand(tab)) {
      finish_common(tc);
      return cmd_table(tc, ta, tb, tdmax);
    }
    if (app.got_subcommand(asrt)) {
      finish_common(ac);
      return cmd_assert(ac, ak, aa, ad, ae, asrt->count("--e") > 0);
    }
    if (app.got_subcommand(hor)) {
      finish_common(oc);
      return cmd_horace(oc, ocase, oinput, od);
    }
    if (app.got_subcommand(spl)) {
      finish_common(sc);
      return cmd_split(sc, sa, sd);
    }
  } catch (const UsageError& e) {
    std::cerr << "hpl: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hpl: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
