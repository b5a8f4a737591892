// Acceptance checks 1-9. One PASS/FAIL line per criterion; exit status is
// nonzero if any line fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "reference.hpp"
#include "walshforge/report.hpp"

using namespace walshforge;
namespace fs = std::filesystem;

namespace {

using Histogram = std::map<std::int64_t, std::uint64_t>;

struct Check {
  bool ok = true;
  std::vector<std::string> failures;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failures.size() < 8) failures.push_back(what);
  }
};

// Every spectrum computed below, for the moment identities in criterion 8f.
std::vector<std::pair<unsigned, Histogram>> g_spectra;

unsigned threads() { return std::max(1u, std::thread::hardware_concurrency()); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::int64_t p2(unsigned e) { return std::int64_t{1} << e; }

// Values in {0, +-2^((n+r)/2)} with the top value attained.
bool is_plateaued(const Histogram& h, unsigned n, unsigned r) {
  if ((n + r) % 2) return false;
  const std::int64_t top = p2((n + r) / 2);
  bool hit = false;
  for (const auto& [v, c] : h) {
    if (v != 0 && std::abs(v) != top) return false;
    hit = hit || (v != 0 && c > 0);
  }
  return hit;
}

std::string row_tag(unsigned n) { return "n=" + std::to_string(n); }

void report(unsigned id, const std::string& title, const Check& c, double secs) {
  std::ostringstream t;
  t.precision(2);
  t << std::fixed << secs;
  std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " [" << t.str() << " s]\n";
  for (const auto& f : c.failures) std::cout << "    " << f << '\n';
  std::cout.flush();
}

Verdict run_case(const TheoremCase& c) {
  Verdict v = verify_theorem(c);
  g_spectra.emplace_back(c.spec.ambient_degree(), v.measured);
  return v;
}

std::vector<Verdict> run_cases(const std::vector<TheoremCase>& cases) {
  std::vector<Verdict> out = verify_theorems(cases, threads());
  for (const Verdict& v : out) g_spectra.emplace_back(v.theorem.spec.ambient_degree(), v.measured);
  return out;
}

// ---------------------------------------------------------------------------

struct TableRow {
  unsigned n;
  Histogram histogram;  // empty: not frozen
  std::string cls;
  std::int64_t nl;
  unsigned degree, ai;
};

Check check_table(const std::string& name, const std::vector<TableRow>& want) {
  Check c;
  const Reproduction r = reproduce(name, 14, {.threads = threads()});
  c.expect(r.pass(), name + ": reproduction reports a mismatch");
  c.expect(r.rows.size() == want.size(), name + ": row count");
  for (std::size_t i = 0; i < std::min(r.rows.size(), want.size()); ++i) {
    const Criteria& m = r.rows[i].measured;
    const TableRow& w = want[i];
    g_spectra.emplace_back(m.n, m.histogram);
    const std::string at = name + " row " + std::to_string(i + 1) + " " + row_tag(m.n);
    c.expect(m.n == w.n, at + ": n");
    if (!w.histogram.empty()) c.expect(m.histogram == w.histogram, at + ": histogram " + format_histogram(m.histogram));
    if (!w.cls.empty()) c.expect(m.classification == w.cls, at + ": class " + m.classification);
    c.expect(m.nonlinearity == w.nl, at + ": nl " + std::to_string(m.nonlinearity));
    c.expect(m.degree == w.degree, at + ": degree " + std::to_string(m.degree));
    c.expect(m.ai == w.ai, at + ": ai " + (m.ai ? std::to_string(*m.ai) : std::string("none")));
    c.expect(m.balanced, at + ": not balanced");
  }
  return c;
}

Check criterion1() {
  Check c = check_table("table1", {
                                      {6, {{0, 30}, {8, 18}, {-8, 6}, {-16, 10}}, "four-valued", 24, 4, 3},
                                      {10, {{0, 498}, {32, 330}, {-32, 30}, {-64, 166}}, "four-valued", 480, 6, 5},
                                      {14, {{0, 8130}, {128, 5418}, {-128, 126}, {-256, 2710}}, "four-valued", 8064, 8, 7},
                                  });
  // Runtime budget: spectrum under 1 s, AI under 10 min at n = 14.
  const ConstructionSpec s = parse_spec("family=niho-trinomial m=7 variant=one-fifth c=subfield:2");
  const BooleanFunction f = parameterize(Permutation::create(s));
  auto t0 = std::chrono::steady_clock::now();
  (void)walsh_spectrum(f);
  c.expect(seconds_since(t0) < 1.0, "n=14 spectrum took over 1 s");
  t0 = std::chrono::steady_clock::now();
  (void)algebraic_immunity(f);
  c.expect(seconds_since(t0) < 600.0, "n=14 algebraic immunity took over 10 min");
  return c;
}

Check criterion2() {
  Check c;
  for (unsigned m : {3u, 5u, 7u}) {
    const auto cases = sample_cases(TheoremId::FourValuedDist, {.m = m, .count = 2});
    c.expect(cases.size() == 2, "m=" + std::to_string(m) + ": expected both c in GF(4) \\ GF(2)");
    const std::int64_t N = p2(2 * m), M = p2(m);
    const Histogram want{{0, (N - M + 4) / 2}, {M, (N - M - 2) / 3}, {-M, M - 2}, {-2 * M, (N - M + 4) / 6}};
    std::set<std::uint32_t> cs;
    for (const Verdict& v : run_cases(cases)) {
      cs.insert(std::get<NihoTrinomial>(v.theorem.spec.family).c);
      c.expect(v.pass, format_spec(v.theorem.spec) + ": verdict failed");
      c.expect(v.measured == want, format_spec(v.theorem.spec) + ": histogram " + format_histogram(v.measured));
    }
    c.expect(cs.size() == 2, "m=" + std::to_string(m) + ": c values not distinct");
  }
  return c;
}

Check criterion3() {
  return check_table("table3", {
                                   {6, {}, "semi-bent", 24, 2, 2},
                                   {10, {}, "semi-bent", 480, 3, 3},
                                   {14, {}, "semi-bent", 8064, 4, 4},
                               });
}

Check criterion4() {
  return check_table("table4", {
                                   {6, {}, "semi-bent", 24, 3, 3},
                                   {6, {}, "semi-bent", 24, 3, 3},
                                   {6, {}, "semi-bent", 24, 3, 3},
                               });
}

Check criterion5() {
  Check c;
  for (unsigned m : {3u, 5u}) {
    const unsigned n = 2 * m;
    const auto one = sample_cases(TheoremId::PlateauedQuadrinomial, {.m = m, .condition = 1, .count = 5});
    c.expect(one.size() >= 5, "condition (1) m=" + std::to_string(m) + ": fewer than 5 samples");
    const std::int64_t top = p2((3 * m + 1) / 2);
    for (const Verdict& v : run_cases(one)) {
      const auto conds = validate(v.theorem.spec).conditions;
      c.expect(std::find(conds.begin(), conds.end(), 1u) != conds.end(), format_spec(v.theorem.spec) + ": not condition (1)");
      for (const auto& [val, cnt] : v.measured) {
        c.expect(val == 0 || std::abs(val) == top, format_spec(v.theorem.spec) + ": value " + std::to_string(val));
      }
      c.expect(v.pass, format_spec(v.theorem.spec) + ": verdict failed");
    }
    for (unsigned cond : {2u, 3u}) {
      const auto cases = sample_cases(TheoremId::PlateauedQuadrinomial, {.m = m, .condition = cond, .count = 5});
      c.expect(cases.size() >= 5, "condition (" + std::to_string(cond) + ") m=" + std::to_string(m) + ": fewer than 5 samples");
      for (const Verdict& v : run_cases(cases)) {
        c.expect(v.classification == "semi-bent" && is_plateaued(v.measured, n, 2),
                 format_spec(v.theorem.spec) + ": classified " + v.classification);
        c.expect(v.pass, format_spec(v.theorem.spec) + ": verdict failed");
      }
    }
  }
  return c;
}

Check criterion6() {
  Check c;
  for (const auto& [n, m] : std::vector<std::pair<unsigned, unsigned>>{{7, 1}, {9, 3}, {15, 5}}) {
    const TheoremCase tc{TheoremId::DoEx1, ConstructionSpec{DOProduct{n, m, 1, 0}}};
    const Verdict v = run_case(tc);
    const unsigned r = std::gcd(n, m);
    c.expect(v.pass && is_plateaued(v.measured, n, r), format_spec(tc.spec) + ": " + v.classification);
  }
  const auto shape2 = sample_cases(TheoremId::DoEx1, {.m = 3, .n = 9, .shape = 2, .count = 5});
  c.expect(shape2.size() >= 5, "ex1 shape 2: fewer than 5 samples");
  for (const Verdict& v : run_cases(shape2)) {
    c.expect(v.pass && is_plateaued(v.measured, 9, 3), format_spec(v.theorem.spec) + ": " + v.classification);
  }
  for (unsigned m : {2u, 3u}) {
    const auto cases = sample_cases(TheoremId::DoEx2, {.m = m, .count = 5});
    c.expect(cases.size() >= 5, "ex2 m=" + std::to_string(m) + ": fewer than 5 samples");
    for (const Verdict& v : run_cases(cases)) {
      c.expect(v.theorem.spec.ambient_degree() == 3 * m, format_spec(v.theorem.spec) + ": n != 3m");
      c.expect(v.pass && is_plateaued(v.measured, 3 * m, m), format_spec(v.theorem.spec) + ": " + v.classification);
    }
  }
  return c;
}

Check criterion7() {
  Check c;
  for (unsigned m : {1u, 2u}) {
    const auto cases = sample_cases(TheoremId::Pl2, {.m = m, .k = 6});
    c.expect(!cases.empty(), "pl2 m=" + std::to_string(m) + ": no valid c");
    for (const Verdict& v : run_cases(cases)) {
      c.expect(v.pass && is_plateaued(v.measured, 6 * m, 2 * m), format_spec(v.theorem.spec) + ": " + v.classification);
    }
  }
  {
    const auto cases = sample_cases(TheoremId::Pl3, {.m = 2, .k = 3});
    c.expect(!cases.empty(), "pl3: no valid c");
    for (const Verdict& v : run_cases(cases)) {
      c.expect(v.pass && v.classification == "semi-bent", format_spec(v.theorem.spec) + ": " + v.classification);
    }
  }
  // pl4: every valid c in GF(2^6).
  const Field F = FiniteField::create(6);
  std::vector<TheoremCase> sweep;
  for (std::uint32_t cc = 0; cc < F->size(); ++cc) {
    ConstructionSpec s{TraceLinear{2, 3, {TraceShape::Kind::Double, 1}, cc}};
    if (validate(s, F)) sweep.push_back({TheoremId::Pl4, s});
  }
  c.expect(!sweep.empty(), "pl4: no valid c");
  for (const Verdict& v : run_cases(sweep)) {
    c.expect(v.pass && v.classification == "semi-bent", format_spec(v.theorem.spec) + ": " + v.classification);
  }
  return c;
}

// ---------------------------------------------------------------------------

std::vector<ConstructionSpec> specs_up_to_10() {
  std::vector<ConstructionSpec> out;
  auto add = [&](const std::vector<TheoremCase>& cases) {
    for (const auto& tc : cases) out.push_back(tc.spec);
  };
  for (unsigned m : {3u, 5u}) {
    add(sample_cases(TheoremId::FourValuedDist, {.m = m, .count = 2}));
    for (unsigned cond : {1u, 2u, 3u}) add(sample_cases(TheoremId::PlateauedQuadrinomial, {.m = m, .condition = cond, .count = 5}));
  }
  for (unsigned k : {1u, 2u, 3u, 4u}) {
    for (auto variant : {NihoVariant::Kind::Plus, NihoVariant::Kind::Minus}) {
      for (unsigned m : {3u, 5u}) {
        try {
          add(sample_cases(TheoremId::PropFourbe, {.m = m, .k = k, .variant = variant, .count = 2}));
        } catch (const Error&) {
          // no admissible coefficient for this (m, k)
        }
      }
    }
  }
  for (unsigned n = 3; n <= 10; ++n) {
    for (unsigned m = 1; m < n; ++m) {
      for (unsigned shape : {1u, 2u}) {
        try {
          add(sample_cases(TheoremId::DoEx1, {.m = m, .n = n, .shape = shape, .count = 2}));
        } catch (const Error&) {
        }
      }
    }
  }
  for (unsigned m : {2u, 3u}) add(sample_cases(TheoremId::DoEx2, {.m = m, .count = 5}));
  add(sample_cases(TheoremId::Pl2, {.m = 1, .k = 6, .count = 3}));
  add(sample_cases(TheoremId::Pl2, {.m = 1, .k = 10, .count = 3}));
  add(sample_cases(TheoremId::Pl3, {.m = 2, .k = 3, .count = 3}));
  add(sample_cases(TheoremId::Pl3, {.m = 2, .k = 5, .count = 3}));
  add(sample_cases(TheoremId::Pl4, {.m = 2, .k = 3, .i = 1, .count = 3}));
  // Monomial permutations: one exponent per cyclotomic class.
  for (unsigned n = 2; n <= 8; ++n) {
    const std::uint64_t q = (std::uint64_t{1} << n) - 1;
    std::set<std::uint64_t> seen;
    for (std::uint64_t d = 1; d < q; ++d) {
      if (std::gcd(d, q) != 1 || seen.count(d)) continue;
      for (std::uint64_t e = d, t = 0; t < n; ++t, e = (2 * e) % q) seen.insert(e);
      out.push_back(ConstructionSpec{Monomial{n, d}});
    }
  }
  return out;
}

Check criterion8() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();

  // (a) relation between W_fP and Weil sums of P.
  const auto specs = specs_up_to_10();
  c.expect(specs.size() > 100, "8a: spec list unexpectedly short");
  for (const ConstructionSpec& s : specs) {
    if (s.ambient_degree() > 10) continue;
    const Permutation p = Permutation::create(s);
    const WalshSpectrum w = walsh_spectrum(parameterize(p));
    g_spectra.emplace_back(w.n, Histogram(w.histogram.begin(), w.histogram.end()));
    for (std::uint32_t a = 1; a < p.field()->size(); ++a) {
      if (!relation_check(p, w, a)) {
        c.expect(false, "8a: " + format_spec(s) + " at a=" + std::to_string(a));
        break;
      }
    }
  }

  // (b) cubic sums, odd n <= 11, all a.
  for (unsigned n = 1; n <= 11; n += 2) {
    const Field F = FiniteField::create(n);
    for (std::uint32_t a = 0; a < F->size(); ++a) {
      const std::int64_t want = weil_sum(*F, [&](std::uint32_t x) { return F->mul(F->sqr(x), x) ^ F->mul(a, x); });
      if (cubic_sum(*F, a) != want) {
        c.expect(false, "8b: n=" + std::to_string(n) + " a=" + std::to_string(a));
        break;
      }
    }
  }

  // (c) quadratic forms, 10^4 random instances, n <= 12.
  std::mt19937_64 rng(kDefaultSeed);
  for (int t = 0; t < 10000; ++t) {
    const unsigned n = 2 + rng() % 11;
    const Field F = FiniteField::create(n);
    QuadraticForm q;
    q.n = n;
    for (unsigned k = 0, terms = 1 + rng() % 5; k < terms; ++k) {
      const unsigned i = rng() % n, j = rng() % n;
      const std::uint32_t coeff = rng() & (F->size() - 1);
      if (i != j) q.quadratic.push_back({coeff, std::min(i, j), std::max(i, j)});
      else q.linear.push_back({coeff, i});
    }
    const std::uint32_t a = rng() & (F->size() - 1), b = 1 + rng() % F->group_order();
    const std::int64_t want = weil_sum(*F, [&](std::uint32_t x) { return F->mul(b, q(*F, x)) ^ F->mul(a, x); });
    if (quadratic_walsh(*F, q, a, b).value != want) c.expect(false, "8c: instance " + std::to_string(t));
  }

  // (d) binomial root counts, all a != 0, m <= n <= 12.
  for (unsigned n = 1; n <= 12; ++n) {
    const Field F = FiniteField::create(n);
    for (unsigned m = 1; m <= n; ++m) {
      for (std::uint32_t a = 1; a < F->size(); ++a) {
        if (binomial_root_count(*F, m, a) != binomial_root_count_formula(*F, m, a)) {
          c.expect(false, "8d: n=" + std::to_string(n) + " m=" + std::to_string(m) + " a=" + std::to_string(a));
        }
      }
    }
  }

  // (e) root counts on the unit circle, m <= 5, and in the field for gcd(k, n) = 1, n <= 10.
  for (unsigned m = 1; m <= 5; ++m) {
    const Field F = FiniteField::create(2 * m);
    for (unsigned k = 1; k < 2 * m; ++k) {
      const std::set<unsigned> allowed{0, 1, 2, (1u << std::gcd(k, m)) + 1};
      for (std::uint32_t u = 1; u < F->size(); ++u) {
        const std::uint32_t ubar = F->frobenius(u, m);
        for (const CirclePoly q : {CirclePoly{k, u, 1, 1, ubar}, CirclePoly{k, 1, u, ubar, 1}}) {
          const unsigned cnt = circle_root_count(*F, q, m);
          if (!allowed.count(cnt)) c.expect(false, "8e: circle count " + std::to_string(cnt));
          if (std::gcd(k, 2 * m) == 1 && cnt == 2 && !has_repeated_circle_root(*F, q, m)) {
            c.expect(false, "8e: two roots without a repeated root");
          }
        }
      }
    }
  }
  for (unsigned n = 2; n <= 10; ++n) {
    const Field F = FiniteField::create(n);
    for (unsigned k = 1; k < n; ++k) {
      if (std::gcd(k, n) != 1) continue;
      for (std::uint32_t b = 0; b < F->size(); ++b) {
        const auto counts = projective_root_counts(*F, k, b);
        for (std::uint32_t a = 1; a < F->size(); ++a) {
          if (counts[a] != 0 && counts[a] != 1 && counts[a] != 3) c.expect(false, "8e: field count " + std::to_string(counts[a]));
        }
      }
    }
  }

  // (f) Parseval and the moment identities on every spectrum computed so far.
  // Every f_P has f(0) = 1 since P(0) = 0 lies in the image.
  for (const auto& [n, h] : g_spectra) {
    if (!ref::moments_hold(n, h, true)) c.expect(false, "8f: n=" + std::to_string(n) + " " + format_histogram(h));
  }
  c.expect(g_spectra.size() > 100, "8f: too few spectra collected");

  c.expect(seconds_since(t0) <= 300.0, "oracle suites exceeded 5 min");
  return c;
}

// ---------------------------------------------------------------------------

Check criterion9() {
  Check c;
  const fs::path dir = fs::temp_directory_path() / ("walsh_forge_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string bytes[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = dir / ("run" + std::to_string(run) + ".json");
    const std::string cmd = std::string("\"") + WALSH_FORGE_CLI + "\" reproduce table1 --max-n 10 --out " + out.string() +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "run " + std::to_string(run) + " exited nonzero");
    std::ifstream f(out, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    bytes[run] = ss.str();
  }
  c.expect(!bytes[0].empty(), "empty report");
  c.expect(bytes[0] == bytes[1], "reports differ");
  fs::remove_all(dir);
  return c;
}

}  // namespace

int main() {
  struct Item {
    unsigned id;
    const char* title;
    Check (*run)();
  };
  const Item items[] = {
      {1, "Table 1 four-valued trinomials, n = 6, 10, 14", criterion1},
      {2, "four-valued distribution, both c, m = 3, 5, 7", criterion2},
      {3, "Table 3 semi-bent quadrinomials, n = 6, 10, 14", criterion3},
      {4, "Table 4 semi-bent DO functions on GF(2^6)", criterion4},
      {5, "quadrinomial plateau orders under conditions (1), (2), (3)", criterion5},
      {6, "DO plateau orders", criterion6},
      {7, "trace-linear plateau orders", criterion7},
      {8, "oracle equivalence suites a-f", criterion8},
      {9, "byte-identical reproduce output", criterion9},
  };
  bool all = true;
  for (const Item& item : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = item.run();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    report(item.id, item.title, c, seconds_since(t0));
    all = all && c.ok;
  }
  return all ? 0 : 1;
}
