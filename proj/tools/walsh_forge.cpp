// walsh_forge: analyze, reproduce, verify, selftest.
//
// Exit codes
//   analyze    0 ok, 2 invalid spec, 3 I/O
//   reproduce  0 all rows match, 1 mismatch, 2 bad target
//   verify     0 confirmed, 1 promise failed, 2 hypothesis violated
//   selftest   0 all pass, 1 otherwise

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "walshforge/report.hpp"

namespace wf = walshforge;

namespace {

struct Globals {
  std::string field;
  std::uint64_t seed = wf::kDefaultSeed;
  std::string out;
  std::string format = "json";
  bool skip_ai = false;
  unsigned threads = 1;
  bool timings = false;

  wf::RunOptions options() const { return {skip_ai, timings, threads, seed}; }
};

// Raised for file problems so main can map them to exit 3.
struct IoFailure {
  std::string what;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw IoFailure{"cannot open " + g.out + " for writing"};
  f << text;
  if (!f) throw IoFailure{"write to " + g.out + " failed"};
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoFailure{"cannot read " + path};
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

wf::Field field_for(const Globals& g, unsigned n) {
  if (g.field.empty()) return wf::FiniteField::create(n);
  return wf::parse_field_spec(g.field);
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string spec;
  std::string spec_file;
};

int run_analyze(const Globals& g, const AnalyzeArgs& a) {
  std::string text = a.spec;
  if (!a.spec_file.empty()) text = read_file(a.spec_file);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();

  wf::Field field;
  wf::ConstructionSpec spec;
  wf::AnalysisReport report;
  try {
    if (!g.field.empty()) field = wf::parse_field_spec(g.field);
    spec = wf::parse_spec(text, field);
    if (!field) field = wf::FiniteField::create(spec.ambient_degree());
    report = wf::analyze(spec, field, g.options());
  } catch (const wf::Error& e) {
    if (e.code() == wf::ErrorCode::IoError) throw IoFailure{e.what()};
    std::cerr << "invalid spec: " << e.what() << '\n';
    return 2;
  }
  if (g.format == "csv") {
    emit(g, wf::csv_header() + "\n" + wf::csv_row(report.spec, report.criteria) + "\n");
  } else {
    emit(g, report.to_json().dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
  std::string table;
  unsigned max_n = 14;
};

int run_reproduce(const Globals& g, const ReproduceArgs& a) {
  wf::Reproduction r;
  try {
    r = wf::reproduce(a.table, a.max_n, g.options());
  } catch (const wf::Error& e) {
    if (e.code() != wf::ErrorCode::InvalidSpec) throw;
    std::cerr << e.what() << '\n';
    return 2;
  }
  std::ostringstream body;
  if (g.format == "csv") r.write_csv(body);
  else body << r.to_json().dump(2) << '\n';
  emit(g, body.str());
  // Keep stdout clean when it carries the report.
  std::ostream& matrix = (g.out.empty() || g.out == "-") ? std::cerr : std::cout;
  r.write_matrix(matrix);
  return r.pass() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string id;
  unsigned m = 0, k = 0, i = 0, n = 0, shape = 1, condition = 0, samples = 1;
  std::string variant = "plus";
  std::optional<std::string> a, b, c;
};

std::string explicit_spec(wf::TheoremId id, const VerifyArgs& v) {
  std::ostringstream os;
  auto coef = [&](const char* key, const std::optional<std::string>& value) {
    if (value) os << ' ' << key << '=' << *value;
  };
  switch (id) {
    case wf::TheoremId::FourValuedDist:
      os << "family=niho-trinomial m=" << v.m << " variant=one-fifth";
      coef("c", v.c);
      break;
    case wf::TheoremId::PropFourbe:
      os << "family=niho-trinomial m=" << v.m << " variant=" << v.variant << " k=" << v.k;
      coef("c", v.c);
      break;
    case wf::TheoremId::PlateauedQuadrinomial:
      os << "family=quadrinomial m=" << v.m;
      coef("a", v.a);
      coef("b", v.b);
      coef("c", v.c);
      break;
    case wf::TheoremId::DoEx1:
      os << "family=do n=" << v.n << " m=" << v.m << " shape=" << v.shape;
      coef("a", v.a);
      break;
    case wf::TheoremId::DoEx2:
      os << "family=do n=" << 3 * v.m << " m=" << v.m << " shape=3";
      coef("a", v.a);
      break;
    case wf::TheoremId::Pl2:
      os << "family=trace-linear m=" << v.m << " k=" << v.k << " shape=gold i=" << v.i;
      coef("c", v.c);
      break;
    case wf::TheoremId::Pl3:
      os << "family=trace-linear m=" << v.m << " k=" << v.k << " shape=halved";
      coef("c", v.c);
      break;
    case wf::TheoremId::Pl4:
      os << "family=trace-linear m=" << v.m << " k=" << v.k << " shape=double i=" << (v.i == 0 ? 1 : v.i);
      coef("c", v.c);
      break;
  }
  return os.str();
}

int run_verify(const Globals& g, const VerifyArgs& v) {
  const auto id = wf::parse_theorem_id(v.id);
  if (!id) {
    std::cerr << "unknown theorem id '" << v.id << "'\n";
    return 2;
  }
  std::vector<wf::Verdict> verdicts;
  try {
    std::vector<wf::TheoremCase> cases;
    if (v.a || v.b || v.c) {
      cases.push_back({*id, wf::parse_spec(explicit_spec(*id, v))});
    } else {
      wf::CaseParams p;
      p.m = v.m;
      p.k = v.k;
      p.i = v.i;
      p.n = v.n;
      p.shape = v.shape;
      p.condition = v.condition;
      p.variant = v.variant == "minus" ? wf::NihoVariant::Kind::Minus : wf::NihoVariant::Kind::Plus;
      p.count = v.samples;
      cases = wf::sample_cases(*id, p);
    }
    verdicts = wf::verify_theorems(cases, g.threads);
  } catch (const wf::Error& e) {
    std::cerr << "hypothesis violated: " << e.what() << '\n';
    return 2;
  }
  bool pass = true;
  for (const auto& verdict : verdicts) pass = pass && verdict.pass;

  if (g.format == "csv") {
    std::ostringstream os;
    os << "case_id,spec,histogram,class,pass\n";
    for (const auto& verdict : verdicts) {
      os << wf::to_string(verdict.theorem.id) << ',' << wf::format_spec(verdict.theorem.spec) << ','
         << wf::format_histogram(verdict.measured) << ',' << verdict.classification << ','
         << (verdict.pass ? "true" : "false") << '\n';
    }
    emit(g, os.str());
  } else {
    nlohmann::ordered_json j;
    j["schema"] = wf::kSchema;
    j["version"] = wf::kVersion;
    j["seed"] = g.seed;
    j["theorem"] = v.id;
    j["pass"] = pass;
    j["verdicts"] = nlohmann::ordered_json::array();
    for (const auto& verdict : verdicts) j["verdicts"].push_back(wf::to_json(verdict));
    emit(g, j.dump(2) + "\n");
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

int run_selftest(const Globals& g) {
  bool pass = true;
  for (const auto& item : wf::run_selftest(g.seed)) {
    std::cout << (item.pass ? "PASS " : "FAIL ") << item.name;
    if (!item.detail.empty()) std::cout << " (" << item.detail << ')';
    std::cout << '\n';
    pass = pass && item.pass;
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced Boolean functions from 2-to-1 maps P(x^2 + x): spectra, criteria, theorem checks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(wf::kVersion));

  Globals g;
  app.add_option("--field", g.field, "Field as \"n=<int> modulus=0x<hex>\" (default: canonical modulus)");
  app.add_option("--seed", g.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--out", g.out, "Output path (default: stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--skip-ai", g.skip_ai, "Do not compute algebraic immunity");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  app.add_flag("--timings", g.timings, "Include wall-clock timings in the JSON");

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Analyze one construction");
  auto* spec_opt = analyze->add_option("--spec", analyze_args.spec, "Construction spec text");
  auto* file_opt = analyze->add_option("--spec-file", analyze_args.spec_file, "File holding the construction text");
  spec_opt->excludes(file_opt);
  analyze->require_option(1);

  ReproduceArgs reproduce_args;
  auto* reproduce = app.add_subcommand("reproduce", "Recompute a table and diff it against the embedded rows");
  reproduce->add_option("table", reproduce_args.table, "table1, table3 or table4")->required();
  reproduce->add_option("--max-n", reproduce_args.max_n, "Largest n to compute (6, 10 or 14)")->capture_default_str();

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check a spectral theorem on concrete parameters");
  verify->add_option("id", verify_args.id,
                     "four-valued-dist, plateaued-quadrinomial, do-ex1, do-ex2, pl2, pl3, pl4 or prop-fourbe")
      ->required();
  verify->add_option("--m", verify_args.m);
  verify->add_option("--k", verify_args.k);
  verify->add_option("--i", verify_args.i);
  verify->add_option("--n", verify_args.n);
  verify->add_option("--shape", verify_args.shape, "DO shape 1, 2 or 3");
  verify->add_option("--condition", verify_args.condition, "Quadrinomial condition 1, 2 or 3");
  verify->add_option("--variant", verify_args.variant, "Niho variant for prop-fourbe")
      ->check(CLI::IsMember({"plus", "minus"}));
  verify->add_option("--samples", verify_args.samples, "Number of automatically chosen coefficients");
  verify->add_option("--a", verify_args.a, "Coefficient a (disables sampling)");
  verify->add_option("--b", verify_args.b, "Coefficient b (disables sampling)");
  verify->add_option("--c", verify_args.c, "Coefficient c (disables sampling)");

  auto* selftest = app.add_subcommand("selftest", "Quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze) return run_analyze(g, analyze_args);
    if (*reproduce) return run_reproduce(g, reproduce_args);
    if (*verify) return run_verify(g, verify_args);
    if (*selftest) return run_selftest(g);
  } catch (const IoFailure& e) {
    std::cerr << "I/O error: " << e.what << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
