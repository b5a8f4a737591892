#include "walshforge/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "walshforge/kernels.hpp"

namespace walshforge {

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs body(i) for i < count on up to `threads` workers; rethrows the first
// failure in index order.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

nlohmann::ordered_json ai_json(const Criteria& c) {
  if (c.ai) return *c.ai;
  if (c.ai_skipped) return "not computed";
  return nullptr;
}

nlohmann::ordered_json criteria_json(const Criteria& c) {
  nlohmann::ordered_json j;
  j["histogram"] = histogram_to_json(c.histogram);
  j["nonlinearity"] = c.nonlinearity;
  j["degree"] = c.degree;
  if (c.ai || c.ai_skipped) j["algebraic_immunity"] = ai_json(c);
  j["balanced"] = c.balanced;
  j["class"] = c.classification;
  return j;
}

nlohmann::ordered_json timings_json(const Timings& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [stage, ms] : t) j[stage] = ms;
  return j;
}

nlohmann::ordered_json field_json(const FiniteField& f) {
  std::ostringstream hex;
  hex << "0x" << std::hex << f.modulus();
  return {{"n", f.degree()}, {"modulus", hex.str()}};
}

std::string params_text(const ConstructionSpec& spec) {
  const std::string full = format_spec(spec);
  const auto space = full.find(' ');
  return space == std::string::npos ? std::string() : full.substr(space + 1);
}

}  // namespace

Criteria compute_criteria(const BooleanFunction& f, bool skip_ai) {
  Criteria c;
  c.n = f.n();
  const WalshSpectrum w = walsh_spectrum(f);
  for (const auto& [value, count] : w.histogram) c.histogram[value] = count;
  c.nonlinearity = nonlinearity(w);
  c.degree = algebraic_degree(f);
  if (skip_ai) {
    c.ai_skipped = true;
  } else if (f.n() <= kMaxAiDegree) {
    c.ai = algebraic_immunity(f);
  }
  c.balanced = is_balanced(w);
  c.classification = classify(w).name();
  return c;
}

nlohmann::ordered_json histogram_to_json(const std::map<std::int64_t, std::uint64_t>& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [value, count] : h) j[std::to_string(value)] = count;
  return j;
}

nlohmann::ordered_json AnalysisReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["field"] = field_json(*field);
  j["spec"] = format_spec(spec);
  j["construction"] = walshforge::to_json(spec);
  const nlohmann::ordered_json crit = criteria_json(criteria);
  for (const auto& [key, value] : crit.items()) j[key] = value;
  nlohmann::ordered_json verdict_list = nlohmann::ordered_json::array();
  for (const Verdict& v : verdicts) verdict_list.push_back(walshforge::to_json(v));
  j["verdicts"] = verdict_list;
  if (timings) j["timings"] = timings_json(*timings);
  return j;
}

std::optional<TheoremId> theorem_for(const ConstructionSpec& spec) {
  if (const auto* s = std::get_if<NihoTrinomial>(&spec.family)) {
    return s->variant.kind == NihoVariant::Kind::OneFifth ? TheoremId::FourValuedDist : TheoremId::PropFourbe;
  }
  if (std::holds_alternative<Quadrinomial>(spec.family)) return TheoremId::PlateauedQuadrinomial;
  if (const auto* s = std::get_if<DOProduct>(&spec.family)) {
    return s->shape == 3 ? TheoremId::DoEx2 : TheoremId::DoEx1;
  }
  if (const auto* s = std::get_if<TraceLinear>(&spec.family)) {
    switch (s->shape.kind) {
      case TraceShape::Kind::Gold: return TheoremId::Pl2;
      case TraceShape::Kind::Halved: return TheoremId::Pl3;
      case TraceShape::Kind::Double: return TheoremId::Pl4;
    }
  }
  return std::nullopt;
}

AnalysisReport analyze(const ConstructionSpec& spec, const Field& field, const RunOptions& options) {
  if (spec.ambient_degree() != field->degree()) {
    fail(ErrorCode::InvalidSpec, "spec lives in GF(2^" + std::to_string(spec.ambient_degree()) +
                                     ") but the field has n=" + std::to_string(field->degree()));
  }
  const Validity valid = validate(spec, field);
  if (!valid) fail(ErrorCode::InvalidSpec, valid.clause);

  AnalysisReport r;
  r.field = field;
  r.spec = spec;
  r.seed = options.seed;
  Timings t;
  auto t0 = Clock::now();
  const BooleanFunction f = parameterize(Permutation::create_unchecked(spec, field));
  t.emplace_back("parameterize_ms", millis_since(t0));
  t0 = Clock::now();
  r.criteria = compute_criteria(f, options.skip_ai);
  t.emplace_back("criteria_ms", millis_since(t0));

  const auto id = theorem_for(spec);
  if (id && field->modulus() == FiniteField::canonical_modulus(field->degree())) {
    t0 = Clock::now();
    try {
      r.verdicts.push_back(verify_theorem({*id, spec}));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::HypothesisViolated) throw;
    }
    t.emplace_back("verify_ms", millis_since(t0));
  }
  if (options.timings) r.timings = std::move(t);
  return r;
}

std::string csv_header() { return "n,family,params,histogram,nl,degree,ai,class"; }

std::string csv_row(const ConstructionSpec& spec, const Criteria& c) {
  std::ostringstream os;
  os << c.n << ',' << spec.tag() << ',' << params_text(spec) << ',' << format_histogram(c.histogram) << ','
     << c.nonlinearity << ',' << c.degree << ',';
  if (c.ai) os << *c.ai;
  else if (c.ai_skipped) os << "not computed";
  os << ',' << c.classification;
  return os.str();
}

std::string format_histogram(const std::map<std::int64_t, std::uint64_t>& h) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [value, count] : h) {
    if (!first) os << ' ';
    first = false;
    os << value << ':' << count;
  }
  return os.str();
}

std::map<std::int64_t, std::uint64_t> parse_histogram(const std::string& text) {
  std::map<std::int64_t, std::uint64_t> h;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) fail(ErrorCode::ParseError, "histogram entry without ':': " + token);
    try {
      h[std::stoll(token.substr(0, colon))] = std::stoull(token.substr(colon + 1));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad histogram entry: " + token);
    }
  }
  return h;
}

// ---------------------------------------------------------------------------

namespace {

struct ExpectedRow {
  unsigned n = 0;
  std::string spec;
  nlohmann::json cells;  // the row minus n and spec
};

struct TableData {
  std::string caption;
  std::vector<ExpectedRow> rows;
};

TableData load_table(const std::string& name) {
  const std::string_view raw = detail::embedded_table(name);
  if (raw.empty()) fail(ErrorCode::InvalidSpec, "unknown table '" + name + "'");
  const nlohmann::json j = nlohmann::json::parse(raw);
  TableData t;
  t.caption = j.at("caption").get<std::string>();
  for (const auto& row : j.at("rows")) {
    ExpectedRow e;
    e.n = row.at("n").get<unsigned>();
    e.spec = row.at("spec").get<std::string>();
    e.cells = row;
    e.cells.erase("n");
    e.cells.erase("spec");
    t.rows.push_back(std::move(e));
  }
  return t;
}

std::map<std::int64_t, std::uint64_t> histogram_from_json(const nlohmann::json& j) {
  std::map<std::int64_t, std::uint64_t> h;
  for (const auto& [key, value] : j.items()) h[std::stoll(key)] = value.get<std::uint64_t>();
  return h;
}

void compare_row(const ExpectedRow& e, RowResult& r) {
  const Criteria& m = r.measured;
  auto diff = [&](const std::string& column, const std::string& want, const std::string& got) {
    r.checked.push_back(column);
    if (want != got) r.diffs.push_back({column, want, got});
  };
  if (e.cells.contains("histogram")) {
    diff("histogram", format_histogram(histogram_from_json(e.cells["histogram"])), format_histogram(m.histogram));
  }
  if (e.cells.contains("class")) diff("class", e.cells["class"].get<std::string>(), m.classification);
  if (e.cells.contains("nl")) diff("nl", std::to_string(e.cells["nl"].get<std::int64_t>()), std::to_string(m.nonlinearity));
  if (e.cells.contains("degree")) diff("degree", std::to_string(e.cells["degree"].get<unsigned>()), std::to_string(m.degree));
  if (e.cells.contains("ai") && m.ai) diff("ai", std::to_string(e.cells["ai"].get<unsigned>()), std::to_string(*m.ai));
}

}  // namespace

std::vector<std::string> table_names() { return {"table1", "table3", "table4"}; }

bool Reproduction::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RowResult& r) { return r.pass(); });
}

Reproduction reproduce(const std::string& table, unsigned max_n, const RunOptions& options) {
  if (max_n != 6 && max_n != 10 && max_n != 14) {
    fail(ErrorCode::InvalidSpec, "max-n must be 6, 10 or 14, got " + std::to_string(max_n));
  }
  const TableData data = load_table(table);
  std::vector<const ExpectedRow*> selected;
  for (const auto& row : data.rows) {
    if (row.n <= max_n) selected.push_back(&row);
  }

  Reproduction out;
  out.table = table;
  out.caption = data.caption;
  out.max_n = max_n;
  out.seed = options.seed;
  out.rows.resize(selected.size());
  parallel_for(selected.size(), options.threads, [&](std::size_t i) {
    const ExpectedRow& e = *selected[i];
    RowResult& r = out.rows[i];
    const auto t0 = Clock::now();
    const Field field = FiniteField::create(e.n);
    r.n = e.n;
    r.spec = parse_spec(e.spec, field);
    r.measured = compute_criteria(parameterize(Permutation::create(r.spec, field)), options.skip_ai);
    compare_row(e, r);
    if (options.timings) r.millis = millis_since(t0);
  });
  return out;
}

nlohmann::ordered_json Reproduction::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["table"] = table;
  j["caption"] = caption;
  j["max_n"] = max_n;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const RowResult& r : rows) {
    nlohmann::ordered_json row;
    row["n"] = r.n;
    row["spec"] = format_spec(r.spec);
    row["construction"] = walshforge::to_json(r.spec);
    row["measured"] = criteria_json(r.measured);
    row["checked"] = r.checked;
    nlohmann::ordered_json diffs = nlohmann::ordered_json::array();
    for (const CellDiff& d : r.diffs) {
      diffs.push_back({{"column", d.column}, {"expected", d.expected}, {"measured", d.measured}});
    }
    row["diffs"] = diffs;
    row["pass"] = r.pass();
    if (r.millis) row["timings"] = {{"row_ms", *r.millis}};
    list.push_back(row);
  }
  j["rows"] = list;
  j["pass"] = pass();
  return j;
}

void Reproduction::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  for (const RowResult& r : rows) out << csv_row(r.spec, r.measured) << '\n';
}

void Reproduction::write_matrix(std::ostream& out) const {
  static const char* const kColumns[] = {"histogram", "class", "nl", "degree", "ai"};
  out << table << " (n <= " << max_n << ")\n";
  for (const RowResult& r : rows) {
    out << "  n=" << r.n;
    for (const char* col : kColumns) {
      if (std::find(r.checked.begin(), r.checked.end(), col) == r.checked.end()) continue;
      const bool bad = std::any_of(r.diffs.begin(), r.diffs.end(), [&](const CellDiff& d) { return d.column == col; });
      out << "  " << col << ' ' << (bad ? "FAIL" : "ok");
    }
    if (!r.measured.ai && r.measured.ai_skipped) out << "  ai skipped";
    out << '\n';
    for (const CellDiff& d : r.diffs) {
      out << "    " << d.column << ": expected " << d.expected << ", measured " << d.measured << '\n';
    }
  }
  out << (pass() ? "PASS" : "FAIL") << '\n';
}

// ---------------------------------------------------------------------------

std::vector<SelfTestItem> run_selftest(std::uint64_t seed) {
  std::vector<SelfTestItem> items;
  std::mt19937_64 rng(seed);

  for (kernels::Isa isa : kernels::available()) {
    if (isa == kernels::Isa::Scalar) continue;
    const kernels::KernelTable* simd = kernels::table_for(isa);
    bool ok = true;
    for (unsigned log2 : {3u, 6u, 9u, 12u}) {
      std::vector<std::int32_t> a(std::size_t{1} << log2), b;
      for (auto& v : a) v = static_cast<std::int32_t>(rng() % 7) - 3;
      b = a;
      kernels::detail::kScalarTable.fwht_i32(a.data(), a.size());
      simd->fwht_i32(b.data(), b.size());
      ok = ok && a == b;
      std::vector<std::uint64_t> u(log2 <= 6 ? 1 : std::size_t{1} << (log2 - 6)), w;
      for (auto& v : u) v = rng();
      if (log2 < 6) u[0] &= (std::uint64_t{1} << (std::size_t{1} << log2)) - 1;
      w = u;
      kernels::detail::kScalarTable.mobius_u64(u.data(), log2);
      simd->mobius_u64(w.data(), log2);
      ok = ok && u == w;
    }
    items.push_back({std::string("kernels ") + kernels::isa_name(isa) + " == scalar", ok, {}});
  }

  {
    const Field field = FiniteField::create(8);
    BooleanFunction f(field);
    for (std::uint32_t x = 0; x < field->size(); ++x) f.set(x, rng() & 1);
    const bool ok = walsh_spectrum(f).values == walsh_spectrum_direct(f).values;
    items.push_back({"fast walsh == direct walsh (n=8)", ok, {}});
  }

  {
    const Field field = FiniteField::create(6);
    const Permutation p = Permutation::create(parse_spec("family=niho-trinomial m=3 variant=one-fifth", field), field);
    const WalshSpectrum w = walsh_spectrum(parameterize(p));
    bool ok = true;
    for (std::uint32_t a = 1; a < field->size(); ++a) ok = ok && relation_check(p, w, a);
    items.push_back({"W_f(a) == -S(aP(x) + x) (niho, n=6)", ok, {}});
  }

  {
    bool ok = true;
    for (unsigned n : {3u, 5u, 7u}) {
      const Field field = FiniteField::create(n);
      for (std::uint32_t a = 0; a < field->size(); ++a) {
        const auto s = weil_sum(*field, [&](std::uint32_t x) { return field->mul(field->sqr(x), x) ^ field->mul(a, x); });
        ok = ok && s == cubic_sum(*field, a);
      }
    }
    items.push_back({"cubic closed form == weil sum (n=3,5,7)", ok, {}});
  }

  {
    bool ok = true;
    for (int t = 0; t < 200; ++t) {
      const unsigned n = 3 + static_cast<unsigned>(rng() % 6);
      const Field field = FiniteField::create(n);
      std::vector<Term> terms;
      for (int c = 0; c < 3; ++c) {
        const unsigned i = static_cast<unsigned>(rng() % n);
        const unsigned j = (i + 1 + static_cast<unsigned>(rng() % (n - 1))) % n;
        terms.push_back({static_cast<std::uint32_t>(rng() % field->size()), (1ull << i) + (1ull << j)});
      }
      const QuadraticForm q = QuadraticForm::from_terms(*field, terms);
      const auto a = static_cast<std::uint32_t>(rng() % field->size());
      const auto b = static_cast<std::uint32_t>(1 + rng() % field->group_order());
      const auto s = weil_sum(*field, [&](std::uint32_t x) { return field->mul(b, q(*field, x)) ^ field->mul(a, x); });
      ok = ok && s == quadratic_walsh(*field, q, a, b).value;
    }
    items.push_back({"quadratic form evaluator == weil sum (200 random forms)", ok, {}});
  }

  {
    const auto cases = sample_cases(TheoremId::FourValuedDist, {.m = 3, .count = 2});
    bool ok = true;
    for (const auto& c : cases) ok = ok && verify_theorem(c).pass;
    items.push_back({"four-valued distribution (m=3)", ok, {}});
  }
  return items;
}

}  // namespace walshforge
