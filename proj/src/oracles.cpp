#include "walshforge/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "walshforge/gf2_linalg.hpp"

namespace walshforge {

namespace {

std::uint64_t pow2(unsigned e) { return std::uint64_t{1} << e; }

int chi(unsigned bit) { return bit ? -1 : 1; }

void require_even(const FiniteField& field, unsigned m) {
  if (field.degree() != 2 * m) {
    fail(ErrorCode::OddAmbientDegree, "needs n = 2m, got n=" + std::to_string(field.degree()) +
                                          ", m=" + std::to_string(m));
  }
}

std::vector<std::uint32_t> circle(const FiniteField& field, unsigned m) {
  std::vector<std::uint32_t> out;
  const std::uint32_t step = field.alpha_pow(static_cast<std::int64_t>(pow2(m) - 1));
  std::uint32_t z = 1;
  for (std::uint64_t t = 0; t <= pow2(m); ++t) {
    out.push_back(z);
    z = field.mul(z, step);
  }
  return out;
}

std::vector<std::uint32_t> subfield(const FiniteField& field, unsigned d) {
  std::vector<std::uint32_t> out{0};
  const std::uint32_t g =
      field.alpha_pow(static_cast<std::int64_t>(field.group_order() / (pow2(d) - 1)));
  std::uint32_t z = 1;
  for (std::uint64_t t = 0; t + 1 < pow2(d); ++t) {
    out.push_back(z);
    z = field.mul(z, g);
  }
  return out;
}

std::uint32_t eval_circle(const FiniteField& f, const CirclePoly& q, std::uint32_t z) {
  const std::uint32_t zk = f.frobenius(z, q.k);
  return f.mul(q.c3, f.mul(zk, z)) ^ f.mul(q.c2, zk) ^ f.mul(q.c1, z) ^ q.c0;
}

// h(conj(z)^2) = sum coeff * z^(-2e) for z on the unit circle.
std::uint32_t eval_h(const FiniteField& f, const NihoPolynomial& g, std::uint32_t z) {
  std::uint32_t acc = 0;
  for (const Term& t : g.h) {
    acc ^= f.mul(t.coeff, f.pow(z, -2 * static_cast<std::int64_t>(t.exponent)));
  }
  return acc;
}

}  // namespace

std::int64_t weil_sum(const FiniteField& field, const FieldMap& F) {
  std::int64_t acc = 0;
  for (std::uint32_t x = 0; x < field.size(); ++x) acc += chi(field.abs_trace(F(x)));
  return acc;
}

bool relation_check(const Permutation& p, const WalshSpectrum& spectrum, std::uint32_t a) {
  if (a == 0) fail(ErrorCode::ZeroPoint, "the relation is stated for a != 0");
  const FiniteField& f = *p.field();
  const std::int64_t s = weil_sum(f, [&](std::uint32_t x) { return f.mul(a, p(x)) ^ x; });
  return spectrum.values.at(a) == -s;
}

bool relation_check(const Permutation& p, std::uint32_t a) {
  return relation_check(p, walsh_spectrum(parameterize(p)), a);
}

std::int64_t cubic_sum(const FiniteField& field, std::uint32_t a) {
  const unsigned n = field.degree();
  if (n % 2 == 0) fail(ErrorCode::EvenDegree, "cubic sum closed form needs n odd");
  const std::uint32_t rhs = field.sqr(a ^ 1);
  for (std::uint32_t theta = 0; theta < field.size(); ++theta) {
    if ((field.sqr(field.sqr(theta)) ^ theta) != rhs) continue;
    const int legendre = ((n * n - 1) / 8) % 2 == 0 ? 1 : -1;
    const std::uint32_t arg = field.mul(field.sqr(theta), theta) ^ theta;
    return legendre * chi(field.abs_trace(arg)) * static_cast<std::int64_t>(pow2((n + 1) / 2));
  }
  return 0;
}

CirclePattern circle_pattern(const FiniteField& field, const CirclePoly& q, unsigned m) {
  require_even(field, m);
  if (q.k == 0) fail(ErrorCode::PatternMismatch, "k must be positive");
  if (q.c3 == 1 && q.c0 == 1 && q.c2 != 0 && q.c1 == field.frobenius(q.c2, m)) return CirclePattern::Q2;
  if (q.c2 == 1 && q.c1 == 1 && q.c3 != 0 && q.c0 == field.frobenius(q.c3, m)) return CirclePattern::Q1;
  if (q.c3 == 1 && q.c2 == q.c1 && q.c0 != 0 && field.pow(q.c0, static_cast<std::int64_t>(pow2(m) + 1)) == 1) {
    return CirclePattern::FourValued;
  }
  fail(ErrorCode::PatternMismatch, "coefficients match neither Q1, Q2 nor the four-valued shape");
}

unsigned circle_root_count(const FiniteField& field, const CirclePoly& q, unsigned m) {
  circle_pattern(field, q, m);
  unsigned count = 0;
  for (std::uint32_t z : circle(field, m)) count += eval_circle(field, q, z) == 0;
  return count;
}

bool has_repeated_circle_root(const FiniteField& field, const CirclePoly& q, unsigned m) {
  circle_pattern(field, q, m);
  for (std::uint32_t z : circle(field, m)) {
    if (eval_circle(field, q, z) != 0) continue;
    if ((field.mul(q.c3, field.frobenius(z, q.k)) ^ q.c1) == 0) return true;
  }
  return false;
}

std::int64_t niho_walsh(const FiniteField& field, const NihoPolynomial& g, std::uint32_t a,
                        std::uint32_t b) {
  require_even(field, g.m);
  if (g.r != 1) return niho_walsh_double_sum(field, g, a, b);
  const unsigned m = g.m;
  const std::uint32_t abar = field.frobenius(a, m);
  std::int64_t count = 0;
  for (std::uint32_t z : circle(field, m)) {
    const std::uint32_t lhs = field.trace(field.mul(b, field.mul(z, eval_h(field, g, z))), m) ^
                              field.mul(a, z) ^ field.mul(abar, field.frobenius(z, m));
    count += lhs == 0;
  }
  return static_cast<std::int64_t>(pow2(m)) * (count - 1);
}

std::int64_t niho_walsh_double_sum(const FiniteField& field, const NihoPolynomial& g, std::uint32_t a,
                                   std::uint32_t b) {
  require_even(field, g.m);
  const unsigned m = g.m;
  const auto ys = subfield(field, m);
  std::vector<std::uint32_t> yr(ys.size());
  for (std::size_t t = 0; t < ys.size(); ++t) yr[t] = field.pow(ys[t], static_cast<std::int64_t>(g.r));
  std::int64_t total = 0;
  for (std::uint32_t z : circle(field, m)) {
    const std::uint32_t zr = field.pow(z, static_cast<std::int64_t>(g.r));
    const std::uint32_t A = field.trace(field.mul(b, field.mul(zr, eval_h(field, g, z))), m);
    const std::uint32_t B = field.trace(field.mul(a, z), m);
    for (std::size_t t = 0; t < ys.size(); ++t) {
      const std::uint32_t arg = field.mul(A, yr[t]) ^ field.mul(B, ys[t]);
      total += chi(field.subfield_trace(arg, m, 1) & 1);
    }
  }
  return total - static_cast<std::int64_t>(pow2(m));
}

QuadraticForm QuadraticForm::from_terms(const FiniteField& field, const std::vector<Term>& terms) {
  QuadraticForm q;
  q.n = field.degree();
  for (const Term& t : terms) {
    const std::uint64_t e = t.exponent % field.group_order() == 0 ? field.group_order() : t.exponent;
    const int w = std::popcount(e);
    if (w == 1) {
      q.linear.push_back({t.coeff, static_cast<unsigned>(std::countr_zero(e))});
    } else if (w == 2) {
      q.quadratic.push_back({t.coeff, static_cast<unsigned>(std::countr_zero(e)),
                             static_cast<unsigned>(63 - std::countl_zero(e))});
    } else {
      fail(ErrorCode::NotQuadratic, "exponent " + std::to_string(t.exponent) + " has binary weight " +
                                        std::to_string(w));
    }
  }
  return q;
}

std::uint32_t QuadraticForm::operator()(const FiniteField& field, std::uint32_t x) const {
  std::uint32_t acc = 0;
  for (const Quad& t : quadratic) {
    acc ^= field.mul(t.coeff, field.mul(field.frobenius(x, t.i), field.frobenius(x, t.j)));
  }
  for (const Lin& t : linear) acc ^= field.mul(t.coeff, field.frobenius(x, t.i));
  return acc;
}

std::vector<std::uint32_t> QuadraticForm::kernel(const FiniteField& field, std::uint32_t b) const {
  // Tr(b c (x^(2^i) y^(2^j) + x^(2^j) y^(2^i))) = Tr(x L(y)) with
  // L(y) = (b c y^(2^j))^(2^(n-i)) + (b c y^(2^i))^(2^(n-j)).
  std::vector<std::uint32_t> images(n);
  for (unsigned k = 0; k < n; ++k) {
    const std::uint32_t y = std::uint32_t{1} << k;
    std::uint32_t l = 0;
    for (const Quad& t : quadratic) {
      const std::uint32_t bc = field.mul(b, t.coeff);
      l ^= field.frobenius(field.mul(bc, field.frobenius(y, t.j)), n - t.i);
      l ^= field.frobenius(field.mul(bc, field.frobenius(y, t.i)), n - t.j);
    }
    images[k] = l;
  }
  return null_space(images, n);
}

QuadraticWalsh quadratic_walsh(const FiniteField& field, const QuadraticForm& q, std::uint32_t a,
                               std::uint32_t b) {
  if (b == 0) fail(ErrorCode::ZeroB, "b must be nonzero");
  auto phi = [&](std::uint32_t x) { return field.abs_trace(field.mul(b, q(field, x)) ^ field.mul(a, x)); };
  std::vector<std::uint32_t> basis = q.kernel(field, b);
  QuadraticWalsh out;
  out.kernel_dimension = static_cast<unsigned>(basis.size());
  for (std::uint32_t v : basis) {
    if (phi(v) != 0) return out;
  }
  out.vanishes = true;

  // Echelonize by top bit; the remaining coordinates span a complement W and
  // phi(w + v) = phi(w) for v in the kernel.
  std::uint32_t pivots = 0;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    std::sort(basis.begin() + static_cast<std::ptrdiff_t>(r), basis.end(), std::greater<>());
    const std::uint32_t top = std::uint32_t{1} << (31 - std::countl_zero(basis[r]));
    pivots |= top;
    for (std::size_t s = r + 1; s < basis.size(); ++s) {
      if (basis[s] & top) basis[s] ^= basis[r];
    }
  }
  const std::uint32_t free_mask = (field.size() - 1) & ~pivots;
  std::int64_t sum = 0;
  // Enumerate all submasks of free_mask.
  std::uint32_t w = 0;
  do {
    sum += chi(phi(w));
    w = (w - free_mask) & free_mask;
  } while (w != 0);
  out.value = sum * static_cast<std::int64_t>(pow2(out.kernel_dimension));
  return out;
}

std::uint64_t binomial_root_count(const FiniteField& field, unsigned m, std::uint32_t a) {
  const std::uint32_t lead = field.frobenius(a, m);
  std::uint64_t count = 0;
  for (std::uint32_t x = 1; x < field.size(); ++x) {
    count += (field.mul(lead, field.frobenius(x, 2 * m)) ^ field.mul(a, x)) == 0;
  }
  return count;
}

std::uint64_t binomial_root_count_formula(const FiniteField& field, unsigned m, std::uint32_t a) {
  if (a == 0) fail(ErrorCode::ZeroInput, "a must be nonzero");
  const unsigned n = field.degree();
  const unsigned d = std::gcd(m, n);
  if ((n / d) % 2 == 1) return pow2(d) - 1;
  const auto e = static_cast<std::int64_t>(field.group_order() / (pow2(d) + 1));
  return field.pow(a, e) == 1 ? pow2(2 * d) - 1 : 0;
}

std::vector<std::uint32_t> projective_root_counts(const FiniteField& field, unsigned k, std::uint32_t b) {
  std::vector<std::uint32_t> counts(field.size(), 0);
  for (std::uint32_t x = 0; x < field.size(); ++x) {
    ++counts[field.mul(field.frobenius(x, k), x) ^ field.mul(b, x)];
  }
  return counts;
}

std::uint64_t linearized_root_count(const FiniteField& field, const LinearizedPoly& L) {
  std::uint64_t count = 0;
  for (std::uint32_t x = 0; x < field.size(); ++x) {
    std::uint32_t acc = 0;
    for (std::size_t t = 0; t < L.coeffs.size(); ++t) {
      acc ^= field.mul(L.coeffs[t], field.frobenius(x, static_cast<unsigned>(t * L.k % field.degree())));
    }
    count += acc == 0;
  }
  return count;
}

bool linear_root_bound_check(const FiniteField& field, const LinearizedPoly& L) {
  if (std::gcd(L.k, field.degree()) != 1) {
    fail(ErrorCode::GcdViolation, "gcd(k, n) = " + std::to_string(std::gcd(L.k, field.degree())));
  }
  std::size_t d = L.coeffs.size();
  while (d > 0 && L.coeffs[d - 1] == 0) --d;
  if (d == 0) fail(ErrorCode::ZeroInput, "zero polynomial");
  return linearized_root_count(field, L) <= pow2(static_cast<unsigned>(d - 1));
}

LinearizedPoly plateaued_kernel_poly(const FiniteField& field, std::uint32_t delta) {
  const std::uint32_t d2 = field.sqr(delta);
  const std::uint32_t D = 1 ^ delta ^ d2 ^ field.sqr(d2);
  return {2, {delta, D, field.sqr(D), field.frobenius(delta, 3)}};
}

// ---------------------------------------------------------------------------

namespace {

struct IdName {
  TheoremId id;
  const char* name;
};

constexpr IdName kIds[] = {
    {TheoremId::FourValuedDist, "four-valued-dist"}, {TheoremId::PlateauedQuadrinomial, "plateaued-quadrinomial"},
    {TheoremId::DoEx1, "do-ex1"},                     {TheoremId::DoEx2, "do-ex2"},
    {TheoremId::Pl2, "pl2"},                          {TheoremId::Pl3, "pl3"},
    {TheoremId::Pl4, "pl4"},                          {TheoremId::PropFourbe, "prop-fourbe"},
};

std::int64_t ipow2(unsigned e) { return static_cast<std::int64_t>(pow2(e)); }

Promise plateau_promise(unsigned n, unsigned r) {
  Promise p;
  p.plateau = r;
  const std::int64_t v = ipow2((n + r) / 2);
  p.values = {-v, 0, v};
  return p;
}

// Checks that the construction's family matches the theorem; returns a reason otherwise.
std::string family_mismatch(const TheoremCase& c) {
  const Family& fam = c.spec.family;
  switch (c.id) {
    case TheoremId::FourValuedDist:
      if (auto* s = std::get_if<NihoTrinomial>(&fam); s && s->variant.kind == NihoVariant::Kind::OneFifth) return {};
      return "needs a one-fifth Niho trinomial";
    case TheoremId::PropFourbe:
      if (auto* s = std::get_if<NihoTrinomial>(&fam); s && s->variant.kind != NihoVariant::Kind::OneFifth) return {};
      return "needs a plus or minus Niho trinomial";
    case TheoremId::PlateauedQuadrinomial:
      if (std::holds_alternative<Quadrinomial>(fam)) return {};
      return "needs a quadrinomial";
    case TheoremId::DoEx1:
      if (auto* s = std::get_if<DOProduct>(&fam); s && (s->shape == 1 || s->shape == 2)) return {};
      return "needs a DO product of shape 1 or 2";
    case TheoremId::DoEx2:
      if (auto* s = std::get_if<DOProduct>(&fam); s && s->shape == 3) return {};
      return "needs a DO product of shape 3";
    case TheoremId::Pl2:
      if (auto* s = std::get_if<TraceLinear>(&fam); s && s->shape.kind == TraceShape::Kind::Gold) return {};
      return "needs a trace-linear gold shape";
    case TheoremId::Pl3:
      if (auto* s = std::get_if<TraceLinear>(&fam); s && s->shape.kind == TraceShape::Kind::Halved) return {};
      return "needs a trace-linear halved shape";
    case TheoremId::Pl4:
      if (auto* s = std::get_if<TraceLinear>(&fam); s && s->shape.kind == TraceShape::Kind::Double) return {};
      return "needs a trace-linear double shape";
  }
  return "unknown theorem";
}

}  // namespace

std::string to_string(TheoremId id) {
  for (const auto& e : kIds) {
    if (e.id == id) return e.name;
  }
  return "unknown";
}

std::optional<TheoremId> parse_theorem_id(const std::string& text) {
  for (const auto& e : kIds) {
    if (text == e.name) return e.id;
  }
  return std::nullopt;
}

Promise TheoremCase::promise() const {
  const unsigned n = spec.ambient_degree();
  switch (id) {
    case TheoremId::FourValuedDist: {
      const unsigned m = std::get<NihoTrinomial>(spec.family).m;
      const std::int64_t N = ipow2(n), M = ipow2(m);
      Promise p;
      p.values = {-2 * M, -M, 0, M};
      p.histogram = std::map<std::int64_t, std::uint64_t>{
          {-2 * M, static_cast<std::uint64_t>((N - M + 4) / 6)},
          {-M, static_cast<std::uint64_t>(M - 2)},
          {0, static_cast<std::uint64_t>((N - M + 4) / 2)},
          {M, static_cast<std::uint64_t>((N - M - 2) / 3)},
      };
      return p;
    }
    case TheoremId::PropFourbe: {
      const auto& s = std::get<NihoTrinomial>(spec.family);
      const std::int64_t M = ipow2(s.m);
      Promise p;
      p.values = {-ipow2(s.m + std::gcd(s.variant.k, s.m)), -M, 0, M};
      return p;
    }
    case TheoremId::PlateauedQuadrinomial: {
      const auto& s = std::get<Quadrinomial>(spec.family);
      const Validity v = validate(spec);
      const bool one = std::find(v.conditions.begin(), v.conditions.end(), 1u) != v.conditions.end();
      return plateau_promise(n, one ? s.m + 1 : 2);
    }
    case TheoremId::DoEx1: {
      const auto& s = std::get<DOProduct>(spec.family);
      return plateau_promise(n, std::gcd(s.n, s.m));
    }
    case TheoremId::DoEx2: return plateau_promise(n, std::get<DOProduct>(spec.family).m);
    case TheoremId::Pl2: return plateau_promise(n, 2 * std::get<TraceLinear>(spec.family).m);
    case TheoremId::Pl3: return plateau_promise(n, std::get<TraceLinear>(spec.family).m);
    case TheoremId::Pl4: {
      const auto& s = std::get<TraceLinear>(spec.family);
      return plateau_promise(n, s.m * std::gcd(s.shape.i, s.k));
    }
  }
  return {};
}

Verdict verify_theorem(const TheoremCase& c) {
  if (const std::string why = family_mismatch(c); !why.empty()) {
    fail(ErrorCode::HypothesisViolated, to_string(c.id) + " " + why + ", got " + c.spec.tag());
  }
  const unsigned n = c.spec.ambient_degree();
  if (n == 0 || n > FiniteField::kMaxDegree) {
    fail(ErrorCode::HypothesisViolated, "ambient degree " + std::to_string(n) + " outside 1..20");
  }
  const Field field = FiniteField::create(n);
  const Validity valid = validate(c.spec, field);
  if (!valid) fail(ErrorCode::HypothesisViolated, to_string(c.id) + ": " + valid.clause);

  Verdict v;
  v.theorem = c;
  v.promise = c.promise();
  const Permutation p = Permutation::create_unchecked(c.spec, field);

  // The validator is not trusted on its own.
  if (!verify_permutation(p)) {
    v.counterexample = Counterexample{0, 0, "P is not a permutation"};
    return v;
  }
  const auto pre = two_to_one_compose(p).preimage_histogram();
  for (const auto& [count, elements] : pre) {
    if (count != 0 && count != 2) {
      v.counterexample = Counterexample{0, 0, "P(x^2 + x) is not 2-to-1"};
      return v;
    }
  }

  const BooleanFunction f = parameterize(p);
  const WalshSpectrum w = walsh_spectrum(f);
  for (const auto& [value, count] : w.histogram) v.measured[value] = count;
  const SpectrumClass cls = classify(w);
  v.classification = cls.name();

  const std::set<std::int64_t> allowed(v.promise.values.begin(), v.promise.values.end());
  for (std::uint32_t g = 0; g < w.values.size(); ++g) {
    if (!allowed.count(w.values[g])) {
      v.counterexample = Counterexample{g, w.values[g], "value outside the promised set"};
      return v;
    }
  }
  if (v.promise.histogram && *v.promise.histogram != v.measured) {
    v.counterexample = Counterexample{0, 0, "histogram differs from the promised distribution"};
    return v;
  }
  if (v.promise.plateau) {
    const unsigned r = *v.promise.plateau;
    if (r >= n) {
      v.notes.push_back("r = n: the promised spectrum is that of an affine function; checked by membership only");
    } else if (cls.tag != SpectrumClass::Tag::Plateaued || cls.r != r) {
      v.counterexample = Counterexample{0, 0, "classified " + cls.name() + ", expected " + std::to_string(r) + "-plateaued"};
      return v;
    }
  }
  if (c.id == TheoremId::PlateauedQuadrinomial) {
    std::ostringstream os;
    os << "conditions";
    for (unsigned k : valid.conditions) os << " (" << k << ")";
    v.notes.push_back(os.str());
    if (std::find(valid.conditions.begin(), valid.conditions.end(), 1u) != valid.conditions.end()) {
      const std::int64_t top = ipow2((n + *v.promise.plateau) / 2);
      const auto count_of = [&](std::int64_t x) { return v.measured.count(x) ? v.measured.at(x) : 0; };
      v.notes.push_back("measured split: +" + std::to_string(top) + " x" + std::to_string(count_of(top)) + ", -" +
                        std::to_string(top) + " x" + std::to_string(count_of(-top)));
    }
  }
  if (c.id == TheoremId::Pl4) v.notes.push_back("plateau order m*gcd(i,k) tested as a claim");
  v.pass = true;
  return v;
}

std::vector<Verdict> verify_theorems(const std::vector<TheoremCase>& cases, unsigned threads) {
  std::vector<Verdict> out(cases.size());
  std::vector<std::exception_ptr> errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        out[i] = verify_theorem(cases[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cases.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<TheoremCase> sample_cases(TheoremId id, const CaseParams& P) {
  std::vector<TheoremCase> out;
  const unsigned want = std::max(1u, P.count);

  // Walks alpha^0, alpha^1, ... and keeps specs that validate.
  auto sweep = [&](unsigned n, auto&& make) {
    if (n == 0 || n > FiniteField::kMaxDegree) {
      fail(ErrorCode::HypothesisViolated, "ambient degree " + std::to_string(n) + " outside 1..20");
    }
    const Field field = FiniteField::create(n);
    for (std::uint32_t j = 0; j < field->group_order() && out.size() < want; ++j) {
      const ConstructionSpec spec = make(*field, field->alpha_pow(j));
      if (validate(spec, field)) out.push_back({id, spec});
    }
  };

  switch (id) {
    case TheoremId::FourValuedDist: {
      const Field field = FiniteField::create(2 * P.m);
      const std::uint32_t w = subfield_embed(field, 2).bits();
      for (std::uint32_t c : {w, field->sqr(w)}) {
        if (out.size() < want) out.push_back({id, {NihoTrinomial{P.m, {}, c}}});
      }
      break;
    }
    case TheoremId::PropFourbe:
      sweep(2 * P.m, [&](const FiniteField&, std::uint32_t c) {
        return ConstructionSpec{NihoTrinomial{P.m, {P.variant, P.k}, c}};
      });
      break;
    case TheoremId::PlateauedQuadrinomial: {
      const unsigned cond = P.condition == 0 ? 2 : P.condition;
      const unsigned n = 2 * P.m;
      auto holds = [&](const ConstructionSpec& s) {
        const Validity v = validate(s);
        return std::find(v.conditions.begin(), v.conditions.end(), cond) != v.conditions.end();
      };
      if (cond == 3) {
        const Field field = FiniteField::create(n);
        const auto sub = subfield_elements(field, P.m);
        for (std::uint32_t a : sub) {
          for (std::uint32_t b : sub) {
            for (std::uint32_t c : sub) {
              if (out.size() >= want) break;
              const ConstructionSpec s{Quadrinomial{P.m, a, b, c}};
              if (holds(s)) out.push_back({id, s});
            }
          }
        }
      } else {
        const Field field = FiniteField::create(n);
        const std::uint32_t w = subfield_embed(field, 2).bits();
        for (std::uint32_t j = 0; j < field->group_order() && out.size() < want; ++j) {
          const std::uint32_t a = field->alpha_pow(j);
          const std::uint32_t b = cond == 1 ? field->mul(w, a ^ 1) ^ 1 : a ^ 1;
          const ConstructionSpec s{Quadrinomial{P.m, a, b, 1}};
          if (holds(s)) out.push_back({id, s});
        }
      }
      break;
    }
    case TheoremId::DoEx1:
      if (P.shape == 1) {
        const ConstructionSpec s{DOProduct{P.n, P.m, 1, 0}};
        if (validate(s)) out.push_back({id, s});
      } else {
        sweep(P.n, [&](const FiniteField&, std::uint32_t a) { return ConstructionSpec{DOProduct{P.n, P.m, 2, a}}; });
      }
      break;
    case TheoremId::DoEx2:
      sweep(3 * P.m, [&](const FiniteField&, std::uint32_t a) { return ConstructionSpec{DOProduct{3 * P.m, P.m, 3, a}}; });
      break;
    case TheoremId::Pl2:
      sweep(P.k * P.m, [&](const FiniteField&, std::uint32_t c) {
        return ConstructionSpec{TraceLinear{P.m, P.k, {TraceShape::Kind::Gold, P.i}, c}};
      });
      break;
    case TheoremId::Pl3:
      sweep(P.k * P.m, [&](const FiniteField&, std::uint32_t c) {
        return ConstructionSpec{TraceLinear{P.m, P.k, {TraceShape::Kind::Halved, 0}, c}};
      });
      break;
    case TheoremId::Pl4:
      sweep(P.k * P.m, [&](const FiniteField&, std::uint32_t c) {
        return ConstructionSpec{TraceLinear{P.m, P.k, {TraceShape::Kind::Double, P.i == 0 ? 1 : P.i}, c}};
      });
      break;
  }
  if (out.empty()) {
    fail(ErrorCode::HypothesisViolated, to_string(id) + ": no valid parameters for the given m, k, i, n");
  }
  return out;
}

namespace {

nlohmann::ordered_json histogram_json(const std::map<std::int64_t, std::uint64_t>& h) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [value, count] : h) j[std::to_string(value)] = count;
  return j;
}

}  // namespace

nlohmann::ordered_json to_json(const Promise& p) {
  nlohmann::ordered_json j;
  j["values"] = p.values;
  if (p.histogram) j["histogram"] = histogram_json(*p.histogram);
  if (p.plateau) j["plateau_r"] = *p.plateau;
  return j;
}

nlohmann::ordered_json to_json(const Verdict& v) {
  nlohmann::ordered_json j;
  j["case_id"] = to_string(v.theorem.id);
  j["params"] = to_json(v.theorem.spec);
  j["promise"] = to_json(v.promise);
  j["measured_histogram"] = histogram_json(v.measured);
  j["classification"] = v.classification;
  j["pass"] = v.pass;
  if (v.counterexample) {
    j["counterexample"] = {{"gamma", v.counterexample->gamma},
                           {"value", v.counterexample->value},
                           {"reason", v.counterexample->reason}};
  }
  if (!v.notes.empty()) j["notes"] = v.notes;
  return j;
}

}  // namespace walshforge
