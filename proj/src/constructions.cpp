#include "walshforge/constructions.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>
#include <string>

namespace walshforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t pow2(unsigned e) { return std::uint64_t{1} << e; }

// Exponent reduced into [1, 2^n - 1] so that x^e keeps 0 -> 0.
std::uint64_t reduce_exponent(std::uint64_t e, std::uint64_t order) {
  const std::uint64_t r = e % order;
  return r == 0 ? order : r;
}

std::uint32_t pow_pos(const FiniteField& f, std::uint32_t x, std::uint64_t e) {
  return f.pow(x, static_cast<std::int64_t>(reduce_exponent(e, f.group_order())));
}

Validity ok(std::string clause, std::vector<unsigned> conditions = {}) {
  return {true, std::move(clause), std::move(conditions)};
}

Validity bad(std::string clause) { return {false, std::move(clause), {}}; }

bool in_range(const FiniteField& f, std::uint32_t v) { return v < f.size(); }

std::uint32_t bar(const FiniteField& f, std::uint32_t v, unsigned m) { return f.frobenius(v, m); }

std::string variant_name(const NihoVariant& v) {
  switch (v.kind) {
    case NihoVariant::Kind::OneFifth: return "one-fifth";
    case NihoVariant::Kind::Plus: return "plus(" + std::to_string(v.k) + ")";
    case NihoVariant::Kind::Minus: return "minus(" + std::to_string(v.k) + ")";
  }
  return "?";
}

Validity validate_niho(const NihoTrinomial& s, const Field& field) {
  const FiniteField& f = *field;
  const unsigned m = s.m;
  if (!in_range(f, s.c)) return bad("c is not an element of GF(2^" + std::to_string(f.degree()) + ")");
  if (s.variant.kind == NihoVariant::Kind::OneFifth) {
    if (m % 2 == 0) return bad("one-fifth variant requires m odd");
    if (!f.in_subfield(s.c, 2) || s.c <= 1) return bad("c must lie in GF(4) \\ GF(2)");
    return ok("one-fifth: m odd, c in GF(4) \\ GF(2)");
  }
  const unsigned k = s.variant.k;
  if (k == 0 || k >= m) return bad("requires 0 < k < m");
  const bool plus = s.variant.kind == NihoVariant::Kind::Plus;
  const std::uint64_t g = gcd_u64(plus ? pow2(k) + 1 : pow2(k) - 1, pow2(m) + 1);
  if (g != 1) {
    return bad(std::string(plus ? "gcd(2^k+1, 2^m+1)" : "gcd(2^k-1, 2^m+1)") + " = " +
               std::to_string(g) + ", must be 1");
  }
  if (f.in_subfield(s.c, m)) return bad("c must lie outside GF(2^m)");
  ConstructionSpec spec{s};
  if (!verify_permutation(Permutation::create_unchecked(spec, field))) {
    return bad("c x + Tr(x^s) is not a permutation for this c");
  }
  return ok(variant_name(s.variant) + ": gcd condition holds, permutation checked");
}

Validity validate_quadrinomial(const Quadrinomial& s, const Field& field) {
  const FiniteField& f = *field;
  const unsigned m = s.m;
  if (m % 2 == 0) return bad("quadrinomial requires m odd");
  if (!in_range(f, s.a) || !in_range(f, s.b) || !in_range(f, s.c)) {
    return bad("coefficient is not a field element");
  }
  const std::uint32_t a = s.a, b = s.b, c = s.c;
  const std::uint32_t abar = bar(f, a, m);
  std::vector<unsigned> holds;

  if (c == 1) {
    const std::uint32_t w = subfield_embed(field, 2).bits();
    for (std::uint32_t omega : {w, f.sqr(w)}) {
      const std::uint32_t want_b = f.mul(omega, a ^ 1) ^ 1;
      const std::uint32_t side = f.mul(bar(f, omega, m), abar) ^ a ^ omega;
      if (b == want_b && side != 0) {
        holds.push_back(1);
        break;
      }
    }
    if (b == (a ^ 1) && (a ^ abar ^ 1) != 0) holds.push_back(2);
  }
  if (f.in_subfield(a, m) && f.in_subfield(b, m) && f.in_subfield(c, m)) {
    const std::uint32_t A = f.mul(a, b) ^ c;
    const std::uint32_t B = 1 ^ a ^ b ^ c;
    const std::uint32_t C = f.sqr(a) ^ f.sqr(b) ^ f.mul(a, c) ^ b;
    if (B != 0) {
      const std::uint32_t t = f.subfield_trace(f.div(A, f.sqr(B)), m, 1);
      if ((C == 0 && t == 1) || (C == f.sqr(B) && t == 0)) holds.push_back(3);
    }
  }
  if (holds.empty()) return bad("none of conditions (1), (2), (3) holds");
  std::string clause = "condition";
  for (unsigned h : holds) clause += " (" + std::to_string(h) + ")";
  return ok(clause, holds);
}

Validity validate_do(const DOProduct& s, const Field& field) {
  const FiniteField& f = *field;
  const unsigned n = s.n, m = s.m;
  if (!in_range(f, s.a)) return bad("a is not a field element");
  const std::uint64_t order = f.group_order();
  if (s.shape == 1 || s.shape == 2) {
    if (m == 0 || m >= n) return bad("requires 0 < m < n");
    const unsigned g = static_cast<unsigned>(std::gcd(n, m));
    if ((n / g) % 2 == 0) return bad("n / gcd(n, m) must be odd");
    if (s.shape == 1) return ok("shape 1: n / gcd(n, m) odd");
    if (f.pow(s.a, static_cast<std::int64_t>(order / (pow2(g) - 1))) == 1) {
      return bad("a^((2^n-1)/(2^gcd(n,m)-1)) must differ from 1");
    }
    return ok("shape 2: n / gcd(n, m) odd, a^((2^n-1)/(2^gcd-1)) != 1");
  }
  if (s.shape == 3) {
    if (m == 0 || n != 3 * m) return bad("shape 3 requires n = 3m");
    if (f.pow(s.a, static_cast<std::int64_t>(order / (pow2(m) - 1))) == 1) {
      return bad("a^((2^n-1)/(2^m-1)) must differ from 1");
    }
    return ok("shape 3: n = 3m, a^((2^n-1)/(2^m-1)) != 1");
  }
  return bad("shape must be 1, 2 or 3");
}

Validity validate_trace_linear(const TraceLinear& s, const Field& field) {
  const FiniteField& f = *field;
  const unsigned m = s.m, k = s.k;
  if (!in_range(f, s.c)) return bad("c is not a field element");
  switch (s.shape.kind) {
    case TraceShape::Kind::Gold:
      if (k % 4 != 2) return bad("gold shape requires k = 2 mod 4");
      if (!f.in_subfield(s.c, 2 * m) || f.in_subfield(s.c, m)) {
        return bad("c must lie in GF(2^2m) \\ GF(2^m)");
      }
      return ok("gold: k = 2 mod 4, c in GF(2^2m) \\ GF(2^m)");
    case TraceShape::Kind::Halved:
      if (k % 2 == 0) return bad("halved shape requires k odd");
      if (!f.in_subfield(s.c, m) || s.c <= 1) return bad("c must lie in GF(2^m) \\ GF(2)");
      return ok("halved: k odd, c in GF(2^m) \\ GF(2)");
    case TraceShape::Kind::Double: {
      if (s.shape.i == 0) return bad("double shape requires i >= 1");
      if (m % 2 != 0) return bad("double shape requires m even");
      if (m % 3 == 0) return bad("double shape requires m != 0 mod 3");
      if (k % 2 == 0) return bad("double shape requires k odd");
      if (s.c == 0 || !f.in_subfield(s.c, m)) return bad("c must lie in GF(2^m)*");
      // c^((2^m - 1)/3) computed in the big field equals the subfield power.
      if (f.pow(s.c, static_cast<std::int64_t>((pow2(m) - 1) / 3)) == 1) {
        return bad("c^((2^m-1)/3) must differ from 1");
      }
      return ok("double: m even, m != 0 mod 3, k odd, c^((2^m-1)/3) != 1");
    }
  }
  return bad("unknown shape");
}

Validity validate_monomial(const Monomial& s, const Field& field) {
  if (s.d == 0) return bad("d must be positive");
  if (gcd_u64(s.d, field->group_order()) != 1) return bad("gcd(d, 2^n - 1) must be 1");
  return ok("gcd(d, 2^n - 1) = 1");
}

Field field_for(const ConstructionSpec& spec, Field field) {
  const unsigned n = spec.ambient_degree();
  if (n == 0 || n > FiniteField::kMaxDegree) {
    fail(ErrorCode::InvalidSpec, "ambient degree " + std::to_string(n) + " outside 1..20");
  }
  if (!field) return FiniteField::create(n);
  if (field->degree() != n) {
    fail(ErrorCode::FieldMismatch, "spec lives in GF(2^" + std::to_string(n) + "), field has degree " +
                                       std::to_string(field->degree()));
  }
  return field;
}

}  // namespace

unsigned ConstructionSpec::ambient_degree() const {
  return std::visit(overloaded{
                        [](const NihoTrinomial& s) { return 2 * s.m; },
                        [](const Quadrinomial& s) { return 2 * s.m; },
                        [](const DOProduct& s) { return s.n; },
                        [](const TraceLinear& s) { return s.k * s.m; },
                        [](const Monomial& s) { return s.n; },
                    },
                    family);
}

std::string ConstructionSpec::tag() const {
  return std::visit(overloaded{
                        [](const NihoTrinomial&) { return std::string("niho-trinomial"); },
                        [](const Quadrinomial&) { return std::string("quadrinomial"); },
                        [](const DOProduct&) { return std::string("do"); },
                        [](const TraceLinear&) { return std::string("trace-linear"); },
                        [](const Monomial&) { return std::string("monomial"); },
                    },
                    family);
}

std::uint64_t build_niho_exponent(unsigned m, const NihoVariant& variant) {
  if (m == 0 || m > FiniteField::kMaxDegree / 2) {
    fail(ErrorCode::UnsupportedDegree, "Niho exponent needs 1 <= m <= 10");
  }
  const std::uint64_t M = pow2(m) + 1;
  std::uint64_t e = 0;
  try {
    switch (variant.kind) {
      case NihoVariant::Kind::OneFifth:
        e = modular_inverse(5, M);
        break;
      case NihoVariant::Kind::Plus:
      case NihoVariant::Kind::Minus: {
        const unsigned k = variant.k;
        if (k == 0 || k >= m) fail(ErrorCode::GcdConditionViolated, "requires 0 < k < m");
        const std::uint64_t den =
            variant.kind == NihoVariant::Kind::Plus ? pow2(k) + 1 : pow2(k) - 1;
        e = pow2(k) % M * modular_inverse(static_cast<std::int64_t>(den), M) % M;
        break;
      }
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::GcdConditionViolated) throw;
    fail(ErrorCode::GcdConditionViolated, std::string("fractional exponent undefined: ") + err.what());
  }
  return e * (pow2(m) - 1) + 1;
}

std::uint64_t trace_linear_exponent(unsigned m, const TraceShape& shape) {
  switch (shape.kind) {
    case TraceShape::Kind::Gold: return pow2(shape.i) * (pow2(m) + 1);
    case TraceShape::Kind::Halved: return (pow2(2 * m) + pow2(m)) / 2;
    case TraceShape::Kind::Double: return 2 * (pow2(shape.i * m) + 1);
  }
  return 0;
}

Validity validate(const ConstructionSpec& spec, const Field& field) {
  const unsigned n = spec.ambient_degree();
  if (n == 0 || n > FiniteField::kMaxDegree) {
    return bad("ambient degree " + std::to_string(n) + " outside 1..20");
  }
  if (field->degree() != n) return bad("field degree does not match the construction");
  return std::visit(overloaded{
                        [&](const NihoTrinomial& s) { return validate_niho(s, field); },
                        [&](const Quadrinomial& s) { return validate_quadrinomial(s, field); },
                        [&](const DOProduct& s) { return validate_do(s, field); },
                        [&](const TraceLinear& s) { return validate_trace_linear(s, field); },
                        [&](const Monomial& s) { return validate_monomial(s, field); },
                    },
                    spec.family);
}

Validity validate(const ConstructionSpec& spec) {
  const unsigned n = spec.ambient_degree();
  if (n == 0 || n > FiniteField::kMaxDegree) {
    return bad("ambient degree " + std::to_string(n) + " outside 1..20");
  }
  return validate(spec, FiniteField::create(n));
}

Permutation::Permutation(ConstructionSpec spec, Field field)
    : spec_(std::move(spec)), field_(std::move(field)) {
  const FiniteField& f = *field_;
  std::visit(overloaded{
                 [&](const NihoTrinomial& s) {
                   s_ = build_niho_exponent(s.m, s.variant);
                   sub_ = s.m;
                 },
                 [&](const Quadrinomial&) {},
                 [&](const DOProduct& s) {
                   if (s.shape < 1 || s.shape > 3) fail(ErrorCode::InvalidSpec, "DO shape must be 1..3");
                   if (s.shape == 3) a_pow_ = f.pow(s.a, static_cast<std::int64_t>(pow2(s.m) + 1));
                 },
                 [&](const TraceLinear& s) {
                   s_ = trace_linear_exponent(s.m, s.shape);
                   sub_ = s.m;
                 },
                 [&](const Monomial& s) {
                   if (s.d == 0) fail(ErrorCode::InvalidSpec, "monomial degree must be positive");
                 },
             },
             spec_.family);
}

Permutation Permutation::create(const ConstructionSpec& spec, Field field) {
  field = field_for(spec, std::move(field));
  const Validity v = validate(spec, field);
  if (!v) fail(ErrorCode::InvalidSpec, spec.tag() + ": " + v.clause);
  return Permutation(spec, std::move(field));
}

Permutation Permutation::create_unchecked(const ConstructionSpec& spec, Field field) {
  field = field_for(spec, std::move(field));
  return Permutation(spec, std::move(field));
}

std::uint32_t Permutation::operator()(std::uint32_t x) const {
  const FiniteField& f = *field_;
  return std::visit(
      overloaded{
          [&](const NihoTrinomial& s) { return f.mul(s.c, x) ^ f.trace(pow_pos(f, x, s_), sub_); },
          [&](const Quadrinomial& s) {
            const std::uint32_t xb = f.frobenius(x, s.m);
            const std::uint32_t xb2 = f.sqr(xb);
            const std::uint32_t x2 = f.sqr(x);
            return f.mul(xb2, xb) ^ f.mul(s.a, f.mul(xb2, x)) ^ f.mul(s.b, f.mul(xb, x2)) ^
                   f.mul(s.c, f.mul(x2, x));
          },
          [&](const DOProduct& s) {
            std::uint32_t l = 0;
            switch (s.shape) {
              case 1: l = f.frobenius(x, s.m); break;
              case 2: l = f.frobenius(x, s.m) ^ f.mul(s.a, f.frobenius(x, s.n - s.m)); break;
              default:
                l = f.frobenius(x, 2 * s.m) ^ f.mul(a_pow_, f.frobenius(x, s.m)) ^ f.mul(s.a, x);
            }
            return f.mul(x, l);
          },
          [&](const TraceLinear& s) { return f.mul(s.c, x) ^ f.trace(pow_pos(f, x, s_), sub_); },
          [&](const Monomial& s) { return pow_pos(f, x, s.d); },
      },
      spec_.family);
}

FieldElement Permutation::eval(const FieldElement& x) const {
  if (x.field_ptr() != field_.get()) fail(ErrorCode::FieldMismatch, "argument from another field");
  return {field_.get(), (*this)(x.bits())};
}

std::vector<Term> Permutation::terms() const {
  const FiniteField& f = *field_;
  const std::uint64_t order = f.group_order();
  std::vector<Term> raw;
  std::visit(overloaded{
                 [&](const NihoTrinomial& s) {
                   raw = {{s.c, 1}, {1, s_}, {1, s_ * pow2(s.m)}};
                 },
                 [&](const Quadrinomial& s) {
                   raw = {{1, 3 * pow2(s.m)}, {s.a, 2 * pow2(s.m) + 1}, {s.b, pow2(s.m) + 2}, {s.c, 3}};
                 },
                 [&](const DOProduct& s) {
                   if (s.shape == 1) {
                     raw = {{1, pow2(s.m) + 1}};
                   } else if (s.shape == 2) {
                     raw = {{1, pow2(s.m) + 1}, {s.a, pow2(s.n - s.m) + 1}};
                   } else {
                     raw = {{1, pow2(2 * s.m) + 1}, {a_pow_, pow2(s.m) + 1}, {s.a, 2}};
                   }
                 },
                 [&](const TraceLinear& s) {
                   raw = {{s.c, 1}};
                   std::uint64_t e = s_ % order;
                   for (unsigned j = 0; j < s.k; ++j) {
                     raw.push_back({1, e});
                     e = e * pow2(s.m) % order;
                   }
                 },
                 [&](const Monomial& s) { raw = {{1, s.d}}; },
             },
             spec_.family);
  std::map<std::uint64_t, std::uint32_t> merged;
  for (const Term& t : raw) merged[reduce_exponent(t.exponent, order)] ^= t.coeff;
  std::vector<Term> out;
  for (const auto& [e, c] : merged) {
    if (c != 0) out.push_back({c, e});
  }
  return out;
}

std::uint32_t Permutation::eval_terms(std::uint32_t x) const {
  std::uint32_t acc = 0;
  for (const Term& t : terms()) acc ^= field_->mul(t.coeff, pow_pos(*field_, x, t.exponent));
  return acc;
}

std::vector<std::uint32_t> Permutation::table() const {
  std::vector<std::uint32_t> out(field_->size());
  for (std::uint32_t x = 0; x < field_->size(); ++x) out[x] = (*this)(x);
  return out;
}

bool verify_permutation(const Permutation& p) {
  const std::uint32_t size = p.field()->size();
  std::vector<bool> seen(size, false);
  for (std::uint32_t x = 0; x < size; ++x) {
    const std::uint32_t y = p(x);
    if (seen[y]) return false;
    seen[y] = true;
  }
  return true;
}

std::uint32_t TwoToOne::operator()(std::uint32_t x) const {
  return p_(p_.field()->sqr(x) ^ x);
}

std::map<unsigned, std::uint64_t> TwoToOne::preimage_histogram() const {
  const std::uint32_t size = p_.field()->size();
  std::vector<unsigned> count(size, 0);
  for (std::uint32_t x = 0; x < size; ++x) ++count[(*this)(x)];
  std::map<unsigned, std::uint64_t> hist;
  for (unsigned c : count) ++hist[c];
  return hist;
}

BooleanFunction TwoToOne::image() const {
  const Field& field = p_.field();
  const std::uint32_t size = field->size();
  std::vector<unsigned> count(size, 0);
  for (std::uint32_t x = 0; x < size; ++x) ++count[(*this)(x)];
  BooleanFunction f(field);
  for (std::uint32_t y = 0; y < size; ++y) {
    if (count[y] == 2) {
      f.set(y, true);
    } else if (count[y] != 0) {
      fail(ErrorCode::NotTwoToOne, "element " + std::to_string(y) + " has " + std::to_string(count[y]) +
                                       " preimages under P(x^2 + x)");
    }
  }
  return f;
}

TwoToOne two_to_one_compose(const Permutation& p) { return TwoToOne(p); }

BooleanFunction parameterize(const Permutation& p) { return TwoToOne(p).image(); }

std::vector<Term> NihoPolynomial::expand(const FiniteField& field) const {
  if (field.degree() != 2 * m) fail(ErrorCode::OddAmbientDegree, "Niho form needs n = 2m");
  const std::uint64_t order = field.group_order();
  std::vector<Term> out;
  for (const Term& t : h) out.push_back({t.coeff, reduce_exponent(r + t.exponent * (pow2(m) - 1), order)});
  return out;
}

NihoPolynomial niho_form(const NihoTrinomial& spec) {
  const std::uint64_t M = pow2(spec.m) + 1;
  const std::uint64_t s = build_niho_exponent(spec.m, spec.variant);
  const std::uint64_t e = (s - 1) / (pow2(spec.m) - 1) % M;
  return NihoPolynomial{spec.m, 1, {{spec.c, 0}, {1, e}, {1, (1 + M - e) % M}}};
}

unsigned EpsilonVector::trace_quantity() const {
  if (eps[0].is_zero()) fail(ErrorCode::Eps1Zero, "eps1 = 0");
  const FieldElement num = eps[1] * eps[1] + eps[0] * eps[2];
  const FieldElement mix = eps[0] * eps[3] + eps[1] * eps[2];
  if (mix.is_zero()) fail(ErrorCode::DivisionByZero, "eps1 eps4 + eps2 eps3 = 0");
  const FieldElement q = num * num * num / (mix * mix * eps[0] * eps[0]);
  if (!q.in_subfield(m)) fail(ErrorCode::ElementOutOfRange, "trace argument not in GF(2^m)");
  return q.field().subfield_trace(q.bits(), m, 1);
}

EpsilonVector epsilon_params(const FieldElement& gamma, const FieldElement& a, const FieldElement& b,
                             const FieldElement& c, const FieldElement& omega, unsigned m) {
  if (gamma.field().degree() != 2 * m) fail(ErrorCode::OddAmbientDegree, "epsilon parameters need n = 2m");
  const FieldElement g = gamma, gb = gamma.conj(m);
  const FieldElement ab = a.conj(m), bb = b.conj(m), cb = c.conj(m), w = omega, wb = omega.conj(m);
  const FieldElement u = gb + g * c;         // conj(gamma) + gamma c
  const FieldElement ub = g + gb * cb;       // conj(u)
  const FieldElement p = g * a + gb * bb;    // gamma a + conj(gamma b)
  const FieldElement v = g * b + gb * ab;    // conj(p)
  EpsilonVector e;
  e.m = m;
  e.eps[0] = u + ub + p + v;
  e.eps[1] = w * u + wb * ub + w * p + wb * v;
  e.eps[2] = wb * u + w * ub + wb * v + w * p;
  e.eps[3] = u + ub + w * v + wb * p;
  e.veps[0] = e.eps[0];
  e.veps[1] = e.eps[1] + e.eps[0];
  e.veps[2] = e.eps[2] + e.eps[0];
  e.veps[3] = e.eps[3] + (v + v.conj(m));
  return e;
}

std::vector<std::uint32_t> subfield_elements(const Field& field, unsigned d) {
  const FieldElement g = subfield_embed(field, d);
  std::vector<std::uint32_t> out{0};
  FieldElement z = field->one();
  for (std::uint64_t j = 0; j + 1 < pow2(d); ++j) {
    out.push_back(z.bits());
    z = z * g;
  }
  return out;
}

namespace {

using KeyMap = std::map<std::string, std::string>;

const char* const kSpecKeys[] = {"family", "m", "k", "i", "n", "shape", "variant", "a", "b", "c", "d"};

std::uint64_t parse_uint(const KeyMap& keys, const std::string& key, std::optional<std::uint64_t> fallback) {
  const auto it = keys.find(key);
  if (it == keys.end()) {
    if (fallback) return *fallback;
    fail(ErrorCode::InvalidSpec, "missing key '" + key + "'");
  }
  std::uint64_t v = 0;
  const std::string& text = it->second;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::InvalidSpec, "key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

unsigned parse_small(const KeyMap& keys, const std::string& key, std::optional<std::uint64_t> fallback) {
  const std::uint64_t v = parse_uint(keys, key, fallback);
  if (v > 64) fail(ErrorCode::InvalidSpec, "key '" + key + "': value " + std::to_string(v) + " too large");
  return static_cast<unsigned>(v);
}

std::int64_t parse_signed(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty()) {
    fail(ErrorCode::InvalidSpec, "key '" + key + "': bad integer '" + text + "'");
  }
  return v;
}

std::uint32_t parse_coefficient(const std::string& key, const std::string& text, const Field& field) {
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) {
    std::uint32_t v = 0;
    const std::string hex = text.substr(2);
    auto [p, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
    if (ec != std::errc{} || p != hex.data() + hex.size() || hex.empty()) {
      fail(ErrorCode::InvalidSpec, "key '" + key + "': bad hex coefficient '" + text + "'");
    }
    if (v >= field->size()) fail(ErrorCode::InvalidSpec, "key '" + key + "': " + text + " is not a field element");
    return v;
  }
  if (text.rfind("alpha^", 0) == 0) return field->alpha_pow(parse_signed(key, text.substr(6)));
  if (text == "alpha") return field->alpha_pow(1);
  if (text.rfind("subfield:", 0) == 0) {
    const std::string rest = text.substr(9);
    const auto caret = rest.find('^');
    const std::int64_t d = parse_signed(key, rest.substr(0, caret));
    const std::int64_t j = caret == std::string::npos ? 1 : parse_signed(key, rest.substr(caret + 1));
    if (d <= 0 || field->degree() % d != 0) {
      fail(ErrorCode::InvalidSpec, "key '" + key + "': GF(2^" + std::to_string(d) + ") is not a subfield");
    }
    return subfield_embed(field, static_cast<unsigned>(d)).pow(j).bits();
  }
  const std::int64_t v = parse_signed(key, text);
  if (v < 0 || v >= field->size()) {
    fail(ErrorCode::InvalidSpec, "key '" + key + "': " + text + " is not a field element");
  }
  return static_cast<std::uint32_t>(v);
}

// First alpha^j (j = 0, 1, ...) for which set(alpha^j) yields a valid spec.
template <class Setter>
std::uint32_t first_valid_power(ConstructionSpec spec, const Field& field, Setter set, const std::string& key) {
  for (std::uint32_t j = 0; j < field->group_order(); ++j) {
    set(spec, field->alpha_pow(j));
    if (validate(spec, field)) return field->alpha_pow(j);
  }
  fail(ErrorCode::InvalidSpec, "no alpha^j makes the construction valid for key '" + key + "'");
}

ConstructionSpec build_spec(const KeyMap& keys, const Field& given) {
  for (const auto& [key, value] : keys) {
    if (std::find(std::begin(kSpecKeys), std::end(kSpecKeys), key) == std::end(kSpecKeys)) {
      fail(ErrorCode::InvalidSpec, "unknown key '" + key + "'");
    }
  }
  const auto fam = keys.find("family");
  if (fam == keys.end()) fail(ErrorCode::InvalidSpec, "missing key 'family'");
  const std::string& tag = fam->second;

  auto allow_only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : keys) {
      if (key == "family") continue;
      bool found = false;
      for (const char* a : allowed) found = found || key == a;
      if (!found) fail(ErrorCode::InvalidSpec, "key '" + key + "' does not apply to family " + tag);
    }
  };
  auto make_field = [&](unsigned n) {
    if (n == 0 || n > FiniteField::kMaxDegree) {
      fail(ErrorCode::InvalidSpec, "ambient degree " + std::to_string(n) + " outside 1..20");
    }
    if (!given) return FiniteField::create(n);
    if (given->degree() != n) {
      fail(ErrorCode::InvalidSpec, "field degree " + std::to_string(given->degree()) +
                                       " does not match ambient degree " + std::to_string(n));
    }
    return given;
  };
  auto coef = [&](const char* key, const Field& field) -> std::optional<std::uint32_t> {
    const auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    return parse_coefficient(key, it->second, field);
  };

  if (tag == "niho-trinomial") {
    allow_only({"m", "k", "variant", "c"});
    NihoTrinomial s;
    s.m = parse_small(keys, "m", std::nullopt);
    const std::string variant = keys.count("variant") ? keys.at("variant") : "one-fifth";
    if (variant == "one-fifth") {
      s.variant.kind = NihoVariant::Kind::OneFifth;
      if (keys.count("k")) fail(ErrorCode::InvalidSpec, "key 'k' does not apply to variant one-fifth");
    } else if (variant == "plus" || variant == "minus") {
      s.variant.kind = variant == "plus" ? NihoVariant::Kind::Plus : NihoVariant::Kind::Minus;
      s.variant.k = parse_small(keys, "k", std::nullopt);
    } else {
      fail(ErrorCode::InvalidSpec, "key 'variant': expected one-fifth, plus or minus, got '" + variant + "'");
    }
    const Field field = make_field(2 * s.m);
    if (auto c = coef("c", field)) {
      s.c = *c;
    } else if (s.variant.kind == NihoVariant::Kind::OneFifth) {
      s.c = subfield_embed(field, 2).bits();
    } else {
      s.c = first_valid_power(ConstructionSpec{s}, field,
                              [](ConstructionSpec& sp, std::uint32_t v) { std::get<NihoTrinomial>(sp.family).c = v; },
                              "c");
    }
    return {s};
  }
  if (tag == "quadrinomial") {
    allow_only({"m", "a", "b", "c"});
    Quadrinomial s;
    s.m = parse_small(keys, "m", std::nullopt);
    const Field field = make_field(2 * s.m);
    for (const char* key : {"a", "b", "c"}) {
      if (!keys.count(key)) fail(ErrorCode::InvalidSpec, std::string("missing key '") + key + "'");
    }
    s.a = *coef("a", field);
    s.b = *coef("b", field);
    s.c = *coef("c", field);
    return {s};
  }
  if (tag == "do") {
    allow_only({"n", "m", "shape", "a"});
    DOProduct s;
    s.m = parse_small(keys, "m", std::nullopt);
    s.shape = parse_small(keys, "shape", 1);
    if (s.shape < 1 || s.shape > 3) fail(ErrorCode::InvalidSpec, "key 'shape': expected 1, 2 or 3");
    s.n = parse_small(keys, "n", s.shape == 3 ? std::optional<std::uint64_t>(3 * s.m) : std::nullopt);
    const Field field = make_field(s.n);
    if (auto a = coef("a", field)) {
      s.a = *a;
    } else if (s.shape != 1) {
      s.a = first_valid_power(ConstructionSpec{s}, field,
                              [](ConstructionSpec& sp, std::uint32_t v) { std::get<DOProduct>(sp.family).a = v; },
                              "a");
    }
    return {s};
  }
  if (tag == "trace-linear") {
    allow_only({"m", "k", "i", "shape", "c"});
    TraceLinear s;
    s.m = parse_small(keys, "m", std::nullopt);
    s.k = parse_small(keys, "k", std::nullopt);
    const std::string shape = keys.count("shape") ? keys.at("shape") : "";
    if (shape == "gold") {
      s.shape = {TraceShape::Kind::Gold, parse_small(keys, "i", 0)};
    } else if (shape == "halved") {
      if (keys.count("i")) fail(ErrorCode::InvalidSpec, "key 'i' does not apply to shape halved");
      s.shape = {TraceShape::Kind::Halved, 0};
    } else if (shape == "double") {
      s.shape = {TraceShape::Kind::Double, parse_small(keys, "i", 1)};
    } else {
      fail(ErrorCode::InvalidSpec, "key 'shape': expected gold, halved or double, got '" + shape + "'");
    }
    const Field field = make_field(s.m * s.k);
    if (auto c = coef("c", field)) {
      s.c = *c;
    } else {
      s.c = first_valid_power(ConstructionSpec{s}, field,
                              [](ConstructionSpec& sp, std::uint32_t v) { std::get<TraceLinear>(sp.family).c = v; },
                              "c");
    }
    return {s};
  }
  if (tag == "monomial") {
    allow_only({"n", "d"});
    Monomial s;
    s.n = parse_small(keys, "n", std::nullopt);
    s.d = parse_uint(keys, "d", std::nullopt);
    make_field(s.n);
    return {s};
  }
  fail(ErrorCode::InvalidSpec, "key 'family': unknown family '" + tag + "'");
}

std::string hex(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

ConstructionSpec parse_spec(const std::string& text, const Field& field) {
  std::istringstream in(text);
  std::string token;
  KeyMap keys;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorCode::InvalidSpec, "malformed token '" + token + "'");
    const std::string key = token.substr(0, eq);
    if (keys.count(key)) fail(ErrorCode::InvalidSpec, "duplicate key '" + key + "'");
    keys[key] = token.substr(eq + 1);
  }
  return build_spec(keys, field);
}

nlohmann::ordered_json to_json(const ConstructionSpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = spec.tag();
  std::visit(overloaded{
                 [&](const NihoTrinomial& s) {
                   j["m"] = s.m;
                   switch (s.variant.kind) {
                     case NihoVariant::Kind::OneFifth: j["variant"] = "one-fifth"; break;
                     case NihoVariant::Kind::Plus: j["variant"] = "plus"; j["k"] = s.variant.k; break;
                     case NihoVariant::Kind::Minus: j["variant"] = "minus"; j["k"] = s.variant.k; break;
                   }
                   j["c"] = hex(s.c);
                 },
                 [&](const Quadrinomial& s) {
                   j["m"] = s.m;
                   j["a"] = hex(s.a);
                   j["b"] = hex(s.b);
                   j["c"] = hex(s.c);
                 },
                 [&](const DOProduct& s) {
                   j["n"] = s.n;
                   j["m"] = s.m;
                   j["shape"] = s.shape;
                   if (s.shape != 1) j["a"] = hex(s.a);
                 },
                 [&](const TraceLinear& s) {
                   j["m"] = s.m;
                   j["k"] = s.k;
                   switch (s.shape.kind) {
                     case TraceShape::Kind::Gold: j["shape"] = "gold"; j["i"] = s.shape.i; break;
                     case TraceShape::Kind::Halved: j["shape"] = "halved"; break;
                     case TraceShape::Kind::Double: j["shape"] = "double"; j["i"] = s.shape.i; break;
                   }
                   j["c"] = hex(s.c);
                 },
                 [&](const Monomial& s) {
                   j["n"] = s.n;
                   j["d"] = s.d;
                 },
             },
             spec.family);
  return j;
}

std::string format_spec(const ConstructionSpec& spec) {
  const nlohmann::ordered_json j = to_json(spec);
  std::string out;
  for (const auto& [key, value] : j.items()) {
    if (!out.empty()) out += ' ';
    out += key + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
  }
  return out;
}

ConstructionSpec spec_from_json(const nlohmann::json& j, const Field& field) {
  if (!j.is_object()) fail(ErrorCode::InvalidSpec, "spec JSON must be an object");
  KeyMap keys;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) keys[key] = value.get<std::string>();
    else if (value.is_number_unsigned() || value.is_number_integer()) keys[key] = value.dump();
    else fail(ErrorCode::InvalidSpec, "key '" + key + "': expected a string or integer");
  }
  return build_spec(keys, field);
}

}  // namespace walshforge
