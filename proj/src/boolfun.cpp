#include "walshforge/boolfun.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "walshforge/gf2_linalg.hpp"
#include "walshforge/kernels.hpp"

namespace walshforge {

namespace {

std::size_t word_count(unsigned n) { return n <= 6 ? 1 : std::size_t{1} << (n - 6); }

WalshSpectrum finish(unsigned n, std::vector<std::int32_t> values) {
  WalshSpectrum s;
  s.n = n;
  s.values = std::move(values);
  for (std::int32_t v : s.values) ++s.histogram[v];
  return s;
}

}  // namespace

BooleanFunction::BooleanFunction(Field field)
    : field_(std::move(field)), words_(word_count(field_->degree()), 0) {}

BooleanFunction::BooleanFunction(Field field, std::vector<std::uint64_t> words)
    : field_(std::move(field)), words_(std::move(words)) {
  if (words_.size() != word_count(field_->degree())) {
    fail(ErrorCode::ElementOutOfRange, "truth table length does not match 2^n");
  }
  if (field_->degree() < 6) words_[0] &= (std::uint64_t{1} << size()) - 1;
}

BooleanFunction BooleanFunction::from_support(const Field& field,
                                              std::span<const std::uint32_t> support) {
  BooleanFunction f(field);
  for (std::uint32_t x : support) {
    if (x >= field->size()) {
      fail(ErrorCode::ElementOutOfRange, std::to_string(x) + " is not a field element");
    }
    f.set(x, true);
  }
  return f;
}

std::uint64_t BooleanFunction::weight() const noexcept {
  std::uint64_t w = 0;
  for (std::uint64_t word : words_) w += static_cast<std::uint64_t>(std::popcount(word));
  return w;
}

std::vector<std::uint32_t> BooleanFunction::support() const {
  std::vector<std::uint32_t> out;
  out.reserve(weight());
  for (std::uint32_t x = 0; x < size(); ++x) {
    if ((*this)(x)) out.push_back(x);
  }
  return out;
}

BooleanFunction BooleanFunction::complement() const {
  std::vector<std::uint64_t> w(words_);
  for (auto& word : w) word = ~word;
  return BooleanFunction(field_, std::move(w));
}

std::int32_t WalshSpectrum::max_abs() const {
  std::int32_t m = 0;
  for (std::int32_t v : values) m = std::max(m, std::abs(v));
  return m;
}

WalshSpectrum walsh_spectrum(const BooleanFunction& f) {
  const FiniteField& field = *f.field();
  const std::uint32_t size = field.size();
  std::vector<std::int32_t> h(size);
  for (std::uint32_t x = 0; x < size; ++x) h[x] = f(x) ? -1 : 1;
  kernels::fwht(h);

  // h[u] = sum_x (-1)^(f(x) + u.x); Tr(gamma x) = mask(gamma).x with mask linear.
  std::vector<std::int32_t> values(size);
  std::vector<std::uint32_t> mask(size, 0);
  values[0] = h[0];
  for (std::uint32_t g = 1; g < size; ++g) {
    const std::uint32_t low = g & (g - 1);
    mask[g] = mask[low] ^ field.trace_form_mask(g ^ low);
    values[g] = h[mask[g]];
  }
  return finish(f.n(), std::move(values));
}

WalshSpectrum walsh_spectrum_direct(const BooleanFunction& f) {
  const FiniteField& field = *f.field();
  const std::uint32_t size = field.size();
  std::vector<std::int32_t> values(size);
  for (std::uint32_t g = 0; g < size; ++g) {
    std::int32_t acc = 0;
    for (std::uint32_t x = 0; x < size; ++x) {
      const unsigned e = static_cast<unsigned>(f(x)) ^ field.abs_trace(field.mul(g, x));
      acc += e ? -1 : 1;
    }
    values[g] = acc;
  }
  return finish(f.n(), std::move(values));
}

bool is_balanced(const WalshSpectrum& s) { return s.values.at(0) == 0; }
bool is_balanced(const BooleanFunction& f) { return 2 * f.weight() == f.size(); }

std::int64_t nonlinearity(const WalshSpectrum& s) {
  return (std::int64_t{1} << (s.n - 1)) - s.max_abs() / 2;
}

std::int64_t nonlinearity(const BooleanFunction& f) { return nonlinearity(walsh_spectrum(f)); }

std::vector<std::uint64_t> AnfPolynomial::evaluate_all() const {
  std::vector<std::uint64_t> out(coefficients);
  kernels::mobius(out, n);
  return out;
}

AnfPolynomial anf(const BooleanFunction& f) {
  AnfPolynomial p;
  p.n = f.n();
  p.coefficients.assign(f.words().begin(), f.words().end());
  kernels::mobius(p.coefficients, p.n);
  for (std::uint32_t u = 0; u < f.size(); ++u) {
    if (p.coefficient(u)) p.degree = std::max(p.degree, static_cast<unsigned>(std::popcount(u)));
  }
  return p;
}

unsigned algebraic_degree(const BooleanFunction& f) { return anf(f).degree; }

namespace {

// Least d <= cap admitting a nonzero h of degree <= d vanishing on points;
// cap + 1 if none. Monomials enter by degree, then by numeric index.
unsigned annihilator_degree_capped(std::span<const std::uint32_t> points, unsigned n, unsigned cap) {
  if (points.empty()) return 0;
  EchelonBasis basis(points.size());
  std::vector<std::uint64_t> column(basis.words());
  const std::uint32_t size = std::uint32_t{1} << n;
  for (unsigned d = 0; d <= std::min(cap, n); ++d) {
    for (std::uint32_t u = 0; u < size; ++u) {
      if (static_cast<unsigned>(std::popcount(u)) != d) continue;
      std::fill(column.begin(), column.end(), 0);
      for (std::size_t j = 0; j < points.size(); ++j) {
        if ((points[j] & u) == u) column[j >> 6] |= std::uint64_t{1} << (j & 63);
      }
      if (!basis.insert(column)) return d;
    }
  }
  return cap + 1;
}

}  // namespace

unsigned annihilator_degree(std::span<const std::uint32_t> points, unsigned n) {
  return annihilator_degree_capped(points, n, n);
}

unsigned algebraic_immunity(const BooleanFunction& f) {
  if (f.n() > kMaxAiDegree) {
    fail(ErrorCode::DegreeTooLarge, "algebraic immunity limited to n <= 14, got n=" +
                                        std::to_string(f.n()));
  }
  const auto ones = f.support();
  const auto zeros = f.complement().support();
  // Annihilators of f vanish on supp(f); those of f + 1 vanish on the zeros.
  const unsigned a = annihilator_degree_capped(ones, f.n(), f.n());
  if (a == 0) return 0;
  const unsigned b = annihilator_degree_capped(zeros, f.n(), a - 1);
  return std::min(a, b);
}

std::vector<std::uint32_t> univariate_representation(const BooleanFunction& f) {
  const FiniteField& field = *f.field();
  const std::uint32_t order = field.group_order();
  std::vector<std::uint32_t> coeffs(field.size(), 0);
  coeffs[0] = f(0) ? 1 : 0;
  coeffs[order] = static_cast<std::uint32_t>(f.weight() & 1);

  std::vector<std::uint32_t> logs;
  for (std::uint32_t c = 1; c < field.size(); ++c) {
    if (f(c)) logs.push_back(field.log(c));
  }
  std::vector<bool> done(field.size(), false);
  for (std::uint32_t i = 1; i + 1 < field.size(); ++i) {
    if (done[i]) continue;
    // a_i = sum over nonzero c in the support of c^(-i).
    std::uint32_t v = 0;
    for (std::uint32_t l : logs) {
      const std::uint64_t e = static_cast<std::uint64_t>(l) * i % order;
      v ^= field.alpha_pow(-static_cast<std::int64_t>(e));
    }
    std::uint32_t j = i;
    do {
      coeffs[j] = v;
      done[j] = true;
      j = static_cast<std::uint32_t>((2 * std::uint64_t{j}) % order);
      v = field.sqr(v);
    } while (j != i);
  }
  return coeffs;
}

std::uint32_t evaluate_univariate(const FiniteField& field, std::span<const std::uint32_t> coeffs,
                                  std::uint32_t x) {
  if (x == 0) return coeffs[0];
  std::uint32_t acc = 0;
  std::uint32_t power = 1;
  for (std::uint32_t c : coeffs) {
    acc ^= field.mul(c, power);
    power = field.mul(power, x);
  }
  return acc;
}

std::string SpectrumClass::name() const {
  switch (tag) {
    case Tag::Bent: return "bent";
    case Tag::Plateaued:
      if (r == 1) return "near-bent";
      if (r == 2) return "semi-bent";
      return std::to_string(r) + "-plateaued";
    case Tag::FourValued: return "four-valued";
    case Tag::Other: return "other";
  }
  return "other";
}

SpectrumClass classify(const WalshSpectrum& s) {
  SpectrumClass c;
  for (const auto& [v, count] : s.histogram) c.values.push_back(v);  // map keeps them sorted
  std::set<std::int64_t> magnitudes;
  bool has_zero = false;
  for (std::int32_t v : c.values) {
    if (v == 0) has_zero = true; else magnitudes.insert(std::abs(v));
  }
  const unsigned n = s.n;
  if (!has_zero && magnitudes.size() == 1 && n % 2 == 0 &&
      *magnitudes.begin() == (std::int64_t{1} << (n / 2))) {
    c.tag = SpectrumClass::Tag::Bent;
    return c;
  }
  if (has_zero && magnitudes.size() == 1) {
    const std::int64_t mag = *magnitudes.begin();
    if (std::has_single_bit(static_cast<std::uint64_t>(mag))) {
      const int r = 2 * std::countr_zero(static_cast<std::uint64_t>(mag)) - static_cast<int>(n);
      if (r > 0 && r < static_cast<int>(n)) {
        c.tag = SpectrumClass::Tag::Plateaued;
        c.r = static_cast<unsigned>(r);
        return c;
      }
    }
  }
  if (c.values.size() == 4) c.tag = SpectrumClass::Tag::FourValued;
  return c;
}

void write_truth_table(std::ostream& out, const BooleanFunction& f) {
  out << "n=" << f.n() << '\n';
  for (std::uint32_t x = 0; x < f.size(); ++x) out << (f(x) ? '1' : '0');
  out << '\n';
}

BooleanFunction read_truth_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("n=", 0) != 0) {
    fail(ErrorCode::ParseError, "truth table must start with n=<int>");
  }
  unsigned n = 0;
  try {
    n = static_cast<unsigned>(std::stoul(header.substr(2)));
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "bad degree line: " + header);
  }
  Field field = FiniteField::create(n);
  std::string bits;
  std::getline(in, bits);
  while (!bits.empty() && (bits.back() == '\r' || bits.back() == ' ')) bits.pop_back();
  if (bits.size() != field->size()) {
    fail(ErrorCode::ParseError, "expected " + std::to_string(field->size()) + " table bits, got " +
                                    std::to_string(bits.size()));
  }
  BooleanFunction f(field);
  for (std::uint32_t x = 0; x < field->size(); ++x) {
    if (bits[x] == '1') f.set(x, true);
    else if (bits[x] != '0') fail(ErrorCode::ParseError, "table characters must be 0 or 1");
  }
  return f;
}

void write_spectrum_csv(std::ostream& out, const WalshSpectrum& s) {
  out << "gamma,value\n";
  for (std::size_t g = 0; g < s.values.size(); ++g) out << g << ',' << s.values[g] << '\n';
}

}  // namespace walshforge
