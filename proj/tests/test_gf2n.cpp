#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "reference.hpp"
#include "walshforge/gf2_linalg.hpp"
#include "walshforge/gf2n.hpp"

using namespace walshforge;

namespace {

// Frozen from an exhaustive search for the lowest-weight, lexicographically
// smallest primitive polynomial of each degree; primitivity re-checked below
// with reference arithmetic.
constexpr std::uint32_t kModuli[21] = {0,       0x3,     0x7,     0xb,     0x13,    0x25,   0x43,
                                       0x83,    0x11d,   0x211,   0x409,   0x805,   0x1053, 0x201b,
                                       0x402b,  0x8003,  0x1002d, 0x20009, 0x40081, 0x80027, 0x100009};

ref::Field reference(const FiniteField& f) { return {f.degree(), f.modulus()}; }

}  // namespace

TEST_CASE("canonical moduli") {
  for (unsigned n = 1; n <= 20; ++n) {
    CAPTURE(n);
    CHECK(FiniteField::canonical_modulus(n) == kModuli[n]);
    if (n <= 16) CHECK(ref::Field{n, kModuli[n]}.is_primitive());
  }
}

TEST_CASE("multiplication matches shift-and-add") {
  for (unsigned n = 1; n <= 8; ++n) {
    const Field f = FiniteField::create(n);
    const ref::Field r = reference(*f);
    for (std::uint32_t a = 0; a < f->size(); ++a) {
      for (std::uint32_t b = 0; b < f->size(); ++b) REQUIRE(f->mul(a, b) == r.mul(a, b));
    }
  }
  std::mt19937 rng(7);
  for (unsigned n = 9; n <= 20; ++n) {
    const Field f = FiniteField::create(n);
    const ref::Field r = reference(*f);
    for (int t = 0; t < 20000; ++t) {
      const std::uint32_t a = rng() & (f->size() - 1), b = rng() & (f->size() - 1);
      REQUIRE(f->mul(a, b) == r.mul(a, b));
    }
  }
}

TEST_CASE("inverse, power, Frobenius, log") {
  for (unsigned n : {1u, 4u, 7u, 12u, 17u, 20u}) {
    const Field f = FiniteField::create(n);
    const ref::Field r = reference(*f);
    std::mt19937 rng(n);
    for (int t = 0; t < 2000; ++t) {
      const std::uint32_t a = 1 + rng() % f->group_order();
      CHECK(f->mul(a, f->inv(a)) == 1);
      const std::int64_t e = static_cast<std::int64_t>(rng() % 100000) - 50000;
      const std::uint64_t pe = static_cast<std::uint64_t>(((e % static_cast<std::int64_t>(f->group_order())) +
                                                           f->group_order()) % f->group_order());
      CHECK(f->pow(a, e) == r.pow(a, pe));
      const unsigned k = rng() % (2 * n);
      CHECK(f->frobenius(a, k) == r.pow(a, std::uint64_t{1} << (k % n)));
      CHECK(f->alpha_pow(f->log(a)) == a);
    }
  }
}

TEST_CASE("zero edge cases") {
  const Field f = FiniteField::create(5);
  CHECK(f->pow(0, 0) == 1);
  CHECK(f->pow(0, 3) == 0);
  CHECK_THROWS_AS(f->pow(0, -1), Error);
  CHECK_THROWS_AS(f->inv(0), Error);
  CHECK_THROWS_AS(f->log(0), Error);
}

TEST_CASE("absolute and relative traces") {
  for (unsigned n : {2u, 6u, 9u, 12u}) {
    const Field f = FiniteField::create(n);
    const ref::Field r = reference(*f);
    for (std::uint32_t a = 0; a < std::min<std::uint32_t>(f->size(), 4096); ++a) {
      REQUIRE(f->abs_trace(a) == r.trace(a));
      for (unsigned m = 1; m <= n; ++m) {
        if (n % m) continue;
        const std::uint32_t t = f->trace(a, m);
        REQUIRE(t == r.rel_trace(a, m));
        REQUIRE(f->in_subfield(t, m));
        // Transitivity down to GF(2).
        REQUIRE(f->subfield_trace(t, m, 1) == f->abs_trace(a));
      }
    }
  }
  const Field f = FiniteField::create(6);
  CHECK_THROWS_AS(f->trace(1, 4), Error);
}

TEST_CASE("trace form mask") {
  const Field f = FiniteField::create(10);
  std::mt19937 rng(3);
  for (int t = 0; t < 2000; ++t) {
    const std::uint32_t g = rng() & 1023, y = rng() & 1023;
    CHECK(static_cast<unsigned>(std::popcount(f->trace_form_mask(g) & y) & 1) == f->abs_trace(f->mul(g, y)));
  }
}

TEST_CASE("field construction errors") {
  CHECK_THROWS_AS(FiniteField::create(0), Error);
  CHECK_THROWS_AS(FiniteField::create(21), Error);
  try {
    FiniteField::create(4, 0x1f);  // x^4+x^3+x^2+x+1: irreducible, order 5
    FAIL("expected NonPrimitiveModulus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPrimitiveModulus);
  }
  try {
    FiniteField::create(4, 0x15);  // (x^2+x+1)^2
    FAIL("expected ReducibleModulus");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReducibleModulus);
  }
  CHECK(FiniteField::is_irreducible(0x1f, 4));
  CHECK_FALSE(FiniteField::is_irreducible(0x15, 4));
  // Conway polynomial for GF(2^6) is a valid alternative modulus.
  CHECK(FiniteField::create(6, 0x5b)->modulus() == 0x5b);
}

TEST_CASE("elements from different fields do not mix") {
  const Field a = FiniteField::create(6), b = FiniteField::create(6);
  CHECK_THROWS_AS(a->element(3) + b->element(3), Error);
  const FieldElement x = a->element(5), y = a->element(9);
  CHECK((x * y).bits() == a->mul(5, 9));
  CHECK((x / y * y) == x);
  CHECK(x.conj(3) == x.frobenius(3));
}

TEST_CASE("unit circle and polar decomposition") {
  for (unsigned m : {1u, 3u, 5u}) {
    const Field f = FiniteField::create(2 * m);
    const UnitCircle u = unit_circle(f, m);
    CHECK(u.elements.size() == (std::size_t{1} << m) + 1);
    std::set<std::uint32_t> seen;
    for (const auto& z : u.elements) {
      CHECK(z.pow(static_cast<std::int64_t>((1u << m) + 1)).is_one());
      seen.insert(z.bits());
    }
    CHECK(seen.size() == u.elements.size());
    for (std::uint32_t x = 1; x < f->size(); ++x) {
      const auto [y, z] = polar_decompose(f->element(x), m);
      REQUIRE(y.in_subfield(m));
      REQUIRE(seen.count(z.bits()));
      REQUIRE((y * z).bits() == x);
    }
  }
  CHECK_THROWS_AS(unit_circle(FiniteField::create(5), 2), Error);
  CHECK_THROWS_AS(polar_decompose(FiniteField::create(6)->zero(), 3), Error);
}

TEST_CASE("Mobius parameterization covers the circle") {
  const unsigned m = 3;
  const Field f = FiniteField::create(2 * m);
  const FieldElement omega = subfield_embed(f, 2);
  std::set<std::uint32_t> image;
  for (std::uint32_t t = 0; t < f->size(); ++t) {
    if (!f->in_subfield(t, m)) continue;
    const FieldElement z = mobius_param(f->element(t), omega, m);
    CHECK(z.pow(9).is_one());
    image.insert(z.bits());
  }
  // 2^m values of t hit 2^m of the 2^m + 1 circle points.
  CHECK(image.size() == 8);
  CHECK_THROWS_AS(mobius_param(f->one(), f->one(), m), Error);
}

TEST_CASE("subfield generator and modular inverse") {
  const Field f = FiniteField::create(12);
  for (unsigned d : {1u, 2u, 3u, 4u, 6u, 12u}) {
    const FieldElement g = subfield_embed(f, d);
    CHECK(g.in_subfield(d));
    CHECK(g.pow(static_cast<std::int64_t>((1u << d) - 1)).is_one());
  }
  CHECK_THROWS_AS(subfield_embed(f, 5), Error);
  CHECK(modular_inverse(3, 7) == 5);
  CHECK(modular_inverse(-1, 9) == 8);
  CHECK_THROWS_AS(modular_inverse(3, 9), Error);
  CHECK(gcd_u64(12, 18) == 6);
}

TEST_CASE("field spec text") {
  const Field f = parse_field_spec("n=6 modulus=0x5b");
  CHECK(f->degree() == 6);
  CHECK(format_field_spec(*f) == "n=6 modulus=0x5b");
  CHECK(parse_field_spec("n=8")->modulus() == 0x11d);
  CHECK_THROWS_AS(parse_field_spec("modulus=0x43"), Error);
  CHECK_THROWS_AS(parse_field_spec("n=six"), Error);
  CHECK_THROWS_AS(parse_field_spec("n=6 colour=red"), Error);
}

TEST_CASE("GF(2) null space") {
  // y -> y^4 + y on GF(64): kernel is GF(4), dimension 2.
  const Field f = FiniteField::create(6);
  std::vector<std::uint32_t> images;
  for (unsigned k = 0; k < 6; ++k) {
    const std::uint32_t y = 1u << k;
    images.push_back(f->frobenius(y, 2) ^ y);
  }
  const auto basis = null_space(images, 6);
  CHECK(basis.size() == 2);
  CHECK(rank_of(images, 6) == 4);
  for (std::uint32_t v : basis) CHECK(f->in_subfield(v, 2));
}
