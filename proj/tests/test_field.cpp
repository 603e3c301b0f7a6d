#include <gtest/gtest.h>

#include "onc/field.hpp"

namespace {

using onc::GaloisField;
using onc::Symbol;

// Carry-less multiply followed by polynomial reduction.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly, int bits) {
  std::uint32_t product = 0;
  for (int i = 0; i < bits; ++i) {
    if (b & (1u << i)) product ^= a << i;
  }
  for (int i = 2 * bits - 2; i >= bits; --i) {
    if (product & (1u << i)) product ^= poly << (i - bits);
  }
  return product;
}

bool irreducible(std::uint32_t poly, int bits) {
  // Trial division by every polynomial of degree 1..bits/2.
  auto degree = [](std::uint32_t p) { return 31 - __builtin_clz(p); };
  for (std::uint32_t d = 2; degree(d) <= bits / 2; ++d) {
    std::uint32_t r = poly;
    while (r && degree(r) >= degree(d)) r ^= d << (degree(r) - degree(d));
    if (r == 0) return false;
  }
  return true;
}

TEST(Field, AesExample) {
  const auto& f = GaloisField::of(8);
  EXPECT_EQ(f.polynomial(), 0x11Bu);
  EXPECT_EQ(f.mul(0x53, 0xCA), 0x01);
  EXPECT_EQ(f.inv(0x53), 0xCA);
}

TEST(Field, AdditionIsXor) {
  EXPECT_EQ(GaloisField::add(1, 1), 0);
  for (Symbol a = 0; a < 256; ++a) {
    EXPECT_EQ(GaloisField::add(a, a), 0);
    EXPECT_EQ(GaloisField::add(a, 0), a);
  }
}

TEST(Field, CanonicalPolynomialsAreIrreducible) {
  for (int m = GaloisField::kMinBits; m <= GaloisField::kMaxBits; ++m) {
    const auto poly = GaloisField::canonical_polynomial(m);
    EXPECT_EQ(poly >> m, 1u) << "m=" << m;
    EXPECT_TRUE(irreducible(poly, m)) << "m=" << m;
  }
}

TEST(Field, MultiplicationMatchesOracleExhaustively) {
  for (int m : {1, 2, 3, 4, 5, 8}) {
    const auto& f = GaloisField::of(m);
    for (std::uint32_t a = 0; a < f.order(); ++a) {
      for (std::uint32_t b = 0; b < f.order(); ++b) {
        ASSERT_EQ(f.mul(Symbol(a), Symbol(b)), slow_mul(a, b, f.polynomial(), m)) << m << " " << a << " " << b;
      }
    }
  }
}

TEST(Field, AxiomsOnSamples) {
  for (int m : {8, 12, 16}) {
    const auto& f = GaloisField::of(m);
    const std::uint32_t step = m == 8 ? 1 : 97;
    for (std::uint32_t a = 1; a < f.order(); a += step) {
      const Symbol x = Symbol(a);
      EXPECT_EQ(f.mul(x, 1), x);
      EXPECT_EQ(f.mul(x, f.inv(x)), 1);
      EXPECT_EQ(f.div(x, x), 1);
      const Symbol y = Symbol((a * 7 + 3) % f.order());
      const Symbol z = Symbol((a * 13 + 5) % f.order());
      EXPECT_EQ(f.mul(x, Symbol(y ^ z)), f.mul(x, y) ^ f.mul(x, z));
      EXPECT_EQ(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
      EXPECT_EQ(f.mul(x, y), f.mul(y, x));
      if (m < 16) {
        EXPECT_EQ(f.mul(x, y), slow_mul(x, y, f.polynomial(), m));
      }
    }
  }
}

TEST(Field, RejectsOutOfRangeWidths) {
  EXPECT_THROW(GaloisField::of(0), std::invalid_argument);
  EXPECT_THROW(GaloisField::of(17), std::invalid_argument);
}

}  // namespace
