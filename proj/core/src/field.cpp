#include "onc/field.hpp"

#include <memory>
#include <stdexcept>
#include <string>

namespace onc {

namespace {

constexpr std::array<std::uint32_t, 17> kPolynomials = {
    0x0,      // unused
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x83,     // x^7 + x + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

// Shift-and-add product reduced modulo `poly`. Only used to build the tables.
std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b, std::uint32_t poly, int bits) {
  std::uint32_t acc = 0;
  const std::uint32_t top = 1u << bits;
  while (b != 0) {
    if (b & 1u) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= poly;
  }
  return acc;
}

void check_bits(int bits) {
  if (bits < GaloisField::kMinBits || bits > GaloisField::kMaxBits) {
    throw std::invalid_argument("field bits must be in [1, 16], got " + std::to_string(bits));
  }
}

}  // namespace

std::uint32_t GaloisField::canonical_polynomial(int bits) {
  check_bits(bits);
  return kPolynomials[static_cast<std::size_t>(bits)];
}

GaloisField::GaloisField(int bits) : bits_(bits), polynomial_(canonical_polynomial(bits)) {
  const std::uint32_t q = order();
  const std::uint32_t group = q - 1;
  exp_.assign(2 * static_cast<std::size_t>(group) + 1, 0);
  log_.assign(q, 0);

  // Smallest element whose powers cover the whole multiplicative group.
  std::uint32_t g = (group == 1) ? 1 : 2;
  for (;; ++g) {
    if (g >= q) throw std::logic_error("reduction polynomial is not irreducible");
    std::uint32_t x = 1;
    std::uint32_t period = 0;
    do {
      x = slow_mul(x, g, polynomial_, bits_);
      ++period;
    } while (x != 1 && period <= group);
    if (period == group) break;
  }
  generator_ = static_cast<Symbol>(g);

  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < group; ++i) {
    exp_[i] = static_cast<Symbol>(x);
    exp_[i + group] = static_cast<Symbol>(x);
    log_[x] = i;
    x = slow_mul(x, g, polynomial_, bits_);
  }
  exp_[2 * group] = exp_[0];
}

const GaloisField& GaloisField::of(int bits) {
  check_bits(bits);
  static const auto fields = [] {
    std::array<std::unique_ptr<const GaloisField>, kMaxBits + 1> all;
    for (int m = kMinBits; m <= kMaxBits; ++m) {
      all[static_cast<std::size_t>(m)] = std::make_unique<const GaloisField>(m);
    }
    return all;
  }();
  return *fields[static_cast<std::size_t>(bits)];
}

}  // namespace onc
