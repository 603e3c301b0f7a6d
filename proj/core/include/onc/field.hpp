#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace onc {

/// Element of GF(2^m), m <= 16, stored in the low m bits.
using Symbol = std::uint16_t;

/// Binary extension field GF(2^m) with a fixed reduction polynomial per m.
///
/// Instances are immutable and shared; obtain them through `GaloisField::of`.
/// Multiplication goes through log/antilog tables built once per process.
class GaloisField {
 public:
  static constexpr int kMinBits = 1;
  static constexpr int kMaxBits = 16;

  /// Canonical field for `bits` (throws std::invalid_argument outside [1, 16]).
  static const GaloisField& of(int bits);

  /// Reduction polynomial including the x^m term (0x11B for m = 8).
  static std::uint32_t canonical_polynomial(int bits);

  int bits() const noexcept { return bits_; }
  std::uint32_t polynomial() const noexcept { return polynomial_; }
  std::uint32_t order() const noexcept { return 1u << bits_; }
  Symbol max_symbol() const noexcept { return static_cast<Symbol>(order() - 1); }

  static Symbol add(Symbol a, Symbol b) noexcept { return a ^ b; }
  static Symbol sub(Symbol a, Symbol b) noexcept { return a ^ b; }

  Symbol mul(Symbol a, Symbol b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  /// Multiplicative inverse; a must be nonzero.
  Symbol inv(Symbol a) const noexcept { return exp_[(order() - 1) - log_[a]]; }

  Symbol div(Symbol a, Symbol b) const noexcept {
    if (a == 0) return 0;
    return exp_[log_[a] + (order() - 1) - log_[b]];
  }

  bool contains(Symbol a) const noexcept { return a < order(); }

  /// Generator of the multiplicative group used to build the tables.
  Symbol generator() const noexcept { return generator_; }

  explicit GaloisField(int bits);

 private:
  int bits_;
  std::uint32_t polynomial_;
  Symbol generator_ = 1;
  std::vector<Symbol> exp_;            // 2 * (q - 1) entries, no modular reduction needed
  std::vector<std::uint32_t> log_;     // log_[0] unused
};

}  // namespace onc
