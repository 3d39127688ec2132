#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "silmarils/bytes.hpp"
#include "silmarils/random.hpp"

namespace silmarils {

/// Unsigned 256-bit integer, four little-endian 64-bit limbs.
struct U256 {
  std::array<std::uint64_t, 4> limb{};

  static U256 from_u64(std::uint64_t v) { return U256{{v, 0, 0, 0}}; }
  /// Big-endian, at most 32 bytes.
  static U256 from_be_bytes(ByteView bytes);
  static U256 from_hex(std::string_view hex);

  Bytes to_be_bytes(std::size_t width) const;
  std::string to_decimal() const;
  unsigned bit_length() const;
  bool bit(unsigned i) const { return (limb[i / 64] >> (i % 64)) & 1U; }
  bool is_zero() const { return (limb[0] | limb[1] | limb[2] | limb[3]) == 0; }

  friend bool operator==(const U256&, const U256&) = default;
  friend std::strong_ordering operator<=>(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
      if (a.limb[i] != b.limb[i]) return a.limb[i] <=> b.limb[i];
    }
    return std::strong_ordering::equal;
  }
};

// Field-operation instrumentation. Counts are per thread; merge them yourself
// if work fans out.
struct OpCounts {
  std::uint64_t add = 0;
  std::uint64_t mul = 0;
  std::uint64_t inv = 0;
};

#ifdef SILMARILS_COUNT_OPS
inline constexpr bool kOpCountingEnabled = true;
#else
inline constexpr bool kOpCountingEnabled = false;
#endif

OpCounts& thread_op_counts();

/// Measures the field operations performed on this thread while alive.
class OpCountScope {
 public:
  OpCountScope() : start_(thread_op_counts()) {}
  OpCounts delta() const {
    const OpCounts& now = thread_op_counts();
    return {now.add - start_.add, now.mul - start_.mul, now.inv - start_.inv};
  }

 private:
  OpCounts start_;
};

class FieldElement;

/// A prime modulus together with the precomputation needed to do arithmetic
/// in F_p. Moduli below 2^63 use a single machine word; anything up to 256
/// bits uses four limbs in Montgomery form.
///
/// Elements hold a plain pointer to their Prime, which must outlive them.
class Prime {
 public:
  /// Throws Error(InvalidPrime) unless p is a prime >= 3.
  explicit Prime(std::uint64_t p);
  explicit Prime(const U256& p);

  const U256& value() const { return p_; }
  unsigned bits() const { return bits_; }
  /// Serialized element width: ceil(bits / 8).
  std::size_t byte_width() const { return width_; }
  bool single_word() const { return small_; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(std::uint64_t v) const;
  FieldElement element(const U256& v) const;

  /// Exactly byte_width() big-endian bytes encoding a value below p.
  FieldElement from_bytes(ByteView bytes) const;
  /// Interprets exactly 64 bytes as a big-endian integer and reduces mod p.
  FieldElement reduce_wide(ByteView bytes) const;

  /// Uniform over F_p by rejection on byte_width()-sized draws.
  FieldElement sample(RandomSource& rng) const;
  /// Uniform over F_p \ {0}.
  FieldElement sample_unit(RandomSource& rng) const;

  friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }

 private:
  friend class FieldElement;
  friend FieldElement operator+(const FieldElement&, const FieldElement&);
  friend FieldElement operator-(const FieldElement&, const FieldElement&);
  friend FieldElement operator*(const FieldElement&, const FieldElement&);

  U256 add(const U256& a, const U256& b) const;
  U256 sub(const U256& a, const U256& b) const;
  U256 mul(const U256& a, const U256& b) const;
  U256 pow(const U256& base, const U256& exp) const;
  U256 to_rep(const U256& v) const;
  U256 from_rep(const U256& r) const;
  bool probably_prime() const;

  U256 p_;
  unsigned bits_ = 0;
  std::size_t width_ = 0;
  bool small_ = false;
  std::uint8_t top_mask_ = 0xff;
  // Montgomery constants (four-limb path only).
  std::uint64_t n0inv_ = 0;
  U256 r_mod_p_;
  U256 r2_mod_p_;
  U256 two64_rep_;
};

/// Residue modulo a Prime, always kept canonical. Mixing elements of
/// different moduli throws Error(ModulusMismatch).
class FieldElement {
 public:
  FieldElement() = default;

  const Prime* field() const { return field_; }
  bool is_zero() const;
  U256 value() const;
  /// Throws Error(LengthMismatch) if the value does not fit 64 bits.
  std::uint64_t to_u64() const;
  Bytes to_bytes() const;
  std::string to_hex() const;

  /// Throws Error(ZeroInverse) for zero.
  FieldElement inverse() const;

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
  FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
  FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }

  friend bool operator==(const FieldElement& a, const FieldElement& b);

 private:
  friend class Prime;
  FieldElement(const Prime* f, const U256& rep) : field_(f), rep_(rep) {}

  const Prime* field_ = nullptr;
  U256 rep_;
};

bool same_field(const FieldElement& a, const FieldElement& b);

namespace presets {

/// 2^255 - 19.
std::shared_ptr<const Prime> secure();
/// Shared instances of the small test primes (5, 7, 13, 251, 1009, 65537);
/// any other value is constructed fresh.
std::shared_ptr<const Prime> small(std::uint64_t p);

}  // namespace presets

}  // namespace silmarils
