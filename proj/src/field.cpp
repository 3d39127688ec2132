#include "silmarils/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "silmarils/error.hpp"

namespace silmarils {

using u128 = unsigned __int128;

namespace {

// --- four-limb helpers --------------------------------------------------

std::uint64_t add_with_carry(U256& out, const U256& a, const U256& b) {
  std::uint64_t carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 s = static_cast<u128>(a.limb[i]) + b.limb[i] + carry;
    out.limb[i] = static_cast<std::uint64_t>(s);
    carry = static_cast<std::uint64_t>(s >> 64);
  }
  return carry;
}

std::uint64_t sub_with_borrow(U256& out, const U256& a, const U256& b) {
  std::uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 d = static_cast<u128>(a.limb[i]) - b.limb[i] - borrow;
    out.limb[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1U;
  }
  return borrow;
}

// mask is all-ones or zero.
U256 select(std::uint64_t mask, const U256& if_set, const U256& if_clear) {
  U256 r;
  for (int i = 0; i < 4; ++i) r.limb[i] = (if_set.limb[i] & mask) | (if_clear.limb[i] & ~mask);
  return r;
}

U256 mont_mul(const U256& a, const U256& b, const U256& p, std::uint64_t n0inv) {
  std::uint64_t t[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 4; ++i) {
    std::uint64_t carry = 0;
    for (int j = 0; j < 4; ++j) {
      u128 acc = static_cast<u128>(a.limb[j]) * b.limb[i] + t[j] + carry;
      t[j] = static_cast<std::uint64_t>(acc);
      carry = static_cast<std::uint64_t>(acc >> 64);
    }
    u128 top = static_cast<u128>(t[4]) + carry;
    t[4] = static_cast<std::uint64_t>(top);
    t[5] = static_cast<std::uint64_t>(top >> 64);

    std::uint64_t m = t[0] * n0inv;
    u128 acc = static_cast<u128>(m) * p.limb[0] + t[0];
    carry = static_cast<std::uint64_t>(acc >> 64);
    for (int j = 1; j < 4; ++j) {
      acc = static_cast<u128>(m) * p.limb[j] + t[j] + carry;
      t[j - 1] = static_cast<std::uint64_t>(acc);
      carry = static_cast<std::uint64_t>(acc >> 64);
    }
    top = static_cast<u128>(t[4]) + carry;
    t[3] = static_cast<std::uint64_t>(top);
    t[4] = t[5] + static_cast<std::uint64_t>(top >> 64);
  }
  U256 res{{t[0], t[1], t[2], t[3]}};
  U256 reduced;
  std::uint64_t borrow = sub_with_borrow(reduced, res, p);
  // Keep the subtraction when the product overflowed 256 bits or res >= p.
  std::uint64_t keep = (t[4] != 0) | (borrow == 0);
  return select(0 - keep, reduced, res);
}

std::uint64_t small_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  u128 result = 1 % m;
  u128 b = base % m;
  while (exp > 0) {
    if (exp & 1U) result = result * b % m;
    b = b * b % m;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

constexpr std::uint64_t kWitnesses[40] = {2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,
                                          47,  53,  59,  61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107,
                                          109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173};

bool small_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n < (1ULL << 32)) {
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2) {
      if (n % d == 0) return false;
    }
    return true;
  }
  if (n % 2 == 0) return false;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kWitnesses) {
    if (a % n == 0) continue;
    std::uint64_t x = small_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = static_cast<std::uint64_t>(static_cast<u128>(x) * x % n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline OpCounts& counts() {
  thread_local OpCounts c;
  return c;
}

inline void count_add() {
  if constexpr (kOpCountingEnabled) ++counts().add;
}
inline void count_mul() {
  if constexpr (kOpCountingEnabled) ++counts().mul;
}
inline void count_inv() {
  if constexpr (kOpCountingEnabled) ++counts().inv;
}

}  // namespace

OpCounts& thread_op_counts() { return counts(); }

// --- U256 ----------------------------------------------------------------

U256 U256::from_be_bytes(ByteView bytes) {
  if (bytes.size() > 32) throw Error(ErrorCode::LengthMismatch, "more than 32 bytes for a 256-bit integer");
  U256 out;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    std::size_t pos = bytes.size() - 1 - i;  // byte significance
    out.limb[pos / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (pos % 8));
  }
  return out;
}

U256 U256::from_hex(std::string_view hex) {
  std::string padded(hex);
  if (padded.size() % 2 != 0) padded.insert(padded.begin(), '0');
  return from_be_bytes(silmarils::from_hex(padded));
}

Bytes U256::to_be_bytes(std::size_t width) const {
  if (width < (bit_length() + 7) / 8) throw Error(ErrorCode::LengthMismatch, "value does not fit width");
  Bytes out(width, 0);
  for (std::size_t pos = 0; pos < std::min<std::size_t>(width, 32); ++pos) {
    out[width - 1 - pos] = static_cast<std::uint8_t>(limb[pos / 8] >> (8 * (pos % 8)));
  }
  return out;
}

unsigned U256::bit_length() const {
  for (int i = 3; i >= 0; --i) {
    if (limb[i] != 0) return static_cast<unsigned>(64 * i + 64 - __builtin_clzll(limb[i]));
  }
  return 0;
}

std::string U256::to_decimal() const {
  if (is_zero()) return "0";
  U256 v = *this;
  std::string digits;
  while (!v.is_zero()) {
    u128 rem = 0;
    for (int i = 3; i >= 0; --i) {
      u128 cur = (rem << 64) | v.limb[i];
      v.limb[i] = static_cast<std::uint64_t>(cur / 10);
      rem = cur % 10;
    }
    digits.push_back(static_cast<char>('0' + static_cast<int>(rem)));
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

// --- Prime ---------------------------------------------------------------

Prime::Prime(std::uint64_t p) : Prime(U256::from_u64(p)) {}

Prime::Prime(const U256& p) : p_(p) {
  if (p < U256::from_u64(3)) throw Error(ErrorCode::InvalidPrime, "modulus must be at least 3");
  if ((p.limb[0] & 1U) == 0) throw Error(ErrorCode::InvalidPrime, "modulus must be odd");
  bits_ = p.bit_length();
  width_ = (bits_ + 7) / 8;
  small_ = bits_ <= 63;
  top_mask_ = (bits_ % 8 == 0) ? 0xff : static_cast<std::uint8_t>((1U << (bits_ % 8)) - 1);

  if (small_) {
    if (!small_is_prime(p.limb[0])) {
      throw Error(ErrorCode::InvalidPrime, p.to_decimal() + " is not prime");
    }
    return;
  }

  // -p^{-1} mod 2^64 by Newton iteration.
  std::uint64_t inv = 1;
  for (int i = 0; i < 7; ++i) inv *= 2 - p.limb[0] * inv;
  n0inv_ = 0 - inv;

  U256 x = U256::from_u64(1);
  for (int i = 0; i < 512; ++i) {
    U256 doubled;
    std::uint64_t carry = add_with_carry(doubled, x, x);
    U256 reduced;
    std::uint64_t borrow = sub_with_borrow(reduced, doubled, p_);
    x = (carry != 0 || borrow == 0) ? reduced : doubled;
    if (i == 255) r_mod_p_ = x;
  }
  r2_mod_p_ = x;
  two64_rep_ = to_rep(U256{{0, 1, 0, 0}});

  if (!probably_prime()) throw Error(ErrorCode::InvalidPrime, p.to_decimal() + " is not prime");
}

U256 Prime::add(const U256& a, const U256& b) const {
  if (small_) {
    std::uint64_t s = a.limb[0] + b.limb[0];
    return U256::from_u64(s >= p_.limb[0] ? s - p_.limb[0] : s);
  }
  U256 sum;
  std::uint64_t carry = add_with_carry(sum, a, b);
  U256 reduced;
  std::uint64_t borrow = sub_with_borrow(reduced, sum, p_);
  std::uint64_t keep = carry | (borrow == 0);
  return select(0 - keep, reduced, sum);
}

U256 Prime::sub(const U256& a, const U256& b) const {
  if (small_) {
    std::uint64_t x = a.limb[0], y = b.limb[0];
    return U256::from_u64(x >= y ? x - y : x + p_.limb[0] - y);
  }
  U256 diff;
  std::uint64_t borrow = sub_with_borrow(diff, a, b);
  U256 masked = select(0 - borrow, p_, U256{});
  U256 out;
  add_with_carry(out, diff, masked);
  return out;
}

U256 Prime::mul(const U256& a, const U256& b) const {
  if (small_) {
    return U256::from_u64(
        static_cast<std::uint64_t>(static_cast<u128>(a.limb[0]) * b.limb[0] % p_.limb[0]));
  }
  return mont_mul(a, b, p_, n0inv_);
}

// Square-and-multiply over the bits of a public exponent.
U256 Prime::pow(const U256& base, const U256& exp) const {
  if (small_) return U256::from_u64(small_pow(base.limb[0], exp.limb[0], p_.limb[0]));
  U256 result = r_mod_p_;
  for (int i = static_cast<int>(exp.bit_length()) - 1; i >= 0; --i) {
    result = mont_mul(result, result, p_, n0inv_);
    if (exp.bit(static_cast<unsigned>(i))) result = mont_mul(result, base, p_, n0inv_);
  }
  return result;
}

U256 Prime::to_rep(const U256& v) const {
  if (small_) return U256::from_u64(v.limb[0] % p_.limb[0]);
  return mont_mul(v, r2_mod_p_, p_, n0inv_);
}

U256 Prime::from_rep(const U256& r) const {
  if (small_) return r;
  return mont_mul(r, U256::from_u64(1), p_, n0inv_);
}

bool Prime::probably_prime() const {
  U256 pm1;
  sub_with_borrow(pm1, p_, U256::from_u64(1));
  U256 d = pm1;
  unsigned s = 0;
  while (!d.bit(0)) {
    for (int i = 0; i < 4; ++i) d.limb[i] = (d.limb[i] >> 1) | (i < 3 ? d.limb[i + 1] << 63 : 0);
    ++s;
  }
  const U256 one_rep = r_mod_p_;
  const U256 minus_one_rep = sub(U256{}, one_rep);
  for (std::uint64_t a : kWitnesses) {
    U256 x = pow(to_rep(U256::from_u64(a)), d);
    if (x == one_rep || x == minus_one_rep) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mont_mul(x, x, p_, n0inv_);
      if (x == minus_one_rep) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldElement Prime::zero() const { return FieldElement(this, U256{}); }

FieldElement Prime::one() const { return FieldElement(this, small_ ? U256::from_u64(1) : r_mod_p_); }

FieldElement Prime::element(std::uint64_t v) const { return element(U256::from_u64(v)); }

FieldElement Prime::element(const U256& v) const {
  if (small_) {
    // Reduce the full 256-bit value, not just the low limb.
    u128 acc = 0;
    for (int i = 3; i >= 0; --i) acc = ((acc << 64) | v.limb[i]) % p_.limb[0];
    return FieldElement(this, U256::from_u64(static_cast<std::uint64_t>(acc)));
  }
  return FieldElement(this, to_rep(v));
}

FieldElement Prime::from_bytes(ByteView bytes) const {
  if (bytes.size() != width_) {
    throw Error(ErrorCode::LengthMismatch,
                "field element needs " + std::to_string(width_) + " bytes, got " + std::to_string(bytes.size()));
  }
  U256 v = U256::from_be_bytes(bytes);
  if (!(v < p_)) throw Error(ErrorCode::NonCanonical, "encoded value is not below p");
  return FieldElement(this, to_rep(v));
}

FieldElement Prime::reduce_wide(ByteView bytes) const {
  if (bytes.size() != 64) throw Error(ErrorCode::LengthMismatch, "reduce_wide needs exactly 64 bytes");
  if (small_) {
    const std::uint64_t m = p_.limb[0];
    u128 acc = 0;
    for (int i = 0; i < 8; ++i) acc = ((acc << 64) | read_be64(bytes.subspan(8 * i, 8))) % m;
    return FieldElement(this, U256::from_u64(static_cast<std::uint64_t>(acc)));
  }
  U256 acc;
  for (int i = 0; i < 8; ++i) {
    acc = mont_mul(acc, two64_rep_, p_, n0inv_);
    acc = add(acc, to_rep(U256::from_u64(read_be64(bytes.subspan(8 * i, 8)))));
  }
  return FieldElement(this, acc);
}

FieldElement Prime::sample(RandomSource& rng) const {
  std::array<std::uint8_t, 32> buf{};
  std::span<std::uint8_t> draw(buf.data(), width_);
  for (;;) {
    rng.fill(draw);
    draw[0] &= top_mask_;
    U256 v = U256::from_be_bytes(draw);
    if (v < p_) return FieldElement(this, to_rep(v));
  }
}

FieldElement Prime::sample_unit(RandomSource& rng) const {
  for (;;) {
    FieldElement e = sample(rng);
    if (!e.is_zero()) return e;
  }
}

// --- FieldElement --------------------------------------------------------

bool same_field(const FieldElement& a, const FieldElement& b) {
  if (a.field() == b.field()) return a.field() != nullptr;
  return a.field() != nullptr && b.field() != nullptr && *a.field() == *b.field();
}

namespace {

const Prime& common_field(const FieldElement& a, const FieldElement& b) {
  if (!same_field(a, b)) throw Error(ErrorCode::ModulusMismatch, "operands belong to different fields");
  return *a.field();
}

const Prime& bound_field(const FieldElement& a) {
  if (a.field() == nullptr) throw Error(ErrorCode::ModulusMismatch, "element is not bound to a field");
  return *a.field();
}

}  // namespace

bool FieldElement::is_zero() const { return rep_.is_zero(); }

U256 FieldElement::value() const { return field_ ? field_->from_rep(rep_) : U256{}; }

std::uint64_t FieldElement::to_u64() const {
  U256 v = value();
  if (v.limb[1] | v.limb[2] | v.limb[3]) throw Error(ErrorCode::LengthMismatch, "value exceeds 64 bits");
  return v.limb[0];
}

Bytes FieldElement::to_bytes() const { return value().to_be_bytes(bound_field(*this).byte_width()); }

std::string FieldElement::to_hex() const { return silmarils::to_hex(to_bytes()); }

FieldElement FieldElement::inverse() const {
  const Prime& f = bound_field(*this);
  if (is_zero()) throw Error(ErrorCode::ZeroInverse, "zero has no inverse");
  count_inv();
  U256 exp;
  sub_with_borrow(exp, f.p_, U256::from_u64(2));
  return FieldElement(field_, f.pow(rep_, exp));
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  const Prime& f = common_field(a, b);
  count_add();
  return FieldElement(a.field_, f.add(a.rep_, b.rep_));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  const Prime& f = common_field(a, b);
  count_add();
  return FieldElement(a.field_, f.sub(a.rep_, b.rep_));
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  const Prime& f = common_field(a, b);
  count_mul();
  return FieldElement(a.field_, f.mul(a.rep_, b.rep_));
}

FieldElement FieldElement::operator-() const {
  const Prime& f = bound_field(*this);
  count_add();
  return FieldElement(field_, f.sub(U256{}, rep_));
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (a.field_ == nullptr && b.field_ == nullptr) return true;
  common_field(a, b);
  return a.rep_ == b.rep_;
}

// --- presets -------------------------------------------------------------

namespace presets {

std::shared_ptr<const Prime> secure() {
  static const auto p = std::make_shared<const Prime>(
      U256::from_hex("7fffffffffffffffffffffffffffffffffffffffffffffffffffffffffffffed"));
  return p;
}

std::shared_ptr<const Prime> small(std::uint64_t p) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const Prime>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  auto made = std::make_shared<const Prime>(p);
  switch (p) {
    case 5: case 7: case 13: case 251: case 1009: case 65537:
      cache.emplace(p, made);
      break;
    default:
      break;
  }
  return made;
}

}  // namespace presets

}  // namespace silmarils
