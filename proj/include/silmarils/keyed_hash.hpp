#pragma once

#include <array>
#include <initializer_list>
#include <string_view>

#include "silmarils/field.hpp"

namespace silmarils {

/// The four derivations that map bytes into the field. Each has its own
/// domain tag so their hash inputs never coincide.
enum class Domain { Nonce, Receipt, MsgKey, IcValue };

/// "SLM/v1/nonce", "SLM/v1/receipt", "SLM/v1/msgkey", "SLM/v1/icval".
std::string_view domain_tag(Domain d);

struct HashCtx {
  Domain domain;
  const Prime* field;

  HashCtx(Domain d, const Prime& f) : domain(d), field(&f) {}
};

/// 32 uniformly random bytes shared by a signer and its designated verifier.
struct PairKey {
  std::array<std::uint8_t, 32> bytes{};

  static PairKey generate(RandomSource& rng);
  static PairKey decode(ByteView b);
  ByteView view() const { return {bytes.data(), bytes.size()}; }

  friend bool operator==(const PairKey&, const PairKey&) = default;
};

/// reduce_wide(SHA-512(tag || be64(total length) || parts...)). The parts are
/// concatenated, so callers must make their own framing unambiguous.
FieldElement hash_to_field(const HashCtx& ctx, std::initializer_list<ByteView> parts);
inline FieldElement hash_to_field(const HashCtx& ctx, ByteView payload) { return hash_to_field(ctx, {payload}); }

/// reduce_wide(HMAC-SHA-512(key, tag || be64(length) || payload)).
FieldElement prf_to_field(ByteView key, ByteView payload, const HashCtx& ctx);
inline FieldElement prf_to_field(const PairKey& key, ByteView payload, const HashCtx& ctx) {
  return prf_to_field(key.view(), payload, ctx);
}

struct Receipt {
  FieldElement nonce;    // n = PRF_{k_sig}(M)
  FieldElement receipt;  // r = H(M || n)
};

/// n = prf_to_field(k_sig, M), then r = hash_to_field(M || enc(n)). enc(n)
/// is fixed width, which keeps the concatenation unambiguous.
Receipt derive_receipt(const PairKey& k_sig, ByteView message, const Prime& field);

/// r from an already-known nonce.
FieldElement receipt_from_nonce(ByteView message, const FieldElement& nonce);

}  // namespace silmarils
