#include "silmarils/keyed_hash.hpp"

#include <sodium.h>

#include "silmarils/error.hpp"

namespace silmarils {

namespace {

std::array<std::uint8_t, 8> be64(std::uint64_t v) {
  std::array<std::uint8_t, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return out;
}

}  // namespace

std::string_view domain_tag(Domain d) {
  switch (d) {
    case Domain::Nonce: return "SLM/v1/nonce";
    case Domain::Receipt: return "SLM/v1/receipt";
    case Domain::MsgKey: return "SLM/v1/msgkey";
    case Domain::IcValue: return "SLM/v1/icval";
  }
  return "";
}

PairKey PairKey::generate(RandomSource& rng) {
  PairKey k;
  rng.fill(k.bytes);
  return k;
}

PairKey PairKey::decode(ByteView b) {
  if (b.size() != 32) throw Error(ErrorCode::LengthMismatch, "pair key must be 32 bytes");
  PairKey k;
  std::copy(b.begin(), b.end(), k.bytes.begin());
  return k;
}

FieldElement hash_to_field(const HashCtx& ctx, std::initializer_list<ByteView> parts) {
  std::uint64_t total = 0;
  for (auto p : parts) total += p.size();
  auto tag = as_bytes(domain_tag(ctx.domain));
  auto len = be64(total);

  crypto_hash_sha512_state st;
  crypto_hash_sha512_init(&st);
  crypto_hash_sha512_update(&st, tag.data(), tag.size());
  crypto_hash_sha512_update(&st, len.data(), len.size());
  for (auto p : parts) crypto_hash_sha512_update(&st, p.data(), p.size());
  std::array<std::uint8_t, crypto_hash_sha512_BYTES> digest{};
  crypto_hash_sha512_final(&st, digest.data());
  return ctx.field->reduce_wide(digest);
}

FieldElement prf_to_field(ByteView key, ByteView payload, const HashCtx& ctx) {
  auto tag = as_bytes(domain_tag(ctx.domain));
  auto len = be64(payload.size());

  crypto_auth_hmacsha512_state st;
  crypto_auth_hmacsha512_init(&st, key.data(), key.size());
  crypto_auth_hmacsha512_update(&st, tag.data(), tag.size());
  crypto_auth_hmacsha512_update(&st, len.data(), len.size());
  crypto_auth_hmacsha512_update(&st, payload.data(), payload.size());
  std::array<std::uint8_t, crypto_auth_hmacsha512_BYTES> mac{};
  crypto_auth_hmacsha512_final(&st, mac.data());
  return ctx.field->reduce_wide(mac);
}

FieldElement receipt_from_nonce(ByteView message, const FieldElement& nonce) {
  Bytes n = nonce.to_bytes();
  return hash_to_field(HashCtx(Domain::Receipt, *nonce.field()), {message, n});
}

Receipt derive_receipt(const PairKey& k_sig, ByteView message, const Prime& field) {
  FieldElement n = prf_to_field(k_sig, message, HashCtx(Domain::Nonce, field));
  return {n, receipt_from_nonce(message, n)};
}

}  // namespace silmarils
