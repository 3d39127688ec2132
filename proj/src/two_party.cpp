#include "silmarils/two_party.hpp"

#include "silmarils/error.hpp"

namespace silmarils {

Params Params::generate(std::shared_ptr<const Prime> prime, RandomSource& rng) {
  Params p{std::move(prime), {}};
  p.weights = sss::Weights::sample(*p.prime, rng);
  return p;
}

KeyMaterial keygen(const Params& params, RandomSource& rng) {
  params.weights.validate();
  KeyMaterial k;
  k.sk = params.field().sample_unit(rng);
  k.pk = params.weights;
  k.k_sig = PairKey::generate(rng);
  return k;
}

Bytes Signature::encode() const {
  Bytes out;
  for (const auto& c : s) append(out, c.to_bytes());
  return out;
}

Signature Signature::decode(const Prime& field, ByteView bytes) {
  const std::size_t n = field.byte_width();
  if (bytes.size() != 5 * n) {
    throw Error(ErrorCode::MalformedSignature,
                "expected " + std::to_string(5 * n) + " bytes, got " + std::to_string(bytes.size()));
  }
  Signature sig;
  try {
    for (std::size_t i = 0; i < 5; ++i) sig.s[i] = field.from_bytes(bytes.subspan(i * n, n));
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedSignature, e.what());
  }
  return sig;
}

Signature assemble_signature(const sss::Weights& weights, const CoreInputs& in) {
  const auto key_shares = sss::share_with_slope(in.msg_key, in.slope_key, weights);
  const auto eps_shares = sss::share_with_slope(in.eps, in.slope_eps, weights);
  const FieldElement b_inv = in.b.inverse();
  const FieldElement eps_inv = in.eps.inverse();
  const FieldElement d_over_eps = in.d * eps_inv;

  Signature sig;
  sig.s[0] = in.b * (in.msg_key - in.r);
  sig.s[1] = in.d * b_inv;
  sig.s[2] = key_shares.s1 * in.d;
  sig.s[3] = d_over_eps * eps_shares.s1;
  sig.s[4] = in.d * key_shares.s0 - (in.r * d_over_eps) * eps_shares.s0;
  return sig;
}

SignResult sign(const KeyMaterial& keys, ByteView message, RandomSource& rng) {
  const Prime& f = *keys.sk.field();
  const Receipt rec = derive_receipt(keys.k_sig, message, f);

  SigningTape tape;
  tape.nonce = rec.nonce;
  tape.alpha = f.sample_unit(rng);
  tape.beta = f.sample_unit(rng);
  CoreInputs& core = tape.core;
  core.b = f.sample_unit(rng);
  core.d = f.sample_unit(rng);
  core.eps = tape.alpha * tape.beta;
  core.slope_eps = f.sample(rng);
  const Bytes sk_bytes = keys.sk.to_bytes();
  core.msg_key = prf_to_field(sk_bytes, message, HashCtx(Domain::MsgKey, f));
  core.slope_key = f.sample(rng);
  core.r = rec.receipt;

  return {assemble_signature(keys.pk, core), tape};
}

SignResult sign_until_valid(const KeyMaterial& keys, ByteView message, RandomSource& rng) {
  for (;;) {
    SignResult res = sign(keys, message, rng);
    if (!res.signature.s[3].is_zero()) return res;
  }
}

sss::SharePair verification_pair(const Signature& sig, const FieldElement& r) {
  const FieldElement prod = sig.s[0] * sig.s[1];
  return {prod - sig.s[4], prod - sig.s[2] + r * sig.s[3]};
}

bool verify_with_receipt(const sss::Weights& pk, const FieldElement& r, const Signature& sig) {
  if (sig.s[3].is_zero()) return false;
  return sss::reconstructs_to_zero(verification_pair(sig, r), pk);
}

bool verify(const sss::Weights& pk, const PairKey& k_sig, ByteView message, const Signature& sig) {
  const Receipt rec = derive_receipt(k_sig, message, *pk.w0.field());
  return verify_with_receipt(pk, rec.receipt, sig);
}

bool verify(const sss::Weights& pk, const PairKey& k_sig, ByteView message, ByteView encoded_sig) {
  return verify(pk, k_sig, message, Signature::decode(*pk.w0.field(), encoded_sig));
}

Signature dv_forge(const PairKey& k_sig, const sss::Weights& pk, ByteView message, RandomSource& rng) {
  const Prime& f = *pk.w0.field();
  CoreInputs in;
  in.r = derive_receipt(k_sig, message, f).receipt;
  in.msg_key = f.sample(rng);
  in.slope_key = f.sample(rng);
  in.slope_eps = f.sample(rng);
  in.d = f.sample_unit(rng);
  in.eps = f.sample_unit(rng);
  in.b = f.sample_unit(rng);
  return assemble_signature(pk, in);
}

FieldElement public_receipt(const Prime& field, ByteView message) {
  return hash_to_field(HashCtx(Domain::Receipt, field), message);
}

bool verify_public_r(const sss::Weights& pk, ByteView message, const Signature& sig) {
  return verify_with_receipt(pk, public_receipt(*pk.w0.field(), message), sig);
}

Signature public_r_forge(const sss::Weights& pk, ByteView message, RandomSource& rng) {
  const Prime& f = *pk.w0.field();
  const FieldElement r = public_receipt(f, message);
  Signature sig;
  sig.s[0] = f.sample(rng);
  sig.s[1] = f.sample(rng);
  sig.s[2] = f.sample(rng);
  sig.s[3] = f.sample_unit(rng);
  const FieldElement prod = sig.s[0] * sig.s[1];
  const FieldElement v1 = prod - sig.s[2] + r * sig.s[3];
  sig.s[4] = prod - pk.w0 * pk.w1.inverse() * v1;
  return sig;
}

// --- extraction ---------------------------------------------------------------

ExtractionFamily::ExtractionFamily(const sss::Weights& pk, const FieldElement& r, const Signature& sig)
    : pk_(pk), r_(r), sig_(sig) {
  if (!sig.s[2].is_zero()) ratio_ = sig.s[0] * sig.s[1] * sig.s[2].inverse();
}

const FieldElement& ExtractionFamily::ratio() const {
  if (!ratio_) throw Error(ErrorCode::DegenerateExtraction, "sigma3 is zero, R is undefined");
  return *ratio_;
}

ExtractedParams ExtractionFamily::at_d(const FieldElement& d) const {
  if (d.is_zero()) throw Error(ErrorCode::DegenerateExtraction, "d must be nonzero");
  const FieldElement one = r_.field()->one();
  const FieldElement d_inv = d.inverse();
  ExtractedParams out;
  out.d = d;
  out.share1 = sig_.s[2] * d_inv;
  out.s = sig_.s[0] * sig_.s[1] * d_inv + r_;
  out.a = (out.share1 - out.s) * pk_.w1.inverse();
  out.share0 = out.a * pk_.w0 + out.s;
  out.u1 = sig_.s[3] * d_inv;
  // With r = 0 sigma5 carries no information on u0; the sharing line does.
  out.u0 = r_.is_zero() ? one + (out.u1 - one) * pk_.w0 * pk_.w1.inverse()
                        : (out.share0 - sig_.s[4] * d_inv) * r_.inverse();
  return out;
}

ExtractedParams ExtractionFamily::from_share1(const FieldElement& share1) const {
  if (share1.is_zero()) throw Error(ErrorCode::DegenerateExtraction, "a*w1 + s is zero");
  return at_d(sig_.s[2] * share1.inverse());
}

ExtractedParams ExtractionFamily::at_s(const FieldElement& s) const {
  const FieldElement& R = ratio();
  if (R.is_zero()) throw Error(ErrorCode::DegenerateExtraction, "R is zero, s does not pin the family");
  return from_share1((s - r_) * R.inverse());
}

ExtractedParams ExtractionFamily::at_a(const FieldElement& a) const {
  const FieldElement& R = ratio();
  const FieldElement one = r_.field()->one();
  if (R == one) throw Error(ErrorCode::DegenerateExtraction, "R equals 1, a does not pin the family");
  const FieldElement s = -(a * pk_.w1 * R + r_) * (R - one).inverse();
  return from_share1(a * pk_.w1 + s);
}

ExtractedParams ExtractionFamily::pin(const ExtractionHint& hint) const {
  return std::visit(
      [this](const auto& h) -> ExtractedParams {
        using T = std::decay_t<decltype(h)>;
        if constexpr (std::is_same_v<T, HintD>) return at_d(h.value);
        else if constexpr (std::is_same_v<T, HintS>) return at_s(h.value);
        else return at_a(h.value);
      },
      hint);
}

ExtractedParams extract_params(const sss::Weights& pk, const PairKey& k_sig, ByteView message,
                               const Signature& sig, const ExtractionHint& hint) {
  const Receipt rec = derive_receipt(k_sig, message, *pk.w0.field());
  return ExtractionFamily(pk, rec.receipt, sig).pin(hint);
}

}  // namespace silmarils
