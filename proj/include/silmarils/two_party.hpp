#pragma once

#include <array>
#include <memory>
#include <optional>
#include <variant>

#include "silmarils/keyed_hash.hpp"
#include "silmarils/sss.hpp"

namespace silmarils {

/// Public context: the field and the interpolation weights fixed at key
/// generation.
struct Params {
  std::shared_ptr<const Prime> prime;
  sss::Weights weights;

  const Prime& field() const { return *prime; }
  static Params generate(std::shared_ptr<const Prime> prime, RandomSource& rng);
};

struct KeyMaterial {
  FieldElement sk;      // K, nonzero
  sss::Weights pk;      // (w0, w1)
  PairKey k_sig;        // shared with the designated verifier only

  Bytes encode_sk() const { return sk.to_bytes(); }
  Bytes encode_pk() const { return pk.encode(); }
};

KeyMaterial keygen(const Params& params, RandomSource& rng);

/// (sigma1, ..., sigma5).
struct Signature {
  std::array<FieldElement, 5> s;

  /// sigma1 || ... || sigma5, each fixed width.
  Bytes encode() const;
  /// Throws Error(MalformedSignature) on a wrong length or non-canonical
  /// component.
  static Signature decode(const Prime& field, ByteView bytes);

  friend bool operator==(const Signature&, const Signature&) = default;
};

/// The values a signature is assembled from. Honest signing derives K' from
/// the long-term key; the designated-verifier simulator picks it freely.
struct CoreInputs {
  FieldElement msg_key;     // K'
  FieldElement slope_key;   // a_K
  FieldElement eps;         // epsilon, nonzero
  FieldElement slope_eps;   // a_eps
  FieldElement b;           // nonzero
  FieldElement d;           // nonzero
  FieldElement r;           // receipt
};

/// Everything sampled or derived while signing. Test and extraction code use
/// it as ground truth; it is never serialized.
struct SigningTape {
  FieldElement alpha;
  FieldElement beta;
  FieldElement nonce;
  CoreInputs core;
};

struct SignResult {
  Signature signature;
  SigningTape tape;
};

/// sigma1 = b(K' - r), sigma2 = d/b, sigma3 = d K1', sigma4 = d eps1/eps,
/// sigma5 = d (K0' - r eps0/eps), with (K0', K1') and (eps0, eps1) the shares
/// of K' and eps under the given slopes.
Signature assemble_signature(const sss::Weights& weights, const CoreInputs& in);

/// Randomness is drawn in the order alpha, beta, b, d (all nonzero), then the
/// slope of eps, then the slope of K'. A signature with sigma4 == 0 is
/// returned as is; verification rejects it.
SignResult sign(const KeyMaterial& keys, ByteView message, RandomSource& rng);

/// Resamples until sigma4 != 0. Not used by the protocol itself.
SignResult sign_until_valid(const KeyMaterial& keys, ByteView message, RandomSource& rng);

/// V0 = s1 s2 - s5 and V1 = s1 s2 - s3 + r s4.
sss::SharePair verification_pair(const Signature& sig, const FieldElement& r);

/// Accepts iff sigma4 != 0 and (V0, V1) reconstructs to zero.
bool verify_with_receipt(const sss::Weights& pk, const FieldElement& r, const Signature& sig);

/// Recomputes r from k_sig and the message, then verify_with_receipt.
bool verify(const sss::Weights& pk, const PairKey& k_sig, ByteView message, const Signature& sig);

/// Same, from an encoded signature. Throws Error(MalformedSignature).
bool verify(const sss::Weights& pk, const PairKey& k_sig, ByteView message, ByteView encoded_sig);

/// Designated-verifier simulation: anyone holding k_sig produces accepting
/// signatures on any message without K.
Signature dv_forge(const PairKey& k_sig, const sss::Weights& pk, ByteView message, RandomSource& rng);

/// A deliberately weakened variant whose receipt is the public r = H(M).
FieldElement public_receipt(const Prime& field, ByteView message);
bool verify_public_r(const sss::Weights& pk, ByteView message, const Signature& sig);

/// Forgery against verify_public_r: sigma1..sigma4 arbitrary (sigma4 != 0),
/// sigma5 = s1 s2 - (w0/w1) V1.
Signature public_r_forge(const sss::Weights& pk, ByteView message, RandomSource& rng);

// --- parameter extraction ---------------------------------------------------

/// One consistent assignment of the hidden signing parameters.
struct ExtractedParams {
  FieldElement d;
  FieldElement s;    // K'
  FieldElement a;    // a_K
  FieldElement u0;   // eps0 / eps
  FieldElement u1;   // eps1 / eps
  FieldElement share0;  // K0' = a w0 + s
  FieldElement share1;  // K1' = a w1 + s
};

struct HintD {
  FieldElement value;
};
struct HintS {
  FieldElement value;
};
struct HintA {
  FieldElement value;
};
using ExtractionHint = std::variant<HintD, HintS, HintA>;

/// The observable equations fix the hidden parameters only up to a single
/// free parameter. The family is indexed by d; the other hints are mapped
/// onto it.
class ExtractionFamily {
 public:
  ExtractionFamily(const sss::Weights& pk, const FieldElement& r, const Signature& sig);

  /// R = s1 s2 / s3. Throws Error(DegenerateExtraction) if sigma3 == 0.
  const FieldElement& ratio() const;
  const FieldElement& receipt() const { return r_; }

  /// Total for d != 0.
  ExtractedParams at_d(const FieldElement& d) const;
  /// Need sigma3 != 0, and R != 0 (at_s) or R != 1 (at_a).
  ExtractedParams at_s(const FieldElement& s) const;
  ExtractedParams at_a(const FieldElement& a) const;
  ExtractedParams pin(const ExtractionHint& hint) const;

 private:
  ExtractedParams from_share1(const FieldElement& share1) const;

  sss::Weights pk_;
  FieldElement r_;
  Signature sig_;
  std::optional<FieldElement> ratio_;
};

/// Recomputes r from k_sig and pins the family with the hint.
ExtractedParams extract_params(const sss::Weights& pk, const PairKey& k_sig, ByteView message,
                               const Signature& sig, const ExtractionHint& hint);

}  // namespace silmarils
