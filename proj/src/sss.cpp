#include "silmarils/sss.hpp"

#include "silmarils/error.hpp"

namespace silmarils::sss {

void Weights::validate() const {
  if (w0.field() == nullptr || !same_field(w0, w1)) {
    throw Error(ErrorCode::DegenerateWeights, "weights must live in one field");
  }
  if (w0 == w1) throw Error(ErrorCode::DegenerateWeights, "w0 == w1");
  if (w0.is_zero() || w1.is_zero()) throw Error(ErrorCode::DegenerateWeights, "weights must be nonzero");
}

Weights Weights::sample(const Prime& field, RandomSource& rng) {
  Weights w{field.sample_unit(rng), field.sample_unit(rng)};
  while (w.w1 == w.w0) w.w1 = field.sample_unit(rng);
  return w;
}

Bytes Weights::encode() const {
  Bytes out = w0.to_bytes();
  append(out, w1.to_bytes());
  return out;
}

Weights Weights::decode(const Prime& field, ByteView bytes) {
  const std::size_t n = field.byte_width();
  if (bytes.size() != 2 * n) throw Error(ErrorCode::LengthMismatch, "public key must be two field elements");
  Weights w{field.from_bytes(bytes.subspan(0, n)), field.from_bytes(bytes.subspan(n, n))};
  w.validate();
  return w;
}

Bytes SharePair::encode() const {
  Bytes out = s0.to_bytes();
  append(out, s1.to_bytes());
  return out;
}

SharePair SharePair::decode(const Prime& field, ByteView bytes) {
  const std::size_t n = field.byte_width();
  if (bytes.size() != 2 * n) throw Error(ErrorCode::LengthMismatch, "share pair must be two field elements");
  return {field.from_bytes(bytes.subspan(0, n)), field.from_bytes(bytes.subspan(n, n))};
}

SharePair share_with_slope(const FieldElement& secret, const FieldElement& slope, const Weights& weights) {
  return {secret + slope * weights.w0, secret + slope * weights.w1};
}

Sharing share(const FieldElement& secret, const Weights& weights, RandomSource& rng) {
  FieldElement slope = secret.field()->sample(rng);
  return {share_with_slope(secret, slope, weights), slope};
}

FieldElement reconstruct(const SharePair& pair, const Weights& weights) {
  if (weights.w0 == weights.w1) throw Error(ErrorCode::DegenerateWeights, "w0 == w1");
  return (weights.w0 * pair.s1 - weights.w1 * pair.s0) * (weights.w0 - weights.w1).inverse();
}

bool reconstructs_to_zero(const SharePair& pair, const Weights& weights) {
  return weights.w0 * pair.s1 == weights.w1 * pair.s0;
}

}  // namespace silmarils::sss
