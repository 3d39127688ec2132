#pragma once

#include "silmarils/field.hpp"

namespace silmarils::sss {

/// Public interpolation points of the 2-out-of-2 scheme. Both are nonzero
/// and distinct.
struct Weights {
  FieldElement w0;
  FieldElement w1;

  /// Throws Error(DegenerateWeights) on w0 == w1 or a zero weight.
  void validate() const;
  static Weights sample(const Prime& field, RandomSource& rng);

  /// w0 || w1, fixed width.
  Bytes encode() const;
  static Weights decode(const Prime& field, ByteView bytes);

  friend bool operator==(const Weights&, const Weights&) = default;
};

struct SharePair {
  FieldElement s0;
  FieldElement s1;

  Bytes encode() const;
  static SharePair decode(const Prime& field, ByteView bytes);

  friend bool operator==(const SharePair&, const SharePair&) = default;
};

struct Sharing {
  SharePair shares;
  FieldElement slope;
};

/// Shares of f(x) = secret + slope * x at the two weights.
SharePair share_with_slope(const FieldElement& secret, const FieldElement& slope, const Weights& weights);

/// Draws the slope uniformly from F_p and returns it with the shares.
Sharing share(const FieldElement& secret, const Weights& weights, RandomSource& rng);

/// f(0) = (w0 * s1 - w1 * s0) / (w0 - w1).
FieldElement reconstruct(const SharePair& pair, const Weights& weights);

/// Equivalent to reconstruct(pair, weights) == 0 but without the division:
/// checks w0 * s1 == w1 * s0.
bool reconstructs_to_zero(const SharePair& pair, const Weights& weights);

}  // namespace silmarils::sss
