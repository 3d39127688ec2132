#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "silmarils/net_sim.hpp"
#include "silmarils/two_party.hpp"

namespace silmarils {

/// Information-checking material. P2 holds (x, x', sigma, sigma'), P3 holds
/// (k1, k2, k2').
struct IcSetup {
  FieldElement x, x_prime, sigma, sigma_prime;
  FieldElement k1, k2, k2_prime;

  /// Draws k1, k2, x', k2' in that order.
  static IcSetup generate(const FieldElement& x, RandomSource& rng);
};

struct HolderPackage {
  FieldElement x, x_prime, sigma, sigma_prime;
};

struct VerifierKeys {
  FieldElement k1, k2, k2_prime;
};

struct Challenge {
  FieldElement e, x_e, sigma_e;
};

/// (M, sigma_alg, n), carried from P1 through P2 to P3 so the verifier can
/// interpret x without k_sig.
struct TransportBlob {
  Bytes message;
  Signature sig_alg;
  FieldElement nonce;

  /// be32(|M|) || M || sigma_alg || n
  Bytes encode() const;
  static TransportBlob decode(const Prime& field, ByteView bytes);
};

/// x = H(M || sigma_alg) in the ic-value domain.
FieldElement ic_value(ByteView message, const Signature& sig_alg);

enum class ResolutionArm { Unresolved, P2Corrupt, BothAccept, VerifierReject, VerifierCorrupt };
std::string_view arm_name(ResolutionArm arm);

struct Declaration {
  int round;
  Role sender;
  MsgKind kind;
};

struct SessionOutcome {
  FieldElement x;                  // the value P1 computed
  std::optional<FieldElement> z2;  // holder output
  std::optional<FieldElement> z3;  // verifier output, nullopt = bottom
  std::optional<bool> interpreted; // interpret_value at P3 when z3 is set
  ResolutionArm arm = ResolutionArm::Unresolved;
  std::vector<Declaration> verdicts;
};

// --- individual protocol steps -----------------------------------------------

struct SignerStart {
  Signature sig_alg;
  FieldElement nonce;
  FieldElement x;
  IcSetup setup;
  std::vector<Envelope> envelopes;  // private to P2, private to P3
};

/// Signs M (two-party signing draws first), computes x, then draws the IC
/// setup from the same tape.
SignerStart p1_start(const KeyMaterial& keys, ByteView message, RandomSource& rng);

/// e uniform in F_p; x_e = x' + e x, sigma_e = sigma' + e sigma.
/// Throws Error(MissingSetup) without a package.
Challenge p2_challenge(const std::optional<HolderPackage>& pkg, RandomSource& rng);

bool p1_challenge_consistent(const IcSetup& setup, const Challenge& ch);
/// Accept, or P2Corrupt carrying (x, sigma).
Payload p1_check_challenge(const IcSetup& setup, const std::optional<Challenge>& ch);

bool p3_challenge_consistent(const VerifierKeys& keys, const Challenge& ch);
/// Accept or Reject. Throws Error(MissingSetup) without keys.
MsgKind p3_check_challenge(const std::optional<VerifierKeys>& keys, const Challenge& ch);

/// True when P3's declaration (nullopt = silent) disagrees with what its
/// keys dictate, i.e. P1 must broadcast "P3 corrupt".
bool p1_audit_p3(const IcSetup& setup, const Challenge& ch, std::optional<MsgKind> p3_decl);

/// Selects the terminal branch from the public declarations. A missing P1
/// declaration in round 3 counts as accept.
ResolutionArm select_arm(std::optional<MsgKind> p1_decl, std::optional<MsgKind> p3_decl, bool p3_declared_corrupt);

/// Throws Error(PhaseViolation) before the signing phase has resolved.
Payload p2_transfer(const HolderPackage& pkg, ResolutionArm arm, const Bytes& blob);

/// z3 = x iff sigma == k1 x + k2.
std::optional<FieldElement> p3_extract_transfer(const FieldElement& k1, const FieldElement& k2, const FieldElement& x,
                                                const FieldElement& sigma);

/// Either the pair key or the nonce n lets the verifier recompute r.
using ReceiptKey = std::variant<std::monostate, PairKey, FieldElement>;

/// Accept iff ic_value(M, sig_alg) == x and sig_alg verifies under r.
/// Throws Error(MissingNonce) for an empty ReceiptKey.
bool interpret_value(const sss::Weights& pk, const ReceiptKey& key, ByteView message, const Signature& sig_alg,
                     const FieldElement& x);

// --- parties -----------------------------------------------------------------

/// Public broadcasts as each party records them.
struct BroadcastLog {
  std::optional<Challenge> challenge;  // round 2, P2
  std::optional<Payload> p1_decl;      // round 3, P1
  std::optional<MsgKind> p3_decl;      // round 4, P3
  bool p3_declared_corrupt = false;    // round 5, P1
  std::optional<Payload> reveal;       // round 6, P1
  ResolutionArm arm = ResolutionArm::Unresolved;

  void record(const Envelope& env);
  /// Called after rounds 3 and 5; fixes arm when it becomes determined.
  void settle(int round);
};

class Signer final : public Party {
 public:
  Signer(KeyMaterial keys, Bytes message) : keys_(std::move(keys)), message_(std::move(message)) {}

  Role role() const override { return Role::P1; }
  std::vector<std::pair<std::string, Bytes>> inputs() const override;
  std::vector<Envelope> act(int round, RandomSource& rng) override;
  void deliver(const Envelope& env) override { log_.record(env); }
  void end_round(int round) override { log_.settle(round); }

  const std::optional<SignerStart>& start() const { return start_; }
  const BroadcastLog& log() const { return log_; }

 private:
  KeyMaterial keys_;
  Bytes message_;
  std::optional<SignerStart> start_;
  BroadcastLog log_;
};

class Holder final : public Party {
 public:
  explicit Holder(const Prime& field) : field_(&field) {}

  Role role() const override { return Role::P2; }
  std::vector<Envelope> act(int round, RandomSource& rng) override;
  void deliver(const Envelope& env) override;
  void end_round(int round) override;

  const std::optional<HolderPackage>& package() const { return pkg_; }
  const std::optional<FieldElement>& z2() const { return z2_; }
  const BroadcastLog& log() const { return log_; }

 private:
  const Prime* field_;
  std::optional<HolderPackage> pkg_;
  Bytes blob_;
  BroadcastLog log_;
  std::optional<FieldElement> z2_;
};

class Verifier final : public Party {
 public:
  explicit Verifier(sss::Weights pk) : pk_(std::move(pk)) {}

  Role role() const override { return Role::P3; }
  std::vector<std::pair<std::string, Bytes>> inputs() const override;
  std::vector<Envelope> act(int round, RandomSource& rng) override;
  void deliver(const Envelope& env) override;
  void end_round(int round) override;

  const std::optional<VerifierKeys>& keys() const { return keys_; }
  const std::optional<FieldElement>& z3() const { return z3_; }
  const std::optional<bool>& interpreted() const { return interpreted_; }
  const BroadcastLog& log() const { return log_; }

 private:
  sss::Weights pk_;
  std::optional<VerifierKeys> keys_;
  BroadcastLog log_;
  std::optional<FieldElement> z3_;
  std::optional<bool> interpreted_;
};

struct ThreePartyRun {
  SessionOutcome outcome;
  SessionRecord record;
};

/// One full session: signing phase (rounds 1-6) and transfer (round 7).
ThreePartyRun run_three_party(const KeyMaterial& keys, ByteView message, Adversary* adversary, const Seed& seed,
                              const SessionOptions& options = {});

}  // namespace silmarils
