#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silmarils/field.hpp"

namespace silmarils {

enum class Role : std::uint8_t { P1 = 0, P2 = 1, P3 = 2 };
inline constexpr std::array<Role, 3> kRoles = {Role::P1, Role::P2, Role::P3};

std::string_view role_name(Role r);
inline std::size_t index_of(Role r) { return static_cast<std::size_t>(r); }

enum class MsgKind : std::uint8_t {
  SetupHolder = 1,    // x, x', sigma, sigma' + transport blob
  SetupVerifier = 2,  // k1, k2, k2'
  Challenge = 3,      // e, x_e, sigma_e
  Accept = 4,
  Reject = 5,
  P2Corrupt = 6,      // x, sigma
  P3Corrupt = 7,
  RevealValue = 8,    // x, sigma
  RevealKeys = 9,     // k1, k2
  Transfer = 10,      // x, sigma + transport blob
};

std::string_view kind_name(MsgKind k);

/// A tagged tuple of field elements with an optional opaque byte string.
struct Payload {
  MsgKind kind{};
  std::vector<FieldElement> values;
  Bytes blob;

  /// kind || count || values (fixed width) || be32(|blob|) || blob
  Bytes encode() const;
  /// Throws Error(MalformedSignature) on truncated or non-canonical input.
  static Payload decode(const Prime& field, ByteView bytes);

  friend bool operator==(const Payload&, const Payload&) = default;
};

struct Envelope {
  int round = 0;
  Role sender{};
  std::optional<Role> recipient;  // nullopt: broadcast
  Payload payload;

  bool broadcast() const { return !recipient.has_value(); }
  /// round=<n> sender=<P1|P2|P3> channel=<broadcast|private:Pk> payload=<hex>
  std::string log_line() const;

  friend bool operator==(const Envelope&, const Envelope&) = default;
};

/// Inputs, random tape and received messages of one party.
struct View {
  Role role{};
  std::vector<std::pair<std::string, Bytes>> inputs;
  Bytes randomness;
  std::vector<Envelope> received;
};

/// A protocol participant. The scheduler calls act once per round, delivers
/// the round's envelopes, then calls end_round.
class Party {
 public:
  virtual ~Party() = default;
  virtual Role role() const = 0;
  virtual std::vector<std::pair<std::string, Bytes>> inputs() const { return {}; }
  virtual std::vector<Envelope> act(int round, RandomSource& rng) = 0;
  virtual void deliver(const Envelope& env) = 0;
  virtual void end_round(int /*round*/) {}
};

/// Static corruption of at most one party. The corrupted party's honest
/// machine still runs; rewrite receives what it would have sent in the
/// round (possibly nothing) and returns what is actually sent.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::optional<Role> corrupted() const = 0;
  virtual std::vector<Envelope> rewrite(int round, std::vector<Envelope> outgoing, const View& view,
                                        RandomSource& rng) = 0;
};

/// Passes everything through unchanged. With no role it corrupts nobody.
class IdentityAdversary final : public Adversary {
 public:
  explicit IdentityAdversary(std::optional<Role> role = std::nullopt) : role_(role) {}
  std::optional<Role> corrupted() const override { return role_; }
  std::vector<Envelope> rewrite(int, std::vector<Envelope> outgoing, const View&, RandomSource&) override {
    return outgoing;
  }

 private:
  std::optional<Role> role_;
};

/// Weak: the corrupted party sees the honest round-r envelopes addressed to
/// it before it speaks in round r. None: everyone speaks on round r-1 state.
enum class Rushing { Weak, None };

struct SessionOptions {
  int rounds = 7;
  Rushing rushing = Rushing::Weak;
  /// Replace a party's (or the adversary's) derived tape, e.g. with a
  /// ScriptedSource for exhaustive enumeration.
  std::array<RandomSource*, 3> tape_override{};
  RandomSource* adversary_tape = nullptr;
};

struct SessionRecord {
  std::vector<Envelope> transcript;  // ordered by (round, sender)
  std::array<View, 3> views;

  std::string log() const;
};

/// Per-role tape seed: derive_seed(seed, "SLM/v1/tape", role).
Seed tape_seed(const Seed& seed, Role role);
Seed adversary_seed(const Seed& seed);

/// Runs the fixed round schedule. parties[i] must have role kRoles[i].
/// Throws ScheduleViolation if a party or the adversary emits in a foreign
/// round and AuthenticationViolation if an envelope claims a sender other
/// than its emitter.
SessionRecord run_session(const std::array<Party*, 3>& parties, Adversary* adversary, const Seed& seed,
                          const SessionOptions& options = {});

/// True iff every broadcast envelope of the transcript was received
/// identically by all three parties and nothing else was broadcast.
bool broadcast_consistency_check(const SessionRecord& record);

}  // namespace silmarils
