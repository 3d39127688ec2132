#include "silmarils/net_sim.hpp"

#include <algorithm>
#include <tuple>

#include "silmarils/error.hpp"

namespace silmarils {

std::string_view role_name(Role r) {
  switch (r) {
    case Role::P1: return "P1";
    case Role::P2: return "P2";
    case Role::P3: return "P3";
  }
  return "?";
}

std::string_view kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::SetupHolder: return "setup-holder";
    case MsgKind::SetupVerifier: return "setup-verifier";
    case MsgKind::Challenge: return "challenge";
    case MsgKind::Accept: return "accept";
    case MsgKind::Reject: return "reject";
    case MsgKind::P2Corrupt: return "P2 corrupt";
    case MsgKind::P3Corrupt: return "P3 corrupt";
    case MsgKind::RevealValue: return "reveal-value";
    case MsgKind::RevealKeys: return "reveal-keys";
    case MsgKind::Transfer: return "transfer";
  }
  return "?";
}

Bytes Payload::encode() const {
  Bytes out;
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(static_cast<std::uint8_t>(values.size()));
  for (const auto& v : values) append(out, v.to_bytes());
  append_be32(out, static_cast<std::uint32_t>(blob.size()));
  append(out, blob);
  return out;
}

Payload Payload::decode(const Prime& field, ByteView bytes) {
  auto fail = [](const char* what) { return Error(ErrorCode::MalformedSignature, what); };
  if (bytes.size() < 2) throw fail("payload too short");
  Payload p;
  const std::uint8_t kind = bytes[0];
  if (kind < 1 || kind > 10) throw fail("unknown payload kind");
  p.kind = static_cast<MsgKind>(kind);
  const std::size_t count = bytes[1], w = field.byte_width();
  std::size_t off = 2;
  if (bytes.size() < off + count * w + 4) throw fail("payload truncated");
  try {
    for (std::size_t i = 0; i < count; ++i, off += w) p.values.push_back(field.from_bytes(bytes.subspan(off, w)));
  } catch (const Error& e) {
    throw fail(e.what());
  }
  const std::uint32_t len = read_be32(bytes.subspan(off, 4));
  off += 4;
  if (bytes.size() != off + len) throw fail("payload length mismatch");
  p.blob.assign(bytes.begin() + off, bytes.end());
  return p;
}

std::string Envelope::log_line() const {
  std::string s = "round=" + std::to_string(round) + " sender=" + std::string(role_name(sender)) + " channel=";
  s += recipient ? "private:" + std::string(role_name(*recipient)) : std::string("broadcast");
  s += " payload=" + to_hex(payload.encode());
  return s;
}

std::string SessionRecord::log() const {
  std::string out;
  for (const auto& env : transcript) {
    out += env.log_line();
    out += '\n';
  }
  return out;
}

Seed tape_seed(const Seed& seed, Role role) { return derive_seed(seed, "SLM/v1/tape", index_of(role)); }
Seed adversary_seed(const Seed& seed) { return derive_seed(seed, "SLM/v1/adversary"); }

namespace {

void check_emitted(const std::vector<Envelope>& envs, int round, Role sender, bool from_adversary) {
  for (const auto& e : envs) {
    if (e.round != round) {
      throw Error(ErrorCode::ScheduleViolation, std::string(role_name(sender)) + " emitted a round-" +
                                                    std::to_string(e.round) + " envelope in round " +
                                                    std::to_string(round));
    }
    if (e.sender != sender) {
      throw Error(from_adversary ? ErrorCode::AuthenticationViolation : ErrorCode::ScheduleViolation,
                  std::string(role_name(sender)) + " cannot send as " + std::string(role_name(e.sender)));
    }
  }
}

bool addressed_to(const Envelope& e, Role r) { return e.broadcast() || *e.recipient == r; }

}  // namespace

SessionRecord run_session(const std::array<Party*, 3>& parties, Adversary* adversary, const Seed& seed,
                          const SessionOptions& options) {
  for (Role r : kRoles) {
    if (parties[index_of(r)] == nullptr || parties[index_of(r)]->role() != r) {
      throw Error(ErrorCode::RoleMismatch, "party slot " + std::string(role_name(r)) + " holds the wrong role");
    }
  }
  const std::optional<Role> corrupt = adversary ? adversary->corrupted() : std::nullopt;

  std::array<std::unique_ptr<ChaChaRng>, 3> own_tapes;
  std::array<std::unique_ptr<RecordingSource>, 3> tapes;
  for (Role r : kRoles) {
    const std::size_t i = index_of(r);
    RandomSource* src = options.tape_override[i];
    if (src == nullptr) {
      own_tapes[i] = std::make_unique<ChaChaRng>(tape_seed(seed, r));
      src = own_tapes[i].get();
    }
    tapes[i] = std::make_unique<RecordingSource>(*src);
  }
  std::unique_ptr<ChaChaRng> own_adv_tape;
  RandomSource* adv_tape = options.adversary_tape;
  if (adv_tape == nullptr) {
    own_adv_tape = std::make_unique<ChaChaRng>(adversary_seed(seed));
    adv_tape = own_adv_tape.get();
  }

  SessionRecord rec;
  for (Role r : kRoles) {
    rec.views[index_of(r)].role = r;
    rec.views[index_of(r)].inputs = parties[index_of(r)]->inputs();
  }
  auto sync_randomness = [&](Role r) { rec.views[index_of(r)].randomness = tapes[index_of(r)]->recorded(); };
  auto deliver = [&](const Envelope& e, Role to) {
    rec.views[index_of(to)].received.push_back(e);
    parties[index_of(to)]->deliver(e);
  };

  for (int round = 1; round <= options.rounds; ++round) {
    std::array<std::vector<Envelope>, 3> sent;
    for (Role r : kRoles) {
      if (r == corrupt) continue;
      sent[index_of(r)] = parties[index_of(r)]->act(round, *tapes[index_of(r)]);
      check_emitted(sent[index_of(r)], round, r, false);
    }

    // The corrupted party gets the honest envelopes of this round first.
    std::vector<const Envelope*> early;
    if (corrupt && options.rushing == Rushing::Weak) {
      for (Role r : kRoles) {
        for (const auto& e : sent[index_of(r)]) {
          if (addressed_to(e, *corrupt)) {
            deliver(e, *corrupt);
            early.push_back(&e);
          }
        }
      }
    }
    if (corrupt) {
      const std::size_t c = index_of(*corrupt);
      auto honest = parties[c]->act(round, *tapes[c]);
      check_emitted(honest, round, *corrupt, false);
      sync_randomness(*corrupt);
      sent[c] = adversary->rewrite(round, std::move(honest), rec.views[c], *adv_tape);
      check_emitted(sent[c], round, *corrupt, true);
    }

    for (Role from : kRoles) {
      for (const auto& e : sent[index_of(from)]) {
        rec.transcript.push_back(e);
        for (Role to : kRoles) {
          if (!addressed_to(e, to)) continue;
          if (to == corrupt && std::find(early.begin(), early.end(), &e) != early.end()) continue;
          deliver(e, to);
        }
      }
    }
    for (Role r : kRoles) parties[index_of(r)]->end_round(round);
  }
  for (Role r : kRoles) sync_randomness(r);
  return rec;
}

bool broadcast_consistency_check(const SessionRecord& record) {
  std::vector<Envelope> expected;
  for (const auto& e : record.transcript) {
    if (e.broadcast()) expected.push_back(e);
  }
  for (const auto& view : record.views) {
    std::vector<Envelope> got;
    for (const auto& e : view.received) {
      if (e.broadcast()) got.push_back(e);
    }
    // Weak rushing may reorder delivery within a round; compare per round.
    auto key = [](const Envelope& a, const Envelope& b) {
      return std::tie(a.round, a.sender) < std::tie(b.round, b.sender);
    };
    std::stable_sort(got.begin(), got.end(), key);
    if (got != expected) return false;
  }
  return true;
}

}  // namespace silmarils
