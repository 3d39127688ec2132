#include "silmarils/three_party.hpp"

#include "silmarils/error.hpp"

namespace silmarils {

namespace {

Envelope make_envelope(int round, Role sender, std::optional<Role> to, MsgKind kind,
                       std::vector<FieldElement> values = {}, Bytes blob = {}) {
  return Envelope{round, sender, to, Payload{kind, std::move(values), std::move(blob)}};
}

bool is(const Payload& p, MsgKind kind, std::size_t values) { return p.kind == kind && p.values.size() == values; }

}  // namespace

IcSetup IcSetup::generate(const FieldElement& x, RandomSource& rng) {
  const Prime& f = *x.field();
  IcSetup s;
  s.x = x;
  s.k1 = f.sample(rng);
  s.k2 = f.sample(rng);
  s.x_prime = f.sample(rng);
  s.k2_prime = f.sample(rng);
  s.sigma = s.k1 * x + s.k2;
  s.sigma_prime = s.k1 * s.x_prime + s.k2_prime;
  return s;
}

Bytes TransportBlob::encode() const {
  Bytes out;
  append_be32(out, static_cast<std::uint32_t>(message.size()));
  append(out, message);
  append(out, sig_alg.encode());
  append(out, nonce.to_bytes());
  return out;
}

TransportBlob TransportBlob::decode(const Prime& field, ByteView bytes) {
  const std::size_t w = field.byte_width();
  if (bytes.size() < 4) throw Error(ErrorCode::MalformedSignature, "transport blob too short");
  const std::size_t len = read_be32(bytes.first(4));
  if (bytes.size() != 4 + len + 6 * w) throw Error(ErrorCode::MalformedSignature, "transport blob length mismatch");
  TransportBlob b;
  b.message.assign(bytes.begin() + 4, bytes.begin() + 4 + len);
  b.sig_alg = Signature::decode(field, bytes.subspan(4 + len, 5 * w));
  try {
    b.nonce = field.from_bytes(bytes.subspan(4 + len + 5 * w, w));
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedSignature, e.what());
  }
  return b;
}

FieldElement ic_value(ByteView message, const Signature& sig_alg) {
  const Bytes enc = sig_alg.encode();
  return hash_to_field(HashCtx(Domain::IcValue, *sig_alg.s[0].field()), {message, enc});
}

std::string_view arm_name(ResolutionArm arm) {
  switch (arm) {
    case ResolutionArm::Unresolved: return "unresolved";
    case ResolutionArm::P2Corrupt: return "p2-corrupt";
    case ResolutionArm::BothAccept: return "both-accept";
    case ResolutionArm::VerifierReject: return "verifier-reject";
    case ResolutionArm::VerifierCorrupt: return "verifier-corrupt";
  }
  return "?";
}

SignerStart p1_start(const KeyMaterial& keys, ByteView message, RandomSource& rng) {
  SignerStart st;
  SignResult signed_ = sign(keys, message, rng);
  st.sig_alg = signed_.signature;
  st.nonce = signed_.tape.nonce;
  st.x = ic_value(message, st.sig_alg);
  st.setup = IcSetup::generate(st.x, rng);

  const IcSetup& s = st.setup;
  TransportBlob blob{Bytes(message.begin(), message.end()), st.sig_alg, st.nonce};
  st.envelopes.push_back(make_envelope(1, Role::P1, Role::P2, MsgKind::SetupHolder,
                                       {s.x, s.x_prime, s.sigma, s.sigma_prime}, blob.encode()));
  st.envelopes.push_back(make_envelope(1, Role::P1, Role::P3, MsgKind::SetupVerifier, {s.k1, s.k2, s.k2_prime}));
  return st;
}

Challenge p2_challenge(const std::optional<HolderPackage>& pkg, RandomSource& rng) {
  if (!pkg) throw Error(ErrorCode::MissingSetup, "P2 has no IC package");
  Challenge ch;
  ch.e = pkg->x.field()->sample(rng);
  ch.x_e = pkg->x_prime + ch.e * pkg->x;
  ch.sigma_e = pkg->sigma_prime + ch.e * pkg->sigma;
  return ch;
}

bool p1_challenge_consistent(const IcSetup& s, const Challenge& ch) {
  return ch.x_e == s.x_prime + ch.e * s.x && ch.sigma_e == s.sigma_prime + ch.e * s.sigma;
}

Payload p1_check_challenge(const IcSetup& setup, const std::optional<Challenge>& ch) {
  if (ch && p1_challenge_consistent(setup, *ch)) return Payload{MsgKind::Accept, {}, {}};
  return Payload{MsgKind::P2Corrupt, {setup.x, setup.sigma}, {}};
}

bool p3_challenge_consistent(const VerifierKeys& k, const Challenge& ch) {
  return ch.sigma_e == k.k1 * ch.x_e + k.k2_prime + ch.e * k.k2;
}

MsgKind p3_check_challenge(const std::optional<VerifierKeys>& keys, const Challenge& ch) {
  if (!keys) throw Error(ErrorCode::MissingSetup, "P3 has no IC keys");
  return p3_challenge_consistent(*keys, ch) ? MsgKind::Accept : MsgKind::Reject;
}

bool p1_audit_p3(const IcSetup& s, const Challenge& ch, std::optional<MsgKind> p3_decl) {
  const MsgKind expected =
      p3_challenge_consistent(VerifierKeys{s.k1, s.k2, s.k2_prime}, ch) ? MsgKind::Accept : MsgKind::Reject;
  return p3_decl != expected;
}

ResolutionArm select_arm(std::optional<MsgKind> p1_decl, std::optional<MsgKind> p3_decl, bool p3_declared_corrupt) {
  if (p1_decl == MsgKind::P2Corrupt) return ResolutionArm::P2Corrupt;
  if (p3_decl == MsgKind::Accept && !p3_declared_corrupt) return ResolutionArm::BothAccept;
  if (p3_decl == MsgKind::Reject) return ResolutionArm::VerifierReject;
  return ResolutionArm::VerifierCorrupt;
}

Payload p2_transfer(const HolderPackage& pkg, ResolutionArm arm, const Bytes& blob) {
  if (arm == ResolutionArm::Unresolved) throw Error(ErrorCode::PhaseViolation, "signing phase has not resolved");
  return Payload{MsgKind::Transfer, {pkg.x, pkg.sigma}, blob};
}

std::optional<FieldElement> p3_extract_transfer(const FieldElement& k1, const FieldElement& k2, const FieldElement& x,
                                                const FieldElement& sigma) {
  if (sigma == k1 * x + k2) return x;
  return std::nullopt;
}

bool interpret_value(const sss::Weights& pk, const ReceiptKey& key, ByteView message, const Signature& sig_alg,
                     const FieldElement& x) {
  const Prime& f = *pk.w0.field();
  FieldElement r;
  if (const auto* k = std::get_if<PairKey>(&key)) {
    r = derive_receipt(*k, message, f).receipt;
  } else if (const auto* n = std::get_if<FieldElement>(&key)) {
    r = receipt_from_nonce(message, *n);
  } else {
    throw Error(ErrorCode::MissingNonce, "interpreting x needs the nonce or k_sig");
  }
  if (!(ic_value(message, sig_alg) == x)) return false;
  return verify_with_receipt(pk, r, sig_alg);
}

// --- broadcast bookkeeping ------------------------------------------------------

void BroadcastLog::record(const Envelope& env) {
  if (!env.broadcast()) return;
  const Payload& p = env.payload;
  switch (env.round) {
    case 2:
      if (env.sender == Role::P2 && is(p, MsgKind::Challenge, 3) && !challenge) {
        challenge = Challenge{p.values[0], p.values[1], p.values[2]};
      }
      break;
    case 3:
      if (env.sender == Role::P1 && !p1_decl && (is(p, MsgKind::Accept, 0) || is(p, MsgKind::P2Corrupt, 2))) {
        p1_decl = p;
      }
      break;
    case 4:
      if (env.sender == Role::P3 && !p3_decl && (is(p, MsgKind::Accept, 0) || is(p, MsgKind::Reject, 0))) {
        p3_decl = p.kind;
      }
      break;
    case 5:
      if (env.sender == Role::P1 && is(p, MsgKind::P3Corrupt, 0)) p3_declared_corrupt = true;
      break;
    case 6:
      if (env.sender == Role::P1 && !reveal && (is(p, MsgKind::RevealValue, 2) || is(p, MsgKind::RevealKeys, 2))) {
        reveal = p;
      }
      break;
    default:
      break;
  }
}

void BroadcastLog::settle(int round) {
  if (arm != ResolutionArm::Unresolved) return;
  if (round == 3 && p1_decl && p1_decl->kind == MsgKind::P2Corrupt) arm = ResolutionArm::P2Corrupt;
  if (round == 5) arm = select_arm(p1_decl ? std::optional(p1_decl->kind) : std::nullopt, p3_decl, p3_declared_corrupt);
}

// --- P1 ---------------------------------------------------------------------------

std::vector<std::pair<std::string, Bytes>> Signer::inputs() const {
  return {{"sk", keys_.encode_sk()}, {"pk", keys_.encode_pk()}, {"message", message_}};
}

std::vector<Envelope> Signer::act(int round, RandomSource& rng) {
  switch (round) {
    case 1:
      start_ = p1_start(keys_, message_, rng);
      return start_->envelopes;
    case 3:
      if (!start_) return {};
      return {Envelope{3, Role::P1, std::nullopt, p1_check_challenge(start_->setup, log_.challenge)}};
    case 5:
      if (!start_ || log_.arm == ResolutionArm::P2Corrupt || !log_.challenge) return {};
      if (p1_audit_p3(start_->setup, *log_.challenge, log_.p3_decl)) {
        return {make_envelope(5, Role::P1, std::nullopt, MsgKind::P3Corrupt)};
      }
      return {};
    case 6: {
      if (!start_) return {};
      const IcSetup& s = start_->setup;
      if (log_.arm == ResolutionArm::VerifierReject) {
        return {make_envelope(6, Role::P1, std::nullopt, MsgKind::RevealValue, {s.x, s.sigma})};
      }
      if (log_.arm == ResolutionArm::VerifierCorrupt) {
        return {make_envelope(6, Role::P1, std::nullopt, MsgKind::RevealKeys, {s.k1, s.k2})};
      }
      return {};
    }
    default:
      return {};
  }
}

// --- P2 ---------------------------------------------------------------------------

std::vector<Envelope> Holder::act(int round, RandomSource& rng) {
  if (round == 2 && pkg_) {
    const Challenge ch = p2_challenge(pkg_, rng);
    return {make_envelope(2, Role::P2, std::nullopt, MsgKind::Challenge, {ch.e, ch.x_e, ch.sigma_e})};
  }
  if (round == 7 && pkg_ && log_.arm != ResolutionArm::Unresolved) {
    return {Envelope{7, Role::P2, Role::P3, p2_transfer(*pkg_, log_.arm, blob_)}};
  }
  return {};
}

void Holder::deliver(const Envelope& env) {
  if (env.round == 1 && env.sender == Role::P1 && env.recipient == Role::P2 &&
      is(env.payload, MsgKind::SetupHolder, 4) && !pkg_) {
    const auto& v = env.payload.values;
    pkg_ = HolderPackage{v[0], v[1], v[2], v[3]};
    blob_ = env.payload.blob;
  }
  log_.record(env);
}

void Holder::end_round(int round) {
  log_.settle(round);
  auto adopt_value = [&](const Payload& p) {
    if (pkg_) {
      pkg_->x = p.values[0];
      pkg_->sigma = p.values[1];
    } else {
      pkg_ = HolderPackage{p.values[0], field_->zero(), p.values[1], field_->zero()};
    }
  };
  if (round == 3 && log_.arm == ResolutionArm::P2Corrupt) {
    adopt_value(*log_.p1_decl);
  } else if (round == 6 && log_.arm != ResolutionArm::P2Corrupt) {
    const auto& rv = log_.reveal;
    if (rv && log_.arm == ResolutionArm::VerifierReject && rv->kind == MsgKind::RevealValue) {
      adopt_value(*rv);
    } else if (rv && log_.arm == ResolutionArm::VerifierCorrupt && rv->kind == MsgKind::RevealKeys && pkg_) {
      pkg_->sigma = rv->values[0] * pkg_->x + rv->values[1];
    }
  } else {
    return;
  }
  if (pkg_) z2_ = pkg_->x;
}

// --- P3 ---------------------------------------------------------------------------

std::vector<std::pair<std::string, Bytes>> Verifier::inputs() const { return {{"pk", pk_.encode()}}; }

std::vector<Envelope> Verifier::act(int round, RandomSource&) {
  if (round != 4 || log_.arm != ResolutionArm::Unresolved) return {};
  MsgKind decl = MsgKind::Reject;
  if (keys_ && log_.challenge) decl = p3_check_challenge(keys_, *log_.challenge);
  return {make_envelope(4, Role::P3, std::nullopt, decl)};
}

void Verifier::deliver(const Envelope& env) {
  log_.record(env);
  if (env.broadcast() || env.recipient != Role::P3) return;
  if (env.round == 1 && env.sender == Role::P1 && is(env.payload, MsgKind::SetupVerifier, 3) && !keys_) {
    const auto& v = env.payload.values;
    keys_ = VerifierKeys{v[0], v[1], v[2]};
  }
  if (env.round == 7 && env.sender == Role::P2 && is(env.payload, MsgKind::Transfer, 2) && !z3_) {
    if (!keys_) return;
    const auto& v = env.payload.values;
    z3_ = p3_extract_transfer(keys_->k1, keys_->k2, v[0], v[1]);
    if (!z3_) return;
    try {
      const TransportBlob blob = TransportBlob::decode(*pk_.w0.field(), env.payload.blob);
      interpreted_ = interpret_value(pk_, blob.nonce, blob.message, blob.sig_alg, *z3_);
    } catch (const Error&) {
      interpreted_ = false;
    }
  }
}

void Verifier::end_round(int round) {
  log_.settle(round);
  if (round == 3 && log_.arm == ResolutionArm::P2Corrupt && keys_) {
    keys_->k2 = log_.p1_decl->values[1] - keys_->k1 * log_.p1_decl->values[0];
  } else if (round == 6 && log_.reveal) {
    const auto& v = log_.reveal->values;
    if (log_.arm == ResolutionArm::VerifierReject && log_.reveal->kind == MsgKind::RevealValue && keys_) {
      keys_->k2 = v[1] - keys_->k1 * v[0];
    } else if (log_.arm == ResolutionArm::VerifierCorrupt && log_.reveal->kind == MsgKind::RevealKeys) {
      if (keys_) {
        keys_->k1 = v[0];
        keys_->k2 = v[1];
      } else {
        keys_ = VerifierKeys{v[0], v[1], pk_.w0.field()->zero()};
      }
    }
  }
}

// --- session ------------------------------------------------------------------------

ThreePartyRun run_three_party(const KeyMaterial& keys, ByteView message, Adversary* adversary, const Seed& seed,
                              const SessionOptions& options) {
  Signer p1(keys, Bytes(message.begin(), message.end()));
  Holder p2(*keys.pk.w0.field());
  Verifier p3(keys.pk);

  ThreePartyRun run;
  run.record = run_session({&p1, &p2, &p3}, adversary, seed, options);

  SessionOutcome& out = run.outcome;
  if (p1.start()) out.x = p1.start()->x;
  out.z2 = p2.z2();
  out.z3 = p3.z3();
  out.interpreted = p3.interpreted();
  const std::optional<Role> corrupt = adversary ? adversary->corrupted() : std::nullopt;
  out.arm = corrupt == Role::P2 ? p3.log().arm : p2.log().arm;
  for (const auto& e : run.record.transcript) {
    if (!e.broadcast()) continue;
    switch (e.payload.kind) {
      case MsgKind::Accept:
      case MsgKind::Reject:
      case MsgKind::P2Corrupt:
      case MsgKind::P3Corrupt:
        out.verdicts.push_back({e.round, e.sender, e.payload.kind});
        break;
      default:
        break;
    }
  }
  return run;
}

}  // namespace silmarils
