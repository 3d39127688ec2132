#include "silmarils/strategies.hpp"

#include <string>

#include "silmarils/error.hpp"

namespace silmarils {

const std::vector<StrategyInfo>& strategies() {
  static const std::vector<StrategyInfo> all = {
      {"none", std::nullopt, "0", "all parties honest"},
      {"substitute-guess-k1", Role::P2, "1/p", "P2 transfers a different value with a guessed k1"},
      {"inconsistent-line", Role::P1, "1/p", "P1 gives P2 a value off P3's line"},
      {"inconsistent-line-zero", Role::P1, "0", "inconsistent-line with zero offsets"},
      {"silent-verifier", Role::P3, "0", "P3 stays silent in round 4"},
      {"false-reject", Role::P3, "0", "P3 always declares reject"},
  };
  return all;
}

const StrategyInfo& strategy_info(std::string_view name) {
  for (const auto& s : strategies()) {
    if (s.name == name) return s;
  }
  throw Error(ErrorCode::UnknownStrategy, "unknown adversary strategy '" + std::string(name) + "'");
}

std::unique_ptr<Adversary> make_strategy(std::string_view name) {
  strategy_info(name);
  if (name == "substitute-guess-k1") return std::make_unique<SubstituteGuessK1>();
  if (name == "inconsistent-line") return std::make_unique<InconsistentLine>();
  if (name == "inconsistent-line-zero") return std::make_unique<InconsistentLine>(true);
  if (name == "silent-verifier") return std::make_unique<SilentVerifier>();
  if (name == "false-reject") return std::make_unique<FalseReject>();
  return std::make_unique<IdentityAdversary>();
}

std::unique_ptr<Adversary> make_strategy(std::string_view name, Role expected) {
  const StrategyInfo& info = strategy_info(name);
  if (info.role != expected) {
    throw Error(ErrorCode::RoleMismatch, "strategy '" + std::string(name) + "' does not corrupt " +
                                             std::string(role_name(expected)));
  }
  return make_strategy(name);
}

std::vector<Envelope> SubstituteGuessK1::rewrite(int round, std::vector<Envelope> outgoing, const View&,
                                                 RandomSource& rng) {
  if (round != 7) return outgoing;
  for (auto& e : outgoing) {
    if (e.payload.kind != MsgKind::Transfer || e.payload.values.size() != 2) continue;
    auto& v = e.payload.values;
    const Prime& f = *v[0].field();
    const FieldElement shift = f.sample_unit(rng);
    const FieldElement guess = f.sample(rng);
    v[0] += shift;
    v[1] += guess * shift;
  }
  return outgoing;
}

std::vector<Envelope> InconsistentLine::rewrite(int round, std::vector<Envelope> outgoing, const View&,
                                                RandomSource& rng) {
  for (auto& e : outgoing) {
    if (round == 1 && e.payload.kind == MsgKind::SetupHolder && e.payload.values.size() == 4) {
      auto& v = e.payload.values;
      const Prime& f = *v[0].field();
      const FieldElement delta = zero_ ? f.zero() : f.sample_unit(rng);
      const FieldElement delta_prime = zero_ ? f.zero() : f.sample(rng);
      v[2] += delta;
      v[3] += delta_prime;
    } else if (round == 3) {
      e.payload = Payload{MsgKind::Accept, {}, {}};
    }
  }
  return outgoing;
}

std::vector<Envelope> SilentVerifier::rewrite(int round, std::vector<Envelope> outgoing, const View&, RandomSource&) {
  if (round == 4) return {};
  return outgoing;
}

std::vector<Envelope> FalseReject::rewrite(int round, std::vector<Envelope> outgoing, const View&, RandomSource&) {
  if (round == 4) {
    for (auto& e : outgoing) e.payload = Payload{MsgKind::Reject, {}, {}};
  }
  return outgoing;
}

}  // namespace silmarils
