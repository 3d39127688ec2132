#include <functional>

#include "doctest.h"
#include "silmarils/error.hpp"
#include "silmarils/net_sim.hpp"
#include "silmarils/three_party.hpp"

using namespace silmarils;

namespace {

// Every party broadcasts one numbered envelope per round and sends a private
// one to the next role.
class Chatter final : public Party {
 public:
  Chatter(Role r, const Prime& f) : role_(r), f_(&f) {}
  Role role() const override { return role_; }
  std::vector<Envelope> act(int round, RandomSource& rng) override {
    const Role next = kRoles[(index_of(role_) + 1) % 3];
    return {Envelope{round, role_, std::nullopt, Payload{MsgKind::Accept, {f_->sample(rng)}, {}}},
            Envelope{round, role_, next, Payload{MsgKind::Reject, {f_->element(round)}, {}}}};
  }
  void deliver(const Envelope& env) override { seen.push_back(env); }

  std::vector<Envelope> seen;

 private:
  Role role_;
  const Prime* f_;
};

class LambdaAdversary final : public Adversary {
 public:
  using Fn = std::function<std::vector<Envelope>(int, std::vector<Envelope>, const View&)>;
  LambdaAdversary(Role r, Fn fn) : role_(r), fn_(std::move(fn)) {}
  std::optional<Role> corrupted() const override { return role_; }
  std::vector<Envelope> rewrite(int round, std::vector<Envelope> out, const View& view, RandomSource&) override {
    return fn_(round, std::move(out), view);
  }

 private:
  Role role_;
  Fn fn_;
};

struct Trio {
  Chatter a, b, c;
  explicit Trio(const Prime& f) : a(Role::P1, f), b(Role::P2, f), c(Role::P3, f) {}
  std::array<Party*, 3> parties() { return {&a, &b, &c}; }
};

KeyMaterial test_keys(std::uint64_t p, std::uint64_t seed = 1) {
  auto rng = ChaChaRng::from_u64(seed);
  return keygen(Params::generate(presets::small(p), rng), rng);
}

}  // namespace

TEST_CASE("payload encoding round trip") {
  const Prime& f = *presets::small(251);
  Payload p{MsgKind::Challenge, {f.element(1), f.element(250), f.element(7)}, to_bytes("blob")};
  auto enc = p.encode();
  CHECK(enc.size() == 2 + 3 + 4 + 4);
  CHECK(Payload::decode(f, enc) == p);
  enc.pop_back();
  CHECK_THROWS_AS(Payload::decode(f, enc), Error);
  Bytes bad = {0x00, 0x00, 0, 0, 0, 0};
  CHECK_THROWS_AS(Payload::decode(f, bad), Error);
  Bytes noncanon = {0x03, 0x01, 0xff, 0, 0, 0, 0};
  CHECK_THROWS_AS(Payload::decode(f, noncanon), Error);
}

TEST_CASE("log line format") {
  const Prime& f = *presets::small(13);
  Envelope e{4, Role::P3, std::nullopt, Payload{MsgKind::Reject, {}, {}}};
  CHECK(e.log_line() == "round=4 sender=P3 channel=broadcast payload=050000000000");
  Envelope priv{7, Role::P2, Role::P3, Payload{MsgKind::Transfer, {f.element(5), f.element(12)}, {}}};
  CHECK(priv.log_line() == "round=7 sender=P2 channel=private:P3 payload=0a02050c00000000");
}

TEST_CASE("delivery semantics") {
  const Prime& f = *presets::small(251);
  Trio t(f);
  auto rec = run_session(t.parties(), nullptr, seed_from_u64(1), {.rounds = 3});
  CHECK(rec.transcript.size() == 18);
  // Each party sees 3 broadcasts (own included) and 1 private envelope per round.
  for (auto* c : {&t.a, &t.b, &t.c}) {
    CHECK(c->seen.size() == 12);
    for (const auto& e : c->seen) {
      CHECK((e.broadcast() || *e.recipient == c->role()));
      CHECK(std::find(rec.transcript.begin(), rec.transcript.end(), e) != rec.transcript.end());
    }
  }
  for (std::size_t i = 1; i < rec.transcript.size(); ++i) {
    const auto& a = rec.transcript[i - 1];
    const auto& b = rec.transcript[i];
    CHECK(std::tie(a.round, a.sender) <= std::tie(b.round, b.sender));
  }
  CHECK(broadcast_consistency_check(rec));
}

TEST_CASE("randomness is per role and recorded in the view") {
  const Prime& f = *presets::small(251);
  Trio t1(f), t2(f);
  auto r1 = run_session(t1.parties(), nullptr, seed_from_u64(5), {.rounds = 2});
  // Corrupting P2 with a rewrite that drops everything leaves P1 and P3 tapes untouched.
  LambdaAdversary drop(Role::P2, [](int, std::vector<Envelope>, const View&) { return std::vector<Envelope>{}; });
  auto r2 = run_session(t2.parties(), &drop, seed_from_u64(5), {.rounds = 2});
  for (Role r : {Role::P1, Role::P3}) CHECK(r1.views[index_of(r)].randomness == r2.views[index_of(r)].randomness);
  CHECK(r1.views[0].randomness.size() == 2);
  CHECK(r1.views[0].randomness != r1.views[1].randomness);
}

TEST_CASE("weak rushing lets the corrupted party see the current round first") {
  const Prime& f = *presets::small(251);
  for (Rushing mode : {Rushing::Weak, Rushing::None}) {
    Trio t(f);
    std::vector<std::size_t> seen_same_round;
    LambdaAdversary spy(Role::P2, [&](int round, std::vector<Envelope> out, const View& v) {
      std::size_t n = 0;
      for (const auto& e : v.received) n += e.round == round;
      seen_same_round.push_back(n);
      return out;
    });
    run_session(t.parties(), &spy, seed_from_u64(2), {.rounds = 3, .rushing = mode});
    // Round r: broadcasts from P1 and P3 plus P1's private envelope.
    for (auto n : seen_same_round) CHECK(n == (mode == Rushing::Weak ? 3u : 0u));
    // Either way P2 ends up with everything addressed to it exactly once.
    CHECK(t.b.seen.size() == 12);
  }
}

TEST_CASE("the adversary sees only the corrupted party's view") {
  const Prime& f = *presets::small(251);
  Trio t(f);
  LambdaAdversary spy(Role::P3, [](int, std::vector<Envelope> out, const View& v) {
    CHECK(v.role == Role::P3);
    for (const auto& e : v.received) CHECK((e.broadcast() || *e.recipient == Role::P3));
    return out;
  });
  run_session(t.parties(), &spy, seed_from_u64(3), {.rounds = 4});
}

TEST_CASE("authentication and schedule are enforced") {
  const Prime& f = *presets::small(251);
  auto expect = [&](Adversary& adv, ErrorCode code) {
    Trio t(f);
    try {
      run_session(t.parties(), &adv, seed_from_u64(4), {.rounds = 2});
      FAIL("session should have failed");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  LambdaAdversary spoof(Role::P2, [](int round, std::vector<Envelope> out, const View&) {
    out.push_back(Envelope{round, Role::P1, std::nullopt, Payload{MsgKind::P2Corrupt, {}, {}}});
    return out;
  });
  expect(spoof, ErrorCode::AuthenticationViolation);
  LambdaAdversary early(Role::P2, [](int round, std::vector<Envelope> out, const View&) {
    out.push_back(Envelope{round + 1, Role::P2, std::nullopt, Payload{MsgKind::Accept, {}, {}}});
    return out;
  });
  expect(early, ErrorCode::ScheduleViolation);

  Chatter wrong(Role::P2, f), b(Role::P2, f), c(Role::P3, f);
  CHECK_THROWS_AS(run_session({&wrong, &b, &c}, nullptr, seed_from_u64(4)), Error);
}

TEST_CASE("protocol sessions: null adversary, identity rewrite and determinism") {
  auto keys = test_keys(251);
  Bytes msg = to_bytes("pay 5");
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto seed = seed_from_u64(s);
    auto honest = run_three_party(keys, msg, nullptr, seed);
    CHECK(honest.outcome.z2 == honest.outcome.x);
    CHECK(honest.outcome.z3 == honest.outcome.x);
    CHECK(broadcast_consistency_check(honest.record));

    auto again = run_three_party(keys, msg, nullptr, seed);
    CHECK(again.record.log() == honest.record.log());

    for (Role r : kRoles) {
      IdentityAdversary id(r);
      auto with_id = run_three_party(keys, msg, &id, seed);
      CHECK(with_id.record.log() == honest.record.log());
      CHECK(with_id.outcome.z3 == honest.outcome.z3);
      CHECK(with_id.outcome.arm == honest.outcome.arm);
    }
  }
}

TEST_CASE("divergent broadcast copies are detected") {
  auto keys = test_keys(251);
  auto run = run_three_party(keys, to_bytes("m"), nullptr, seed_from_u64(9));
  CHECK(broadcast_consistency_check(run.record));
  auto forged = run.record;
  for (auto& e : forged.views[2].received) {
    if (e.broadcast() && e.round == 2) e.payload.values[0] += e.payload.values[0].field()->one();
  }
  CHECK_FALSE(broadcast_consistency_check(forged));
  auto dropped = run.record;
  dropped.views[1].received.erase(dropped.views[1].received.begin() + 1);
  CHECK_FALSE(broadcast_consistency_check(dropped));
}
