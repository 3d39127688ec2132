#include "silmarils/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numeric>

#include "silmarils/error.hpp"
#include "silmarils/strategies.hpp"
#include "silmarils/three_party.hpp"

namespace silmarils::stats {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8f", v);
  return buf;
}

std::shared_ptr<const Prime> borrow(const Prime& f) { return std::shared_ptr<const Prime>(std::shared_ptr<const Prime>(), &f); }

KeyMaterial keys_from(const Prime& f, RandomSource& rng) { return keygen(Params::generate(borrow(f), rng), rng); }

Bytes random_message(RandomSource& rng) {
  Bytes m(16);
  rng.fill(m);
  return m;
}

Seed root_for(const Config& cfg, std::string_view name) { return derive_seed(cfg.seed, name); }

std::uint64_t small_value(const Prime& f) {
  if (!f.single_word()) throw Error(ErrorCode::PrimeTooLarge, "exhaustive enumeration needs a toy prime");
  return f.value().limb[0];
}

double inverse_p(const Prime& f) {
  return f.single_word() ? 1.0 / static_cast<double>(f.value().limb[0]) : std::ldexp(1.0, -static_cast<int>(f.bits()) + 1);
}

void push_value(ScriptedSource& s, const Prime& f, std::uint64_t v) { s.push(f.element(v).to_bytes()); }

// Signing draws alpha, beta, b, d, slope_eps, slope_K held fixed.
void push_signing(ScriptedSource& s, const Prime& f) {
  for (std::uint64_t v : {1, 1, 1, 1, 0, 0}) push_value(s, f, v);
}

ExactResult finish(std::string name, const Prime& f, Rational value, Rational expected, bool pass) {
  return ExactResult{std::move(name), f.value().to_decimal(), value, expected, pass};
}

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) throw Error(ErrorCode::EmptyExperiment, "no trials");
  const double n = static_cast<double>(trials), k = static_cast<double>(successes);
  const double z2 = z * z;
  const double center = (k + z2 / 2) / (n + z2);
  const double half = z / (n + z2) * std::sqrt(k * (n - k) / n + z2 / 4);
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

Estimate make_estimate(std::string name, const Prime& field, std::uint64_t trials, std::uint64_t successes,
                       double target) {
  if (trials == 0) throw Error(ErrorCode::EmptyExperiment, name + ": no trials");
  Estimate e;
  e.name = std::move(name);
  e.prime = field.value().to_decimal();
  e.trials = trials;
  e.successes = successes;
  e.point = static_cast<double>(successes) / static_cast<double>(trials);
  std::tie(e.wilson_low, e.wilson_high) = wilson_interval(successes, trials);
  e.target = target;
  e.slack = 3 * std::sqrt(target / static_cast<double>(trials));
  e.pass = e.wilson_low <= target + e.slack;
  return e;
}

std::string Estimate::line() const {
  return "test=" + name + " p=" + prime + " trials=" + std::to_string(trials) +
         " successes=" + std::to_string(successes) + " point=" + fixed(point) + " wilson_low=" + fixed(wilson_low) +
         " wilson_high=" + fixed(wilson_high) + " target=" + fixed(target) + " slack=" + fixed(slack) +
         " verdict=" + (pass ? "pass" : "fail");
}

Rational Rational::of(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw Error(ErrorCode::EmptyExperiment, "zero denominator");
  const std::uint64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string ExactResult::line() const {
  return "test=" + name + " p=" + prime + " exact=" + value.str() + " expected=" + expected.str() +
         " verdict=" + (pass ? "pass" : "fail");
}

Seed trial_seed(const Seed& root, std::uint64_t i) { return derive_seed(root, "trial", i); }

void require_exhaustive(const Prime& field, std::uint64_t limit) {
  if (!field.single_word() || field.value().limb[0] > limit) {
    throw Error(ErrorCode::PrimeTooLarge,
                "exhaustive enumeration is limited to p <= " + std::to_string(limit) + ", got " + field.value().to_decimal());
  }
}

// --- Monte Carlo ------------------------------------------------------------------

Estimate estimate_two_party_correctness(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "two-party-correctness"));
  const KeyMaterial keys = keys_from(f, rng);
  std::uint64_t rejected = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Bytes m = random_message(rng);
    rejected += !verify(keys.pk, keys.k_sig, m, sign(keys, m, rng).signature);
  }
  return make_estimate("two-party-correctness", f, trials, rejected, inverse_p(f));
}

namespace {

template <class Success>
Estimate session_estimate(std::string name, const Prime& f, std::string_view strategy, std::optional<Role> role,
                          std::uint64_t trials, const Config& cfg, Success success) {
  if (trials == 0) throw Error(ErrorCode::EmptyExperiment, name + ": no trials");
  if (role) make_strategy(strategy, *role);
  const Seed root = root_for(cfg, name + "/" + std::string(strategy));
  SessionOptions opts;
  opts.rushing = cfg.rushing;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Seed ts = trial_seed(root, i);
    ChaChaRng rng(ts);
    const KeyMaterial keys = keys_from(f, rng);
    const Bytes m = random_message(rng);
    auto adv = make_strategy(strategy);
    const auto run = run_three_party(keys, m, adv.get(), derive_seed(ts, "session"), opts);
    hits += success(run.outcome);
  }
  const bool zero_bound = role && strategy_info(strategy).bound == "0";
  if (role) name += "/" + std::string(strategy);
  if (cfg.rushing == Rushing::None) name += "/no-rushing";
  Estimate e = make_estimate(name, f, trials, hits, zero_bound ? 0.0 : inverse_p(f));
  if (zero_bound) e.pass = hits == 0;
  return e;
}

}  // namespace

Estimate estimate_correctness(const Prime& f, std::uint64_t trials, const Config& cfg) {
  return session_estimate("correctness", f, "none", std::nullopt, trials, cfg, [](const SessionOutcome& o) {
    return !(o.z2 == o.x) || !(o.z3 == o.x) || !o.interpreted.value_or(false);
  });
}

Estimate estimate_unforgeability(const Prime& f, std::string_view strategy, std::uint64_t trials, const Config& cfg) {
  return session_estimate("unforgeability", f, strategy, Role::P2, trials, cfg,
                          [](const SessionOutcome& o) { return o.z3.has_value() && !(*o.z3 == o.x); });
}

Estimate estimate_transferability(const Prime& f, std::string_view strategy, std::uint64_t trials,
                                  const Config& cfg) {
  return session_estimate("transferability", f, strategy, Role::P1, trials, cfg,
                          [](const SessionOutcome& o) { return o.z2.has_value() && !(o.z2 == o.z3); });
}

Estimate estimate_core_forgery(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "core-forgery"));
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto w = sss::Weights::sample(f, rng);
    Signature sig;
    for (auto& c : sig.s) c = f.sample(rng);
    accepted += verify_with_receipt(w, f.sample(rng), sig);
  }
  return make_estimate("core-forgery", f, trials, accepted, inverse_p(f));
}

Estimate estimate_seen_receipt_forgery(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "seen-receipt-forgery"));
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const auto w = sss::Weights::sample(f, rng);
    const FieldElement r = f.sample(rng);
    Signature sig;
    sig.s[0] = f.sample(rng);
    sig.s[1] = f.sample(rng);
    sig.s[2] = f.sample(rng);
    sig.s[3] = f.sample_unit(rng);
    const FieldElement prod = sig.s[0] * sig.s[1];
    sig.s[4] = prod - w.w0 * w.w1.inverse() * (prod - sig.s[2] + r * sig.s[3]);
    accepted += verify_with_receipt(w, r, sig);
  }
  Estimate e = make_estimate("seen-receipt-forgery", f, trials, accepted, 1.0);
  e.pass = accepted == trials;
  return e;
}

Estimate estimate_dv_acceptance(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "dv-acceptance"));
  const KeyMaterial keys = keys_from(f, rng);
  std::uint64_t eligible = 0, accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Bytes m = random_message(rng);
    const Signature sig = dv_forge(keys.k_sig, keys.pk, m, rng);
    if (sig.s[3].is_zero()) continue;
    ++eligible;
    accepted += verify(keys.pk, keys.k_sig, m, sig);
  }
  Estimate e = make_estimate("dv-acceptance", f, eligible, accepted, 1.0);
  e.pass = accepted == eligible;
  return e;
}

Estimate estimate_public_r_weak(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "public-r-weak"));
  const KeyMaterial keys = keys_from(f, rng);
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Bytes m = random_message(rng);
    accepted += verify_public_r(keys.pk, m, public_r_forge(keys.pk, m, rng));
  }
  Estimate e = make_estimate("public-r-forgery/weak-verifier", f, trials, accepted, 1.0);
  e.pass = accepted == trials;
  return e;
}

Estimate estimate_public_r_real(const Prime& f, std::uint64_t trials, const Config& cfg) {
  ChaChaRng rng(root_for(cfg, "public-r-real"));
  const KeyMaterial keys = keys_from(f, rng);
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const Bytes m = random_message(rng);
    accepted += verify(keys.pk, keys.k_sig, m, public_r_forge(keys.pk, m, rng));
  }
  const double p = static_cast<double>(small_value(f));
  Estimate e = make_estimate("public-r-forgery/real-verifier", f, trials, accepted, 1.0 / p);
  e.pass = e.point <= 3.0 / p;
  return e;
}

// --- exhaustive -----------------------------------------------------------------

ExactResult exhaustive_unforgeability(const Prime& f) {
  require_exhaustive(f, 7);
  const std::uint64_t p = small_value(f);
  ChaChaRng key_rng(seed_from_u64(p));
  const KeyMaterial keys = keys_from(f, key_rng);
  const Bytes m = to_bytes("exhaustive");
  std::uint64_t total = 0, hits = 0;
  for (std::uint64_t k1 = 0; k1 < p; ++k1)
    for (std::uint64_t k2 = 0; k2 < p; ++k2)
      for (std::uint64_t xp = 0; xp < p; ++xp)
        for (std::uint64_t k2p = 0; k2p < p; ++k2p)
          for (std::uint64_t e = 0; e < p; ++e)
            for (std::uint64_t shift = 1; shift < p; ++shift)
              for (std::uint64_t guess = 0; guess < p; ++guess) {
                ScriptedSource t1, t2, ta;
                push_signing(t1, f);
                for (auto v : {k1, k2, xp, k2p}) push_value(t1, f, v);
                push_value(t2, f, e);
                push_value(ta, f, shift);
                push_value(ta, f, guess);
                SessionOptions opts;
                opts.tape_override = {&t1, &t2, nullptr};
                opts.adversary_tape = &ta;
                SubstituteGuessK1 adv;
                const auto o = run_three_party(keys, m, &adv, Seed{}, opts).outcome;
                ++total;
                hits += o.z3.has_value() && !(*o.z3 == o.x);
              }
  const Rational value = Rational::of(hits, total);
  const Rational expected = Rational::of(1, p);
  return finish("unforgeability/exhaustive/substitute-guess-k1", f, value, expected, value == expected);
}

ExactResult exhaustive_transferability(const Prime& f) {
  require_exhaustive(f, 7);
  const std::uint64_t p = small_value(f);
  ChaChaRng key_rng(seed_from_u64(p));
  const KeyMaterial keys = keys_from(f, key_rng);
  const Bytes m = to_bytes("exhaustive");
  std::uint64_t total = 0, hits = 0;
  for (std::uint64_t k1 = 0; k1 < p; ++k1)
    for (std::uint64_t k2 = 0; k2 < p; ++k2)
      for (std::uint64_t xp = 0; xp < p; ++xp)
        for (std::uint64_t k2p = 0; k2p < p; ++k2p)
          for (std::uint64_t e = 0; e < p; ++e)
            for (std::uint64_t delta = 1; delta < p; ++delta)
              for (std::uint64_t delta_p = 0; delta_p < p; ++delta_p) {
                ScriptedSource t1, t2, ta;
                push_signing(t1, f);
                for (auto v : {k1, k2, xp, k2p}) push_value(t1, f, v);
                push_value(t2, f, e);
                push_value(ta, f, delta);
                push_value(ta, f, delta_p);
                SessionOptions opts;
                opts.tape_override = {&t1, &t2, nullptr};
                opts.adversary_tape = &ta;
                InconsistentLine adv;
                const auto o = run_three_party(keys, m, &adv, Seed{}, opts).outcome;
                ++total;
                hits += o.z2.has_value() && !(o.z2 == o.z3);
              }
  const Rational value = Rational::of(hits, total);
  const Rational expected = Rational::of(1, p);
  return finish("transferability/exhaustive/inconsistent-line", f, value, expected, value == expected);
}

namespace {

// A message whose authenticated value under the fixed signing draws is x.
Bytes message_with_value(const KeyMaterial& keys, const Prime& f, std::uint64_t x) {
  for (std::uint64_t i = 0; i < 100000; ++i) {
    Bytes m = to_bytes("secrecy/");
    append_be64(m, i);
    ScriptedSource t;
    push_signing(t, f);
    for (int j = 0; j < 4; ++j) push_value(t, f, 0);
    if (p1_start(keys, m, t).x.to_u64() == x) return m;
  }
  throw Error(ErrorCode::EmptyExperiment, "no message found for x = " + std::to_string(x));
}

std::map<std::string, std::uint64_t> p3_views(const KeyMaterial& keys, const Prime& f, const Bytes& m) {
  const std::uint64_t p = small_value(f);
  std::map<std::string, std::uint64_t> views;
  for (std::uint64_t k1 = 0; k1 < p; ++k1)
    for (std::uint64_t k2 = 0; k2 < p; ++k2)
      for (std::uint64_t xp = 0; xp < p; ++xp)
        for (std::uint64_t k2p = 0; k2p < p; ++k2p)
          for (std::uint64_t e = 0; e < p; ++e) {
            ScriptedSource t1, t2;
            push_signing(t1, f);
            for (auto v : {k1, k2, xp, k2p}) push_value(t1, f, v);
            push_value(t2, f, e);
            SessionOptions opts;
            opts.tape_override = {&t1, &t2, nullptr};
            const auto run = run_three_party(keys, m, nullptr, Seed{}, opts);
            const View& v = run.record.views[index_of(Role::P3)];
            std::string key = to_hex(v.randomness);
            for (const auto& [label, bytes] : v.inputs) key += " " + label + "=" + to_hex(bytes);
            for (const auto& env : v.received) {
              if (env.round <= 6) key += "\n" + env.log_line();
            }
            ++views[key];
          }
  return views;
}

}  // namespace

ExactResult secrecy_tv(const Prime& f, std::uint64_t x_a, std::uint64_t x_b) {
  require_exhaustive(f, 7);
  const std::uint64_t p = small_value(f);
  ChaChaRng key_rng(seed_from_u64(p));
  const KeyMaterial keys = keys_from(f, key_rng);
  const auto va = p3_views(keys, f, message_with_value(keys, f, x_a % p));
  const auto vb = p3_views(keys, f, message_with_value(keys, f, x_b % p));
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> joint;
  for (const auto& [k, c] : va) joint[k].first = c;
  for (const auto& [k, c] : vb) joint[k].second = c;
  std::uint64_t l1 = 0, n = 0;
  for (const auto& [k, c] : joint) {
    l1 += c.first > c.second ? c.first - c.second : c.second - c.first;
    n += c.first;
  }
  const Rational value = Rational::of(l1, 2 * n);
  return finish("secrecy-tv/x=" + std::to_string(x_a % p) + "," + std::to_string(x_b % p), f, value, Rational{0, 1},
                value.num == 0);
}

ExactResult exhaustive_core_forgery(const Prime& f) {
  require_exhaustive(f, 13);
  const std::uint64_t p = small_value(f);
  const sss::Weights w{f.element(1), f.element(2)};
  std::vector<FieldElement> el;
  for (std::uint64_t v = 0; v < p; ++v) el.push_back(f.element(v));
  std::uint64_t total = 0, accepted = 0;
  Signature sig;
  for (std::uint64_t a = 0; a < p; ++a)
    for (std::uint64_t b = 0; b < p; ++b)
      for (std::uint64_t c = 0; c < p; ++c)
        for (std::uint64_t d = 0; d < p; ++d)
          for (std::uint64_t e = 0; e < p; ++e) {
            sig.s = {el[a], el[b], el[c], el[d], el[e]};
            for (std::uint64_t r = 0; r < p; ++r) {
              ++total;
              accepted += verify_with_receipt(w, el[r], sig);
            }
          }
  const Rational value = Rational::of(accepted, total);
  // sigma4 != 0 leaves a linear equation in r with exactly one root.
  const Rational expected = Rational::of(p - 1, p * p);
  return finish("core-forgery/exhaustive", f, value, expected, value == expected && value <= Rational::of(1, p));
}

ExactResult dv_transcript_tv(const Prime& f) {
  require_exhaustive(f, 7);
  const std::uint64_t p = small_value(f);
  const sss::Weights w{f.element(1), f.element(2)};
  const FieldElement msg_key = f.element(1), r = f.element(2);
  std::map<Bytes, std::pair<std::uint64_t, std::uint64_t>> counts;
  std::uint64_t honest_total = 0, sim_total = 0;
  for (std::uint64_t al = 1; al < p; ++al)
    for (std::uint64_t be = 1; be < p; ++be)
      for (std::uint64_t b = 1; b < p; ++b)
        for (std::uint64_t d = 1; d < p; ++d)
          for (std::uint64_t ae = 0; ae < p; ++ae)
            for (std::uint64_t ak = 0; ak < p; ++ak) {
              CoreInputs in{msg_key, f.element(ak), f.element(al) * f.element(be), f.element(ae),
                            f.element(b), f.element(d), r};
              ++counts[assemble_signature(w, in).encode()].first;
              ++honest_total;
            }
  for (std::uint64_t ks = 0; ks < p; ++ks)
    for (std::uint64_t ak = 0; ak < p; ++ak)
      for (std::uint64_t ae = 0; ae < p; ++ae)
        for (std::uint64_t d = 1; d < p; ++d)
          for (std::uint64_t eps = 1; eps < p; ++eps)
            for (std::uint64_t b = 1; b < p; ++b) {
              CoreInputs in{f.element(ks), f.element(ak), f.element(eps), f.element(ae), f.element(b), f.element(d), r};
              ++counts[assemble_signature(w, in).encode()].second;
              ++sim_total;
            }
  std::uint64_t l1 = 0;
  for (const auto& [k, c] : counts) {
    const std::uint64_t h = c.first * sim_total, s = c.second * honest_total;
    l1 += h > s ? h - s : s - h;
  }
  const Rational value = Rational::of(l1, 2 * honest_total * sim_total);
  return finish("dv-transcript-tv", f, value, Rational::of(2, p), value <= Rational::of(2, p));
}

// --- suites -------------------------------------------------------------------------

std::vector<Row> run_suite(const Prime& f, std::string_view suite, std::uint64_t trials, const Config& cfg) {
  static const std::vector<std::string_view> names = {"correctness", "unforgeability", "transferability",
                                                      "secrecy", "core", "all"};
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw Error(ErrorCode::Usage, "unknown suite '" + std::string(suite) + "'");
  }
  const bool all = suite == "all";
  if (!f.single_word() && suite != "correctness") {
    throw Error(ErrorCode::PrimeTooLarge, "suite '" + std::string(suite) + "' needs exhaustive enumeration; use a toy profile");
  }
  std::vector<Row> rows;
  auto add = [&](const auto& result) { rows.push_back({result.line(), result.pass}); };
  auto at = [&](std::uint64_t limit, std::uint64_t fallback) -> const Prime& {
    return f.value().limb[0] <= limit ? f : *presets::small(fallback);
  };
  Config no_rush = cfg;
  no_rush.rushing = Rushing::None;

  if (all || suite == "correctness") {
    add(estimate_two_party_correctness(f, trials, cfg));
    add(estimate_correctness(f, trials, cfg));
  }
  if (all || suite == "unforgeability") {
    add(estimate_unforgeability(f, "substitute-guess-k1", trials, cfg));
    add(estimate_unforgeability(f, "substitute-guess-k1", trials, no_rush));
    add(exhaustive_unforgeability(*presets::small(5)));
  }
  if (all || suite == "transferability") {
    add(estimate_transferability(f, "inconsistent-line", trials, cfg));
    add(estimate_transferability(f, "inconsistent-line", trials, no_rush));
    add(estimate_transferability(f, "inconsistent-line-zero", trials, cfg));
    add(exhaustive_transferability(*presets::small(5)));
  }
  if (all || suite == "secrecy") {
    for (std::uint64_t p : {5, 7}) add(secrecy_tv(*presets::small(p), 1, 2));
    add(dv_transcript_tv(*presets::small(5)));
  }
  if (all || suite == "core") {
    add(estimate_core_forgery(f, trials, cfg));
    add(exhaustive_core_forgery(at(13, 13)));
    add(estimate_seen_receipt_forgery(f, std::min<std::uint64_t>(trials, 10000), cfg));
  }
  return rows;
}

}  // namespace silmarils::stats
