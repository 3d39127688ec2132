#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "silmarils/net_sim.hpp"

namespace silmarils::stats {

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for successes/trials.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct Estimate {
  std::string name;
  std::string prime;  // decimal
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double point = 0;
  double wilson_low = 0;
  double wilson_high = 0;
  double target = 0;
  double slack = 0;  // 3 * sqrt(target / trials)
  bool pass = false; // wilson_low <= target + slack

  bool contains_target() const { return wilson_low <= target && target <= wilson_high; }
  /// test=... p=... trials=... successes=... point=... wilson_low=...
  /// wilson_high=... target=... slack=... verdict=pass|fail
  std::string line() const;
};

/// Throws Error(EmptyExperiment) when trials == 0.
Estimate make_estimate(std::string name, const Prime& field, std::uint64_t trials, std::uint64_t successes,
                       double target);

/// Exact value from a full enumeration.
struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational of(std::uint64_t num, std::uint64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

inline bool operator<=(const Rational& a, const Rational& b) {
  return static_cast<unsigned __int128>(a.num) * b.den <= static_cast<unsigned __int128>(b.num) * a.den;
}

struct ExactResult {
  std::string name;
  std::string prime;
  Rational value;
  Rational expected;
  bool pass = false;

  /// test=... p=... exact=a/b expected=c/d verdict=pass|fail
  std::string line() const;
};

struct Config {
  Seed seed{};
  Rushing rushing = Rushing::Weak;
};

/// Per-trial seed derive_seed(root, "trial", i).
Seed trial_seed(const Seed& root, std::uint64_t i);

// --- Monte Carlo estimates (target 1/p) --------------------------------------

/// Honest two-party sign/verify; success = rejection.
Estimate estimate_two_party_correctness(const Prime& field, std::uint64_t trials, const Config& cfg);
/// All-honest three-party sessions; success = z2 != x or z3 != x or the
/// verifier's interpretation rejects.
Estimate estimate_correctness(const Prime& field, std::uint64_t trials, const Config& cfg);
/// Corrupt-P2 strategy; success = z3 outside {x, bottom}. Throws
/// Error(UnknownStrategy) / Error(RoleMismatch).
Estimate estimate_unforgeability(const Prime& field, std::string_view strategy, std::uint64_t trials,
                                 const Config& cfg);
/// Corrupt-P1 strategy; success = z2 != z3 with z2 set.
Estimate estimate_transferability(const Prime& field, std::string_view strategy, std::uint64_t trials,
                                  const Config& cfg);
/// Uniform 5-tuples against a fresh uniform receipt.
Estimate estimate_core_forgery(const Prime& field, std::uint64_t trials, const Config& cfg);
/// The adversary sees r before fixing sigma5; target 1.
Estimate estimate_seen_receipt_forgery(const Prime& field, std::uint64_t trials, const Config& cfg);
/// DV simulator output accepted, counted over trials with sigma4 != 0; target 1.
Estimate estimate_dv_acceptance(const Prime& field, std::uint64_t trials, const Config& cfg);
/// Weakened verifier with r = H(M) against public_r_forge; target 1.
Estimate estimate_public_r_weak(const Prime& field, std::uint64_t trials, const Config& cfg);
/// The real verifier against public_r_forge; passes when the rate is <= 3/p.
Estimate estimate_public_r_real(const Prime& field, std::uint64_t trials, const Config& cfg);

// --- exhaustive computations (p <= 7 unless noted) ----------------------------

/// Every session of substitute-guess-k1 over P1's IC draws, P2's e and the
/// adversary's (D, g). Expected 1/p.
ExactResult exhaustive_unforgeability(const Prime& field);
/// Every session of inconsistent-line over P1's IC draws, P2's e and the
/// adversary's (delta, delta'). Expected 1/p.
ExactResult exhaustive_transferability(const Prime& field);
/// Total variation between P3's signing-phase views for two values x_a and
/// x_b, enumerating (k1, k2, x', k2', e). Expected 0.
ExactResult secrecy_tv(const Prime& field, std::uint64_t x_a, std::uint64_t x_b);
/// All 5-tuples and receipts at fixed weights; expected (p-1)/p^2 (one root in
/// r for each tuple with sigma4 != 0). Allowed up to p = 13.
ExactResult exhaustive_core_forgery(const Prime& field);
/// TV between honest and simulated signatures for fixed K' != r; passes at
/// <= 2/p. Expected value 1/p.
ExactResult dv_transcript_tv(const Prime& field);

/// Throws Error(PrimeTooLarge) if p exceeds limit.
void require_exhaustive(const Prime& field, std::uint64_t limit);

// --- suites ---------------------------------------------------------------------

struct Row {
  std::string line;
  bool pass;
};

/// suite in {correctness, unforgeability, transferability, secrecy, core, all}.
/// Exhaustive parts run at the profile prime when it is small enough and at
/// p in {5, 7} otherwise; the secure profile refuses them with PrimeTooLarge.
std::vector<Row> run_suite(const Prime& field, std::string_view suite, std::uint64_t trials, const Config& cfg);

}  // namespace silmarils::stats
