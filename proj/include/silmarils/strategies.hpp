#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "silmarils/net_sim.hpp"

namespace silmarils {

struct StrategyInfo {
  std::string_view name;
  std::optional<Role> role;   // nullopt: nobody is corrupted
  std::string_view bound;     // analytic success bound, "1/p" or "0"
  std::string_view summary;
};

/// none, substitute-guess-k1, inconsistent-line, inconsistent-line-zero,
/// silent-verifier, false-reject.
const std::vector<StrategyInfo>& strategies();

/// Throws Error(UnknownStrategy).
const StrategyInfo& strategy_info(std::string_view name);
std::unique_ptr<Adversary> make_strategy(std::string_view name);
/// Additionally throws Error(RoleMismatch) unless the strategy corrupts
/// the expected role.
std::unique_ptr<Adversary> make_strategy(std::string_view name, Role expected);

/// Corrupt P2: plays the signing phase honestly, then transfers
/// (x + D, sigma + g D) for a uniform nonzero D and a uniform guess g of k1.
class SubstituteGuessK1 final : public Adversary {
 public:
  std::optional<Role> corrupted() const override { return Role::P2; }
  std::vector<Envelope> rewrite(int round, std::vector<Envelope> outgoing, const View& view,
                                RandomSource& rng) override;
};

/// Corrupt P1: hands P2 sigma + delta and sigma' + delta' (delta nonzero,
/// delta' uniform) while P3 gets honest keys, declares "accept" in round 3
/// and otherwise follows the protocol. With zero_offsets both offsets are 0.
class InconsistentLine final : public Adversary {
 public:
  explicit InconsistentLine(bool zero_offsets = false) : zero_(zero_offsets) {}
  std::optional<Role> corrupted() const override { return Role::P1; }
  std::vector<Envelope> rewrite(int round, std::vector<Envelope> outgoing, const View& view,
                                RandomSource& rng) override;

 private:
  bool zero_;
};

/// Corrupt P3 that stays silent in round 4.
class SilentVerifier final : public Adversary {
 public:
  std::optional<Role> corrupted() const override { return Role::P3; }
  std::vector<Envelope> rewrite(int round, std::vector<Envelope> outgoing, const View& view,
                                RandomSource& rng) override;
};

/// Corrupt P3 that always declares "reject" in round 4.
class FalseReject final : public Adversary {
 public:
  std::optional<Role> corrupted() const override { return Role::P3; }
  std::vector<Envelope> rewrite(int round, std::vector<Envelope> outgoing, const View& view,
                                RandomSource& rng) override;
};

}  // namespace silmarils
