#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vcomp/lp.hpp"
#include "vcomp/vcg.hpp"

namespace vcomp {

using Profile = std::vector<std::size_t>;  // one menu index per agent

struct GameOptions {
  VcgOptions vcg;
  /// Largest menu product that may be tabulated.
  std::uint64_t max_profiles = 2'000'000;
  /// Worker threads for tabulation; results do not depend on it.
  unsigned jobs = 1;
};

/// Valuations plus a finite menu of conservative bids per agent.
///
/// Construction checks b(S) <= v(S) for every menu bid and bundle and throws
/// ValidationError naming the agent, menu entry and bundle otherwise.
class Game {
public:
  Game(std::vector<ValueFn> valuations, std::vector<std::vector<ValueFn>> menus, GameOptions options = {});

  [[nodiscard]] std::size_t num_agents() const { return valuations_.size(); }
  [[nodiscard]] unsigned num_items() const { return valuations_.front().num_items(); }
  [[nodiscard]] std::size_t menu_size(std::size_t i) const { return menus_[i].size(); }
  /// Product of menu sizes, saturated at UINT64_MAX.
  [[nodiscard]] std::uint64_t num_profiles() const;
  [[nodiscard]] const GameOptions& options() const { return options_; }

  [[nodiscard]] const CompiledFn& valuation(std::size_t i) const { return valuations_[i]; }
  [[nodiscard]] const CompiledFn& bid(std::size_t i, std::size_t k) const { return menus_[i][k]; }
  [[nodiscard]] std::vector<const CompiledFn*> valuation_view() const { return view_of(valuations_); }

  /// Mixed-radix index; agent 0 is the most significant digit.
  [[nodiscard]] std::uint64_t encode(const Profile& p) const;
  [[nodiscard]] Profile decode(std::uint64_t index) const;

  [[nodiscard]] Outcome outcome(const Profile& p) const;
  [[nodiscard]] Money optimal_welfare() const;

private:
  std::vector<CompiledFn> valuations_;
  std::vector<std::vector<CompiledFn>> menus_;
  GameOptions options_;
};

/// Utilities and welfare of every profile in the menu product.
class GameTable {
public:
  explicit GameTable(const Game& game);

  [[nodiscard]] const Game& game() const { return *game_; }
  [[nodiscard]] std::uint64_t size() const { return welfare_.size(); }
  [[nodiscard]] const Rational& utility(std::size_t agent, std::uint64_t profile) const {
    return utility_[profile * n_ + agent];
  }
  [[nodiscard]] const Money& welfare(std::uint64_t profile) const { return welfare_[profile]; }
  /// Profile index with agent i's coordinate replaced by k.
  [[nodiscard]] std::uint64_t with_bid(std::uint64_t profile, std::size_t agent, std::size_t k) const;
  [[nodiscard]] std::size_t coordinate(std::uint64_t profile, std::size_t agent) const;

private:
  const Game* game_;
  std::size_t n_;
  std::vector<std::uint64_t> stride_;
  std::vector<Rational> utility_;
  std::vector<Money> welfare_;
};

struct PneCheck {
  bool is_pne = true;
  /// Per agent: the most profitable deviation (first in menu order) and its gain, when positive.
  std::vector<std::optional<std::size_t>> best_deviation;
  std::vector<Rational> gain;
};

/// Evaluates all unilateral menu deviations directly (no tabulation), so it
/// also works for games whose full menu product is too large.
PneCheck is_pne(const Game& game, const Profile& profile);
PneCheck is_pne(const GameTable& table, std::uint64_t profile);

/// All menu-restricted PNE in increasing profile-index order.
std::vector<std::uint64_t> enumerate_pne(const GameTable& table);

struct JointDistribution {
  std::vector<std::uint64_t> support;  // profile indices, increasing
  std::vector<BigRational> probs;
};

/// Largest expected gain of any agent from any fixed menu deviation.
BigRational cce_violation(const GameTable& table, const JointDistribution& d);
BigRational expected_welfare(const GameTable& table, const JointDistribution& d);

struct PoaReport {
  Money opt_welfare;
  /// Worst equilibrium welfare; empty when the equilibrium set is empty.
  std::optional<BigRational> worst_welfare;
  /// opt / worst; empty when there is no equilibrium or the worst welfare is 0.
  std::optional<BigRational> ratio;
  std::optional<std::uint64_t> witness_profile;
  std::optional<JointDistribution> witness_distribution;
  std::size_t equilibrium_count = 0;  // PNE only
  lp::Certificate certificate;        // CCE only
};

PoaReport poa_pne(const GameTable& table);

/// min sum_b x(b) SW(b) over CCE x of the menu game, by exact LP.
/// When `problem_out` is given the LP is copied there (for plain-text export).
PoaReport cce_worst_welfare(const GameTable& table, lp::Problem* problem_out = nullptr);

/// Additive bids with per-item values in {0, delta, 2 delta, ...} up to v({j}),
/// kept only when conservative on every bundle; odometer order with item 0 most significant.
std::vector<ValueFn> additive_grid_menu(const ValueFn& valuation, const Rational& delta, std::size_t cap = 100'000);

/// Appends bids not already present (structural equality), preserving order.
void append_unique(std::vector<ValueFn>& menu, const std::vector<ValueFn>& extra);

}  // namespace vcomp
