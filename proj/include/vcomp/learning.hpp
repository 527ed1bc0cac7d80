#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vcomp/equilibria.hpp"

namespace vcomp {

struct HedgeConfig {
  std::uint64_t rounds = 10'000;
  std::uint64_t seed = 42;
  /// Learning rate on payoffs normalized by v_i(M); default sqrt(8 ln K / T) per agent.
  std::optional<double> rate;
};

struct RegretTrace {
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
  std::vector<double> rates;                 // per agent
  std::vector<std::uint64_t> profiles;       // per round
  std::vector<Money> welfare;                // per round
  std::vector<Rational> realized;            // per agent: sum_t u_i(b^t)
  std::vector<Rational> best_fixed;          // per agent: max_k sum_t u_i(k, b^t_-i)
  std::vector<std::size_t> best_fixed_bid;   // per agent
  /// regret_i after each round, row-major [round][agent].
  std::vector<Rational> regret_prefix;

  [[nodiscard]] Rational regret(std::size_t agent) const { return best_fixed[agent] - realized[agent]; }
  [[nodiscard]] BigRational average_welfare() const;
};

/// Full-information multiplicative weights for every agent over its menu.
/// Sampling uses SplitMix64 seeded with config.seed; regret is tracked exactly.
RegretTrace run_hedge(const GameTable& table, const HedgeConfig& config);

/// High-probability bound on one agent's average external regret for the rate
/// used: (ln K / (eta T) + eta / 8 + sqrt(2 ln(1/delta) / T)) * v_i(M), the
/// Hedge guarantee plus an Azuma term for sampling, at confidence 1 - delta.
double hedge_regret_bound(std::size_t menu_size, std::uint64_t rounds, double rate, double scale, double delta = 1e-6);

struct EmpiricalCce {
  JointDistribution distribution;
  BigRational violation;  // max_i,k E[u_i(k, b_-i) - u_i(b)]
};

EmpiricalCce empirical_distribution(const GameTable& table, const RegretTrace& trace);

struct Theorem3Check {
  BigRational average_welfare;
  BigRational average_regret_sum;  // R = sum_i regret_i / T
  BigRational bound;               // lambda / (max(mu1, 1) + mu2) * OPT - R
  BigRational slack;               // average_welfare - bound
  bool holds = false;
};

Theorem3Check check_theorem3(const RegretTrace& trace, const Money& opt, const Rational& lambda, const Rational& mu1,
                             const Rational& mu2);

/// round,profile,welfare,regret_<agent>... with decimals; profile as menu indices joined by '-'.
void write_trace_csv(std::ostream& os, const GameTable& table, const RegretTrace& trace);

}  // namespace vcomp
