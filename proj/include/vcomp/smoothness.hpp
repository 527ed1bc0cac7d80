#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vcomp/equilibria.hpp"

namespace vcomp {

/// Per-item prices p(j) = max_{k != i} b_k(j) for additive opponent bids.
using PriceVector = std::vector<Money>;

PriceVector item_prices(BidView bids, std::size_t agent);

/// Inclusion-maximal T subset of Q with v(T) <= p(T). Among the maximal sets the
/// largest is taken, then the lexicographically smallest item list.
ItemSet maximal_tight_set(const ValueFn& v, ItemSet q, const PriceVector& p);

/// q(j) = p(j) on Q \ T and 0 elsewhere. Throws InternalError when q is not
/// conservative for v on the subsets of Q \ T (T was not maximal).
PriceVector truncated_prices(const ValueFn& v, const PriceVector& p, ItemSet q, ItemSet t);

/// Utility of an additive bid facing item prices, winning every item whose bid
/// reaches the price (ties resolved for the bidder).
Rational additive_utility(const CompiledFn& v, const PriceVector& bid, const PriceVector& prices);

struct CfOsDeviation {
  ValueFn bid;
  BigRational expected_utility;  // E_p[u(bid, p)] over the weighted samples
  BigRational bound;             // v(Q)/2 - E_p[p(Q)]
  bool holds = false;
};

/// Truncated-price deviation against a finite price distribution: the support
/// element of the truncated-price distribution with the largest exact expected utility.
CfOsDeviation deviation_cf_os(const ValueFn& v, ItemSet q, const std::vector<PriceVector>& samples,
                              const std::vector<BigRational>& weights);

struct InequalityCheck {
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

/// sum_i p_i(Q_i, b_-i) <= sum_i b_i(X_i(b)) for additive bids.
InequalityCheck check_price_sum_additive(BidView bids, const Allocation& q, const VcgOptions& options = {});

/// supporting_additive(v, Q).
ValueFn deviation_xos(const ValueFn& v, ItemSet q);

/// sum_i [p_i(Q_i, b_-i) - p_i(X_i, b_-i)] <= sum_i b_i(X_i).
InequalityCheck check_price_shift(BidView bids, const Allocation& q, const VcgOptions& options = {});

/// Utility of `agent` when it switches to `bid` against the others in `bids`.
Rational deviation_utility(BidView bids, BidView valuations, std::size_t agent, const CompiledFn& bid,
                           const VcgOptions& options);

/// Tie order that ranks `agent` first and keeps the others in index order.
std::vector<std::size_t> deviator_first(std::size_t n, std::size_t agent);

enum class Builder { CfOs, Xos };
std::optional<Builder> parse_builder(const std::string& name);
std::string builder_name(Builder b);

struct SmoothnessReport {
  Builder builder = Builder::CfOs;
  Rational lambda, mu1, mu2;
  Allocation target;                  // the optimal allocation Q
  Money opt;
  std::vector<ValueFn> deviations;    // a_i
  std::vector<BigRational> deviation_utility;  // E_{b_-i}[u_i(a_i, b_-i)]
  BigRational expected_payments;      // sum_i E_b[p_i(X_i(b), b_-i)]
  BigRational expected_bids;          // sum_i E_b[b_i(X_i(b))]
  BigRational lhs;
  BigRational rhs;
  bool pass = false;
  /// cf_os deviations are evaluated with the deviator winning ties; xos deviations under the game's rule.
  bool deviator_wins_ties = false;
};

/// Relaxed smoothness inequality for the given distribution over menu profiles.
/// cf_os requires additive menu bids for every agent.
SmoothnessReport certify_relaxed_smooth(const Game& game, const JointDistribution& d, const Rational& lambda,
                                        const Rational& mu1, const Rational& mu2, Builder builder);

/// Additive b' with b'(X) = b(X), b' <= b on subsets of X, zero outside X.
/// Throws ValidationError when b is not XOS on X (no exact support).
ValueFn project_to_additive(const ValueFn& b, ItemSet x);

struct ReplayCheck {
  bool same_bundle = false;
  bool same_payment = false;
};

/// Replaces agent i's bid with project_to_additive(b_i, X_i) and reruns VCG.
ReplayCheck replay_projection(BidView bids, std::size_t agent, const VcgOptions& options = {});

/// Truncated-price deviations for every agent against the opponents' bids in each
/// menu profile, for menus that are all additive. Used to close menus before play.
std::vector<std::vector<ValueFn>> cf_os_deviation_bids(const Game& game);

}  // namespace vcomp
