#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vcomp/item_set.hpp"
#include "vcomp/value_fn.hpp"

namespace vcomp {

/// One bundle per agent; the bundles partition the item universe.
struct Allocation {
  std::vector<ItemSet> bundles;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct Outcome {
  Allocation allocation;
  std::vector<Money> payments;
  std::vector<Rational> utilities;  // v_i(X_i) - p_i, may be negative for arbitrary bids
  Money welfare;                    // sum of true values
  Money bid_welfare;                // sum of bids on the allocated bundles
};

enum class WdRoute {
  Auto,        // additive fast path, small exhaustive, OXS matching, then guarded exhaustive
  Exhaustive,  // enumeration of all n^m assignments (residuals by subset DP)
  Additive,    // per-item highest bid; requires all bids additive
  Matching,    // slot/item maximum-weight matching; requires all bids OXS
};

struct VcgOptions {
  WdRoute route = WdRoute::Auto;
  /// Upper bound on enumerated assignments (n^m) and on subset-DP work ((n-1) * 3^m).
  std::uint64_t allocation_budget = 10'000'000;
  /// Auto uses plain enumeration below this many assignments even when a fast path applies.
  std::uint64_t small_enumeration = 4096;
  /// Agent preference among tied welfare-maximizing allocations; empty means 0, 1, ..., n-1.
  /// The lexicographically smallest assignment vector (owner of item 0, item 1, ...) under
  /// this ranking is chosen.
  std::vector<std::size_t> tie_order;
};

using BidView = std::span<const CompiledFn* const>;

/// Welfare-maximizing partition of all items for the given bids.
Allocation winner_determination(BidView bids, const VcgOptions& options = {});

inline constexpr std::size_t kNoAgent = static_cast<std::size_t>(-1);

/// b_{-i}(S): best welfare of the bids other than `excluded` on the items S (kNoAgent keeps everyone).
Money residual_value(BidView bids, std::size_t excluded, ItemSet s, const VcgOptions& options = {});

/// max over partitions of M of sum_i f_i(X_i).
Money max_welfare(BidView fns, const VcgOptions& options = {});

/// Allocation plus p_i = b_{-i}(M) - b_{-i}(M \ X_i) and utilities under `valuations`.
Outcome vcg_outcome(BidView bids, BidView valuations, const VcgOptions& options = {});

/// Per-item VCG prices for additive bids: p_i(S) = sum_{j in S} max_{k != i} b_k(j).
Money additive_price(BidView bids, std::size_t agent, ItemSet s);

/// VCG payment of `agent` for bundle `s` against the other bids (does not depend on agent's own bid).
Money vcg_price(BidView bids, std::size_t agent, ItemSet s, const VcgOptions& options = {});

/// Convenience overloads that compile the value functions first.
Allocation winner_determination(std::span<const ValueFn> bids, const VcgOptions& options = {});
Money residual_value(std::span<const ValueFn> bids, std::size_t excluded, ItemSet s, const VcgOptions& options = {});
Outcome vcg_outcome(std::span<const ValueFn> bids, std::span<const ValueFn> valuations, const VcgOptions& options = {});

/// Pointers into a vector of compiled functions, for the BidView overloads.
std::vector<const CompiledFn*> view_of(const std::vector<CompiledFn>& fns);

}  // namespace vcomp
