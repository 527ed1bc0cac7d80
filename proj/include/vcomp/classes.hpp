#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vcomp/item_set.hpp"
#include "vcomp/value_fn.hpp"

namespace vcomp {

struct ClassReport {
  bool is_subadditive = true;
  /// Smallest beta for which the function is beta-fractionally subadditive;
  /// nullopt means infinite (some bundle has positive value but no additive support).
  std::optional<Rational> xos_factor_beta;
  /// Bundle attaining beta.
  ItemSet beta_bundle;
  /// A disjoint pair (S, T) with v(S u T) > v(S) + v(T), when not subadditive.
  std::optional<std::pair<ItemSet, ItemSet>> witness;
};

/// Subadditivity over all disjoint pairs and the exact beta = max_T v(T) / LP*(T),
/// where LP*(T) = max sum_{j in T} a(j) s.t. sum_{j in S} a(j) <= v(S) for S subset of T, a >= 0.
/// Requires a TABLE (any representation is materialized first).
ClassReport check_class(const ValueFn& v);

/// Additive a with a(S) <= v(S) on subsets of T, a(T) >= v(T)/beta, zero outside T.
/// XOS clause form: the maximizing clause on T. Other forms: the LP optimum for T.
ValueFn supporting_additive(const ValueFn& v, ItemSet t);

/// max_{S subset X, |S| = |X|-1} b(S) >= (|X|-1)/|X| * b(X).
bool check_topdrop(const ValueFn& b, ItemSet x);

}  // namespace vcomp
