#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "vcomp/item_set.hpp"
#include "vcomp/rational.hpp"

namespace vcomp {

/// Position of a node in a parsed instance file (1-based; 0 means synthesized).
struct SourceLoc {
  unsigned line = 0;
  unsigned column = 0;
};

enum class Repr { Table, Additive, Xs, Or, Xor, XosClauses };

/// Step budget for exhaustive evaluation of OR nodes.
struct EvalBudget {
  std::uint64_t max_steps = 10'000'000;
};

/// Largest universe for which dense 2^m tables are materialized.
inline constexpr unsigned kMaxTableItems = 20;

/// A set function over the items {0..m-1}, usable both as a valuation and as a bid.
///
/// Values are immutable and cheap to copy (shared, structurally compared).
/// Every constructor validates normalization and monotonicity; tree forms with
/// nonnegative weights satisfy both by construction, so only TABLE inputs can
/// be rejected.
class ValueFn {
public:
  /// Dense table indexed by ItemSet::bits(); must have 2^m entries with value(empty) = 0.
  static ValueFn table(unsigned num_items, std::vector<Money> values);
  static ValueFn additive(std::vector<Money> per_item);
  static ValueFn xs(unsigned num_items, ItemIndex item, Money weight);
  static ValueFn or_of(std::vector<ValueFn> children);
  /// An XOR whose children are all ADDITIVE is stored as XOS_CLAUSES.
  static ValueFn xor_of(std::vector<ValueFn> children);
  /// Max over additive clauses; each clause has one weight per item.
  static ValueFn xos_clauses(unsigned num_items, std::vector<std::vector<Money>> clauses);
  static ValueFn zero(unsigned num_items) { return additive(std::vector<Money>(num_items)); }

  [[nodiscard]] Repr repr() const;
  [[nodiscard]] unsigned num_items() const;
  [[nodiscard]] SourceLoc location() const;
  [[nodiscard]] ValueFn with_location(SourceLoc loc) const;

  [[nodiscard]] std::span<const Money> table_values() const;        // Table
  [[nodiscard]] std::span<const Money> additive_weights() const;    // Additive
  [[nodiscard]] ItemIndex xs_item() const;                          // Xs
  [[nodiscard]] const Money& xs_weight() const;                     // Xs
  [[nodiscard]] std::span<const ValueFn> children() const;          // Or, Xor
  [[nodiscard]] const std::vector<std::vector<Money>>& clauses() const;  // XosClauses

  /// Structural equality; source locations are ignored.
  friend bool operator==(const ValueFn& a, const ValueFn& b);

private:
  struct Node;
  explicit ValueFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// One unit-demand slot of an OXS function: the XOR of XS terms it is built from.
struct OxsSlot {
  std::vector<std::pair<ItemIndex, Money>> weights;  // at most one entry per item
};

/// Exact value v(S).
///
/// OR nodes whose children are all XS / XOR-of-XS / additive are evaluated by
/// maximum-weight matching; other OR nodes by exhaustive partition of S among
/// the children, bounded by `budget` (SizeGuardError when exceeded).
Money value(const ValueFn& v, ItemSet s, const EvalBudget& budget = {});

/// Dense table of all 2^m values (subset-convolution for OR nodes).
std::vector<Money> to_table(const ValueFn& v, const EvalBudget& budget = {});

/// Canonical TABLE form of any representation.
ValueFn as_table(const ValueFn& v, const EvalBudget& budget = {});

/// Unit-demand slots when v is syntactically OXS (OR of XOR of XS, additive, XS).
std::optional<std::vector<OxsSlot>> oxs_slots(const ValueFn& v);

/// Per-item weights when v is additive (ADD, XS, OR of XS/ADD, single-clause XOS).
std::optional<std::vector<Money>> additive_form(const ValueFn& v);

/// True when v is XOS by syntax (XOS_CLAUSES, or anything additive / OXS).
bool is_xos_syntax(const ValueFn& v);

/// Checks normalization and monotonicity of a dense table; throws ValidationError naming the offending pair.
void validate_table(unsigned num_items, std::span<const Money> values);

/// True iff b(S) <= v(S) for every bundle S.
bool is_conservative(std::span<const Money> bid_table, std::span<const Money> value_table);

/// A value function together with its precomputed evaluation structures.
///
/// Game computations evaluate the same bids millions of times; this caches the
/// dense table (when m is small enough) and the additive / OXS forms used by
/// the fast winner-determination paths.
class CompiledFn {
public:
  explicit CompiledFn(ValueFn fn, const EvalBudget& budget = {});

  [[nodiscard]] const ValueFn& fn() const { return fn_; }
  [[nodiscard]] unsigned num_items() const { return fn_.num_items(); }
  [[nodiscard]] bool has_table() const { return !table_.empty(); }
  [[nodiscard]] std::span<const Money> table() const { return table_; }
  [[nodiscard]] const std::optional<std::vector<Money>>& additive() const { return additive_; }
  [[nodiscard]] const std::optional<std::vector<OxsSlot>>& slots() const { return slots_; }

  [[nodiscard]] Money value(ItemSet s) const;

private:
  ValueFn fn_;
  std::vector<Money> table_;
  std::optional<std::vector<Money>> additive_;
  std::optional<std::vector<OxsSlot>> slots_;
};

}  // namespace vcomp
