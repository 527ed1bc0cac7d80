#include "vcomp/value_fn.hpp"

#include <algorithm>
#include <string>

#include "vcomp/errors.hpp"
#include "vcomp/matching.hpp"

namespace vcomp {

struct ValueFn::Node {
  Repr repr;
  unsigned num_items;
  SourceLoc loc;
  std::vector<Money> values;  // Table (2^m) or Additive (m)
  ItemIndex item = 0;
  Money weight;
  std::vector<ValueFn> children;
  std::vector<std::vector<Money>> clauses;
};

namespace {

std::string set_name(ItemSet s) {
  std::string out = "{";
  bool first = true;
  for (auto j : s.items()) {
    if (!first) out += ",";
    out += std::to_string(j);
    first = false;
  }
  return out + "}";
}

void require_nonnegative(const Money& m, const char* what) {
  if (m.is_negative()) throw ValidationError(std::string(what) + " must be nonnegative");
}

void require_same_universe(const std::vector<ValueFn>& children) {
  if (children.empty()) throw ValidationError("OR/XOR needs at least one child");
  for (const auto& c : children) {
    if (c.num_items() != children.front().num_items()) throw ValidationError("OR/XOR children over different item universes");
  }
}

}  // namespace

ValueFn ValueFn::table(unsigned num_items, std::vector<Money> values) {
  if (num_items > kMaxTableItems) throw SizeGuardError("TABLE over more than " + std::to_string(kMaxTableItems) + " items");
  if (values.size() != (std::size_t{1} << num_items)) throw ValidationError("TABLE must have 2^m entries");
  validate_table(num_items, values);
  auto node = std::make_shared<Node>();
  node->repr = Repr::Table;
  node->num_items = num_items;
  node->values = std::move(values);
  return ValueFn{std::move(node)};
}

ValueFn ValueFn::additive(std::vector<Money> per_item) {
  if (per_item.size() > ItemSet::kMaxItems) throw SizeGuardError("too many items");
  for (const auto& w : per_item) require_nonnegative(w, "additive weight");
  auto node = std::make_shared<Node>();
  node->repr = Repr::Additive;
  node->num_items = static_cast<unsigned>(per_item.size());
  node->values = std::move(per_item);
  return ValueFn{std::move(node)};
}

ValueFn ValueFn::xs(unsigned num_items, ItemIndex item, Money weight) {
  if (item >= num_items) throw ValidationError("XS item outside universe");
  require_nonnegative(weight, "XS weight");
  auto node = std::make_shared<Node>();
  node->repr = Repr::Xs;
  node->num_items = num_items;
  node->item = item;
  node->weight = weight;
  return ValueFn{std::move(node)};
}

ValueFn ValueFn::or_of(std::vector<ValueFn> children) {
  require_same_universe(children);
  auto node = std::make_shared<Node>();
  node->repr = Repr::Or;
  node->num_items = children.front().num_items();
  node->children = std::move(children);
  return ValueFn{std::move(node)};
}

ValueFn ValueFn::xor_of(std::vector<ValueFn> children) {
  require_same_universe(children);
  if (std::all_of(children.begin(), children.end(), [](const ValueFn& c) { return c.repr() == Repr::Additive; })) {
    std::vector<std::vector<Money>> clauses;
    for (const auto& c : children) clauses.emplace_back(c.additive_weights().begin(), c.additive_weights().end());
    return xos_clauses(children.front().num_items(), std::move(clauses));
  }
  auto node = std::make_shared<Node>();
  node->repr = Repr::Xor;
  node->num_items = children.front().num_items();
  node->children = std::move(children);
  return ValueFn{std::move(node)};
}

ValueFn ValueFn::xos_clauses(unsigned num_items, std::vector<std::vector<Money>> clauses) {
  if (clauses.empty()) throw ValidationError("XOS needs at least one clause");
  for (const auto& c : clauses) {
    if (c.size() != num_items) throw ValidationError("XOS clause size differs from item count");
    for (const auto& w : c) require_nonnegative(w, "XOS clause weight");
  }
  auto node = std::make_shared<Node>();
  node->repr = Repr::XosClauses;
  node->num_items = num_items;
  node->clauses = std::move(clauses);
  return ValueFn{std::move(node)};
}

Repr ValueFn::repr() const { return node_->repr; }
unsigned ValueFn::num_items() const { return node_->num_items; }
SourceLoc ValueFn::location() const { return node_->loc; }

ValueFn ValueFn::with_location(SourceLoc loc) const {
  auto node = std::make_shared<Node>(*node_);
  node->loc = loc;
  return ValueFn{std::move(node)};
}

std::span<const Money> ValueFn::table_values() const { return node_->values; }
std::span<const Money> ValueFn::additive_weights() const { return node_->values; }
ItemIndex ValueFn::xs_item() const { return node_->item; }
const Money& ValueFn::xs_weight() const { return node_->weight; }
std::span<const ValueFn> ValueFn::children() const { return node_->children; }
const std::vector<std::vector<Money>>& ValueFn::clauses() const { return node_->clauses; }

bool operator==(const ValueFn& a, const ValueFn& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.repr == y.repr && x.num_items == y.num_items && x.values == y.values && x.item == y.item &&
         x.weight == y.weight && x.children == y.children && x.clauses == y.clauses;
}

void validate_table(unsigned num_items, std::span<const Money> values) {
  if (!values[0].is_zero()) throw ValidationError("TABLE violates normalization: value of {} must be 0");
  const std::uint64_t size = std::uint64_t{1} << num_items;
  for (std::uint64_t bits = 1; bits < size; ++bits) {
    if (values[bits].is_negative()) throw ValidationError("TABLE value of " + set_name(ItemSet{bits}) + " is negative");
    for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
      std::uint64_t sub = bits & ~(rest & -rest);
      if (values[sub] > values[bits]) {
        throw ValidationError("TABLE is not monotone: v(" + set_name(ItemSet{sub}) + ") > v(" + set_name(ItemSet{bits}) +
                              ")");
      }
    }
  }
}

bool is_conservative(std::span<const Money> bid_table, std::span<const Money> value_table) {
  for (std::size_t k = 0; k < bid_table.size(); ++k) {
    if (bid_table[k] > value_table[k]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Structural forms

std::optional<std::vector<Money>> additive_form(const ValueFn& v) {
  const unsigned m = v.num_items();
  switch (v.repr()) {
    case Repr::Additive:
      return std::vector<Money>(v.additive_weights().begin(), v.additive_weights().end());
    case Repr::Xs: {
      std::vector<Money> w(m);
      w[v.xs_item()] = v.xs_weight();
      return w;
    }
    case Repr::XosClauses:
      if (v.clauses().size() == 1) return v.clauses().front();
      return std::nullopt;
    case Repr::Or: {
      // OR of additive functions over pairwise disjoint supports is additive.
      std::vector<Money> w(m);
      std::vector<bool> used(m, false);
      for (const auto& c : v.children()) {
        auto cw = additive_form(c);
        if (!cw) return std::nullopt;
        for (unsigned j = 0; j < m; ++j) {
          if ((*cw)[j].is_zero()) continue;
          if (used[j]) return std::nullopt;
          used[j] = true;
          w[j] = (*cw)[j];
        }
      }
      return w;
    }
    case Repr::Xor:
      if (v.children().size() == 1) return additive_form(v.children().front());
      return std::nullopt;
    case Repr::Table:
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

/// XOR of XS terms (possibly nested) as a single unit-demand slot.
std::optional<OxsSlot> unit_demand_slot(const ValueFn& v) {
  OxsSlot slot;
  auto merge = [&slot](ItemIndex j, const Money& w) {
    for (auto& [item, weight] : slot.weights) {
      if (item == j) {
        weight = max(weight, w);
        return;
      }
    }
    slot.weights.emplace_back(j, w);
  };
  if (v.repr() == Repr::Xs) {
    merge(v.xs_item(), v.xs_weight());
    return slot;
  }
  if (v.repr() != Repr::Xor) return std::nullopt;
  for (const auto& c : v.children()) {
    auto inner = unit_demand_slot(c);
    if (!inner) return std::nullopt;
    for (const auto& [j, w] : inner->weights) merge(j, w);
  }
  return slot;
}

void append_additive_slots(const std::vector<Money>& w, std::vector<OxsSlot>& out) {
  for (ItemIndex j = 0; j < w.size(); ++j) {
    if (!w[j].is_zero()) out.push_back(OxsSlot{{{j, w[j]}}});
  }
}

}  // namespace

std::optional<std::vector<OxsSlot>> oxs_slots(const ValueFn& v) {
  std::vector<OxsSlot> out;
  if (auto w = additive_form(v)) {
    append_additive_slots(*w, out);
    return out;
  }
  if (auto slot = unit_demand_slot(v)) {
    out.push_back(std::move(*slot));
    return out;
  }
  if (v.repr() == Repr::Or) {
    for (const auto& c : v.children()) {
      auto inner = oxs_slots(c);
      if (!inner) return std::nullopt;
      out.insert(out.end(), inner->begin(), inner->end());
    }
    return out;
  }
  return std::nullopt;
}

bool is_xos_syntax(const ValueFn& v) {
  if (v.repr() == Repr::XosClauses) return true;
  if (oxs_slots(v)) return true;
  if (v.repr() == Repr::Xor) {
    return std::all_of(v.children().begin(), v.children().end(), [](const ValueFn& c) { return is_xos_syntax(c); });
  }
  return false;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Money oxs_value(const std::vector<OxsSlot>& slots, ItemSet s) {
  std::vector<MatchingEdge> edges;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    for (const auto& [j, w] : slots[k].weights) {
      if (s.contains(j)) edges.push_back({k, j, w});
    }
  }
  unsigned right = 0;
  for (const auto& e : edges) right = std::max<unsigned>(right, static_cast<unsigned>(e.right) + 1);
  return max_weight_matching(slots.size(), right, edges).weight;
}

class Evaluator {
public:
  explicit Evaluator(const EvalBudget& budget) : budget_(budget) {}

  Money eval(const ValueFn& v, ItemSet s) {
    charge(1);
    switch (v.repr()) {
      case Repr::Table:
        return v.table_values()[s.bits()];
      case Repr::Additive: {
        Money total;
        for (auto j : s.items()) total += v.additive_weights()[j];
        return total;
      }
      case Repr::Xs:
        return s.contains(v.xs_item()) ? v.xs_weight() : Money{};
      case Repr::XosClauses: {
        Money best;
        for (const auto& clause : v.clauses()) {
          Money total;
          for (auto j : s.items()) total += clause[j];
          best = max(best, total);
        }
        return best;
      }
      case Repr::Xor: {
        Money best;
        for (const auto& c : v.children()) best = max(best, eval(c, s));
        return best;
      }
      case Repr::Or: {
        if (auto slots = oxs_slots(v)) return oxs_value(*slots, s);
        return eval_or(v.children(), 0, s);
      }
    }
    return Money{};
  }

private:
  Money eval_or(std::span<const ValueFn> children, std::size_t k, ItemSet s) {
    if (k + 1 == children.size()) return eval(children[k], s);
    Money best;
    s.for_each_subset([&](ItemSet t) { best = max(best, eval(children[k], t) + eval_or(children, k + 1, s - t)); });
    return best;
  }

  void charge(std::uint64_t n) {
    steps_ += n;
    if (steps_ > budget_.max_steps) throw SizeGuardError("exhaustive OR evaluation exceeds the step budget");
  }

  const EvalBudget& budget_;
  std::uint64_t steps_ = 0;
};

}  // namespace

Money value(const ValueFn& v, ItemSet s, const EvalBudget& budget) {
  if (!s.subset_of(ItemSet::full(v.num_items()))) throw ValidationError("bundle outside the item universe");
  return Evaluator{budget}.eval(v, s);
}

std::vector<Money> to_table(const ValueFn& v, const EvalBudget& budget) {
  const unsigned m = v.num_items();
  if (m > kMaxTableItems) throw SizeGuardError("table materialization over more than 20 items");
  const std::uint64_t size = std::uint64_t{1} << m;
  std::vector<Money> out(size);
  switch (v.repr()) {
    case Repr::Table:
      return {v.table_values().begin(), v.table_values().end()};
    case Repr::Additive:
    case Repr::Xs: {
      auto w = *additive_form(v);
      for (std::uint64_t bits = 1; bits < size; ++bits) {
        auto low = static_cast<ItemIndex>(std::countr_zero(bits));
        out[bits] = out[bits & (bits - 1)] + w[low];
      }
      return out;
    }
    case Repr::XosClauses: {
      for (const auto& clause : v.clauses()) {
        std::vector<Money> t(size);
        for (std::uint64_t bits = 1; bits < size; ++bits) {
          t[bits] = t[bits & (bits - 1)] + clause[static_cast<std::size_t>(std::countr_zero(bits))];
          out[bits] = max(out[bits], t[bits]);
        }
      }
      return out;
    }
    case Repr::Xor: {
      for (const auto& c : v.children()) {
        auto t = to_table(c, budget);
        for (std::uint64_t bits = 0; bits < size; ++bits) out[bits] = max(out[bits], t[bits]);
      }
      return out;
    }
    case Repr::Or: {
      // Max-plus subset convolution, one child at a time: O(3^m) per child.
      std::uint64_t work = 1;
      for (unsigned i = 0; i < m; ++i) work *= 3;
      if (work * v.children().size() > budget.max_steps) throw SizeGuardError("OR materialization exceeds the step budget");
      out = to_table(v.children().front(), budget);
      for (std::size_t k = 1; k < v.children().size(); ++k) {
        auto t = to_table(v.children()[k], budget);
        std::vector<Money> next(size);
        for (std::uint64_t bits = 0; bits < size; ++bits) {
          Money best;
          ItemSet{bits}.for_each_subset([&](ItemSet sub) { best = max(best, out[sub.bits()] + t[bits & ~sub.bits()]); });
          next[bits] = best;
        }
        out = std::move(next);
      }
      return out;
    }
  }
  return out;
}

ValueFn as_table(const ValueFn& v, const EvalBudget& budget) {
  if (v.repr() == Repr::Table) return v;
  return ValueFn::table(v.num_items(), to_table(v, budget));
}

CompiledFn::CompiledFn(ValueFn fn, const EvalBudget& budget)
    : fn_(std::move(fn)), additive_(additive_form(fn_)), slots_(oxs_slots(fn_)) {
  if (fn_.num_items() <= kMaxTableItems) table_ = to_table(fn_, budget);
}

Money CompiledFn::value(ItemSet s) const {
  if (!table_.empty()) return table_[s.bits()];
  if (additive_) {
    Money total;
    for (auto j : s.items()) total += (*additive_)[j];
    return total;
  }
  return vcomp::value(fn_, s);
}

}  // namespace vcomp
