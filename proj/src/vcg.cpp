#include "vcomp/vcg.hpp"

#include <algorithm>
#include <numeric>

#include "vcomp/errors.hpp"
#include "vcomp/matching.hpp"

namespace vcomp {
namespace {

unsigned universe(BidView bids) {
  if (bids.empty()) throw ValidationError("need at least one agent");
  const unsigned m = bids.front()->num_items();
  for (const auto* b : bids) {
    if (b->num_items() != m) throw ValidationError("bids over different item universes");
  }
  return m;
}

std::vector<std::size_t> ranking(const VcgOptions& options, std::size_t n) {
  std::vector<std::size_t> order = options.tie_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  if (order.size() != n) throw ValidationError("tie order must list every agent once");
  return order;
}

/// n^m, saturating above the cap.
std::uint64_t assignment_count(std::size_t n, unsigned m, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (unsigned j = 0; j < m; ++j) {
    total *= n;
    if (total > cap) return cap + 1;
  }
  return total;
}

bool all_additive(BidView bids) {
  return std::all_of(bids.begin(), bids.end(), [](const CompiledFn* b) { return b->additive().has_value(); });
}
bool all_oxs(BidView bids) {
  return std::all_of(bids.begin(), bids.end(), [](const CompiledFn* b) { return b->slots().has_value(); });
}
bool all_tables(BidView bids) {
  return std::all_of(bids.begin(), bids.end(), [](const CompiledFn* b) { return b->has_table(); });
}

// --- additive -------------------------------------------------------------

Allocation wd_additive(BidView bids, unsigned m, const std::vector<std::size_t>& order) {
  Allocation alloc;
  alloc.bundles.assign(bids.size(), ItemSet{});
  for (ItemIndex j = 0; j < m; ++j) {
    std::size_t owner = order.front();
    Money best = (*bids[owner]->additive())[j];
    for (auto k : order) {
      const Money& w = (*bids[k]->additive())[j];
      if (w > best) {
        best = w;
        owner = k;
      }
    }
    alloc.bundles[owner] = alloc.bundles[owner].with(j);
  }
  return alloc;
}

// --- exhaustive -----------------------------------------------------------

class Enumerator {
public:
  Enumerator(BidView bids, unsigned m, const std::vector<std::size_t>& order)
      : bids_(bids), m_(m), order_(order), current_(bids.size()) {}

  Allocation run() {
    recurse(0);
    return best_;
  }

private:
  void recurse(ItemIndex j) {
    if (j == m_) {
      Money total;
      for (std::size_t i = 0; i < bids_.size(); ++i) total += bids_[i]->table()[current_[i].bits()];
      if (!found_ || total > best_value_) {
        found_ = true;
        best_value_ = total;
        best_.bundles = current_;
      }
      return;
    }
    for (auto k : order_) {
      current_[k] = current_[k].with(j);
      recurse(j + 1);
      current_[k] = current_[k].without(j);
    }
  }

  BidView bids_;
  unsigned m_;
  const std::vector<std::size_t>& order_;
  std::vector<ItemSet> current_;
  Allocation best_;
  Money best_value_;
  bool found_ = false;
};

/// Max over partitions of s among agents != excluded, by DP over subsets of s.
Money residual_dp(BidView bids, std::size_t excluded, ItemSet s) {
  std::vector<std::uint64_t> subsets;
  s.for_each_subset([&](ItemSet t) { subsets.push_back(t.bits()); });
  // best[t] over processed agents; subsets are enumerated in increasing numeric order.
  std::vector<Money> best;
  bool first = true;
  std::vector<Money> next;
  auto index_of = [&](std::uint64_t bits) {
    return static_cast<std::size_t>(std::lower_bound(subsets.begin(), subsets.end(), bits) - subsets.begin());
  };
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i == excluded) continue;
    const auto table = bids[i]->table();
    if (first) {
      best.resize(subsets.size());
      for (std::size_t k = 0; k < subsets.size(); ++k) best[k] = table[subsets[k]];
      first = false;
      continue;
    }
    next.assign(subsets.size(), Money{});
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      Money top;
      ItemSet{subsets[k]}.for_each_subset(
          [&](ItemSet mine) { top = max(top, table[mine.bits()] + best[index_of(subsets[k] & ~mine.bits())]); });
      next[k] = top;
    }
    best.swap(next);
  }
  if (first) return Money{};
  return best.back();
}

// --- matching -------------------------------------------------------------

struct SlotGraph {
  std::vector<std::size_t> slot_owner;
  std::vector<MatchingEdge> edges;  // left = slot, right = item
};

SlotGraph build_slots(BidView bids, std::size_t excluded) {
  SlotGraph g;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    if (i == excluded) continue;
    for (const auto& slot : *bids[i]->slots()) {
      std::size_t id = g.slot_owner.size();
      g.slot_owner.push_back(i);
      for (const auto& [j, w] : slot.weights) g.edges.push_back({id, j, w});
    }
  }
  return g;
}

Money restricted_matching(const SlotGraph& g, unsigned m, ItemSet s, const std::vector<long>& forced_owner) {
  std::vector<MatchingEdge> edges;
  for (const auto& e : g.edges) {
    if (!s.contains(static_cast<ItemIndex>(e.right))) continue;
    long forced = forced_owner.empty() ? -1 : forced_owner[e.right];
    if (forced >= 0 && static_cast<std::size_t>(forced) != g.slot_owner[e.left]) continue;
    edges.push_back(e);
  }
  return max_weight_matching(g.slot_owner.size(), m, edges).weight;
}

Allocation wd_matching(BidView bids, unsigned m, const std::vector<std::size_t>& order) {
  SlotGraph g = build_slots(bids, bids.size());
  const ItemSet all = ItemSet::full(m);
  std::vector<long> forced(m, -1);
  const Money target = restricted_matching(g, m, all, forced);
  Allocation alloc;
  alloc.bundles.assign(bids.size(), ItemSet{});
  for (ItemIndex j = 0; j < m; ++j) {
    bool placed = false;
    for (auto k : order) {
      forced[j] = static_cast<long>(k);
      if (restricted_matching(g, m, all, forced) == target) {
        alloc.bundles[k] = alloc.bundles[k].with(j);
        placed = true;
        break;
      }
    }
    if (!placed) throw InternalError("lexicographic matching reconstruction lost the optimum");
  }
  return alloc;
}

WdRoute pick_route(BidView bids, unsigned m, const VcgOptions& options) {
  if (options.route != WdRoute::Auto) return options.route;
  if (all_additive(bids)) return WdRoute::Additive;
  const std::uint64_t count = assignment_count(bids.size(), m, options.allocation_budget);
  if (count <= options.small_enumeration && all_tables(bids)) return WdRoute::Exhaustive;
  if (all_oxs(bids)) return WdRoute::Matching;
  return WdRoute::Exhaustive;
}

}  // namespace

Allocation winner_determination(BidView bids, const VcgOptions& options) {
  const unsigned m = universe(bids);
  const auto order = ranking(options, bids.size());
  switch (pick_route(bids, m, options)) {
    case WdRoute::Additive:
      if (!all_additive(bids)) throw ValidationError("additive route needs additive bids");
      return wd_additive(bids, m, order);
    case WdRoute::Matching:
      if (!all_oxs(bids)) throw ValidationError("matching route needs OXS bids");
      return wd_matching(bids, m, order);
    case WdRoute::Exhaustive:
    case WdRoute::Auto:
      break;
  }
  if (!all_tables(bids)) throw SizeGuardError("exhaustive winner determination needs tabulated bids");
  if (assignment_count(bids.size(), m, options.allocation_budget) > options.allocation_budget) {
    throw SizeGuardError("exhaustive winner determination exceeds the allocation budget");
  }
  return Enumerator(bids, m, order).run();
}

Money additive_price(BidView bids, std::size_t agent, ItemSet s) {
  Money total;
  for (auto j : s.items()) {
    Money top;
    for (std::size_t k = 0; k < bids.size(); ++k) {
      if (k != agent) top = max(top, (*bids[k]->additive())[j]);
    }
    total += top;
  }
  return total;
}

Money residual_value(BidView bids, std::size_t excluded, ItemSet s, const VcgOptions& options) {
  const unsigned m = universe(bids);
  if (!s.subset_of(ItemSet::full(m))) throw ValidationError("bundle outside the item universe");
  if (s.empty() || (excluded < bids.size() && bids.size() == 1)) return Money{};
  WdRoute route = options.route;
  const std::size_t others = excluded < bids.size() ? bids.size() - 1 : bids.size();
  if (route == WdRoute::Auto) {
    std::uint64_t work = others;
    for (unsigned j = 0; j < s.size(); ++j) work *= 3;
    if (all_additive(bids)) route = WdRoute::Additive;
    else if (all_tables(bids) && work <= options.small_enumeration) route = WdRoute::Exhaustive;
    else if (all_oxs(bids)) route = WdRoute::Matching;
    else route = WdRoute::Exhaustive;
  }
  switch (route) {
    case WdRoute::Additive:
      if (!all_additive(bids)) throw ValidationError("additive route needs additive bids");
      return additive_price(bids, excluded, s);
    case WdRoute::Matching:
      if (!all_oxs(bids)) throw ValidationError("matching route needs OXS bids");
      return restricted_matching(build_slots(bids, excluded), m, s, {});
    default:
      break;
  }
  if (!all_tables(bids)) throw SizeGuardError("exhaustive residual needs tabulated bids");
  std::uint64_t work = others;
  for (unsigned j = 0; j < s.size(); ++j) {
    work *= 3;
    if (work > options.allocation_budget) throw SizeGuardError("residual value exceeds the allocation budget");
  }
  return residual_dp(bids, excluded, s);
}

Money max_welfare(BidView fns, const VcgOptions& options) {
  return residual_value(fns, kNoAgent, ItemSet::full(universe(fns)), options);
}

Money vcg_price(BidView bids, std::size_t agent, ItemSet s, const VcgOptions& options) {
  const ItemSet all = ItemSet::full(universe(bids));
  return residual_value(bids, agent, all, options) - residual_value(bids, agent, all - s, options);
}

Outcome vcg_outcome(BidView bids, BidView valuations, const VcgOptions& options) {
  const unsigned m = universe(bids);
  if (valuations.size() != bids.size() || universe(valuations) != m) {
    throw ValidationError("bids and valuations must cover the same agents and items");
  }
  Outcome out;
  out.allocation = winner_determination(bids, options);
  const std::size_t n = bids.size();
  out.payments.resize(n);
  out.utilities.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ItemSet bundle = out.allocation.bundles[i];
    out.payments[i] = vcg_price(bids, i, bundle, options);
    const Money v = valuations[i]->value(bundle);
    out.utilities[i] = v - out.payments[i];
    out.welfare += v;
    out.bid_welfare += bids[i]->value(bundle);
  }
  return out;
}

std::vector<const CompiledFn*> view_of(const std::vector<CompiledFn>& fns) {
  std::vector<const CompiledFn*> out;
  out.reserve(fns.size());
  for (const auto& f : fns) out.push_back(&f);
  return out;
}

namespace {
std::vector<CompiledFn> compile_all(std::span<const ValueFn> fns) {
  std::vector<CompiledFn> out;
  out.reserve(fns.size());
  for (const auto& f : fns) out.emplace_back(f);
  return out;
}
}  // namespace

Allocation winner_determination(std::span<const ValueFn> bids, const VcgOptions& options) {
  auto compiled = compile_all(bids);
  return winner_determination(view_of(compiled), options);
}

Money residual_value(std::span<const ValueFn> bids, std::size_t excluded, ItemSet s, const VcgOptions& options) {
  auto compiled = compile_all(bids);
  return residual_value(view_of(compiled), excluded, s, options);
}

Outcome vcg_outcome(std::span<const ValueFn> bids, std::span<const ValueFn> valuations, const VcgOptions& options) {
  auto b = compile_all(bids);
  auto v = compile_all(valuations);
  return vcg_outcome(view_of(b), view_of(v), options);
}

}  // namespace vcomp
