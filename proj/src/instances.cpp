#include "vcomp/instances.hpp"

#include <algorithm>
#include <functional>

#include "vcomp/classes.hpp"
#include "vcomp/equilibria.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/random.hpp"

namespace vcomp {
namespace {

Rational r(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

ValueFn table_from(unsigned m, const std::function<Money(ItemSet)>& f) {
  std::vector<Money> values(std::size_t{1} << m);
  for (std::uint64_t s = 0; s < values.size(); ++s) values[s] = f(ItemSet{s});
  return ValueFn::table(m, std::move(values));
}

ItemSet triple(std::size_t agent) { return agent == 0 ? ItemSet::of({0, 1, 2}) : ItemSet::of({3, 4, 5}); }

}  // namespace

std::vector<ValueFn> theorem4_deviations(std::size_t agent, const Rational& eps) {
  const auto own = triple(agent).items();
  const std::vector<Money> levels{r(0), r(1) - eps, (r(1) - eps) * r(2), (r(5) + eps) / r(3), r(3), r(3) + eps * r(3), r(6)};
  std::vector<ValueFn> out;
  for (const auto& x : levels) {
    for (const auto& y : levels) {
      for (const auto& z : levels) {
        if (x + y > r(6) || y + z > r(6) || x + z > r(6)) continue;
        std::vector<Money> w(6);
        w[own[0]] = x;
        w[own[1]] = y;
        w[own[2]] = z;
        out.push_back(ValueFn::additive(std::move(w)));
      }
    }
  }
  std::vector<std::vector<Money>> unit;
  std::vector<std::vector<Money>> pairs;
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<Money> u(6);
    u[own[k]] = r(6);
    unit.push_back(u);
    std::vector<Money> p(6);
    p[own[k]] = r(3);
    p[own[(k + 1) % 3]] = r(3);
    pairs.push_back(p);
  }
  out.push_back(ValueFn::xos_clauses(6, unit));
  out.push_back(ValueFn::xos_clauses(6, pairs));
  return out;
}

InstanceFile theorem4_instance(const Rational& eps) {
  if (!(eps > r(0) && eps < r(1))) throw ValidationError("epsilon must lie strictly between 0 and 1");
  InstanceFile inst;
  inst.header = {"two agents, six items; each agent's menu starts with its equilibrium bid",
                 "epsilon " + eps.to_string()};
  inst.items = {"a", "b", "c", "d", "e", "f"};
  const Money high = r(3) + eps * r(3);
  const Money low = r(1) - eps;
  for (std::size_t i = 0; i < 2; ++i) {
    const ItemSet own = triple(i);
    const ItemSet other = triple(1 - i);
    auto v = table_from(6, [&](ItemSet s) {
      const auto k_own = (s & own).size();
      const auto k_other = (s & other).size();
      Money a = k_own == 3 ? r(12) : (k_own >= 1 ? r(6) : r(0));
      Money b = k_other == 3 ? r(5) + eps : k_other == 2 ? r(4) + eps * r(2) : k_other == 1 ? high : r(0);
      return max(a, b);
    });
    std::vector<ValueFn> highs;
    std::vector<ValueFn> children;
    for (auto j : other.items()) highs.push_back(ValueFn::xs(6, j, high));
    children.push_back(ValueFn::xor_of(highs));
    for (auto j : other.items()) children.push_back(ValueFn::xs(6, j, low));
    AgentSpec agent{std::to_string(i + 1), v, {ValueFn::or_of(children)}};
    append_unique(agent.menu, theorem4_deviations(i, eps));
    inst.agents.push_back(std::move(agent));
  }
  return inst;
}

std::optional<std::vector<Triple>> find_three_partition(const std::vector<std::int64_t>& weights) {
  if (weights.empty() || weights.size() % 3 != 0) return std::nullopt;
  const std::size_t m = weights.size() / 3;
  std::int64_t total = 0;
  for (auto w : weights) total += w;
  if (total % static_cast<std::int64_t>(m) != 0) return std::nullopt;
  const std::int64_t target = total / static_cast<std::int64_t>(m);
  std::vector<bool> used(weights.size(), false);
  std::vector<Triple> chosen;
  std::function<bool()> search = [&]() -> bool {
    auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) return true;
    const std::size_t a = static_cast<std::size_t>(first - used.begin());
    used[a] = true;
    for (std::size_t b = a + 1; b < weights.size(); ++b) {
      if (used[b]) continue;
      used[b] = true;
      for (std::size_t c = b + 1; c < weights.size(); ++c) {
        if (used[c] || weights[a] + weights[b] + weights[c] != target) continue;
        used[c] = true;
        chosen.push_back({a, b, c});
        if (search()) return true;
        chosen.pop_back();
        used[c] = false;
      }
      used[b] = false;
    }
    used[a] = false;
    return false;
  };
  if (search()) return chosen;
  return std::nullopt;
}

ThreePartitionInstance three_partition_instance(const std::vector<std::int64_t>& weights) {
  if (weights.empty() || weights.size() % 3 != 0) throw ValidationError("need 3m weights");
  for (auto w : weights) {
    if (w <= 0) throw ValidationError("weights must be positive");
  }
  const std::size_t m = weights.size() / 3;
  std::int64_t total = 0;
  for (auto w : weights) total += w;
  if (total % static_cast<std::int64_t>(m) != 0) throw ValidationError("weight sum is not divisible by m");
  const Money B = r(total / static_cast<std::int64_t>(m));
  const unsigned items = static_cast<unsigned>(6 * m);
  if (items > kMaxTableItems) throw SizeGuardError("three-partition instance limited to m <= 3");

  ThreePartitionInstance out;
  out.B = B;
  InstanceFile& inst = out.file;
  std::string ws;
  for (auto w : weights) ws += (ws.empty() ? "" : " ") + std::to_string(w);
  inst.header = {"weights " + ws, "B " + B.to_string()};
  for (std::size_t j = 0; j < 3 * m; ++j) inst.items.push_back("I" + std::to_string(j + 1));
  for (std::size_t j = 0; j < 3 * m; ++j) inst.items.push_back("J" + std::to_string(j + 1));
  auto i_item = [](std::size_t j) { return static_cast<ItemIndex>(j); };
  auto j_item = [&](std::size_t j) { return static_cast<ItemIndex>(3 * m + j); };
  auto block = [&](std::size_t i) { return ItemSet::of({j_item(i), j_item(m + i), j_item(2 * m + i)}); };

  std::vector<Money> w_items(items);
  for (std::size_t j = 0; j < 3 * m; ++j) w_items[i_item(j)] = r(weights[j]);
  for (std::size_t i = 0; i < m; ++i) {
    const ItemSet J = block(i);
    std::vector<Money> j_part(std::size_t{1} << items);
    for (std::uint64_t s = 0; s < j_part.size(); ++s) {
      const auto k = (ItemSet{s} & J).size();
      j_part[s] = k == 3 ? B * r(10) : (k >= 1 ? B * r(5) : r(0));
    }
    auto vB = ValueFn::xor_of({ValueFn::additive(w_items), ValueFn::table(items, j_part)});
    inst.agents.push_back({"B" + std::to_string(i + 1), vB, {}});
  }
  for (std::size_t i = 0; i < m; ++i) {
    const ItemSet J = block(i);
    auto vC = table_from(items, [&](ItemSet s) {
      const auto k = (s & J).size();
      return k == 3 ? B * r(16) : (k >= 1 ? B * r(8) : r(0));
    });
    inst.agents.push_back({"C" + std::to_string(i + 1), vC, {}});
  }

  out.partition = find_three_partition(weights);
  if (!out.partition) return out;

  auto additive = [&](const std::vector<std::pair<ItemIndex, Money>>& entries) {
    std::vector<Money> w(items);
    for (const auto& [j, x] : entries) w[j] = x;
    return ValueFn::additive(std::move(w));
  };
  for (std::size_t i = 0; i < m; ++i) {
    const auto& P = (*out.partition)[i];
    std::vector<std::pair<ItemIndex, Money>> own;
    for (auto j : P) own.push_back({i_item(j), r(weights[j])});
    auto& menu = inst.agents[i].menu;
    menu.push_back(additive(own));
    menu.push_back(ValueFn::zero(items));
    const auto J = block(i).items();
    for (auto j : J) {
      menu.push_back(additive({{j, B * r(5)}}));
      menu.push_back(additive({{j, B * r(4)}}));
    }
    for (std::size_t a = 0; a < 3; ++a) {
      menu.push_back(additive({{J[a], B * r(5, 2)}, {J[(a + 1) % 3], B * r(5, 2)}}));
    }
    for (std::size_t k = 0; k < 3 * m; ++k) {
      if (std::find(P.begin(), P.end(), k) != P.end()) continue;
      auto grab = own;
      grab.push_back({i_item(k), r(weights[k])});
      menu.push_back(additive(grab));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const auto J = block(i).items();
    auto& menu = inst.agents[m + i].menu;
    menu.push_back(additive({{J[0], B * r(4)}, {J[1], B * r(4)}, {J[2], B * r(4)}}));
    menu.push_back(ValueFn::zero(items));
    for (std::size_t a = 0; a < 3; ++a) {
      menu.push_back(additive({{J[a], B * r(8)}}));
      for (std::size_t b = 0; b < 3; ++b) {
        if (a == b) continue;
        menu.push_back(additive({{J[a], B * r(5)}, {J[b], B * r(3)}}));
      }
      menu.push_back(additive({{J[a], B * r(4)}, {J[(a + 1) % 3], B * r(4)}}));
    }
  }
  return out;
}

InstanceFile pne_gap_gadget(const Rational& B) {
  if (!(B > r(0))) throw ValidationError("B must be positive");
  InstanceFile inst;
  inst.header = {"B " + B.to_string() + ", additive grid menus of step B/2"};
  inst.items = {"J1", "J2", "J3"};
  auto unit_block = [&](const Money& part, const Money& whole) {
    return table_from(3, [&](ItemSet s) { return s.size() == 3 ? whole : (s.empty() ? r(0) : part); });
  };
  auto vB = unit_block(B * r(5), B * r(10));
  auto vC = unit_block(B * r(8), B * r(16));
  inst.agents.push_back({"B", vB, additive_grid_menu(vB, B / r(2))});
  inst.agents.push_back({"C", vC, additive_grid_menu(vC, B / r(2))});
  return inst;
}

InstanceFile ratio_two_instance() {
  InstanceFile inst;
  inst.header = {"unit-demand agent 1 against single-minded agent 2; additive grid menus of step 1/2"};
  inst.items = {"a", "b"};
  auto v1 = ValueFn::xos_clauses(2, {{r(1), r(0)}, {r(0), r(1)}});
  auto v2 = ValueFn::xs(2, 0, r(1));
  inst.agents.push_back({"1", v1, additive_grid_menu(v1, r(1, 2))});
  inst.agents.push_back({"2", v2, additive_grid_menu(v2, r(1, 2))});
  return inst;
}

std::optional<ValuationClass> parse_class(const std::string& name) {
  if (name == "OS" || name == "os") return ValuationClass::OS;
  if (name == "OXS" || name == "oxs") return ValuationClass::OXS;
  if (name == "XOS" || name == "xos") return ValuationClass::XOS;
  if (name == "CF" || name == "cf") return ValuationClass::CF;
  return std::nullopt;
}

std::string class_name(ValuationClass c) {
  switch (c) {
    case ValuationClass::OS: return "OS";
    case ValuationClass::OXS: return "OXS";
    case ValuationClass::XOS: return "XOS";
    case ValuationClass::CF: return "CF";
  }
  return "?";
}

namespace {

std::vector<Money> random_clause(SplitMix64& rng, unsigned m, std::int64_t lo) {
  std::vector<Money> w(m);
  for (auto& x : w) x = r(rng.between(lo, 10));
  return w;
}

ValueFn random_valuation(ValuationClass cls, unsigned m, SplitMix64& rng) {
  switch (cls) {
    case ValuationClass::OS:
      return ValueFn::additive(random_clause(rng, m, 0));
    case ValuationClass::OXS: {
      const auto slots = rng.between(1, m);
      std::vector<ValueFn> children;
      for (std::int64_t k = 0; k < slots; ++k) {
        std::vector<ValueFn> terms;
        for (ItemIndex j = 0; j < m; ++j) {
          if (rng.coin()) terms.push_back(ValueFn::xs(m, j, r(rng.between(1, 10))));
        }
        if (terms.empty()) terms.push_back(ValueFn::xs(m, static_cast<ItemIndex>(rng.below(m)), r(rng.between(1, 10))));
        children.push_back(terms.size() == 1 ? terms.front() : ValueFn::xor_of(terms));
      }
      return children.size() == 1 ? children.front() : ValueFn::or_of(children);
    }
    case ValuationClass::XOS: {
      const auto count = rng.between(1, 3);
      std::vector<std::vector<Money>> clauses;
      for (std::int64_t k = 0; k < count; ++k) clauses.push_back(random_clause(rng, m, 0));
      return ValueFn::xos_clauses(m, clauses);
    }
    case ValuationClass::CF: {
      const std::size_t size = std::size_t{1} << m;
      std::vector<Money> raw(size);
      const auto count = rng.between(1, 3);
      for (std::int64_t k = 0; k < count; ++k) {
        const auto c = random_clause(rng, m, 0);
        for (std::uint64_t s = 0; s < size; ++s) {
          Money t;
          for (auto j : ItemSet{s}.items()) t += c[j];
          raw[s] = max(raw[s], t);
        }
      }
      if (m >= 2) {
        const auto bumps = rng.between(1, 3);
        for (std::int64_t k = 0; k < bumps; ++k) {
          ItemSet t;
          while (t.size() < 2) t = ItemSet{rng.below(size)};
          const Money extra = r(rng.between(1, 6));
          for (std::uint64_t s = 0; s < size; ++s) {
            if (t.subset_of(ItemSet{s})) raw[s] += extra;
          }
        }
      }
      if (m >= 3 && rng.coin()) {
        // w * ceil(|S n T| / 2) is subadditive but not XOS once |T| >= 3.
        ItemSet t;
        while (t.size() < 3) t = ItemSet{rng.below(size)};
        const Money w = r(rng.between(4, 10));
        for (std::uint64_t s = 0; s < size; ++s) {
          const auto k = static_cast<std::int64_t>((ItemSet{s} & t).size());
          raw[s] = max(raw[s], w * Money((k + 1) / 2));
        }
      }
      // Monotone, subadditive repair; proper subsets have smaller indices.
      std::vector<Money> v(size);
      for (std::uint64_t s = 1; s < size; ++s) {
        Money below;
        for (auto j : ItemSet{s}.items()) below = max(below, v[s & ~(std::uint64_t{1} << j)]);
        Money cap = raw[s];
        for (std::uint64_t a = (s - 1) & s; a > 0; a = (a - 1) & s) cap = min(cap, v[a] + v[s & ~a]);
        v[s] = max(below, cap);
      }
      return ValueFn::table(m, std::move(v));
    }
  }
  throw InternalError("unknown class");
}

bool class_ok(ValuationClass cls, const ValueFn& v) {
  const auto report = check_class(v);
  if (cls == ValuationClass::CF) return report.is_subadditive;
  return report.is_subadditive && report.xos_factor_beta && *report.xos_factor_beta == r(1);
}

}  // namespace

InstanceFile random_instance(ValuationClass cls, std::size_t n, unsigned m, std::uint64_t seed) {
  if (n == 0 || m == 0) throw ValidationError("need at least one agent and one item");
  if (m > 10) throw SizeGuardError("random instances limited to m <= 10");
  SplitMix64 rng(seed);
  InstanceFile inst;
  inst.header = {"random " + class_name(cls) + " n=" + std::to_string(n) + " m=" + std::to_string(m) + " seed=" +
                 std::to_string(seed)};
  for (unsigned j = 0; j < m; ++j) inst.items.push_back("i" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    ValueFn v = random_valuation(cls, m, rng);
    for (int attempt = 0; value(v, ItemSet::full(m)).is_zero(); ++attempt) {
      if (attempt == 100) throw ValidationError("random generator kept producing the zero valuation");
      v = random_valuation(cls, m, rng);
    }
    if (m <= 6 && !class_ok(cls, v)) throw InternalError("random generator left its class");
    inst.agents.push_back({std::to_string(i + 1), v, {}});
  }
  return inst;
}

std::vector<ValueFn> valuations_of(const InstanceFile& inst) {
  std::vector<ValueFn> out;
  for (const auto& a : inst.agents) out.push_back(a.valuation);
  return out;
}

std::vector<std::vector<ValueFn>> menus_of(const InstanceFile& inst) {
  std::vector<std::vector<ValueFn>> out;
  for (const auto& a : inst.agents) out.push_back(a.menu);
  return out;
}

}  // namespace vcomp
