#include "vcomp/classes.hpp"

#include "vcomp/errors.hpp"
#include "vcomp/lp.hpp"

namespace vcomp {
namespace {

struct SupportLp {
  Rational optimum;
  std::vector<Money> weights;  // indexed by item, zero outside T
};

/// max a(T) s.t. a(S) <= v(S) for all nonempty S subset of T, a >= 0.
SupportLp solve_support_lp(std::span<const Money> table, unsigned num_items, ItemSet t) {
  SupportLp out;
  out.weights.assign(num_items, Money{});
  if (t.empty()) return out;
  const auto items = t.items();
  lp::Problem p;
  p.num_vars = items.size();
  p.objective.assign(items.size(), -1);
  t.for_each_subset([&](ItemSet s) {
    if (s.empty()) return;
    lp::Constraint row;
    row.coeffs.assign(items.size(), 0);
    for (std::size_t k = 0; k < items.size(); ++k) {
      if (s.contains(items[k])) row.coeffs[k] = 1;
    }
    row.sense = lp::Sense::LessEqual;
    row.rhs = to_big(table[s.bits()]);
    p.rows.push_back(std::move(row));
  });
  auto sol = lp::solve_exact(p);
  if (sol.status != lp::Status::Optimal) throw InternalError("support LP is bounded and feasible");
  // Basic solutions of this LP are ratios of small determinants; they fit the 64-bit range.
  auto narrow = [](const BigRational& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw OverflowError("support LP solution overflow");
    return Rational(q.get_num().get_si(), q.get_den().get_si());
  };
  for (std::size_t k = 0; k < items.size(); ++k) out.weights[items[k]] = narrow(sol.x[k]);
  out.optimum = narrow(-sol.objective);
  return out;
}

}  // namespace

ClassReport check_class(const ValueFn& v) {
  const unsigned m = v.num_items();
  const auto table = to_table(v);
  validate_table(m, table);
  ClassReport report;
  const ItemSet all = ItemSet::full(m);

  // Disjoint pairs suffice: an overlapping violation (S, T) yields one for (S, T \ S) by monotonicity.
  all.for_each_subset([&](ItemSet s) {
    if (!report.is_subadditive || s.empty()) return;
    (all - s).for_each_subset([&](ItemSet t) {
      if (!report.is_subadditive || t.empty() || t.bits() < s.bits()) return;
      if (table[(s | t).bits()] > table[s.bits()] + table[t.bits()]) {
        report.is_subadditive = false;
        report.witness = std::make_pair(s, t);
      }
    });
  });

  Rational beta{1};
  bool infinite = false;
  all.for_each_subset([&](ItemSet t) {
    if (infinite || table[t.bits()].is_zero()) return;
    auto support = solve_support_lp(table, m, t);
    if (support.optimum.is_zero()) {
      infinite = true;
      report.beta_bundle = t;
      return;
    }
    Rational ratio = table[t.bits()] / support.optimum;
    if (ratio > beta) {
      beta = ratio;
      report.beta_bundle = t;
    }
  });
  if (!infinite) report.xos_factor_beta = beta;
  return report;
}

ValueFn supporting_additive(const ValueFn& v, ItemSet t) {
  const unsigned m = v.num_items();
  if (!t.subset_of(ItemSet::full(m))) throw ValidationError("bundle outside the item universe");
  std::vector<Money> weights(m);
  if (t.empty()) return ValueFn::additive(std::move(weights));
  if (v.repr() == Repr::XosClauses) {
    const std::vector<Money>* best = nullptr;
    Money best_value{-1};
    for (const auto& clause : v.clauses()) {
      Money total;
      for (auto j : t.items()) total += clause[j];
      if (total > best_value) {
        best_value = total;
        best = &clause;
      }
    }
    for (auto j : t.items()) weights[j] = (*best)[j];
    return ValueFn::additive(std::move(weights));
  }
  if (auto w = additive_form(v)) {
    for (auto j : t.items()) weights[j] = (*w)[j];
    return ValueFn::additive(std::move(weights));
  }
  const auto table = to_table(v);
  return ValueFn::additive(solve_support_lp(table, m, t).weights);
}

bool check_topdrop(const ValueFn& b, ItemSet x) {
  if (x.empty()) throw ValidationError("top-drop needs a nonempty bundle");
  const auto k = static_cast<std::int64_t>(x.size());
  Money best;
  for (auto j : x.items()) best = max(best, value(b, x.without(j)));
  return best * Rational(k) >= value(b, x) * Rational(k - 1);
}

}  // namespace vcomp
