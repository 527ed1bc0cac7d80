#include "vcomp/smoothness.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "vcomp/classes.hpp"
#include "vcomp/errors.hpp"

namespace vcomp {
namespace {

Money price_of(const PriceVector& p, ItemSet s) {
  Money total;
  for (auto j : s.items()) total += p[j];
  return total;
}

const std::vector<Money>& require_additive(const CompiledFn& b) {
  if (!b.additive()) throw ValidationError("additive bids required");
  return *b.additive();
}

bool lex_less(ItemSet a, ItemSet b) {
  const auto x = a.items();
  const auto y = b.items();
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

}  // namespace

PriceVector item_prices(BidView bids, std::size_t agent) {
  const unsigned m = bids.front()->num_items();
  PriceVector p(m);
  for (std::size_t k = 0; k < bids.size(); ++k) {
    if (k == agent) continue;
    const auto& w = require_additive(*bids[k]);
    for (ItemIndex j = 0; j < m; ++j) p[j] = max(p[j], w[j]);
  }
  return p;
}

ItemSet maximal_tight_set(const ValueFn& v, ItemSet q, const PriceVector& p) {
  if (q.size() > kMaxTableItems) throw SizeGuardError("tight-set search over too many items");
  ItemSet best;
  q.for_each_subset([&](ItemSet t) {
    if (value(v, t) > price_of(p, t)) return;
    if (t.size() > best.size() || (t.size() == best.size() && lex_less(t, best))) best = t;
  });
  return best;
}

PriceVector truncated_prices(const ValueFn& v, const PriceVector& p, ItemSet q, ItemSet t) {
  if (!t.subset_of(q)) throw ValidationError("T must be a subset of Q");
  PriceVector out(p.size());
  const ItemSet rest = q - t;
  for (auto j : rest.items()) out[j] = p[j];
  rest.for_each_subset([&](ItemSet s) {
    if (price_of(out, s) > value(v, s)) throw InternalError("truncated prices are not conservative; T is not maximal");
  });
  return out;
}

Rational additive_utility(const CompiledFn& v, const PriceVector& bid, const PriceVector& prices) {
  ItemSet won;
  Money paid;
  for (ItemIndex j = 0; j < bid.size(); ++j) {
    if (bid[j] >= prices[j]) {
      won = won.with(j);
      paid += prices[j];
    }
  }
  return v.value(won) - paid;
}

CfOsDeviation deviation_cf_os(const ValueFn& v, ItemSet q, const std::vector<PriceVector>& samples,
                              const std::vector<BigRational>& weights) {
  if (samples.empty() || samples.size() != weights.size()) throw ValidationError("need weighted price samples");
  BigRational total = 0;
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw ValidationError("negative sample weight");
    total += w;
  }
  if (total != 1) throw ValidationError("sample weights must sum to 1");
  const CompiledFn cv(v);
  CfOsDeviation out{ValueFn::zero(v.num_items()), 0, 0, false};
  bool first = true;
  std::vector<PriceVector> seen;
  for (const auto& p : samples) {
    PriceVector cand = truncated_prices(v, p, q, maximal_tight_set(v, q, p));
    if (std::find(seen.begin(), seen.end(), cand) != seen.end()) continue;
    seen.push_back(cand);
    BigRational eu = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) eu += weights[s] * to_big(additive_utility(cv, cand, samples[s]));
    if (first || eu > out.expected_utility) {
      out.expected_utility = eu;
      out.bid = ValueFn::additive(cand);
      first = false;
    }
  }
  BigRational expected_price = 0;
  for (std::size_t s = 0; s < samples.size(); ++s) expected_price += weights[s] * to_big(price_of(samples[s], q));
  out.bound = to_big(cv.value(q)) / 2 - expected_price;
  out.holds = out.expected_utility >= out.bound;
  return out;
}

InequalityCheck check_price_sum_additive(BidView bids, const Allocation& q, const VcgOptions& options) {
  InequalityCheck out;
  for (std::size_t i = 0; i < bids.size(); ++i) {
    require_additive(*bids[i]);
    out.lhs += additive_price(bids, i, q.bundles.at(i));
  }
  const auto x = winner_determination(bids, options);
  for (std::size_t i = 0; i < bids.size(); ++i) out.rhs += bids[i]->value(x.bundles[i]);
  out.holds = out.lhs <= out.rhs;
  return out;
}

ValueFn deviation_xos(const ValueFn& v, ItemSet q) { return supporting_additive(v, q); }

InequalityCheck check_price_shift(BidView bids, const Allocation& q, const VcgOptions& options) {
  InequalityCheck out;
  const auto x = winner_determination(bids, options);
  for (std::size_t i = 0; i < bids.size(); ++i) {
    out.lhs += vcg_price(bids, i, q.bundles.at(i), options) - vcg_price(bids, i, x.bundles[i], options);
    out.rhs += bids[i]->value(x.bundles[i]);
  }
  out.holds = out.lhs <= out.rhs;
  return out;
}

Rational deviation_utility(BidView bids, BidView valuations, std::size_t agent, const CompiledFn& bid,
                           const VcgOptions& options) {
  std::vector<const CompiledFn*> swapped(bids.begin(), bids.end());
  swapped[agent] = &bid;
  const auto x = winner_determination(swapped, options);
  const ItemSet mine = x.bundles[agent];
  return valuations[agent]->value(mine) - vcg_price(swapped, agent, mine, options);
}

std::vector<std::size_t> deviator_first(std::size_t n, std::size_t agent) {
  std::vector<std::size_t> order{agent};
  for (std::size_t k = 0; k < n; ++k) {
    if (k != agent) order.push_back(k);
  }
  return order;
}

std::optional<Builder> parse_builder(const std::string& name) {
  if (name == "cf-os" || name == "cf_os") return Builder::CfOs;
  if (name == "xos") return Builder::Xos;
  return std::nullopt;
}

std::string builder_name(Builder b) { return b == Builder::CfOs ? "cf-os" : "xos"; }

SmoothnessReport certify_relaxed_smooth(const Game& game, const JointDistribution& d, const Rational& lambda,
                                        const Rational& mu1, const Rational& mu2, Builder builder) {
  const std::size_t n = game.num_agents();
  if (d.support.empty() || d.support.size() != d.probs.size()) throw ValidationError("empty distribution");
  BigRational total = 0;
  for (const auto& p : d.probs) {
    if (sgn(p) < 0) throw ValidationError("negative probability");
    total += p;
  }
  if (total != 1) throw ValidationError("probabilities must sum to 1");

  SmoothnessReport rep;
  rep.builder = builder;
  rep.lambda = lambda;
  rep.mu1 = mu1;
  rep.mu2 = mu2;
  rep.deviator_wins_ties = builder == Builder::CfOs;
  const auto vals = game.valuation_view();
  rep.target = winner_determination(vals, game.options().vcg);
  for (std::size_t i = 0; i < n; ++i) rep.opt += vals[i]->value(rep.target.bundles[i]);

  rep.expected_payments = 0;
  rep.expected_bids = 0;
  std::vector<Profile> profiles;
  for (std::size_t s = 0; s < d.support.size(); ++s) {
    profiles.push_back(game.decode(d.support[s]));
    const auto out = game.outcome(profiles.back());
    for (std::size_t i = 0; i < n; ++i) {
      rep.expected_payments += d.probs[s] * to_big(out.payments[i]);
      rep.expected_bids += d.probs[s] * to_big(game.bid(i, profiles.back()[i]).value(out.allocation.bundles[i]));
    }
  }

  rep.lhs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Marginal over the opponents' bids.
    std::map<Profile, BigRational> marginal;
    for (std::size_t s = 0; s < profiles.size(); ++s) {
      Profile key = profiles[s];
      key[i] = 0;
      marginal[key] += d.probs[s];
    }
    VcgOptions options = game.options().vcg;
    ValueFn dev = ValueFn::zero(game.num_items());
    if (builder == Builder::CfOs) {
      std::vector<PriceVector> samples;
      std::vector<BigRational> weights;
      for (const auto& [key, w] : marginal) {
        std::vector<const CompiledFn*> bids(n);
        for (std::size_t k = 0; k < n; ++k) bids[k] = &game.bid(k, key[k]);
        samples.push_back(item_prices(bids, i));
        weights.push_back(w);
      }
      dev = deviation_cf_os(game.valuation(i).fn(), rep.target.bundles[i], samples, weights).bid;
      options.tie_order = deviator_first(n, i);
    } else {
      dev = deviation_xos(game.valuation(i).fn(), rep.target.bundles[i]);
    }
    const CompiledFn cdev(dev);
    BigRational eu = 0;
    for (const auto& [key, w] : marginal) {
      std::vector<const CompiledFn*> bids(n);
      for (std::size_t k = 0; k < n; ++k) bids[k] = &game.bid(k, key[k]);
      eu += w * to_big(deviation_utility(bids, vals, i, cdev, options));
    }
    rep.deviations.push_back(dev);
    rep.deviation_utility.push_back(eu);
    rep.lhs += eu;
  }
  rep.rhs = to_big(lambda) * to_big(rep.opt) - to_big(mu1) * rep.expected_payments - to_big(mu2) * rep.expected_bids;
  rep.pass = rep.lhs >= rep.rhs;
  return rep;
}

ValueFn project_to_additive(const ValueFn& b, ItemSet x) {
  auto a = supporting_additive(b, x);
  if (value(a, x) != value(b, x)) throw ValidationError("bid has no exact additive support on the bundle (not XOS)");
  return a;
}

ReplayCheck replay_projection(BidView bids, std::size_t agent, const VcgOptions& options) {
  const auto x = winner_determination(bids, options);
  const Money paid = vcg_price(bids, agent, x.bundles[agent], options);
  const CompiledFn projected(project_to_additive(bids[agent]->fn(), x.bundles[agent]));
  std::vector<const CompiledFn*> swapped(bids.begin(), bids.end());
  swapped[agent] = &projected;
  const auto y = winner_determination(swapped, options);
  ReplayCheck out;
  out.same_bundle = y.bundles[agent] == x.bundles[agent];
  out.same_payment = vcg_price(swapped, agent, y.bundles[agent], options) == paid;
  return out;
}

std::vector<std::vector<ValueFn>> cf_os_deviation_bids(const Game& game) {
  const std::size_t n = game.num_agents();
  const auto vals = game.valuation_view();
  const auto target = winner_determination(vals, game.options().vcg);
  std::vector<std::vector<ValueFn>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Profile key(n, 0);
    while (true) {
      std::vector<const CompiledFn*> bids(n);
      for (std::size_t k = 0; k < n; ++k) bids[k] = &game.bid(k, key[k]);
      const auto p = item_prices(bids, i);
      const auto& v = game.valuation(i).fn();
      const ItemSet q = target.bundles[i];
      append_unique(out[i], {ValueFn::additive(truncated_prices(v, p, q, maximal_tight_set(v, q, p)))});
      std::size_t k = n;
      bool done = true;
      while (k-- > 0) {
        if (k == i) continue;
        if (++key[k] < game.menu_size(k)) {
          done = false;
          break;
        }
        key[k] = 0;
      }
      if (done) break;
    }
  }
  return out;
}

}  // namespace vcomp
