#include "report.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "vcomp/bidlang.hpp"

namespace vcomp::report {

Json number(const Rational& r) { return Json{{"exact", r.to_string()}, {"approx", r.to_double()}}; }

Json number(const BigRational& r) { return Json{{"exact", to_string(r)}, {"approx", r.get_d()}}; }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

Json outcome(const Outcome& o, const Names& names) {
  Json agents = Json::array();
  for (std::size_t i = 0; i < o.allocation.bundles.size(); ++i) {
    agents.push_back({{"agent", names.agents[i]},
                      {"bundle", render_set(o.allocation.bundles[i], names.items)},
                      {"payment", number(o.payments[i])},
                      {"utility", number(o.utilities[i])}});
  }
  return Json{{"agents", agents}, {"welfare", number(o.welfare)}, {"bid_welfare", number(o.bid_welfare)}};
}

Json profile(const Game& game, const Profile& p, const Names& names) {
  Json out = Json::array();
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.push_back({{"agent", names.agents[i]},
                   {"menu_index", p[i]},
                   {"bid", render_expr(game.bid(i, p[i]).fn(), names.items)}});
  }
  return out;
}

Json distribution(const Game& game, const JointDistribution& d, const Names& names) {
  Json out = Json::array();
  for (std::size_t s = 0; s < d.support.size(); ++s) {
    out.push_back({{"probability", number(d.probs[s])}, {"profile", profile(game, game.decode(d.support[s]), names)}});
  }
  return out;
}

Json poa(const Game& game, const PoaReport& r, const Names& names, bool cce) {
  Json out{{"opt_welfare", number(r.opt_welfare)},
           {"worst_welfare", r.worst_welfare ? number(*r.worst_welfare) : Json()},
           {"ratio", r.ratio ? number(*r.ratio) : Json()}};
  if (cce) {
    out["certificate"] = {{"primal_feasible", r.certificate.primal_feasible},
                          {"dual_feasible", r.certificate.dual_feasible},
                          {"complementary_slackness", r.certificate.complementary_slackness},
                          {"objective_matches", r.certificate.objective_matches}};
    if (r.witness_distribution) out["witness"] = distribution(game, *r.witness_distribution, names);
  } else {
    out["equilibrium_count"] = r.equilibrium_count;
    if (r.witness_profile) out["witness"] = profile(game, game.decode(*r.witness_profile), names);
  }
  return out;
}

Json smoothness(const SmoothnessReport& r, const Names& names) {
  Json agents = Json::array();
  for (std::size_t i = 0; i < r.deviations.size(); ++i) {
    agents.push_back({{"agent", names.agents[i]},
                      {"target_bundle", render_set(r.target.bundles[i], names.items)},
                      {"deviation", render_expr(r.deviations[i], names.items)},
                      {"expected_utility", number(r.deviation_utility[i])}});
  }
  return Json{{"builder", builder_name(r.builder)},
              {"lambda", number(r.lambda)},
              {"mu1", number(r.mu1)},
              {"mu2", number(r.mu2)},
              {"opt_welfare", number(r.opt)},
              {"expected_payments", number(r.expected_payments)},
              {"expected_bids", number(r.expected_bids)},
              {"lhs", number(r.lhs)},
              {"rhs", number(r.rhs)},
              {"slack", number(BigRational(r.lhs - r.rhs))},
              {"deviator_wins_ties", r.deviator_wins_ties},
              {"agents", agents},
              {"pass", r.pass}};
}

Json hedge(const Game& game, const RegretTrace& trace, const Theorem3Check& check, const EmpiricalCce& empirical) {
  Json agents = Json::array();
  const BigRational T(static_cast<long>(trace.rounds));
  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    const double vm = game.valuation(i).value(ItemSet::full(game.num_items())).to_double();
    const double bound = hedge_regret_bound(game.menu_size(i), trace.rounds, trace.rates[i], vm);
    const BigRational avg = to_big(trace.regret(i)) / T;
    agents.push_back({{"menu_size", game.menu_size(i)},
                      {"rate", trace.rates[i]},
                      {"regret", number(trace.regret(i))},
                      {"average_regret", number(avg)},
                      {"average_regret_bound", bound},
                      {"within_bound", avg.get_d() <= bound},
                      {"best_fixed_menu_index", trace.best_fixed_bid[i]}});
  }
  return Json{{"rounds", trace.rounds},
              {"seed", trace.seed},
              {"agents", agents},
              {"average_welfare", number(check.average_welfare)},
              {"average_regret_sum", number(check.average_regret_sum)},
              {"welfare_bound", number(check.bound)},
              {"slack", number(check.slack)},
              {"holds", check.holds},
              {"empirical_support", empirical.distribution.support.size()},
              {"empirical_cce_violation", number(empirical.violation)}};
}

}  // namespace vcomp::report
