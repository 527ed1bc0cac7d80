#include "vcomp/equilibria.hpp"

#include <algorithm>
#include <thread>

#include "vcomp/bidlang.hpp"
#include "vcomp/errors.hpp"

namespace vcomp {
namespace {

std::vector<const CompiledFn*> profile_bids(const Game& g, const Profile& p) {
  std::vector<const CompiledFn*> bids(g.num_agents());
  for (std::size_t i = 0; i < bids.size(); ++i) bids[i] = &g.bid(i, p[i]);
  return bids;
}

/// Utility of agent i alone; skips the other agents' payments.
Rational agent_utility(const Game& g, const std::vector<const CompiledFn*>& bids, std::size_t i) {
  const auto alloc = winner_determination(bids, g.options().vcg);
  const ItemSet x = alloc.bundles[i];
  return g.valuation(i).value(x) - vcg_price(bids, i, x, g.options().vcg);
}

std::string plain_set(ItemSet s) {
  std::vector<std::string> names;
  for (unsigned j = 0; j < ItemSet::kMaxItems; ++j) names.push_back(std::to_string(j));
  return render_set(s, names);
}

}  // namespace

Game::Game(std::vector<ValueFn> valuations, std::vector<std::vector<ValueFn>> menus, GameOptions options)
    : options_(std::move(options)) {
  if (valuations.empty()) throw ValidationError("a game needs at least one agent");
  if (menus.size() != valuations.size()) throw ValidationError("one menu per agent required");
  const unsigned m = valuations.front().num_items();
  for (std::size_t i = 0; i < valuations.size(); ++i) {
    if (valuations[i].num_items() != m) throw ValidationError("valuations over different item universes");
    valuations_.emplace_back(valuations[i]);
    if (!valuations_.back().has_table()) throw SizeGuardError("menu conservativeness check needs m <= 20");
  }
  for (std::size_t i = 0; i < menus.size(); ++i) {
    if (menus[i].empty()) throw ValidationError("agent " + std::to_string(i) + " has an empty menu");
    auto& row = menus_.emplace_back();
    const auto v = valuations_[i].table();
    for (std::size_t k = 0; k < menus[i].size(); ++k) {
      if (menus[i][k].num_items() != m) throw ValidationError("menu bid over a different item universe");
      const auto& b = row.emplace_back(menus[i][k]);
      const auto t = b.table();
      for (std::uint64_t s = 0; s < t.size(); ++s) {
        if (t[s] > v[s]) {
          throw ValidationError("agent " + std::to_string(i) + " menu entry " + std::to_string(k) +
                                " is not conservative on bundle " + plain_set(ItemSet{s}) + ": bid " +
                                t[s].to_decimal_or_fraction() + " > value " + v[s].to_decimal_or_fraction());
        }
      }
    }
  }
}

std::uint64_t Game::num_profiles() const {
  std::uint64_t total = 1;
  for (const auto& menu : menus_) {
    if (total > UINT64_MAX / menu.size()) return UINT64_MAX;
    total *= menu.size();
  }
  return total;
}

std::uint64_t Game::encode(const Profile& p) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < menus_.size(); ++i) {
    if (p.at(i) >= menus_[i].size()) throw ValidationError("profile entry outside the menu");
    idx = idx * menus_[i].size() + p[i];
  }
  return idx;
}

Profile Game::decode(std::uint64_t index) const {
  Profile p(menus_.size());
  for (std::size_t i = menus_.size(); i-- > 0;) {
    p[i] = index % menus_[i].size();
    index /= menus_[i].size();
  }
  return p;
}

Outcome Game::outcome(const Profile& p) const {
  return vcg_outcome(profile_bids(*this, p), valuation_view(), options_.vcg);
}

Money Game::optimal_welfare() const { return max_welfare(valuation_view(), options_.vcg); }

GameTable::GameTable(const Game& game) : game_(&game), n_(game.num_agents()) {
  const std::uint64_t total = game.num_profiles();
  if (total > game.options().max_profiles) {
    throw SizeGuardError("menu product of " + std::to_string(total) + " profiles exceeds the cap of " +
                         std::to_string(game.options().max_profiles));
  }
  stride_.assign(n_, 1);
  for (std::size_t i = n_ - 1; i-- > 0;) stride_[i] = stride_[i + 1] * game.menu_size(i + 1);
  utility_.resize(total * n_);
  welfare_.resize(total);

  auto fill = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto out = game.outcome(game.decode(idx));
      for (std::size_t i = 0; i < n_; ++i) utility_[idx * n_ + i] = out.utilities[i];
      welfare_[idx] = out.welfare;
    }
  };
  const unsigned jobs = std::max(1u, game.options().jobs);
  if (jobs == 1 || total < 2 * jobs) {
    fill(0, total);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  const std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      try {
        fill(std::min(total, w * chunk), std::min(total, (w + 1) * chunk));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t GameTable::coordinate(std::uint64_t profile, std::size_t agent) const {
  return static_cast<std::size_t>((profile / stride_[agent]) % game_->menu_size(agent));
}

std::uint64_t GameTable::with_bid(std::uint64_t profile, std::size_t agent, std::size_t k) const {
  return profile - coordinate(profile, agent) * stride_[agent] + k * stride_[agent];
}

PneCheck is_pne(const Game& game, const Profile& profile) {
  PneCheck out;
  const std::size_t n = game.num_agents();
  out.best_deviation.assign(n, std::nullopt);
  out.gain.assign(n, Rational{});
  auto bids = profile_bids(game, profile);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational current = agent_utility(game, bids, i);
    Rational best = current;
    for (std::size_t k = 0; k < game.menu_size(i); ++k) {
      if (k == profile[i]) continue;
      bids[i] = &game.bid(i, k);
      const Rational u = agent_utility(game, bids, i);
      if (u > best) {
        best = u;
        out.best_deviation[i] = k;
      }
    }
    bids[i] = &game.bid(i, profile[i]);
    out.gain[i] = best - current;
    if (out.best_deviation[i]) out.is_pne = false;
  }
  return out;
}

PneCheck is_pne(const GameTable& table, std::uint64_t profile) {
  const Game& game = table.game();
  PneCheck out;
  const std::size_t n = game.num_agents();
  out.best_deviation.assign(n, std::nullopt);
  out.gain.assign(n, Rational{});
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& current = table.utility(i, profile);
    Rational best = current;
    for (std::size_t k = 0; k < game.menu_size(i); ++k) {
      const Rational& u = table.utility(i, table.with_bid(profile, i, k));
      if (u > best) {
        best = u;
        out.best_deviation[i] = k;
      }
    }
    out.gain[i] = best - current;
    if (out.best_deviation[i]) out.is_pne = false;
  }
  return out;
}

std::vector<std::uint64_t> enumerate_pne(const GameTable& table) {
  const Game& game = table.game();
  const std::uint64_t total = table.size();
  std::vector<char> candidate(total, 1);
  std::vector<Rational> best;
  std::vector<char> seen;
  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    best.assign(total, Rational{});
    seen.assign(total, 0);
    for (std::uint64_t b = 0; b < total; ++b) {
      const std::uint64_t key = table.with_bid(b, i, 0);
      const Rational& u = table.utility(i, b);
      if (!seen[key] || u > best[key]) {
        best[key] = u;
        seen[key] = 1;
      }
    }
    for (std::uint64_t b = 0; b < total; ++b) {
      if (candidate[b] && table.utility(i, b) < best[table.with_bid(b, i, 0)]) candidate[b] = 0;
    }
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < total; ++b) {
    if (candidate[b]) out.push_back(b);
  }
  return out;
}

BigRational cce_violation(const GameTable& table, const JointDistribution& d) {
  const Game& game = table.game();
  std::optional<BigRational> worst;
  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    for (std::size_t k = 0; k < game.menu_size(i); ++k) {
      BigRational gain = 0;
      for (std::size_t s = 0; s < d.support.size(); ++s) {
        const std::uint64_t b = d.support[s];
        gain += d.probs[s] * to_big(table.utility(i, table.with_bid(b, i, k)) - table.utility(i, b));
      }
      if (!worst || gain > *worst) worst = gain;
    }
  }
  return *worst;
}

BigRational expected_welfare(const GameTable& table, const JointDistribution& d) {
  BigRational total = 0;
  for (std::size_t s = 0; s < d.support.size(); ++s) total += d.probs[s] * to_big(table.welfare(d.support[s]));
  return total;
}

PoaReport poa_pne(const GameTable& table) {
  PoaReport report;
  report.opt_welfare = table.game().optimal_welfare();
  const auto pne = enumerate_pne(table);
  report.equilibrium_count = pne.size();
  for (auto b : pne) {
    const BigRational w = to_big(table.welfare(b));
    if (!report.worst_welfare || w < *report.worst_welfare) {
      report.worst_welfare = w;
      report.witness_profile = b;
    }
  }
  if (report.worst_welfare && sgn(*report.worst_welfare) > 0) {
    report.ratio = BigRational(to_big(report.opt_welfare) / *report.worst_welfare);
  }
  return report;
}

PoaReport cce_worst_welfare(const GameTable& table, lp::Problem* problem_out) {
  const Game& game = table.game();
  const std::uint64_t total = table.size();
  lp::Problem p;
  p.num_vars = total;
  p.objective.resize(total);
  for (std::uint64_t b = 0; b < total; ++b) p.objective[b] = to_big(table.welfare(b));
  p.var_names.resize(total);
  for (std::uint64_t b = 0; b < total; ++b) {
    std::string name = "x";
    for (auto k : game.decode(b)) name += "_" + std::to_string(k);
    p.var_names[b] = std::move(name);
  }
  lp::Constraint simplex;
  simplex.coeffs.assign(total, 1);
  simplex.sense = lp::Sense::Equal;
  simplex.rhs = 1;
  simplex.name = "total";
  p.rows.push_back(std::move(simplex));
  for (std::size_t i = 0; i < game.num_agents(); ++i) {
    for (std::size_t k = 0; k < game.menu_size(i); ++k) {
      lp::Constraint row;
      row.coeffs.resize(total);
      bool nonzero = false;
      for (std::uint64_t b = 0; b < total; ++b) {
        row.coeffs[b] = to_big(table.utility(i, table.with_bid(b, i, k)) - table.utility(i, b));
        if (sgn(row.coeffs[b]) != 0) nonzero = true;
      }
      if (!nonzero) continue;
      row.sense = lp::Sense::LessEqual;
      row.rhs = 0;
      row.name = "dev_" + std::to_string(i) + "_" + std::to_string(k);
      p.rows.push_back(std::move(row));
    }
  }
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal) throw InternalError("CCE LP must be feasible and bounded");

  PoaReport report;
  report.opt_welfare = game.optimal_welfare();
  report.certificate = lp::verify(p, sol);
  JointDistribution d;
  for (std::uint64_t b = 0; b < total; ++b) {
    if (sgn(sol.x[b]) != 0) {
      d.support.push_back(b);
      d.probs.push_back(sol.x[b]);
    }
  }
  report.worst_welfare = sol.objective;
  if (sgn(sol.objective) > 0) report.ratio = BigRational(to_big(report.opt_welfare) / sol.objective);
  report.witness_distribution = std::move(d);
  if (problem_out) *problem_out = std::move(p);
  return report;
}

std::vector<ValueFn> additive_grid_menu(const ValueFn& valuation, const Rational& delta, std::size_t cap) {
  if (!(delta > Rational{})) throw ValidationError("grid step must be positive");
  const unsigned m = valuation.num_items();
  const auto v = to_table(valuation);
  std::vector<std::vector<Money>> levels(m);
  for (ItemIndex j = 0; j < m; ++j) {
    for (Money x; x <= v[ItemSet::single(j).bits()]; x += delta) levels[j].push_back(x);
  }
  std::vector<ValueFn> out;
  std::vector<std::size_t> digit(m, 0);
  std::vector<Money> a(std::size_t{1} << m);
  std::size_t examined = 0;
  while (true) {
    if (++examined > cap) throw SizeGuardError("additive grid exceeds the candidate cap");
    bool ok = true;
    for (std::uint64_t s = 1; s < a.size() && ok; ++s) {
      const unsigned low = static_cast<unsigned>(__builtin_ctzll(s));
      a[s] = a[s & (s - 1)] + levels[low][digit[low]];
      ok = a[s] <= v[s];
    }
    if (ok) {
      std::vector<Money> w(m);
      for (ItemIndex j = 0; j < m; ++j) w[j] = levels[j][digit[j]];
      out.push_back(ValueFn::additive(std::move(w)));
    }
    // Odometer with the last item fastest.
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++digit[j] < levels[j].size()) break;
      digit[j] = 0;
      if (j == 0) return out;
    }
    if (m == 0) return out;
  }
}

void append_unique(std::vector<ValueFn>& menu, const std::vector<ValueFn>& extra) {
  for (const auto& b : extra) {
    if (std::find(menu.begin(), menu.end(), b) == menu.end()) menu.push_back(b);
  }
}

}  // namespace vcomp
