#include "vcomp/learning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "vcomp/errors.hpp"
#include "vcomp/random.hpp"

namespace vcomp {

BigRational RegretTrace::average_welfare() const {
  BigRational total = 0;
  for (const auto& w : welfare) total += to_big(w);
  return total / BigRational(static_cast<long>(rounds));
}

RegretTrace run_hedge(const GameTable& table, const HedgeConfig& config) {
  const Game& game = table.game();
  const std::size_t n = game.num_agents();
  if (config.rounds == 0) throw ValidationError("need at least one round");
  SplitMix64 rng(config.seed);

  RegretTrace trace;
  trace.rounds = config.rounds;
  trace.seed = config.seed;
  trace.realized.assign(n, Rational{});
  trace.best_fixed.assign(n, Rational{});
  trace.best_fixed_bid.assign(n, 0);
  trace.profiles.reserve(config.rounds);
  trace.welfare.reserve(config.rounds);
  trace.regret_prefix.reserve(config.rounds * n);

  std::vector<double> scale(n);
  std::vector<std::vector<double>> score(n);
  std::vector<std::vector<Rational>> cumulative(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = game.menu_size(i);
    const double vm = game.valuation(i).value(ItemSet::full(game.num_items())).to_double();
    scale[i] = vm > 0 ? vm : 1.0;
    score[i].assign(k, 0.0);
    cumulative[i].assign(k, Rational{});
    trace.rates.push_back(config.rate ? *config.rate
                                      : std::sqrt(8.0 * std::log(static_cast<double>(k)) / static_cast<double>(config.rounds)));
  }

  std::vector<double> weight;
  Profile profile(n);
  for (std::uint64_t t = 0; t < config.rounds; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& s = score[i];
      const double top = *std::max_element(s.begin(), s.end());
      weight.resize(s.size());
      double total = 0;
      for (std::size_t k = 0; k < s.size(); ++k) total += weight[k] = std::exp(trace.rates[i] * (s[k] - top));
      double x = rng.uniform() * total;
      std::size_t pick = s.size() - 1;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (x < weight[k]) {
          pick = k;
          break;
        }
        x -= weight[k];
      }
      profile[i] = pick;
    }
    const std::uint64_t b = game.encode(profile);
    trace.profiles.push_back(b);
    trace.welfare.push_back(table.welfare(b));
    for (std::size_t i = 0; i < n; ++i) {
      trace.realized[i] += table.utility(i, b);
      Rational best;
      std::size_t best_k = 0;
      for (std::size_t k = 0; k < game.menu_size(i); ++k) {
        const Rational& u = table.utility(i, table.with_bid(b, i, k));
        cumulative[i][k] += u;
        score[i][k] += u.to_double() / scale[i];
        if (k == 0 || cumulative[i][k] > best) {
          best = cumulative[i][k];
          best_k = k;
        }
      }
      trace.best_fixed[i] = best;
      trace.best_fixed_bid[i] = best_k;
      trace.regret_prefix.push_back(best - trace.realized[i]);
    }
  }
  return trace;
}

double hedge_regret_bound(std::size_t menu_size, std::uint64_t rounds, double rate, double scale, double delta) {
  const double T = static_cast<double>(rounds);
  const double azuma = std::sqrt(2.0 * std::log(1.0 / delta) / T);
  if (menu_size <= 1) return azuma * scale;
  return (std::log(static_cast<double>(menu_size)) / (rate * T) + rate / 8.0 + azuma) * scale;
}

EmpiricalCce empirical_distribution(const GameTable& table, const RegretTrace& trace) {
  std::vector<std::uint64_t> sorted = trace.profiles;
  std::sort(sorted.begin(), sorted.end());
  EmpiricalCce out;
  const BigRational T(static_cast<long>(trace.rounds));
  for (std::size_t k = 0; k < sorted.size();) {
    std::size_t e = k;
    while (e < sorted.size() && sorted[e] == sorted[k]) ++e;
    out.distribution.support.push_back(sorted[k]);
    out.distribution.probs.push_back(BigRational(static_cast<long>(e - k)) / T);
    k = e;
  }
  out.violation = cce_violation(table, out.distribution);
  return out;
}

Theorem3Check check_theorem3(const RegretTrace& trace, const Money& opt, const Rational& lambda, const Rational& mu1,
                             const Rational& mu2) {
  Theorem3Check out;
  out.average_welfare = trace.average_welfare();
  BigRational regret_sum = 0;
  for (std::size_t i = 0; i < trace.realized.size(); ++i) regret_sum += to_big(trace.regret(i));
  out.average_regret_sum = regret_sum / BigRational(static_cast<long>(trace.rounds));
  const Rational denom = max(mu1, Rational(1)) + mu2;
  out.bound = to_big(lambda / denom) * to_big(opt) - out.average_regret_sum;
  out.slack = out.average_welfare - out.bound;
  out.holds = sgn(out.slack) >= 0;
  return out;
}

void write_trace_csv(std::ostream& os, const GameTable& table, const RegretTrace& trace) {
  const Game& game = table.game();
  const std::size_t n = game.num_agents();
  os << "round,profile,welfare";
  for (std::size_t i = 0; i < n; ++i) os << ",regret_" << (i + 1);
  os << "\n";
  char buf[64];
  for (std::uint64_t t = 0; t < trace.rounds; ++t) {
    os << (t + 1) << ",";
    const auto p = game.decode(trace.profiles[t]);
    for (std::size_t i = 0; i < n; ++i) os << (i ? "-" : "") << p[i];
    std::snprintf(buf, sizeof buf, "%.10g", trace.welfare[t].to_double());
    os << "," << buf;
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.10g", trace.regret_prefix[t * n + i].to_double());
      os << "," << buf;
    }
    os << "\n";
  }
}

}  // namespace vcomp
