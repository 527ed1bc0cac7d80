// vcomp: command-line front end.
//
// Exit status: 0 success, 2 a checked property failed, 1 usage, parse or
// validation error (JSON object on stderr).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "report.hpp"
#include "vcomp/bidlang.hpp"
#include "vcomp/classes.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/instances.hpp"

using namespace vcomp;
using report::Json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kPropertyFailed = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string command;
  std::vector<std::string> instances;
  std::string grid;  // "", "auto" or a number
  bool inject = false;
  std::uint64_t allocation_budget = VcgOptions{}.allocation_budget;
  std::uint64_t max_profiles = GameOptions{}.max_profiles;
  unsigned jobs = 1;
  std::string format = "json";
  std::string profile;
  bool truthful = false;
  std::size_t limit = 100;
  std::uint64_t rounds = 10'000;
  std::uint64_t seed = 42;
  std::optional<double> rate;
  std::string lambda = "1/2", mu1 = "0", mu2 = "1";
  std::string builder = "cf-os";
  std::string distribution = "cce";
  std::string trace_path;
  std::string lp_path;
  std::string fixture;
  std::string epsilon = "0.01";
  std::string weights = "1,1,2,1,1,2";
  std::string scale = "1";
  std::string output;

  [[nodiscard]] Json to_json() const {
    Json j{{"command", command}, {"instances", instances}, {"allocation_budget", allocation_budget},
           {"max_profiles", max_profiles}};
    if (!grid.empty()) j["grid"] = grid;
    if (command == "solve") j["profile"] = truthful ? "truthful" : profile;
    if (command == "pne") j["limit"] = limit;
    if (command == "learn" || command == "smooth") j["inject"] = inject;
    if (command == "learn") {
      j["rounds"] = rounds;
      j["seed"] = seed;
      j["rate"] = rate ? Json(*rate) : Json();
    }
    if (command == "learn" || command == "smooth") {
      j["lambda"] = lambda;
      j["mu1"] = mu1;
      j["mu2"] = mu2;
    }
    if (command == "smooth") {
      j["builder"] = builder;
      j["distribution"] = profile.empty() ? distribution : "profile " + profile;
    }
    return j;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rational parse_number(const std::string& text, const char* what) {
  try {
    return Rational::parse(text);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + ": " + text);
  }
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError("bad index list: " + text);
    }
  }
  return out;
}

struct Loaded {
  std::string path;
  std::string hash;
  InstanceFile file;
  report::Names names;
  std::optional<Game> game;
};

Loaded load(const std::string& path, const Config& cfg, bool need_menus) {
  Loaded l;
  l.path = path;
  const std::string text = read_file(path);
  l.hash = report::sha256_hex(text);
  l.file = parse_instance(text);
  l.names.items = l.file.items;
  for (const auto& a : l.file.agents) l.names.agents.push_back(a.name);
  if (!need_menus) return l;

  auto vals = valuations_of(l.file);
  auto menus = menus_of(l.file);
  if (!cfg.grid.empty()) {
    Money delta;
    if (cfg.grid == "auto") {
      for (const auto& v : vals) delta = max(delta, value(v, ItemSet::full(v.num_items())));
      delta = delta / Money(4);
    } else {
      delta = parse_number(cfg.grid, "grid step");
    }
    if (delta <= Money(0)) throw UsageError("grid step must be positive");
    for (std::size_t i = 0; i < vals.size(); ++i) menus[i] = additive_grid_menu(vals[i], delta);
  }
  for (std::size_t i = 0; i < menus.size(); ++i) {
    if (menus[i].empty()) throw UsageError("agent " + l.names.agents[i] + " has no menu; pass --grid");
  }
  GameOptions options;
  options.vcg.allocation_budget = cfg.allocation_budget;
  options.max_profiles = cfg.max_profiles;
  options.jobs = cfg.jobs;
  if (cfg.inject) {
    const Game base(vals, menus, options);
    auto extra = cf_os_deviation_bids(base);
    for (std::size_t i = 0; i < menus.size(); ++i) append_unique(menus[i], extra[i]);
  }
  l.game.emplace(std::move(vals), std::move(menus), options);
  return l;
}

Json envelope(const Config& cfg, const Loaded& l) {
  return Json{{"instance", {{"path", l.path}, {"sha256", l.hash}}}, {"config", cfg.to_json()}};
}

struct RunResult {
  Json json;
  bool property_ok = true;
};

RunResult run_eval(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, false);
  Json out = envelope(cfg, l);
  Json agents = Json::array();
  for (const auto& a : l.file.agents) {
    const unsigned m = a.valuation.num_items();
    Json entry{{"agent", a.name}, {"valuation", render_expr(a.valuation, l.names.items)}};
    if (m <= kMaxTableItems) {
      const auto cls = check_class(a.valuation);
      entry["subadditive"] = cls.is_subadditive;
      entry["beta"] = cls.xos_factor_beta ? report::number(*cls.xos_factor_beta) : Json("infinite");
      Json table = Json::array();
      const auto values = to_table(a.valuation);
      for (std::uint64_t s = 0; s < values.size(); ++s) {
        table.push_back({{"bundle", render_set(ItemSet{s}, l.names.items)}, {"value", report::number(values[s])}});
      }
      entry["values"] = table;
    }
    entry["menu_size"] = a.menu.size();
    agents.push_back(entry);
  }
  out["agents"] = agents;
  return {out};
}

RunResult run_solve(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, !cfg.truthful);
  Json out = envelope(cfg, l);
  VcgOptions options;
  options.allocation_budget = cfg.allocation_budget;
  const auto vals = valuations_of(l.file);
  if (cfg.truthful) {
    out["outcome"] = report::outcome(vcg_outcome(vals, vals, options), l.names);
    return {out};
  }
  const Game& g = *l.game;
  Profile p = cfg.profile.empty() ? Profile(g.num_agents(), 0) : parse_indices(cfg.profile);
  if (p.size() != g.num_agents()) throw UsageError("--profile needs one menu index per agent");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] >= g.menu_size(i)) throw UsageError("menu index out of range for agent " + l.names.agents[i]);
  }
  out["profile"] = report::profile(g, p, l.names);
  out["outcome"] = report::outcome(g.outcome(p), l.names);
  return {out};
}

RunResult run_pne(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, true);
  const Game& g = *l.game;
  const GameTable table(g);
  const auto pne = enumerate_pne(table);
  Json out = envelope(cfg, l);
  out["menu_sizes"] = Json::array();
  for (std::size_t i = 0; i < g.num_agents(); ++i) out["menu_sizes"].push_back(g.menu_size(i));
  out["count"] = pne.size();
  Json list = Json::array();
  for (std::size_t k = 0; k < pne.size() && k < cfg.limit; ++k) {
    list.push_back({{"profile", report::profile(g, g.decode(pne[k]), l.names)},
                    {"welfare", report::number(table.welfare(pne[k]))}});
  }
  out["equilibria"] = list;
  out["truncated"] = pne.size() > cfg.limit;
  return {out};
}

RunResult run_poa(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, true);
  const GameTable table(*l.game);
  Json out = envelope(cfg, l);
  out["poa"] = report::poa(*l.game, poa_pne(table), l.names, false);
  return {out};
}

RunResult run_cce(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, true);
  const GameTable table(*l.game);
  lp::Problem problem;
  const auto rep = cce_worst_welfare(table, cfg.lp_path.empty() ? nullptr : &problem);
  if (!cfg.lp_path.empty()) {
    std::ofstream os(cfg.lp_path);
    if (!os) throw UsageError("cannot write " + cfg.lp_path);
    lp::write_text(os, problem);
  }
  Json out = envelope(cfg, l);
  out["cce"] = report::poa(*l.game, rep, l.names, true);
  return {out, rep.certificate.ok()};
}

RunResult run_learn(const Config& cfg, const std::string& path) {
  auto l = load(path, cfg, true);
  const Game& g = *l.game;
  const GameTable table(g);
  HedgeConfig hc;
  hc.rounds = cfg.rounds;
  hc.seed = cfg.seed;
  hc.rate = cfg.rate;
  const auto trace = run_hedge(table, hc);
  if (!cfg.trace_path.empty()) {
    std::ofstream os(cfg.trace_path);
    if (!os) throw UsageError("cannot write " + cfg.trace_path);
    write_trace_csv(os, table, trace);
  }
  const auto check = check_theorem3(trace, g.optimal_welfare(), parse_number(cfg.lambda, "lambda"),
                                    parse_number(cfg.mu1, "mu1"), parse_number(cfg.mu2, "mu2"));
  const auto empirical = empirical_distribution(table, trace);
  Json out = envelope(cfg, l);
  out["opt_welfare"] = report::number(g.optimal_welfare());
  out["learning"] = report::hedge(g, trace, check, empirical);
  bool ok = check.holds;
  for (const auto& a : out["learning"]["agents"]) ok = ok && a["within_bound"].get<bool>();
  out["pass"] = ok;
  return {out, ok};
}

RunResult run_smooth(const Config& cfg, const std::string& path) {
  const auto builder = parse_builder(cfg.builder);
  if (!builder) throw UsageError("--builder must be cf-os or xos");
  auto l = load(path, cfg, true);
  const Game& g = *l.game;
  const Rational lambda = parse_number(cfg.lambda, "lambda");
  const Rational mu1 = parse_number(cfg.mu1, "mu1");
  const Rational mu2 = parse_number(cfg.mu2, "mu2");
  std::vector<JointDistribution> dists;
  if (!cfg.profile.empty()) {
    const auto p = parse_indices(cfg.profile);
    if (p.size() != g.num_agents()) throw UsageError("--profile needs one menu index per agent");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] >= g.menu_size(i)) throw UsageError("menu index out of range for agent " + l.names.agents[i]);
    }
    dists.push_back({{g.encode(p)}, {BigRational(1)}});
  } else if (cfg.distribution == "pne") {
    for (auto idx : enumerate_pne(GameTable(g))) dists.push_back({{idx}, {BigRational(1)}});
  } else if (cfg.distribution == "cce") {
    const auto rep = cce_worst_welfare(GameTable(g));
    if (!rep.witness_distribution) throw InternalError("CCE LP returned no distribution");
    dists.push_back(*rep.witness_distribution);
  } else {
    throw UsageError("--distribution must be cce or pne");
  }
  Json out = envelope(cfg, l);
  Json certs = Json::array();
  bool ok = true;
  for (const auto& d : dists) {
    const auto rep = certify_relaxed_smooth(g, d, lambda, mu1, mu2, *builder);
    Json c = report::smoothness(rep, l.names);
    c["distribution"] = report::distribution(g, d, l.names);
    certs.push_back(c);
    ok = ok && rep.pass;
  }
  out["certificates"] = certs;
  out["pass"] = ok;
  return {out, ok};
}

using Runner = RunResult (*)(const Config&, const std::string&);

/// Runs every instance, in parallel when --jobs > 1; output order follows the arguments.
RunResult run_all(const Config& cfg, Runner runner) {
  if (cfg.instances.size() == 1) return runner(cfg, cfg.instances.front());
  std::vector<RunResult> results(cfg.instances.size());
  std::vector<std::exception_ptr> errors(cfg.instances.size());
  Config single = cfg;
  single.jobs = 1;
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cfg.instances.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < cfg.instances.size(); k += workers) {
        try {
          results[k] = runner(single, cfg.instances[k]);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RunResult all;
  all.json = Json{{"runs", Json::array()}};
  for (auto& r : results) {
    all.json["runs"].push_back(std::move(r.json));
    all.property_ok = all.property_ok && r.property_ok;
  }
  return all;
}

std::string fixture_text(const Config& cfg) {
  if (cfg.fixture == "theorem4") {
    const Rational eps = parse_number(cfg.epsilon, "epsilon");
    return render_instance(theorem4_instance(eps));
  }
  if (cfg.fixture == "three-partition") {
    std::vector<std::int64_t> w;
    for (auto x : parse_indices(cfg.weights)) w.push_back(static_cast<std::int64_t>(x));
    return render_instance(three_partition_instance(w).file);
  }
  if (cfg.fixture == "gadget") return render_instance(pne_gap_gadget(parse_number(cfg.scale, "B")));
  if (cfg.fixture == "ratio2") return render_instance(ratio_two_instance());
  throw UsageError("unknown fixture " + cfg.fixture + " (theorem4, three-partition, gadget, ratio2)");
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.output, std::ios::binary);
  if (!os) throw UsageError("cannot write " + cfg.output);
  os << text;
}

int fail(const char* kind, const std::string& message, std::optional<std::pair<unsigned, unsigned>> where = {}) {
  Json err{{"error", {{"kind", kind}, {"message", message}}}};
  if (where) {
    err["error"]["line"] = where->first;
    err["error"]["column"] = where->second;
  }
  std::cerr << err.dump() << "\n";
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Combinatorial auctions with compressed bids: VCG outcomes, equilibria, learning"};
  app.require_subcommand(1);
  Config cfg;

  auto add_instances = [&](CLI::App* sub, bool many) {
    if (many) {
      sub->add_option("instances", cfg.instances, ".auc instance files")->required()->check(CLI::ExistingFile);
    } else {
      sub->add_option("instance", cfg.instances, ".auc instance file")->required()->expected(1)->check(CLI::ExistingFile);
    }
    sub->add_option("--allocation-budget", cfg.allocation_budget, "largest enumerated assignment count")
        ->check(CLI::PositiveNumber);
  };
  auto add_game = [&](CLI::App* sub) {
    sub->add_option("--grid", cfg.grid, "replace menus by additive grid bids of this step ('auto' = max v(M)/4)");
    sub->add_option("--max-profiles", cfg.max_profiles, "largest menu product")->check(CLI::PositiveNumber);
    sub->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  };

  auto* eval = app.add_subcommand("eval", "value tables and class report per agent");
  add_instances(eval, false);
  auto* solve = app.add_subcommand("solve", "VCG outcome for one menu profile");
  add_instances(solve, false);
  add_game(solve);
  solve->add_option("--profile", cfg.profile, "menu index per agent, e.g. 0,2 (default all 0)");
  solve->add_flag("--truthful", cfg.truthful, "bid the valuations instead of menu entries");
  auto* pne = app.add_subcommand("pne", "enumerate pure Nash equilibria over the menus");
  add_instances(pne, true);
  add_game(pne);
  pne->add_option("--limit", cfg.limit, "largest number of equilibria listed");
  auto* poa = app.add_subcommand("poa", "price of anarchy over menu PNE");
  add_instances(poa, true);
  add_game(poa);
  auto* cce = app.add_subcommand("cce", "worst-welfare coarse correlated equilibrium by exact LP");
  add_instances(cce, true);
  add_game(cce);
  cce->add_option("--lp-out", cfg.lp_path, "write the LP in plain text");
  auto* learn = app.add_subcommand("learn", "multiplicative-weights dynamics and the welfare bound");
  add_instances(learn, false);
  add_game(learn);
  learn->add_option("--rounds", cfg.rounds, "rounds T")->check(CLI::PositiveNumber);
  learn->add_option("--seed", cfg.seed, "PRNG seed");
  learn->add_option("--rate", cfg.rate, "learning rate on normalized payoffs");
  learn->add_option("--trace", cfg.trace_path, "write the per-round trace as CSV");
  learn->add_flag("--inject", cfg.inject, "add truncated-price deviations to additive menus");
  auto* smooth = app.add_subcommand("smooth", "relaxed smoothness certificate for a distribution");
  add_instances(smooth, false);
  add_game(smooth);
  smooth->add_option("--builder", cfg.builder, "deviation builder: cf-os or xos");
  smooth->add_option("--distribution", cfg.distribution, "cce (worst CCE) or pne (every PNE point mass)");
  smooth->add_option("--profile", cfg.profile, "point mass on this menu profile");
  smooth->add_flag("--inject", cfg.inject, "add truncated-price deviations to additive menus");
  for (auto* sub : {learn, smooth}) {
    sub->add_option("--lambda", cfg.lambda, "lambda");
    sub->add_option("--mu1", cfg.mu1, "mu1");
    sub->add_option("--mu2", cfg.mu2, "mu2");
  }
  for (auto* sub : {eval, solve, pne, poa, cce, learn, smooth}) {
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  }
  learn->get_option("--format")->check(CLI::IsMember({"json", "text", "csv"}));
  auto* fixture = app.add_subcommand("fixture", "emit a built-in instance as .auc");
  fixture->add_option("name", cfg.fixture, "theorem4, three-partition, gadget or ratio2")->required();
  fixture->add_option("--epsilon", cfg.epsilon, "epsilon for theorem4");
  fixture->add_option("--weights", cfg.weights, "comma-separated weights for three-partition");
  fixture->add_option("--B", cfg.scale, "B for gadget");
  for (auto* sub : {eval, solve, pne, poa, cce, learn, smooth, fixture}) {
    sub->add_option("-o,--output", cfg.output, "write to file instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    if (cfg.command == "fixture") {
      emit(cfg, fixture_text(cfg));
      return kOk;
    }
    Runner runner = nullptr;
    if (cfg.command == "eval") runner = run_eval;
    if (cfg.command == "solve") runner = run_solve;
    if (cfg.command == "pne") runner = run_pne;
    if (cfg.command == "poa") runner = run_poa;
    if (cfg.command == "cce") runner = run_cce;
    if (cfg.command == "learn") runner = run_learn;
    if (cfg.command == "smooth") runner = run_smooth;
    if (cfg.command == "learn" && cfg.format == "csv") {
      // Trace to stdout, summary suppressed.
      auto l = load(cfg.instances.front(), cfg, true);
      const GameTable table(*l.game);
      HedgeConfig hc;
      hc.rounds = cfg.rounds;
      hc.seed = cfg.seed;
      hc.rate = cfg.rate;
      std::ostringstream os;
      write_trace_csv(os, table, run_hedge(table, hc));
      emit(cfg, os.str());
      return kOk;
    }
    const auto result = run_all(cfg, runner);
    emit(cfg, cfg.format == "text" ? result.json.dump(2) + "\n" : result.json.dump() + "\n");
    return result.property_ok ? kOk : kPropertyFailed;
  } catch (const ParseError& e) {
    return fail("parse", e.detail(), std::make_pair(e.line(), e.column()));
  } catch (const UsageError& e) {
    return fail("usage", e.what());
  } catch (const ValidationError& e) {
    return fail("validation", e.what());
  } catch (const SizeGuardError& e) {
    return fail("size_guard", e.what());
  } catch (const OverflowError& e) {
    return fail("overflow", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
