#include <doctest.h>

#include <fstream>
#include <sstream>

#include "vcomp/bidlang.hpp"
#include "vcomp/classes.hpp"
#include "vcomp/equilibria.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/instances.hpp"

using namespace vcomp;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(VCOMP_FIXTURE_DIR) + "/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Game game_of(const InstanceFile& inst) { return Game(valuations_of(inst), menus_of(inst)); }

BigRational big(std::int64_t p, std::int64_t d) {
  BigRational x(p, d);
  x.canonicalize();
  return x;
}

}  // namespace

TEST_CASE("shipped fixtures regenerate bit-identically") {
  CHECK(slurp("theorem4.auc") == render_instance(theorem4_instance(q(1, 100))));
  CHECK(slurp("three-partition.auc") == render_instance(three_partition_instance({1, 1, 2, 1, 1, 2}).file));
  CHECK(slurp("gadget.auc") == render_instance(pne_gap_gadget(q(1))));
  CHECK(slurp("ratio2.auc") == render_instance(ratio_two_instance()));
  for (const char* name : {"theorem4.auc", "three-partition.auc", "gadget.auc", "ratio2.auc", "one-item.auc"}) {
    const auto text = slurp(name);
    CHECK(render_instance(parse_instance(text)) == text);
  }
}

TEST_CASE("lower-bound instance") {
  const auto inst = theorem4_instance(q(1, 100));
  const Game game = game_of(inst);
  const ItemSet x1 = ItemSet::of({0, 1, 2});
  const ItemSet x2 = ItemSet::of({3, 4, 5});
  CHECK(game.optimal_welfare() == 24);

  // The equilibrium bid values the other triple at 5 + eps.
  CHECK(game.bid(0, 0).value(x2) == q(501, 100));
  CHECK(game.bid(1, 0).value(x1) == q(501, 100));
  const auto out = game.outcome({0, 0});
  CHECK(out.allocation.bundles == std::vector<ItemSet>{x2, x1});
  CHECK(out.welfare == q(1002, 100));

  for (std::size_t i = 0; i < 2; ++i) {
    const auto rep = check_class(inst.agents[i].valuation);
    CHECK(rep.is_subadditive);
    CHECK(*rep.xos_factor_beta == q(4, 3));
  }
  CHECK(is_pne(game, {0, 0}).is_pne);
  const auto poa = poa_pne(GameTable(game));
  CHECK(*poa.ratio == big(1200, 501));
  CHECK(*poa.worst_welfare == big(1002, 100));

  CHECK_THROWS_AS(theorem4_instance(q(0)), ValidationError);
  CHECK_THROWS_AS(theorem4_instance(q(1)), ValidationError);
}

TEST_CASE("lower-bound ratio at a second epsilon") {
  const auto game = game_of(theorem4_instance(q(1, 20)));
  CHECK(is_pne(game, {0, 0}).is_pne);
  // 24 / (10 + 2/20)
  CHECK(*poa_pne(GameTable(game)).ratio == big(240, 101));
}

TEST_CASE("three-partition instance") {
  const auto tp = three_partition_instance({1, 1, 2, 1, 1, 2});
  CHECK(tp.B == 4);
  REQUIRE(tp.partition.has_value());
  const Game game = game_of(tp.file);
  const Profile candidate(game.num_agents(), 0);
  const auto out = game.outcome(candidate);
  CHECK(out.utilities == std::vector<Rational>{4, 4, 64, 64});
  CHECK(is_pne(game, candidate).is_pne);

  CHECK_FALSE(find_three_partition({1, 1, 1, 1, 1, 5}).has_value());
  CHECK_FALSE(three_partition_instance({1, 1, 1, 1, 1, 5}).partition.has_value());
  CHECK(find_three_partition({1, 2, 3}).has_value());
  CHECK_THROWS_AS(three_partition_instance({1, 1, 2, 1, 1, 1}), ValidationError);
  CHECK_THROWS_AS(three_partition_instance({1, 1}), ValidationError);
}

TEST_CASE("gadget") {
  const auto inst = pne_gap_gadget(q(1));
  const auto vals = valuations_of(inst);
  // C bidding 4B per item stays below its pair value 8B.
  CHECK(is_conservative(to_table(ValueFn::additive({q(4), q(4), q(4)})), to_table(vals[1])));

  // Overbidding every item of a B-bid that sums to at most 7.5B wins all three
  // items for C with utility above 8B.
  const Money eps(1, 4);
  std::size_t sampled = 0;
  for (const auto& b : inst.agents[0].menu) {
    const auto w = *additive_form(b);
    if (w[0] + w[1] + w[2] > q(15, 2)) continue;
    const std::vector<ValueFn> bids{b, ValueFn::additive({w[0] + eps, w[1] + eps, w[2] + eps})};
    const auto out = vcg_outcome(bids, vals);
    CHECK(out.allocation.bundles[1] == ItemSet::full(3));
    CHECK(out.utilities[1] > 8);
    ++sampled;
  }
  CHECK(sampled > 0);

  const Game game = game_of(inst);
  CHECK(enumerate_pne(GameTable(game)).empty());
}

TEST_CASE("ratio-two instance") {
  const Game game = game_of(ratio_two_instance());
  const auto rep = poa_pne(GameTable(game));
  CHECK(rep.opt_welfare == 2);
  CHECK(*rep.worst_welfare == 1);
  CHECK(*rep.ratio == 2);
}

TEST_CASE("random instances") {
  SUBCASE("classes") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      for (auto cls : {ValuationClass::OS, ValuationClass::OXS, ValuationClass::XOS}) {
        for (const auto& v : valuations_of(random_instance(cls, 2, 3, seed))) {
          CHECK(*check_class(v).xos_factor_beta == 1);
        }
      }
      for (const auto& v : valuations_of(random_instance(ValuationClass::CF, 2, 3, seed))) {
        CHECK(check_class(v).is_subadditive);
      }
    }
    for (const auto& v : valuations_of(random_instance(ValuationClass::CF, 1, 3, 7))) {
      CHECK(check_class(v).is_subadditive);
    }
  }
  SUBCASE("determinism and round trip") {
    for (auto cls : {ValuationClass::OS, ValuationClass::OXS, ValuationClass::XOS, ValuationClass::CF}) {
      for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto a = random_instance(cls, 3, 4, seed);
        CHECK(a == random_instance(cls, 3, 4, seed));
        CHECK(parse_instance(render_instance(a)) == a);
      }
      CHECK_FALSE(random_instance(cls, 2, 3, 1) == random_instance(cls, 2, 3, 2));
    }
  }
  SUBCASE("class names") {
    for (auto cls : {ValuationClass::OS, ValuationClass::OXS, ValuationClass::XOS, ValuationClass::CF}) {
      CHECK(parse_class(class_name(cls)) == cls);
    }
    CHECK_FALSE(parse_class("GS").has_value());
  }
}
