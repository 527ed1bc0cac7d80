#include <doctest.h>

#include <random>

#include "vcomp/classes.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/lp.hpp"
#include "vcomp/matching.hpp"
#include "vcomp/value_fn.hpp"
#include "vcomp/vcg.hpp"

using namespace vcomp;

namespace {

Rational q(std::int64_t p, std::int64_t d = 1) { return Rational(p, d); }

// Brute-force OR: best split of s between u and w.
Money or_oracle(const std::vector<Money>& u, const std::vector<Money>& w, ItemSet s) {
  Money best;
  s.for_each_subset([&](ItemSet t) { best = max(best, u[t.bits()] + w[(s - t).bits()]); });
  return best;
}

}  // namespace

TEST_CASE("rational arithmetic and formatting") {
  CHECK(q(1, 3) + q(1, 6) == q(1, 2));
  CHECK(q(2, 4).to_string() == "1/2");
  CHECK(q(0).to_string() == "0/1");
  CHECK(Rational::parse("3.03") == q(303, 100));
  CHECK(Rational::parse("-2/5") == q(-2, 5));
  CHECK(q(1, 3).to_decimal_or_fraction() == "1/3");
  CHECK(q(5, 4).to_decimal_or_fraction() == "1.25");
  CHECK_THROWS_AS(q(INT64_MAX) + q(1), OverflowError);
  CHECK_THROWS(Rational::parse("1.2.3"));
}

TEST_CASE("value: OR of two XS on one item takes the better") {
  auto v = ValueFn::or_of({ValueFn::xs(1, 0, q(2)), ValueFn::xs(1, 0, q(3))});
  CHECK(value(v, ItemSet::single(0)) == q(3));
  CHECK(value(v, ItemSet{}) == q(0));
}

TEST_CASE("value: TABLE validation rejects non-normalized and non-monotone") {
  CHECK_THROWS_AS(ValueFn::table(1, {q(1), q(2)}), ValidationError);
  CHECK_THROWS_AS(ValueFn::table(2, {q(0), q(3), q(1), q(2)}), ValidationError);
  CHECK_NOTHROW(ValueFn::table(2, {q(0), q(1), q(1), q(2)}));
}

TEST_CASE("value: OXS matching evaluation agrees with exhaustive OR") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> wd(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const unsigned m = 1 + trial % 5;
    auto random_xor = [&] {
      std::vector<ValueFn> terms;
      for (ItemIndex j = 0; j < m; ++j) {
        if (wd(rng) % 2) terms.push_back(ValueFn::xs(m, j, q(wd(rng))));
      }
      if (terms.empty()) terms.push_back(ValueFn::xs(m, 0, q(wd(rng))));
      return ValueFn::xor_of(std::move(terms));
    };
    auto a = random_xor();
    auto b = random_xor();
    auto v = ValueFn::or_of({a, b});
    REQUIRE(oxs_slots(v).has_value());
    auto ta = to_table(a);
    auto tb = to_table(b);
    auto tv = to_table(v);
    ItemSet::full(m).for_each_subset([&](ItemSet s) {
      CHECK(value(v, s) == or_oracle(ta, tb, s));
      CHECK(tv[s.bits()] == or_oracle(ta, tb, s));
    });
  }
}

TEST_CASE("matching: small assignment") {
  std::vector<MatchingEdge> edges{{0, 0, q(3)}, {0, 1, q(2)}, {1, 0, q(2)}, {1, 1, q(0)}};
  auto r = max_weight_matching(2, 2, edges);
  CHECK(r.weight == q(4));
}

TEST_CASE("lp: exact and float-guided agree and certify") {
  lp::Problem p;
  p.num_vars = 2;
  p.objective = {-1, -1};
  p.rows.push_back({{1, 2}, lp::Sense::LessEqual, 4, "a"});
  p.rows.push_back({{3, 1}, lp::Sense::LessEqual, 6, "b"});
  auto e = lp::solve_exact(p);
  auto f = lp::solve(p);
  REQUIRE(e.status == lp::Status::Optimal);
  REQUIRE(f.status == lp::Status::Optimal);
  CHECK(e.objective == BigRational(-14, 5));
  CHECK(f.objective == e.objective);
  CHECK(lp::verify(p, e).ok());
  CHECK(lp::verify(p, f).ok());
}

TEST_CASE("lp: infeasible and equality rows") {
  lp::Problem p;
  p.num_vars = 1;
  p.objective = {1};
  p.rows.push_back({{1}, lp::Sense::GreaterEqual, 2, ""});
  p.rows.push_back({{1}, lp::Sense::LessEqual, 1, ""});
  CHECK(lp::solve(p).status == lp::Status::Infeasible);
  lp::Problem e;
  e.num_vars = 2;
  e.objective = {1, 2};
  e.rows.push_back({{1, 1}, lp::Sense::Equal, 1, ""});
  auto s = lp::solve(e);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == 1);
  CHECK(lp::verify(e, s).ok());
}

TEST_CASE("check_class: additive, superadditive, and the 6/6/12 triple") {
  auto add = ValueFn::additive({q(1), q(2), q(3)});
  auto r = check_class(add);
  CHECK(r.is_subadditive);
  REQUIRE(r.xos_factor_beta.has_value());
  CHECK(*r.xos_factor_beta == q(1));

  auto sup = ValueFn::table(2, {q(0), q(1), q(1), q(3)});
  auto rs = check_class(sup);
  CHECK_FALSE(rs.is_subadditive);
  REQUIRE(rs.witness.has_value());

  std::vector<Money> t(8);
  for (unsigned s = 1; s < 8; ++s) t[s] = (s == 7) ? q(12) : q(6);
  auto v = ValueFn::table(3, t);
  auto rv = check_class(v);
  CHECK(rv.is_subadditive);
  REQUIRE(rv.xos_factor_beta.has_value());
  CHECK(*rv.xos_factor_beta == q(4, 3));
  auto a = supporting_additive(v, ItemSet::full(3));
  // Pairs are capped at 6, so the unique support vector is (3,3,3) with a(T) = 9 = 12 / (4/3).
  CHECK(a.additive_weights()[0] == q(3));
  CHECK(a.additive_weights()[1] == q(3));
  CHECK(a.additive_weights()[2] == q(3));
  CHECK(value(a, ItemSet::full(3)) == q(9));
}

TEST_CASE("supporting_additive: clause form and empty bundle") {
  auto v = ValueFn::xos_clauses(2, {{q(1), q(2)}});
  auto a = supporting_additive(v, ItemSet::full(2));
  CHECK(a.additive_weights()[0] == q(1));
  CHECK(a.additive_weights()[1] == q(2));
  auto z = supporting_additive(v, ItemSet{});
  CHECK(value(z, ItemSet::full(2)) == q(0));
}

TEST_CASE("check_topdrop examples") {
  auto b = ValueFn::xos_clauses(3, {{q(4), q(1), q(1)}});
  CHECK(check_topdrop(b, ItemSet::full(3)));
  CHECK(check_topdrop(b, ItemSet::single(1)));
  CHECK(check_topdrop(ValueFn::additive({q(2), q(5)}), ItemSet::full(2)));
}

TEST_CASE("vcg: additive two-agent example, both payment formulas") {
  std::vector<ValueFn> bids{ValueFn::additive({q(3), q(1)}), ValueFn::additive({q(2), q(2)})};
  auto out = vcg_outcome(bids, bids);
  CHECK(out.allocation.bundles[0] == ItemSet::single(0));
  CHECK(out.allocation.bundles[1] == ItemSet::single(1));
  CHECK(out.payments[0] == q(2));
  CHECK(out.payments[1] == q(1));
  VcgOptions ex;
  ex.route = WdRoute::Exhaustive;
  auto out2 = vcg_outcome(bids, bids, ex);
  CHECK(out2.allocation == out.allocation);
  CHECK(out2.payments == out.payments);
}

TEST_CASE("vcg: single agent gets everything for free") {
  std::vector<ValueFn> bids{ValueFn::xs(3, 1, q(5))};
  auto out = vcg_outcome(bids, bids);
  CHECK(out.allocation.bundles[0] == ItemSet::full(3));
  CHECK(out.payments[0] == q(0));
  CHECK(out.utilities[0] == q(5));
}

TEST_CASE("vcg: residual on empty set and size guard") {
  std::vector<ValueFn> bids{ValueFn::additive({q(1)}), ValueFn::additive({q(2)})};
  CHECK(residual_value(bids, 0, ItemSet{}) == q(0));
  CHECK(residual_value(bids, 0, ItemSet::single(0)) == q(2));
  std::vector<ValueFn> big(4, ValueFn::table(2, {q(0), q(1), q(1), q(1)}));
  VcgOptions tight;
  tight.allocation_budget = 10;
  tight.route = WdRoute::Exhaustive;
  CHECK_THROWS_AS(winner_determination(big, tight), SizeGuardError);
}

TEST_CASE("vcg: tie order picks the lexicographically smallest assignment") {
  std::vector<ValueFn> bids{ValueFn::additive({q(1), q(1)}), ValueFn::additive({q(1), q(1)})};
  auto a = winner_determination(bids);
  CHECK(a.bundles[0] == ItemSet::full(2));
  VcgOptions rev;
  rev.tie_order = {1, 0};
  auto b = winner_determination(bids, rev);
  CHECK(b.bundles[1] == ItemSet::full(2));
}
