#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reserve_lab/audit.hpp"
#include "reserve_lab/error.hpp"

using namespace reserve_lab;
using namespace reserve_lab::testing;
using Ids = std::vector<std::string>;

namespace {

PolicySpec gap_rule() {
  return PolicySpec::gap_constrained(PolicySpec::elevated(10), Score(10));
}

}  // namespace

TEST_CASE("cutoffs") {
  SUBCASE("ex1 elevated outcome") {
    const auto inst = example1();
    const auto r = cutoffs(inst, choose(inst, PolicySpec::elevated(10)));
    CHECK(r.of(Category::Open) == Score(100));
    CHECK(r.of(Category::SC) == Score(99));
    CHECK(r.of(Category::ST) == Score(98));
    CHECK(r.of(Category::OBC) == Score(89));
    CHECK_FALSE(r.of(Category::EWS).has_value());
    CHECK(r.gap == Score(11));
    CHECK(r.holder.at(Category::OBC) == "i5");
  }
  SUBCASE("ex2 before the arrival") {
    const auto inst = example2();
    const auto r = cutoffs(inst, apply_rule(inst, gap_rule()));
    CHECK(r.of(Category::Open) == Score(100));
    CHECK(r.of(Category::OBC) == Score(90));
    CHECK(r.gap == Score(10));
  }
  SUBCASE("all vacant") {
    InstanceData d;
    d.capacity = 2;
    d.reserved = {{Category::OBC, 1}};
    const auto inst = validate_instance(d);
    const auto r = cutoffs(inst, choose(inst, PolicySpec::hard()));
    for (const auto& [seat, value] : r.cutoff) CHECK_FALSE(value.has_value());
    CHECK_FALSE(r.gap.has_value());
  }
  SUBCASE("foreign assignment") {
    Assignment a;
    a.seats.emplace("stranger", Category::Open);
    CHECK_THROWS_AS(cutoffs(example1(), a), Error);
  }
}

TEST_CASE("gap check") {
  const auto ex1 = example1();
  const auto r1 = cutoffs(ex1, choose(ex1, PolicySpec::elevated(10)));
  const auto v = gap_check(r1, 10);
  REQUIRE(v.has_value());
  CHECK(v->axiom == Axiom::Gap);
  CHECK(v->gap == Score(11));
  CHECK(v->individuals == Ids{"i1", "i5"});

  const auto ex2 = example2();
  const auto r2 = cutoffs(ex2, apply_rule(ex2, gap_rule()));
  CHECK_FALSE(gap_check(r2, 10).has_value());
  CHECK(gap_check(r2, 9).has_value());

  CutoffReport absent;
  absent.cutoff[Category::Open] = Score(100);
  absent.cutoff[Category::OBC] = std::nullopt;
  CHECK_FALSE(gap_check(absent, 0).has_value());
}

TEST_CASE("gap check is monotone in D") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 200; ++t) {
    const auto inst = oracle::random_instance(rng, 8, 5, false, 60, 100);
    const auto r = cutoffs(inst, choose(inst, PolicySpec::elevated(10)));
    for (int d = 0; d < 30; ++d) {
      if (!gap_check(r, d)) CHECK_FALSE(gap_check(r, d + 1).has_value());
    }
  }
}

TEST_CASE("fairness check") {
  SUBCASE("ex2 after the arrival passes") {
    const auto inst = example2_arrival();
    CHECK_FALSE(check_fairness(inst, apply_rule(inst, gap_rule())).has_value());
  }
  SUBCASE("ex1 elevated outcome passes") {
    const auto inst = example1();
    CHECK_FALSE(check_fairness(inst, choose(inst, PolicySpec::elevated(10))).has_value());
  }
  SUBCASE("seating the lower of two SC members fails") {
    InstanceData d;
    d.capacity = 1;
    d.reserved = {{Category::SC, 1}};
    d.individuals = {person("hi", {Category::SC}, 80), person("lo", {Category::SC}, 70)};
    const auto inst = validate_instance(d);
    Assignment a;
    a.seats.emplace("lo", Category::SC);
    a.rejected.insert("hi");
    const auto v = check_fairness(inst, a);
    REQUIRE(v.has_value());
    CHECK(v->individuals == Ids{"hi", "lo"});
    CHECK(v->category == Category::SC);
    CHECK(replays(*v));
  }
}

TEST_CASE("non-wastefulness check") {
  const auto ex1 = example1();
  CHECK_FALSE(check_nonwaste(ex1, choose(ex1, PolicySpec::elevated(10)), PolicySpec::elevated(10)));

  const auto no_obc = remove_individual(ex1, "i5");
  const auto hard = choose(no_obc, PolicySpec::hard());
  REQUIRE(hard.vacancy(Category::OBC) == 1);
  REQUIRE(hard.rejected.contains("i4"));
  CHECK_FALSE(check_nonwaste(no_obc, hard, PolicySpec::hard()).has_value());

  // Same vacant seat judged under soft reversion.
  const auto v = check_nonwaste(no_obc, hard, PolicySpec::soft());
  REQUIRE(v.has_value());
  CHECK(v->category == Category::OBC);
  CHECK(v->individuals == Ids{"i4"});
  CHECK(replays(*v));
}

TEST_CASE("gap floor leaves target seats vacant without waste") {
  // OBC members below the floor are unacceptable at that stage.
  InstanceData d;
  d.capacity = 2;
  d.reserved = {{Category::OBC, 1}};
  d.individuals = {person("g1", {Category::General}, 100), person("o1", {Category::OBC}, 80)};
  const auto inst = validate_instance(d);
  const auto rule = PolicySpec::gap_constrained(PolicySpec::hard(), Score(10));
  const auto a = apply_rule(inst, rule);
  CHECK(a.vacancy(Category::OBC) == 1);
  CHECK_FALSE(check_nonwaste(inst, a, rule).has_value());
  CHECK(check_nonwaste(inst, a, PolicySpec::hard()).has_value());
}

TEST_CASE("substitutes violation on ex2") {
  const auto universe = example2_arrival();
  const auto v = check_substitutes(gap_rule(), universe);
  REQUIRE(v.has_value());
  CHECK(v->subset == Ids{"i1", "i2", "i3", "i4", "i5", "i6"});
  CHECK(v->individuals == Ids{"i7", "i6"});
  CHECK(replays(*v));
  CHECK(v->assignment->is_seated("i6"));
}

TEST_CASE("hard rule passes the substitutes check on ex2") {
  CHECK_FALSE(check_substitutes(PolicySpec::hard(), example2_arrival()).has_value());
  CHECK_FALSE(check_substitutes(PolicySpec::elevated(10), example2_arrival()).has_value());
}

TEST_CASE("singleton and empty universes pass") {
  InstanceData d;
  d.capacity = 1;
  d.individuals = {person("a", {Category::General}, 1)};
  CHECK_FALSE(check_substitutes(gap_rule(), validate_instance(d)).has_value());
  CHECK_FALSE(check_substitutes(gap_rule(), Instance{}).has_value());
}

TEST_CASE("universe bound") {
  InstanceData d;
  d.capacity = 1;
  for (int i = 0; i < 13; ++i) d.individuals.push_back(person("p" + std::to_string(i), {Category::General}, i));
  const auto inst = validate_instance(d);
  CHECK_THROWS_AS(check_substitutes(PolicySpec::hard(), inst), Error);
  CHECK_NOTHROW(check_substitutes(PolicySpec::hard(), inst, 13));
}

TEST_CASE("substitutes check agrees with the brute-force oracle") {
  std::mt19937_64 rng(606);
  std::vector<PolicySpec> rules = {PolicySpec::hard(), PolicySpec::soft(SoftScope::Everyone),
                                   PolicySpec::elevated(10), gap_rule(),
                                   PolicySpec::gap_constrained(PolicySpec::hard(), Score(3)),
                                   PolicySpec::gap_constrained(PolicySpec::soft(), Score(5))};
  int violating = 0;
  for (int t = 0; t <= 120; ++t) {
    // The last round is the known violating universe.
    const auto inst = t < 120 ? oracle::random_instance(rng, 7, 5, false, 85, 102) : example2_arrival();
    for (const auto& rule : rules) {
      const auto expected = oracle::brute_force_substitutes(rule, inst);
      const auto all = substitutes_violations(rule, inst);
      REQUIRE(all.size() == expected.size());
      for (std::size_t w = 0; w < all.size(); ++w) {
        std::vector<std::size_t> subset;
        for (const auto& id : all[w].subset) subset.push_back(*inst.index_of(id));
        CHECK(subset == expected[w].subset);
        CHECK(*inst.index_of(all[w].individuals[0]) == expected[w].j);
        CHECK(*inst.index_of(all[w].individuals[1]) == expected[w].i);
        CHECK(replays(all[w]));
      }
      const auto first = check_substitutes(rule, inst);
      CHECK(first.has_value() == !expected.empty());
      if (first) {
        CHECK(first->subset == all.front().subset);
        CHECK(first->individuals == all.front().individuals);
        ++violating;
      }
    }
  }
  // The family must actually exercise violations.
  CHECK(violating > 0);
}

TEST_CASE("every emitted witness replays") {
  const auto gap = audit_gap(example1(), PolicySpec::elevated(10), 10);
  REQUIRE(gap.has_value());
  CHECK(replays(*gap));

  auto tampered = *gap;
  tampered.bound = Score(11);
  CHECK_FALSE(replays(tampered));

  auto sub = *check_substitutes(gap_rule(), example2_arrival());
  sub.rule = PolicySpec::hard();
  CHECK_FALSE(replays(sub));
}
