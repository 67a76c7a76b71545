// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "reserve_lab/audit.hpp"
#include "reserve_lab/engine.hpp"
#include "reserve_lab/search.hpp"

using namespace reserve_lab;
using namespace reserve_lab::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(int number, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    r.ok = false;
    r.detail += " (over the " + std::to_string(limit_s) + " s limit)";
  }
  if (!r.ok) ++failures;
  std::printf("%s criterion %d: %s [%.3f s] %s\n", r.ok ? "PASS" : "FAIL", number, title, secs,
              r.detail.c_str());
  std::fflush(stdout);
}

std::string join(const auto& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + std::string(s);
  return "{" + out + "}";
}

Outcome example1_reproduction() {
  const auto inst = example1();
  const auto a = choose(inst, PolicySpec::elevated(10));
  const auto r = cutoffs(inst, a);
  const bool set_ok = a.chosen() == ids({"i1", "i2", "i3", "i5"});
  const bool cut_ok = r.of(Category::Open) == Score(100) && r.of(Category::OBC) == Score(89);
  const bool gap_ok = r.gap == Score(11);
  const bool flagged = gap_check(r, 10).has_value();
  return {set_ok && cut_ok && gap_ok && flagged,
          "chosen " + join(a.chosen()) + ", gap " + (r.gap ? r.gap->to_string() : "-") +
              (flagged ? ", D=10 flagged" : ", D=10 not flagged")};
}

Outcome example2_reproduction() {
  const auto rule_base = PolicySpec::elevated(10);
  const auto before = gap_constrained_choose(example2(), rule_base, Score(10));
  const auto rb = cutoffs(example2(), before);
  const auto after = gap_constrained_choose(example2_arrival(), rule_base, Score(10));
  const bool pre = before.chosen() == ids({"i1", "i2", "i3", "i4", "i5"}) &&
                   rb.of(Category::Open) == Score(100) && rb.of(Category::OBC) == Score(90);
  const bool post = after.chosen() == ids({"i7", "i2", "i3", "i1", "i6"}) && after.floor == Score(92);
  return {pre && post, "before " + join(before.chosen()) + ", after " + join(after.chosen()) + " floor " +
                           (after.floor ? after.floor->to_string() : "-")};
}

Outcome substitutes_detection() {
  const auto rule = PolicySpec::gap_constrained(PolicySpec::elevated(10), Score(10));
  const auto w = check_substitutes(rule, example2_arrival());
  if (!w) return {false, "no witness"};
  const std::vector<std::string> s{"i1", "i2", "i3", "i4", "i5", "i6"};
  const std::vector<std::string> ji{"i7", "i6"};
  return {w->subset == s && w->individuals == ji && replays(*w), summary(*w)};
}

Outcome substitutes_clean() {
  SearchSpace space;
  space.min_n = 0;
  space.max_n = 6;
  for (int s = 1; s <= 8; ++s) space.score_grid.emplace_back(s);
  space.distinct_scores = true;
  space.memberships = {CategorySet::general(), CategorySet{Category::SC}, CategorySet{Category::OBC}};
  space.quotas = {{Category::SC, {0, 4}}, {Category::OBC, {0, 4}}};
  space.min_capacity = 0;
  space.max_capacity = 4;
  const std::vector<PolicySpec> family{PolicySpec::hard(), PolicySpec::soft(SoftScope::GcOnly),
                                       PolicySpec::soft(SoftScope::Everyone), PolicySpec::elevated(0),
                                       PolicySpec::elevated(5), PolicySpec::elevated(10)};
  std::string first;
  const auto count = find_substitutes_violations(space, family, [&](const ViolationWitness& w) {
    if (first.empty()) first = summary(w);
    return true;
  });
  const auto instances = for_each_instance(space, [](const Instance&) { return true; });
  return {count == 0, std::to_string(instances) + " instances x " + std::to_string(family.size()) +
                          " rules, " + std::to_string(count) + " witnesses" +
                          (first.empty() ? "" : ", first: " + first)};
}

Outcome zero_boost() {
  std::mt19937_64 rng(20261014);
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  while (checked < 1000) {
    const auto inst = oracle::random_instance(rng, 12, 8, true, 0, 40);
    for (auto c : kReserveCategories) {
      if (elevated_order(inst, c, 0) != baseline_order(inst)) {
        ++mismatches;
        break;
      }
    }
    ++checked;
  }
  return {mismatches == 0, std::to_string(checked) + " instances, " + std::to_string(mismatches) + " mismatches"};
}

Outcome search_completeness() {
  SearchSpace space;
  space.min_n = 5;
  space.max_n = 5;
  space.score_grid = {89, 98, 99, 100};
  space.distinct_scores = false;
  space.memberships = {CategorySet::general(), CategorySet{Category::SC}, CategorySet{Category::ST},
                       CategorySet{Category::OBC}};
  space.quotas = {{Category::SC, {1, 1}}, {Category::ST, {1, 1}}, {Category::OBC, {1, 1}}};
  space.min_capacity = 4;
  space.max_capacity = 4;
  space.boosts = {10};
  const auto target = canonical_form(example1());
  std::size_t emitted = 0, replayed = 0;
  bool found_example = false;
  find_gap_violations(space, [&](const ViolationWitness& w) {
    ++emitted;
    if (replays(w)) ++replayed;
    if (canonical_form(w.instance) == target) found_example = true;
    return true;
  });
  return {emitted >= 1 && replayed == emitted && found_example,
          std::to_string(emitted) + " witnesses, " + std::to_string(replayed) + " replay" +
              (found_example ? ", includes the ex1 configuration" : ", ex1 configuration missing")};
}

Outcome boundary() {
  const auto inst = example2();
  const auto a = gap_constrained_choose(inst, PolicySpec::elevated(10), Score(10));
  const auto r = cutoffs(inst, a);
  if (r.gap != Score(10)) return {false, "expected gap 10"};
  const bool at_bound_passes = !gap_check(r, 10).has_value();
  const bool over_bound_fails = gap_check(r, 9).has_value();
  return {at_bound_passes && over_bound_fails,
          std::string("gap 10: D=10 ") + (at_bound_passes ? "pass" : "fail") + ", D=9 " +
              (over_bound_fails ? "fail" : "pass")};
}

}  // namespace

int main() {
  criterion(1, "ex1 elevated k=10 reproduction", 1.0, example1_reproduction);
  criterion(2, "ex2 gap-constrained, before and after arrival", 1.0, example2_reproduction);
  criterion(3, "substitutes violation on the ex2 universe", 5.0, substitutes_detection);
  criterion(4, "substitutes hold for hard, soft and elevated rules", 600.0, substitutes_clean);
  criterion(5, "k=0 elevated order equals the baseline order", 0, zero_boost);
  criterion(6, "gap search finds ex1 and every witness replays", 0, search_completeness);
  criterion(7, "gap check boundary: gap = D passes, gap = D + 1 fails", 0, boundary);
  std::printf("%s: %d of 7 criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
