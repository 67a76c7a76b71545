#include <benchmark/benchmark.h>

#include <random>

#include "reserve_lab/audit.hpp"
#include "reserve_lab/engine.hpp"
#include "reserve_lab/search.hpp"

using namespace reserve_lab;

namespace {

Instance random_roster(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InstanceData d;
  d.capacity = static_cast<int>(n / 3 + 1);
  d.reserved = {{Category::SC, d.capacity / 6},
                {Category::ST, d.capacity / 12},
                {Category::OBC, d.capacity / 4},
                {Category::EWS, d.capacity / 10}};
  std::vector<int> scores(n);
  for (std::size_t i = 0; i < n; ++i) scores[i] = static_cast<int>(i) * 3 + 1;
  std::shuffle(scores.begin(), scores.end(), rng);
  std::uniform_int_distribution<int> cat(0, 5);
  for (std::size_t i = 0; i < n; ++i) {
    Individual p;
    p.id = "i" + std::to_string(i + 1);
    const int c = cat(rng);
    if (c >= 4) p.memberships = CategorySet::general();
    else p.memberships.insert(kReserveCategories[static_cast<std::size_t>(c)]);
    p.score = scores[i];
    d.individuals.push_back(p);
  }
  return validate_instance(d);
}

void BM_Choose(benchmark::State& state) {
  const auto inst = random_roster(static_cast<std::size_t>(state.range(0)), 7);
  const auto rule = PolicySpec::elevated(10);
  for (auto _ : state) benchmark::DoNotOptimize(choose(inst, rule));
}
BENCHMARK(BM_Choose)->Arg(50)->Arg(500);

void BM_GapConstrainedChoose(benchmark::State& state) {
  const auto inst = random_roster(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gap_constrained_choose(inst, PolicySpec::elevated(10), Score(10)));
  }
}
BENCHMARK(BM_GapConstrainedChoose)->Arg(50)->Arg(500);

void BM_CheckSubstitutes(benchmark::State& state) {
  const auto inst = random_roster(static_cast<std::size_t>(state.range(0)), 11);
  const auto rule = PolicySpec::gap_constrained(PolicySpec::elevated(10), Score(10));
  for (auto _ : state) benchmark::DoNotOptimize(check_substitutes(rule, inst));
}
BENCHMARK(BM_CheckSubstitutes)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  SearchSpace space;
  space.max_n = static_cast<std::size_t>(state.range(0));
  for (int s = 1; s <= 8; ++s) space.score_grid.emplace_back(s);
  space.memberships = {CategorySet::general(), CategorySet{Category::SC}, CategorySet{Category::OBC}};
  space.quotas = {{Category::SC, {0, 4}}, {Category::OBC, {0, 4}}};
  space.max_capacity = 4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(for_each_instance(space, [](const Instance&) { return true; }));
  }
}
BENCHMARK(BM_Enumerate)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
