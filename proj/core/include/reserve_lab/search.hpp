#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "reserve_lab/audit.hpp"
#include "reserve_lab/model.hpp"
#include "reserve_lab/policies.hpp"

namespace reserve_lab {

struct QuotaRange {
  int min = 0;
  int max = 0;
};

/// Listed visits `listed` verbatim (ids kept).
enum class SearchMode { Enumerate, Sample, Listed };

/// A bounded family of instances.
///
/// Enumeration visits instances by roster size, then capacity, then reserve
/// quotas, then score tuples, then memberships. Ids are assigned "i1".."in"
/// in descending score order and tied individuals carry non-decreasing
/// membership codes, so each instance is visited once up to relabeling.
struct SearchSpace {
  std::size_t min_n = 0;
  std::size_t max_n = 0;
  /// Candidate scores; duplicates are ignored.
  std::vector<Score> score_grid;
  bool distinct_scores = true;
  /// Membership sets individuals may declare.
  std::vector<CategorySet> memberships{CategorySet::general()};
  /// Quota ranges per reserve category; unlisted categories get 0.
  std::map<Category, QuotaRange> quotas;
  int min_capacity = 0;
  int max_capacity = 0;
  /// Boost grid for the gap finder.
  std::vector<Score> boosts;

  SearchMode mode = SearchMode::Enumerate;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<Instance> listed;
  /// Worker threads; 0 selects the hardware concurrency.
  unsigned threads = 0;
};

/// Returns false to stop the stream.
using WitnessSink = std::function<bool(const ViolationWitness&)>;
using InstanceVisitor = std::function<bool(const Instance&)>;

/// Visits every instance of the space (enumeration) or `samples` seeded
/// instances (sampling) in canonical order. Returns the number visited.
std::size_t for_each_instance(const SearchSpace& space, const InstanceVisitor& visit);

/// The seeded instance at position `index` of the sampling stream.
Instance sample_instance(const SearchSpace& space, std::uint64_t index);

/// Elevated choose per boost k, gap checked against D = k. Returns the
/// number of witnesses emitted.
std::size_t find_gap_violations(const SearchSpace& space, const WitnessSink& sink);

/// Exhaustive substitutes check for each universe and rule.
std::size_t find_substitutes_violations(const SearchSpace& space,
                                        std::span<const PolicySpec> family,
                                        const WitnessSink& sink,
                                        std::size_t max_universe = kDefaultMaxUniverse);

/// Greedy local minimization: drop individuals, lower quotas and capacity,
/// lower scores, while the violation still replays. Throws
/// Error(NonReplayingWitness) if `w` does not replay.
ViolationWitness shrink(const ViolationWitness& w);
/// As above, lowering scores only to values of `grid` (ascending).
ViolationWitness shrink(const ViolationWitness& w, std::span<const Score> grid);

/// Relabel-invariant key: (score, memberships) sorted, quotas, capacity.
std::string canonical_form(const Instance& inst);

/// 64-bit FNV-1a of the canonical form, as 16 hex digits.
std::string instance_hash(const Instance& inst);

}  // namespace reserve_lab
