#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "reserve_lab/model.hpp"
#include "reserve_lab/policies.hpp"

namespace reserve_lab {

/// One processed seat category, in processing order.
struct StageTrace {
  Category category = Category::Open;
  int quota = 0;
  std::vector<std::string> seated;
  std::optional<Score> cutoff;
  /// Raw-score floor applied at this stage (gap-constrained target only).
  std::optional<Score> floor;
};

struct Assignment {
  std::map<std::string, Category, IdLess> seats;
  std::set<std::string, IdLess> rejected;
  std::map<Category, int> vacancies;

  std::vector<StageTrace> trace;
  std::optional<Score> floor;

  std::set<std::string, IdLess> chosen() const;
  std::vector<std::string> seated_at(Category seat) const;
  bool is_seated(std::string_view id) const { return seats.find(id) != seats.end(); }
  int vacancy(Category seat) const;

  /// Outcome equality; the trace is diagnostic and not compared.
  friend bool operator==(const Assignment& a, const Assignment& b) {
    return a.seats == b.seats && a.rejected == b.rejected &&
           a.vacancies == b.vacancies && a.floor == b.floor;
  }
};

/// Sequential seat filling with orders precomputed once for a roster.
/// `choose(present)` runs the rule on the sub-roster selected by the bit
/// mask, which is exactly the rule applied to that sub-instance because all
/// orders are pairwise-defined and the floor is derived per run.
class Allocator {
 public:
  static constexpr std::size_t kMaxIndividuals = 64;

  Allocator(const Instance& inst, const PolicySpec& spec);

  std::uint64_t everyone() const noexcept { return everyone_; }

  /// Bit mask of chosen individuals among `present`. Rosters above 64
  /// individuals throw Error(UniverseTooLarge).
  std::uint64_t chosen_mask(std::uint64_t present) const;

  /// Full assignment with seats, vacancies and per-stage trace.
  Assignment choose(std::uint64_t present) const;

  const Instance& instance() const noexcept { return inst_; }

 private:
  struct Stage {
    Category category;
    int quota;
    std::vector<std::uint32_t> acceptable;
    bool floored;
  };

  struct Observer;
  template <class State>
  void fill(State& state, Observer* obs) const;

  Instance inst_;
  std::vector<Stage> stages_;
  std::vector<Score> scores_;
  std::optional<Score> gap_bound_;
  bool gap_rule_ = false;
  std::uint64_t everyone_ = 0;
};

/// Sequential fill for Hard, Soft and Elevated specs.
/// Throws Error(InvalidPolicy) for a GapConstrained spec.
Assignment choose(const Instance& inst, const PolicySpec& spec);

/// `choose` with a raw-score floor F - D at the target stage, where F is the
/// open cutoff of this run. `bound` absent means no floor.
Assignment gap_constrained_choose(const Instance& inst, const PolicySpec& base,
                                  std::optional<Score> bound);

/// Dispatches on spec.kind.
Assignment apply_rule(const Instance& inst, const PolicySpec& spec);

/// New validated instance with `person` added. Throws Error(DuplicateId).
Instance add_individual(const Instance& inst, Individual person);
/// New instance without `id`; unknown ids leave it unchanged.
Instance remove_individual(const Instance& inst, std::string_view id);

}  // namespace reserve_lab
