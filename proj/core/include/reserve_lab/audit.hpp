#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reserve_lab/engine.hpp"
#include "reserve_lab/model.hpp"
#include "reserve_lab/policies.hpp"

namespace reserve_lab {

struct CutoffReport {
  /// Minimum raw seated score per seat category; absent when nobody is seated.
  std::map<Category, std::optional<Score>> cutoff;
  /// An individual attaining the cutoff (lowest score, largest id on ties).
  std::map<Category, std::string> holder;
  /// Category whose cutoff is compared with OPEN.
  Category gap_category = Category::OBC;
  /// open cutoff - gap_category cutoff, when both exist.
  std::optional<Score> gap;

  std::optional<Score> of(Category seat) const;
};

/// Throws Error(ForeignAssignment) when `a` names ids missing from `inst`.
CutoffReport cutoffs(const Instance& inst, const Assignment& a,
                     Category gap_category = Category::OBC);

enum class Axiom { Gap, Fairness, NonWastefulness, Substitutes };
std::string_view to_string(Axiom axiom) noexcept;

/// A replayable axiom failure.
///
/// `individuals` by axiom:
///   Gap              {open cutoff holder, gap-category cutoff holder}
///   Fairness         {higher-scored unseated member, lower-scored seated member}
///   NonWastefulness  {unseated acceptable individual}
///   Substitutes      {arriving individual j, individual i it helps}
/// For Substitutes, `instance` is the expanded roster S + j.
struct ViolationWitness {
  Axiom axiom = Axiom::Gap;
  Instance instance;
  std::optional<PolicySpec> rule;
  /// Observed assignment; recomputed from `rule` on replay when a rule exists.
  std::optional<Assignment> assignment;
  std::vector<std::string> individuals;
  std::vector<std::string> subset;
  std::optional<Category> category;
  std::optional<Score> bound;
  std::optional<Score> gap;
  std::string trace;
};

/// Absent on pass.
using Verdict = std::optional<ViolationWitness>;

/// Passes when there is no gap or gap <= D.
Verdict gap_check(const CutoffReport& report, const Score& bound);

/// Same-category fairness: a seated member implies every higher-scored
/// member of that category is seated somewhere.
Verdict check_fairness(const Instance& inst, const Assignment& a);

/// No seat is vacant while an unseated individual acceptable to that seat's
/// order exists. Under a gap policy the floor recorded in `a` restricts the
/// target seats' acceptable set.
Verdict check_nonwaste(const Instance& inst, const Assignment& a, const PolicySpec& spec);

inline constexpr std::size_t kDefaultMaxUniverse = 12;

/// Exhaustive substitutes check over every S of the roster and j outside S:
/// a violation is an i in S rejected on S but chosen on S + j. Reports the
/// lexicographically smallest (S, j, i) over roster positions.
/// Throws Error(UniverseTooLarge) above `max_universe` individuals.
Verdict check_substitutes(const PolicySpec& rule, const Instance& universe,
                          std::size_t max_universe = kDefaultMaxUniverse);

/// Every substitutes violation, in (S, j, i) order.
std::vector<ViolationWitness> substitutes_violations(
    const PolicySpec& rule, const Instance& universe,
    std::size_t max_universe = kDefaultMaxUniverse);

/// Witness for one specific (j, i) on `expanded` = S + j, if it violates.
Verdict check_substitutes_pair(const PolicySpec& rule, const Instance& expanded,
                               std::string_view j, std::string_view i);

/// Runs the rule, then the check, and attaches the rule to the witness.
Verdict audit_gap(const Instance& inst, const PolicySpec& rule, const Score& bound);
Verdict audit_fairness(const Instance& inst, const PolicySpec& rule);
Verdict audit_nonwaste(const Instance& inst, const PolicySpec& rule);

/// Re-derives the violation from the witness alone.
bool replays(const ViolationWitness& w);

/// One line: axiom and key individuals.
std::string summary(const ViolationWitness& w);

}  // namespace reserve_lab
