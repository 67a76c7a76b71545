#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reserve_lab/model.hpp"

namespace reserve_lab {

enum class PolicyKind { Hard, Soft, Elevated, GapConstrained };
enum class SoftScope { GcOnly, Everyone };

std::string_view to_string(PolicyKind kind) noexcept;
std::string_view to_string(SoftScope scope) noexcept;

/// How the reserve seats of `target` are prioritized. Reserve categories
/// other than `target` are always processed as hard reserves.
///
/// A GapConstrained spec wraps a base kind (Hard, Soft or Elevated) and adds
/// a floor "open cutoff minus D" on raw scores at the target stage; an absent
/// `gap_bound` means D is unbounded.
struct PolicySpec {
  PolicyKind kind = PolicyKind::Hard;
  std::optional<PolicyKind> base;
  std::optional<Score> boost;
  std::optional<Score> gap_bound;
  std::optional<SoftScope> soft_scope;
  Category target = Category::OBC;

  static PolicySpec hard(Category target = Category::OBC);
  static PolicySpec soft(SoftScope scope = SoftScope::GcOnly,
                         Category target = Category::OBC);
  static PolicySpec elevated(Score k, Category target = Category::OBC);
  /// Wraps a Hard/Soft/Elevated spec. Throws Error(InvalidPolicy) otherwise.
  static PolicySpec gap_constrained(const PolicySpec& base,
                                    std::optional<Score> bound);

  /// The kind that orders the target stage (the base kind for gap specs).
  PolicyKind ordering_kind() const noexcept {
    return kind == PolicyKind::GapConstrained ? base.value_or(PolicyKind::Hard) : kind;
  }
  /// The policy with the gap wrapper removed.
  PolicySpec base_spec() const;
  SoftScope scope() const noexcept { return soft_scope.value_or(SoftScope::GcOnly); }

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Parameters present iff the kind requires them; target is a reserve label.
void validate_policy(const PolicySpec& spec);

/// e.g. "elevated(k=10)", "gap(elevated(k=10), D=10)".
std::string describe(const PolicySpec& spec);

/// Ranked roster positions, best first. Entries at or after `vacancy_rank`
/// are unacceptable (those seats prefer to stay empty).
struct IndexOrder {
  std::vector<std::uint32_t> ranked;
  std::size_t vacancy_rank = 0;

  std::span<const std::uint32_t> acceptable() const noexcept {
    return std::span<const std::uint32_t>(ranked).first(vacancy_rank);
  }
  friend bool operator==(const IndexOrder&, const IndexOrder&) = default;
};

/// Strict priority order over ids with the "leave vacant" marker.
struct PriorityOrder {
  std::vector<std::string> ranked;
  std::size_t vacancy_rank = 0;

  std::span<const std::string> acceptable() const noexcept {
    return std::span<const std::string>(ranked).first(vacancy_rank);
  }
  bool is_acceptable(std::string_view id) const noexcept;
  std::optional<std::size_t> rank_of(std::string_view id) const noexcept;

  friend bool operator==(const PriorityOrder&, const PriorityOrder&) = default;
};

PriorityOrder to_priority_order(const Instance& inst, const IndexOrder& order);

/// Everyone by descending score (ties by id), all acceptable.
PriorityOrder baseline_order(const Instance& inst);
/// Members of c only; everyone else is ranked below the vacancy.
PriorityOrder hard_order(const Instance& inst, Category c);
/// Members of c, then the reversion pool (g members or everyone), then vacancy.
PriorityOrder soft_order(const Instance& inst, Category c, SoftScope scope);
/// Members of c are compared with non-members on score + k; a non-member
/// wins on equality. Everyone is acceptable.
PriorityOrder elevated_order(const Instance& inst, Category c, const Score& k);

/// The order used for seat category `seat` under `spec`: baseline for OPEN,
/// the policy ordering kind for the target, hard for other reserves.
PriorityOrder seat_order(const Instance& inst, Category seat, const PolicySpec& spec);

namespace detail {
IndexOrder baseline_ranking(const Instance& inst);
IndexOrder hard_ranking(const Instance& inst, Category c);
IndexOrder soft_ranking(const Instance& inst, Category c, SoftScope scope);
IndexOrder elevated_ranking(const Instance& inst, Category c, const Score& k);
IndexOrder seat_ranking(const Instance& inst, Category seat, const PolicySpec& spec);
}  // namespace detail

}  // namespace reserve_lab
