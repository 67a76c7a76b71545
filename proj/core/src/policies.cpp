#include "reserve_lab/policies.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "reserve_lab/error.hpp"

namespace reserve_lab {

std::string_view to_string(PolicyKind kind) noexcept {
  switch (kind) {
    case PolicyKind::Hard: return "hard";
    case PolicyKind::Soft: return "soft";
    case PolicyKind::Elevated: return "elevated";
    case PolicyKind::GapConstrained: return "gap";
  }
  return "?";
}

std::string_view to_string(SoftScope scope) noexcept {
  return scope == SoftScope::GcOnly ? "gc" : "all";
}

PolicySpec PolicySpec::hard(Category target) {
  PolicySpec s;
  s.kind = PolicyKind::Hard;
  s.target = target;
  return s;
}

PolicySpec PolicySpec::soft(SoftScope scope, Category target) {
  PolicySpec s;
  s.kind = PolicyKind::Soft;
  s.soft_scope = scope;
  s.target = target;
  return s;
}

PolicySpec PolicySpec::elevated(Score k, Category target) {
  PolicySpec s;
  s.kind = PolicyKind::Elevated;
  s.boost = k;
  s.target = target;
  return s;
}

PolicySpec PolicySpec::gap_constrained(const PolicySpec& base, std::optional<Score> bound) {
  if (base.kind == PolicyKind::GapConstrained) {
    throw Error(ErrorCode::InvalidPolicy, "gap rule cannot wrap another gap rule");
  }
  PolicySpec s = base;
  s.kind = PolicyKind::GapConstrained;
  s.base = base.kind;
  s.gap_bound = bound;
  return s;
}

PolicySpec PolicySpec::base_spec() const {
  if (kind != PolicyKind::GapConstrained) return *this;
  PolicySpec s = *this;
  s.kind = base.value_or(PolicyKind::Hard);
  s.base.reset();
  s.gap_bound.reset();
  return s;
}

void validate_policy(const PolicySpec& spec) {
  if (!is_reserve(spec.target)) {
    throw Error(ErrorCode::InvalidPolicy,
                "policy target must be a reserve category, got " +
                    std::string(to_string(spec.target)));
  }
  if (spec.kind == PolicyKind::GapConstrained) {
    if (!spec.base || *spec.base == PolicyKind::GapConstrained) {
      throw Error(ErrorCode::InvalidPolicy, "gap rule needs a hard, soft or elevated base");
    }
    if (spec.gap_bound && spec.gap_bound->is_negative()) {
      throw Error(ErrorCode::InvalidPolicy, "gap bound D must be non-negative");
    }
  } else {
    if (spec.base) throw Error(ErrorCode::InvalidPolicy, "base kind given for a non-gap rule");
    if (spec.gap_bound) throw Error(ErrorCode::InvalidPolicy, "gap bound given for a non-gap rule");
  }
  const auto ordering = spec.ordering_kind();
  if (ordering == PolicyKind::Elevated) {
    if (!spec.boost) throw Error(ErrorCode::InvalidPolicy, "elevated rule needs a boost k");
    if (spec.boost->is_negative()) throw Error(ErrorCode::InvalidPolicy, "boost k must be non-negative");
  } else if (spec.boost) {
    throw Error(ErrorCode::InvalidPolicy, "boost k given for a non-elevated rule");
  }
  if (ordering != PolicyKind::Soft && spec.soft_scope) {
    throw Error(ErrorCode::InvalidPolicy, "soft scope given for a non-soft rule");
  }
}

std::string describe(const PolicySpec& spec) {
  const auto inner = [&](PolicyKind kind) {
    std::string out(to_string(kind));
    if (kind == PolicyKind::Elevated && spec.boost) out += "(k=" + spec.boost->to_string() + ")";
    if (kind == PolicyKind::Soft) out += "(" + std::string(to_string(spec.scope())) + ")";
    if (spec.target != Category::OBC && kind != PolicyKind::Hard) {
      out += "@" + std::string(to_string(spec.target));
    }
    return out;
  };
  if (spec.kind != PolicyKind::GapConstrained) return inner(spec.kind);
  return "gap(" + inner(spec.ordering_kind()) + ", D=" +
         (spec.gap_bound ? spec.gap_bound->to_string() : std::string("inf")) + ")";
}

bool PriorityOrder::is_acceptable(std::string_view id) const noexcept {
  const auto acc = acceptable();
  return std::find(acc.begin(), acc.end(), id) != acc.end();
}

std::optional<std::size_t> PriorityOrder::rank_of(std::string_view id) const noexcept {
  const auto it = std::find(ranked.begin(), ranked.end(), id);
  if (it == ranked.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ranked.begin());
}

PriorityOrder to_priority_order(const Instance& inst, const IndexOrder& order) {
  PriorityOrder out;
  out.ranked.reserve(order.ranked.size());
  for (auto idx : order.ranked) out.ranked.push_back(inst.at(idx).id);
  out.vacancy_rank = order.vacancy_rank;
  return out;
}

namespace detail {

namespace {

void require_reserve(Category c) {
  if (!is_reserve(c)) {
    throw Error(ErrorCode::UnknownCategory,
                std::string(to_string(c)) + " is not a reserve category");
  }
}

std::vector<std::uint32_t> merit_sorted(const Instance& inst) {
  std::vector<std::uint32_t> idx(inst.size());
  std::iota(idx.begin(), idx.end(), 0u);
  const auto people = inst.individuals();
  std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
    return merit_before(people[a], people[b]);
  });
  return idx;
}

// Stable partition of the merit order into tiers; tiers before `acceptable_tiers`
// sit above the vacancy.
template <class TierOf>
IndexOrder tiered(const Instance& inst, int tier_count, int acceptable_tiers, TierOf tier_of) {
  const auto merit = merit_sorted(inst);
  IndexOrder out;
  out.ranked.reserve(merit.size());
  for (int t = 0; t < tier_count; ++t) {
    for (auto idx : merit) {
      if (tier_of(inst.at(idx)) == t) out.ranked.push_back(idx);
    }
    if (t + 1 == acceptable_tiers) out.vacancy_rank = out.ranked.size();
  }
  return out;
}

}  // namespace

IndexOrder baseline_ranking(const Instance& inst) {
  IndexOrder out;
  out.ranked = merit_sorted(inst);
  out.vacancy_rank = out.ranked.size();
  return out;
}

IndexOrder hard_ranking(const Instance& inst, Category c) {
  require_reserve(c);
  return tiered(inst, 2, 1, [c](const Individual& p) { return is_member(p, c) ? 0 : 1; });
}

IndexOrder soft_ranking(const Instance& inst, Category c, SoftScope scope) {
  require_reserve(c);
  if (scope == SoftScope::Everyone) {
    return tiered(inst, 2, 2, [c](const Individual& p) { return is_member(p, c) ? 0 : 1; });
  }
  return tiered(inst, 3, 2, [c](const Individual& p) {
    if (is_member(p, c)) return 0;
    return p.memberships.is_general() ? 1 : 2;
  });
}

IndexOrder elevated_ranking(const Instance& inst, Category c, const Score& k) {
  require_reserve(c);
  if (k.is_negative()) throw Error(ErrorCode::InvalidPolicy, "boost k must be non-negative");

  struct Key {
    Score effective;
    bool member;
    std::uint32_t index;
  };
  const auto people = inst.individuals();
  std::vector<Key> keys;
  keys.reserve(people.size());
  for (std::uint32_t i = 0; i < people.size(); ++i) {
    const bool member = is_member(people[i], c);
    keys.push_back({member ? people[i].score + k : people[i].score, member, i});
  }
  // Higher effective score first; on equality a non-member precedes a
  // member (the member needs a strict win); then ascending id.
  const auto before = [&](const Key& a, const Key& b) {
    if (a.effective != b.effective) return a.effective > b.effective;
    if (a.member != b.member) return !a.member;
    return id_less(people[a.index].id, people[b.index].id);
  };
  std::sort(keys.begin(), keys.end(), before);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    if (!before(keys[i - 1], keys[i])) {
      throw Error(ErrorCode::IntransitiveTie,
                  "elevated order cannot separate " + people[keys[i - 1].index].id +
                      " and " + people[keys[i].index].id);
    }
  }
  IndexOrder out;
  out.ranked.reserve(keys.size());
  for (const auto& key : keys) out.ranked.push_back(key.index);
  out.vacancy_rank = out.ranked.size();
  return out;
}

IndexOrder seat_ranking(const Instance& inst, Category seat, const PolicySpec& spec) {
  if (seat == Category::Open) return baseline_ranking(inst);
  require_reserve(seat);
  if (seat != spec.target) return hard_ranking(inst, seat);
  switch (spec.ordering_kind()) {
    case PolicyKind::Hard: return hard_ranking(inst, seat);
    case PolicyKind::Soft: return soft_ranking(inst, seat, spec.scope());
    case PolicyKind::Elevated: return elevated_ranking(inst, seat, spec.boost.value_or(Score{}));
    case PolicyKind::GapConstrained: break;
  }
  throw Error(ErrorCode::InvalidPolicy, "unsupported ordering kind");
}

}  // namespace detail

PriorityOrder baseline_order(const Instance& inst) {
  return to_priority_order(inst, detail::baseline_ranking(inst));
}

PriorityOrder hard_order(const Instance& inst, Category c) {
  return to_priority_order(inst, detail::hard_ranking(inst, c));
}

PriorityOrder soft_order(const Instance& inst, Category c, SoftScope scope) {
  return to_priority_order(inst, detail::soft_ranking(inst, c, scope));
}

PriorityOrder elevated_order(const Instance& inst, Category c, const Score& k) {
  return to_priority_order(inst, detail::elevated_ranking(inst, c, k));
}

PriorityOrder seat_order(const Instance& inst, Category seat, const PolicySpec& spec) {
  return to_priority_order(inst, detail::seat_ranking(inst, seat, spec));
}

}  // namespace reserve_lab
