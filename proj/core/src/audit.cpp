#include "reserve_lab/audit.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <sstream>

#include "reserve_lab/error.hpp"

namespace reserve_lab {

std::string_view to_string(Axiom axiom) noexcept {
  switch (axiom) {
    case Axiom::Gap: return "gap";
    case Axiom::Fairness: return "fairness";
    case Axiom::NonWastefulness: return "waste";
    case Axiom::Substitutes: return "substitutes";
  }
  return "?";
}

std::optional<Score> CutoffReport::of(Category seat) const {
  const auto it = cutoff.find(seat);
  return it == cutoff.end() ? std::nullopt : it->second;
}

namespace {

std::string join_ids(const auto& ids) {
  std::string out = "{";
  bool first = true;
  for (const auto& id : ids) {
    if (!first) out += ",";
    out += id;
    first = false;
  }
  return out + "}";
}

std::vector<Category> seat_categories(const Instance& inst) {
  return inst.precedence();
}

int seated_count(const Assignment& a, Category seat) {
  return static_cast<int>(std::count_if(a.seats.begin(), a.seats.end(),
                                        [seat](const auto& kv) { return kv.second == seat; }));
}

// Floor a gap rule applies at the target stage, rederived from the outcome.
std::optional<Score> derived_floor(const Instance& inst, const Assignment& a,
                                   const PolicySpec& spec) {
  if (spec.kind != PolicyKind::GapConstrained || !spec.gap_bound) return std::nullopt;
  const auto& prec = inst.precedence();
  const auto open_at = std::find(prec.begin(), prec.end(), Category::Open);
  const auto target_at = std::find(prec.begin(), prec.end(), spec.target);
  if (open_at == prec.end() || target_at == prec.end() || target_at < open_at) return std::nullopt;
  std::optional<Score> open_cutoff;
  for (const auto& [id, seat] : a.seats) {
    if (seat != Category::Open) continue;
    const auto* p = inst.find(id);
    if (p && (!open_cutoff || p->score < *open_cutoff)) open_cutoff = p->score;
  }
  if (!open_cutoff) return std::nullopt;
  return *open_cutoff - *spec.gap_bound;
}

// Acceptable roster positions for `seat` under `spec`, floor included.
std::vector<std::uint32_t> acceptable_for(const Instance& inst, const Assignment& a,
                                          Category seat, const PolicySpec& spec) {
  const auto ranking = detail::seat_ranking(inst, seat, spec.base_spec());
  std::vector<std::uint32_t> out(ranking.acceptable().begin(), ranking.acceptable().end());
  if (seat == spec.target) {
    if (const auto floor = derived_floor(inst, a, spec)) {
      std::erase_if(out, [&](std::uint32_t idx) { return inst.at(idx).score < *floor; });
    }
  }
  return out;
}

bool mask_lex_less(std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  const int t = std::countr_zero(diff);
  if ((a >> t) & 1u) return (b >> t) != 0;
  return (a >> t) == 0;
}

struct Triple {
  std::uint64_t subset;
  std::uint32_t j;
  std::uint32_t i;
};

bool triple_less(const Triple& x, const Triple& y) noexcept {
  if (x.subset != y.subset) return mask_lex_less(x.subset, y.subset);
  if (x.j != y.j) return x.j < y.j;
  return x.i < y.i;
}

// Visits every (S, j, i) violation, S in numeric mask order.
void enumerate_substitutes(const Allocator& alloc, std::size_t n,
                           const std::function<void(const Triple&)>& visit) {
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<std::uint64_t> chosen(count);
  for (std::uint64_t m = 0; m < count; ++m) chosen[m] = alloc.chosen_mask(m);
  for (std::uint64_t s = 0; s < count; ++s) {
    const std::uint64_t rejected = s & ~chosen[s];
    if (rejected == 0) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::uint64_t jbit = std::uint64_t{1} << j;
      if (s & jbit) continue;
      std::uint64_t helped = rejected & chosen[s | jbit];
      while (helped) {
        const auto i = static_cast<std::uint32_t>(std::countr_zero(helped));
        helped &= helped - 1;
        visit(Triple{s, j, i});
      }
    }
  }
}

std::vector<std::string> ids_of(const Instance& inst, std::uint64_t mask) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    if ((mask >> i) & 1u) out.push_back(inst.at(i).id);
  }
  return out;
}

ViolationWitness substitutes_witness(const Instance& universe, const PolicySpec& rule,
                                     const Allocator& alloc, const Triple& t) {
  ViolationWitness w;
  w.axiom = Axiom::Substitutes;
  const std::uint64_t expanded = t.subset | (std::uint64_t{1} << t.j);
  const auto expanded_ids = ids_of(universe, expanded);
  w.instance = restrict_to(universe, expanded_ids);
  w.rule = rule;
  w.assignment = apply_rule(w.instance, rule);
  w.subset = ids_of(universe, t.subset);
  const auto& j = universe.at(t.j).id;
  const auto& i = universe.at(t.i).id;
  w.individuals = {j, i};

  const auto before = alloc.choose(t.subset);
  std::ostringstream trace;
  trace << "on S=" << join_ids(w.subset) << " chosen " << join_ids(before.chosen())
        << ", " << i << " rejected; on S+" << j << " chosen "
        << join_ids(w.assignment->chosen()) << ", " << i << " seated at "
        << to_string(w.assignment->seats.at(i));
  if (before.floor || w.assignment->floor) {
    trace << " (floor " << (before.floor ? before.floor->to_string() : "none") << " -> "
          << (w.assignment->floor ? w.assignment->floor->to_string() : "none") << ")";
  }
  w.trace = trace.str();
  return w;
}

void check_universe(const Instance& universe, std::size_t max_universe) {
  const std::size_t limit = std::min(max_universe, std::size_t{24});
  if (universe.size() > limit) {
    throw Error(ErrorCode::UniverseTooLarge,
                "universe has " + std::to_string(universe.size()) +
                    " individuals; exhaustive check allows at most " + std::to_string(limit));
  }
}

bool has_category_pair(const Individual& hi, const Individual& lo) {
  if (hi.score <= lo.score) return false;
  if (hi.memberships.is_general() && lo.memberships.is_general()) return true;
  for (auto r : kReserveCategories) {
    if (hi.memberships.contains(r) && lo.memberships.contains(r)) return true;
  }
  return false;
}

Assignment outcome_of(const ViolationWitness& w) {
  if (w.rule) return apply_rule(w.instance, *w.rule);
  if (w.assignment) return *w.assignment;
  throw Error(ErrorCode::NonReplayingWitness, "witness has neither rule nor assignment");
}

}  // namespace

CutoffReport cutoffs(const Instance& inst, const Assignment& a, Category gap_category) {
  CutoffReport r;
  r.gap_category = gap_category;
  for (auto seat : seat_categories(inst)) r.cutoff[seat] = std::nullopt;
  for (const auto& [id, seat] : a.seats) {
    const auto* p = inst.find(id);
    if (!p) throw Error(ErrorCode::ForeignAssignment, "assignment seats unknown id " + id);
    auto& slot = r.cutoff[seat];
    // Seats iterate in natural id order, so "<=" keeps the largest id on ties.
    if (!slot || p->score <= *slot) {
      slot = p->score;
      r.holder[seat] = id;
    }
  }
  for (const auto& id : a.rejected) {
    if (!inst.find(id)) throw Error(ErrorCode::ForeignAssignment, "assignment rejects unknown id " + id);
  }
  const auto open = r.of(Category::Open);
  const auto other = r.of(gap_category);
  if (open && other) r.gap = *open - *other;
  return r;
}

Verdict gap_check(const CutoffReport& report, const Score& bound) {
  if (!report.gap || *report.gap <= bound) return std::nullopt;
  ViolationWitness w;
  w.axiom = Axiom::Gap;
  w.category = report.gap_category;
  w.bound = bound;
  w.gap = report.gap;
  const auto holder = [&](Category c) {
    const auto it = report.holder.find(c);
    return it == report.holder.end() ? std::string("?") : it->second;
  };
  w.individuals = {holder(Category::Open), holder(report.gap_category)};
  std::ostringstream trace;
  trace << "OPEN cutoff " << *report.of(Category::Open) << " (" << w.individuals[0] << ") - "
        << to_string(report.gap_category) << " cutoff " << *report.of(report.gap_category)
        << " (" << w.individuals[1] << ") = " << *report.gap << " > " << bound;
  w.trace = trace.str();
  return w;
}

Verdict check_fairness(const Instance& inst, const Assignment& a) {
  std::vector<Category> groups(kReserveCategories.begin(), kReserveCategories.end());
  groups.push_back(Category::General);
  for (auto c : groups) {
    auto members = members_of(inst, c);
    std::sort(members.begin(), members.end(), merit_before);
    for (std::size_t hi = 0; hi < members.size(); ++hi) {
      if (a.is_seated(members[hi].id)) continue;
      for (std::size_t lo = hi + 1; lo < members.size(); ++lo) {
        if (members[lo].score < members[hi].score && a.is_seated(members[lo].id)) {
          ViolationWitness w;
          w.axiom = Axiom::Fairness;
          w.instance = inst;
          w.assignment = a;
          w.category = c;
          w.individuals = {members[hi].id, members[lo].id};
          w.trace = std::string(to_string(c)) + " member " + members[hi].id + " (" +
                    members[hi].score.to_string() + ") rejected while " + members[lo].id +
                    " (" + members[lo].score.to_string() + ") is seated";
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

Verdict check_nonwaste(const Instance& inst, const Assignment& a, const PolicySpec& spec) {
  validate_policy(spec);
  for (auto seat : seat_categories(inst)) {
    if (seated_count(a, seat) >= inst.quota(seat)) continue;
    for (auto idx : acceptable_for(inst, a, seat, spec)) {
      const auto& p = inst.at(idx);
      if (a.is_seated(p.id)) continue;
      ViolationWitness w;
      w.axiom = Axiom::NonWastefulness;
      w.instance = inst;
      w.rule = spec;
      w.assignment = a;
      w.category = seat;
      w.individuals = {p.id};
      w.trace = std::string(to_string(seat)) + " seat vacant while acceptable " + p.id +
                " (" + p.score.to_string() + ") is unseated";
      return w;
    }
  }
  return std::nullopt;
}

std::vector<ViolationWitness> substitutes_violations(const PolicySpec& rule,
                                                     const Instance& universe,
                                                     std::size_t max_universe) {
  check_universe(universe, max_universe);
  const Allocator alloc(universe, rule);
  std::vector<Triple> triples;
  enumerate_substitutes(alloc, universe.size(), [&](const Triple& t) { triples.push_back(t); });
  std::sort(triples.begin(), triples.end(), triple_less);
  std::vector<ViolationWitness> out;
  out.reserve(triples.size());
  for (const auto& t : triples) out.push_back(substitutes_witness(universe, rule, alloc, t));
  return out;
}

Verdict check_substitutes(const PolicySpec& rule, const Instance& universe,
                          std::size_t max_universe) {
  check_universe(universe, max_universe);
  const Allocator alloc(universe, rule);
  std::optional<Triple> best;
  enumerate_substitutes(alloc, universe.size(), [&](const Triple& t) {
    if (!best || triple_less(t, *best)) best = t;
  });
  if (!best) return std::nullopt;
  return substitutes_witness(universe, rule, alloc, *best);
}

Verdict check_substitutes_pair(const PolicySpec& rule, const Instance& expanded,
                               std::string_view j, std::string_view i) {
  const auto jdx = expanded.index_of(j);
  const auto idx = expanded.index_of(i);
  if (!jdx || !idx || *jdx == *idx || expanded.size() > Allocator::kMaxIndividuals) {
    return std::nullopt;
  }
  const Allocator alloc(expanded, rule);
  const std::uint64_t jbit = std::uint64_t{1} << *jdx;
  const std::uint64_t ibit = std::uint64_t{1} << *idx;
  const std::uint64_t subset = alloc.everyone() & ~jbit;
  if ((alloc.chosen_mask(subset) & ibit) != 0 || (alloc.chosen_mask(alloc.everyone()) & ibit) == 0) {
    return std::nullopt;
  }
  return substitutes_witness(expanded, rule, alloc,
                             Triple{subset, static_cast<std::uint32_t>(*jdx),
                                    static_cast<std::uint32_t>(*idx)});
}

Verdict audit_gap(const Instance& inst, const PolicySpec& rule, const Score& bound) {
  auto a = apply_rule(inst, rule);
  auto v = gap_check(cutoffs(inst, a, rule.target), bound);
  if (v) {
    v->instance = inst;
    v->rule = rule;
    v->assignment = std::move(a);
  }
  return v;
}

Verdict audit_fairness(const Instance& inst, const PolicySpec& rule) {
  auto v = check_fairness(inst, apply_rule(inst, rule));
  if (v) v->rule = rule;
  return v;
}

Verdict audit_nonwaste(const Instance& inst, const PolicySpec& rule) {
  auto v = check_nonwaste(inst, apply_rule(inst, rule), rule);
  if (v) v->rule = rule;
  return v;
}

bool replays(const ViolationWitness& w) {
  try {
    switch (w.axiom) {
      case Axiom::Gap: {
        if (!w.bound) return false;
        const auto target = w.category.value_or(w.rule ? w.rule->target : Category::OBC);
        return gap_check(cutoffs(w.instance, outcome_of(w), target), *w.bound).has_value();
      }
      case Axiom::Fairness: {
        if (w.individuals.size() != 2) return false;
        const auto a = outcome_of(w);
        const auto* hi = w.instance.find(w.individuals[0]);
        const auto* lo = w.instance.find(w.individuals[1]);
        return hi && lo && has_category_pair(*hi, *lo) && !a.is_seated(hi->id) &&
               a.is_seated(lo->id);
      }
      case Axiom::NonWastefulness: {
        if (w.individuals.size() != 1 || !w.category) return false;
        // The judged assignment need not come from the judging rule.
        const auto a = w.assignment ? *w.assignment : outcome_of(w);
        const auto spec = w.rule.value_or(PolicySpec::hard());
        const auto seat = *w.category;
        const auto idx = w.instance.index_of(w.individuals[0]);
        if (!idx || a.is_seated(w.individuals[0])) return false;
        if (seated_count(a, seat) >= w.instance.quota(seat)) return false;
        const auto acc = acceptable_for(w.instance, a, seat, spec);
        return std::find(acc.begin(), acc.end(), *idx) != acc.end();
      }
      case Axiom::Substitutes: {
        if (!w.rule || w.individuals.size() != 2) return false;
        const auto& j = w.individuals[0];
        const auto& i = w.individuals[1];
        if (i == j || !w.instance.find(i) || !w.instance.find(j)) return false;
        const auto without = remove_individual(w.instance, j);
        const auto before = apply_rule(without, *w.rule);
        const auto after = apply_rule(w.instance, *w.rule);
        return before.rejected.contains(i) && after.is_seated(i);
      }
    }
  } catch (const Error&) {
    return false;
  }
  return false;
}

std::string summary(const ViolationWitness& w) {
  std::ostringstream out;
  out << to_string(w.axiom) << ":";
  switch (w.axiom) {
    case Axiom::Gap:
      out << " gap " << (w.gap ? w.gap->to_string() : "?") << " > D "
          << (w.bound ? w.bound->to_string() : "?");
      if (w.individuals.size() == 2) {
        out << " (OPEN cutoff " << w.individuals[0] << ", "
            << to_string(w.category.value_or(Category::OBC)) << " cutoff " << w.individuals[1]
            << ")";
      }
      break;
    case Axiom::Fairness:
      if (w.individuals.size() == 2) {
        out << " " << w.individuals[0] << " rejected above seated " << w.individuals[1];
      }
      break;
    case Axiom::NonWastefulness:
      if (!w.individuals.empty()) {
        out << " " << to_string(w.category.value_or(Category::Open)) << " vacant, "
            << w.individuals[0] << " unseated";
      }
      break;
    case Axiom::Substitutes:
      if (w.individuals.size() == 2) {
        out << " S=" << join_ids(w.subset) << " j=" << w.individuals[0]
            << " i=" << w.individuals[1] << " (" << w.individuals[0] << " helps "
            << w.individuals[1] << ")";
      }
      break;
  }
  if (w.rule) out << " under " << describe(*w.rule);
  return out.str();
}

}  // namespace reserve_lab
