#include "reserve_lab/engine.hpp"

#include <algorithm>
#include <array>

#include "reserve_lab/error.hpp"

namespace reserve_lab {

std::set<std::string, IdLess> Assignment::chosen() const {
  std::set<std::string, IdLess> out;
  for (const auto& [id, seat] : seats) out.insert(id);
  return out;
}

std::vector<std::string> Assignment::seated_at(Category seat) const {
  std::vector<std::string> out;
  for (const auto& [id, c] : seats) {
    if (c == seat) out.push_back(id);
  }
  return out;
}

int Assignment::vacancy(Category seat) const {
  const auto it = vacancies.find(seat);
  return it == vacancies.end() ? 0 : it->second;
}

namespace {

constexpr std::int8_t kAbsent = -2;
constexpr std::int8_t kFree = -1;

// Roster state for masks of up to 64 individuals.
struct MaskState {
  std::array<std::int8_t, Allocator::kMaxIndividuals> seat;
  std::uint64_t chosen = 0;

  MaskState(std::uint64_t present, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) seat[i] = ((present >> i) & 1u) ? kFree : kAbsent;
  }
  bool available(std::uint32_t i) const { return seat[i] == kFree; }
  void assign(std::uint32_t i, std::size_t stage) {
    seat[i] = static_cast<std::int8_t>(stage);
    chosen |= std::uint64_t{1} << i;
  }
};

struct VectorState {
  std::vector<std::int16_t> seat;

  explicit VectorState(std::size_t n) : seat(n, kFree) {}
  bool available(std::uint32_t i) const { return seat[i] == kFree; }
  void assign(std::uint32_t i, std::size_t stage) { seat[i] = static_cast<std::int16_t>(stage); }
};

}  // namespace

struct Allocator::Observer {
  struct StageResult {
    std::vector<std::uint32_t> seated;
    std::optional<Score> floor;
  };
  std::vector<StageResult> stages;
  std::optional<Score> floor;
};

Allocator::Allocator(const Instance& inst, const PolicySpec& spec) : inst_(inst) {
  validate_policy(spec);
  gap_rule_ = spec.kind == PolicyKind::GapConstrained;
  gap_bound_ = spec.gap_bound;
  const PolicySpec base = spec.base_spec();

  stages_.reserve(inst_.precedence().size());
  for (auto cat : inst_.precedence()) {
    const auto ranking = detail::seat_ranking(inst_, cat, base);
    const auto acc = ranking.acceptable();
    stages_.push_back(Stage{cat, inst_.quota(cat),
                            std::vector<std::uint32_t>(acc.begin(), acc.end()),
                            gap_rule_ && cat == spec.target});
  }
  scores_.reserve(inst_.size());
  for (const auto& p : inst_.individuals()) scores_.push_back(p.score);
  everyone_ = inst_.size() >= 64 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << inst_.size()) - 1;
}

template <class State>
void Allocator::fill(State& state, Observer* obs) const {
  // Open cutoff of this run, once the OPEN stage has seated someone.
  std::optional<Score> open_cutoff;
  if (obs) obs->stages.assign(stages_.size(), {});

  for (std::size_t s = 0; s < stages_.size(); ++s) {
    const Stage& stage = stages_[s];
    std::optional<Score> floor;
    if (stage.floored && gap_bound_ && open_cutoff) floor = *open_cutoff - *gap_bound_;
    if (obs && floor) {
      obs->stages[s].floor = floor;
      obs->floor = floor;
    }

    int filled = 0;
    std::optional<Score> lowest;
    for (auto idx : stage.acceptable) {
      if (filled >= stage.quota) break;
      if (!state.available(idx)) continue;
      if (floor && scores_[idx] < *floor) continue;
      state.assign(idx, s);
      ++filled;
      if (!lowest || scores_[idx] < *lowest) lowest = scores_[idx];
      if (obs) obs->stages[s].seated.push_back(idx);
    }
    if (stage.category == Category::Open && filled > 0) open_cutoff = lowest;
  }
}

std::uint64_t Allocator::chosen_mask(std::uint64_t present) const {
  if (inst_.size() > kMaxIndividuals) {
    throw Error(ErrorCode::UniverseTooLarge, "mask evaluation supports at most 64 individuals");
  }
  MaskState state(present & everyone_, inst_.size());
  fill(state, nullptr);
  return state.chosen;
}

Assignment Allocator::choose(std::uint64_t present) const {
  present &= everyone_;
  Observer obs;
  std::vector<bool> in_roster(inst_.size());
  if (inst_.size() <= kMaxIndividuals) {
    MaskState state(present, inst_.size());
    fill(state, &obs);
    for (std::size_t i = 0; i < inst_.size(); ++i) in_roster[i] = (present >> i) & 1u;
  } else {
    VectorState state(inst_.size());
    fill(state, &obs);
    in_roster.assign(inst_.size(), true);
  }

  Assignment a;
  a.floor = obs.floor;
  std::vector<bool> seated(inst_.size(), false);
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    const Stage& stage = stages_[s];
    StageTrace t;
    t.category = stage.category;
    t.quota = stage.quota;
    t.floor = obs.stages[s].floor;
    for (auto idx : obs.stages[s].seated) {
      const auto& p = inst_.at(idx);
      a.seats.emplace(p.id, stage.category);
      seated[idx] = true;
      t.seated.push_back(p.id);
      if (!t.cutoff || p.score < *t.cutoff) t.cutoff = p.score;
    }
    a.vacancies[stage.category] = stage.quota - static_cast<int>(t.seated.size());
    a.trace.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < inst_.size(); ++i) {
    if (in_roster[i] && !seated[i]) a.rejected.insert(inst_.at(i).id);
  }
  return a;
}

Assignment choose(const Instance& inst, const PolicySpec& spec) {
  if (spec.kind == PolicyKind::GapConstrained) {
    throw Error(ErrorCode::InvalidPolicy, "use gap_constrained_choose for gap rules");
  }
  const Allocator alloc(inst, spec);
  return alloc.choose(alloc.everyone());
}

Assignment gap_constrained_choose(const Instance& inst, const PolicySpec& base,
                                  std::optional<Score> bound) {
  const Allocator alloc(inst, PolicySpec::gap_constrained(base, bound));
  return alloc.choose(alloc.everyone());
}

Assignment apply_rule(const Instance& inst, const PolicySpec& spec) {
  const Allocator alloc(inst, spec);
  return alloc.choose(alloc.everyone());
}

Instance add_individual(const Instance& inst, Individual person) {
  if (inst.find(person.id)) {
    throw Error(ErrorCode::DuplicateId, "id " + person.id + " already present");
  }
  InstanceData data = inst.data();
  data.individuals.push_back(std::move(person));
  return validate_instance(std::move(data));
}

Instance remove_individual(const Instance& inst, std::string_view id) {
  InstanceData data = inst.data();
  std::erase_if(data.individuals, [&](const Individual& p) { return p.id == id; });
  return validate_instance(std::move(data));
}

}  // namespace reserve_lab
