#include "reserve_lab/search.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

#include "reserve_lab/engine.hpp"
#include "reserve_lab/error.hpp"

namespace reserve_lab {

namespace {

std::vector<Score> grid_descending(const SearchSpace& space) {
  std::vector<Score> grid = space.score_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>{});
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

QuotaRange range_of(const SearchSpace& space, Category r) {
  const auto it = space.quotas.find(r);
  return it == space.quotas.end() ? QuotaRange{} : it->second;
}

std::string canonical_id(std::size_t position) { return "i" + std::to_string(position + 1); }

// Builds the canonical instance: positions sorted by (score desc, membership).
Instance make_instance(const SearchSpace& space, int capacity, const std::array<int, 4>& quotas,
                       std::vector<std::pair<Score, CategorySet>> people) {
  std::stable_sort(people.begin(), people.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  InstanceData data;
  data.capacity = capacity;
  data.distinct_scores = space.distinct_scores;
  for (std::size_t r = 0; r < kReserveCategories.size(); ++r) {
    if (quotas[r] > 0) data.reserved[kReserveCategories[r]] = quotas[r];
  }
  data.individuals.reserve(people.size());
  for (std::size_t i = 0; i < people.size(); ++i) {
    data.individuals.push_back({canonical_id(i), people[i].second, people[i].first});
  }
  return validate_instance(std::move(data));
}

class Enumerator {
 public:
  Enumerator(const SearchSpace& space, const InstanceVisitor& visit)
      : space_(space), visit_(visit), grid_(grid_descending(space)) {
    memberships_ = space.memberships;
    std::sort(memberships_.begin(), memberships_.end());
    memberships_.erase(std::unique(memberships_.begin(), memberships_.end()), memberships_.end());
  }

  std::size_t run() {
    if (memberships_.empty()) return 0;
    for (std::size_t n = space_.min_n; n <= space_.max_n && !stopped_; ++n) {
      if (n > 0 && grid_.empty()) break;
      if (space_.distinct_scores && n > grid_.size()) break;
      for (int cap = space_.min_capacity; cap <= space_.max_capacity && !stopped_; ++cap) {
        std::array<int, 4> quotas{};
        quotas_rec(n, cap, 0, 0, quotas);
      }
    }
    return visited_;
  }

 private:
  void quotas_rec(std::size_t n, int cap, std::size_t r, int used, std::array<int, 4>& quotas) {
    if (stopped_) return;
    if (r == kReserveCategories.size()) {
      scores_.clear();
      scores_rec(n, cap, quotas, 0);
      return;
    }
    const auto range = range_of(space_, kReserveCategories[r]);
    for (int q = std::max(0, range.min); q <= range.max && used + q <= cap && !stopped_; ++q) {
      quotas[r] = q;
      quotas_rec(n, cap, r + 1, used + q, quotas);
    }
    quotas[r] = 0;
  }

  // Score tuples are non-increasing grid positions (strictly, if distinct).
  void scores_rec(std::size_t n, int cap, const std::array<int, 4>& quotas, std::size_t from) {
    if (stopped_) return;
    if (scores_.size() == n) {
      members_.assign(n, 0);
      members_rec(cap, quotas, 0);
      return;
    }
    for (std::size_t g = from; g < grid_.size() && !stopped_; ++g) {
      scores_.push_back(g);
      scores_rec(n, cap, quotas, space_.distinct_scores ? g + 1 : g);
      scores_.pop_back();
    }
  }

  void members_rec(int cap, const std::array<int, 4>& quotas, std::size_t pos) {
    if (stopped_) return;
    if (pos == scores_.size()) {
      std::vector<std::pair<Score, CategorySet>> people;
      people.reserve(pos);
      for (std::size_t i = 0; i < pos; ++i) {
        people.emplace_back(grid_[scores_[i]], memberships_[members_[i]]);
      }
      ++visited_;
      if (!visit_(make_instance(space_, cap, quotas, std::move(people)))) stopped_ = true;
      return;
    }
    const bool tied = pos > 0 && scores_[pos] == scores_[pos - 1];
    for (std::size_t m = tied ? members_[pos - 1] : 0; m < memberships_.size() && !stopped_; ++m) {
      members_[pos] = m;
      members_rec(cap, quotas, pos + 1);
    }
  }

  const SearchSpace& space_;
  const InstanceVisitor& visit_;
  std::vector<Score> grid_;
  std::vector<CategorySet> memberships_;
  std::vector<std::size_t> scores_;
  std::vector<std::size_t> members_;
  std::size_t visited_ = 0;
  bool stopped_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <class T>
T uniform(std::mt19937_64& rng, T lo, T hi) {
  if (hi <= lo) return lo;
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

using Evaluate = std::function<std::vector<ViolationWitness>(const Instance&)>;

// Evaluates instances in fixed-size batches across workers and emits the
// witnesses in canonical instance order.
std::size_t run_batched(const SearchSpace& space, const Evaluate& evaluate,
                        const WitnessSink& sink) {
  constexpr std::size_t kBatch = 1024;
  unsigned workers = space.threads ? space.threads : std::max(1u, std::thread::hardware_concurrency());

  std::vector<Instance> batch;
  batch.reserve(kBatch);
  std::size_t emitted = 0;
  bool stopped = false;

  const auto flush = [&] {
    std::vector<std::vector<ViolationWitness>> results(batch.size());
    if (workers <= 1 || batch.size() < 2) {
      for (std::size_t i = 0; i < batch.size(); ++i) results[i] = evaluate(batch[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      const unsigned count = std::min<unsigned>(workers, static_cast<unsigned>(batch.size()));
      for (unsigned t = 0; t < count; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < batch.size(); i = next++) results[i] = evaluate(batch[i]);
        });
      }
    }
    for (auto& per_instance : results) {
      for (auto& w : per_instance) {
        ++emitted;
        if (!sink(w)) {
          stopped = true;
          return;
        }
      }
    }
    batch.clear();
  };

  for_each_instance(space, [&](const Instance& inst) {
    batch.push_back(inst);
    if (batch.size() == kBatch) flush();
    return !stopped;
  });
  if (!stopped && !batch.empty()) flush();
  return emitted;
}

bool still_violates(const ViolationWitness& w) { return replays(w); }

// Re-derives a witness of the same kind on a modified instance.
Verdict rederive(const ViolationWitness& w, const Instance& inst,
                 const std::optional<Assignment>& fixed) {
  try {
    switch (w.axiom) {
      case Axiom::Gap: {
        if (w.rule) return audit_gap(inst, *w.rule, *w.bound);
        if (!fixed) return std::nullopt;
        auto v = gap_check(cutoffs(inst, *fixed, w.category.value_or(Category::OBC)), *w.bound);
        if (v) {
          v->instance = inst;
          v->assignment = fixed;
        }
        return v;
      }
      case Axiom::Fairness:
        if (w.rule) return audit_fairness(inst, *w.rule);
        return fixed ? check_fairness(inst, *fixed) : std::nullopt;
      case Axiom::NonWastefulness: {
        const auto spec = w.rule.value_or(PolicySpec::hard());
        auto v = w.rule ? audit_nonwaste(inst, spec)
                        : (fixed ? check_nonwaste(inst, *fixed, spec) : std::nullopt);
        if (v && !w.rule) v->rule.reset();
        return v;
      }
      case Axiom::Substitutes:
        return check_substitutes_pair(*w.rule, inst, w.individuals[0], w.individuals[1]);
    }
  } catch (const Error&) {
  }
  return std::nullopt;
}

Assignment drop_from(const Assignment& a, const Instance& inst, std::string_view id) {
  Assignment out = a;
  out.seats.erase(std::string(id));
  out.rejected.erase(std::string(id));
  out.trace.clear();
  out.vacancies.clear();
  for (auto seat : inst.precedence()) {
    out.vacancies[seat] = inst.quota(seat) - static_cast<int>(out.seated_at(seat).size());
  }
  return out;
}

}  // namespace

std::size_t for_each_instance(const SearchSpace& space, const InstanceVisitor& visit) {
  if (space.mode == SearchMode::Listed) {
    for (std::size_t t = 0; t < space.listed.size(); ++t) {
      if (!visit(space.listed[t])) return t + 1;
    }
    return space.listed.size();
  }
  if (space.mode == SearchMode::Sample) {
    for (std::uint64_t t = 0; t < space.samples; ++t) {
      if (!visit(sample_instance(space, t))) return t + 1;
    }
    return space.samples;
  }
  Enumerator e(space, visit);
  return e.run();
}

Instance sample_instance(const SearchSpace& space, std::uint64_t index) {
  std::mt19937_64 rng(splitmix64(space.seed ^ splitmix64(index)));
  auto grid = grid_descending(space);
  std::size_t max_n = space.max_n;
  if (grid.empty()) max_n = 0;
  if (space.distinct_scores) max_n = std::min(max_n, grid.size());
  const std::size_t n = uniform<std::size_t>(rng, std::min(space.min_n, max_n), max_n);
  const int cap = uniform<int>(rng, space.min_capacity, std::max(space.min_capacity, space.max_capacity));

  std::array<int, 4> quotas{};
  int used = 0;
  for (std::size_t r = 0; r < kReserveCategories.size(); ++r) {
    const auto range = range_of(space, kReserveCategories[r]);
    int q = uniform<int>(rng, std::max(0, range.min), std::max(0, range.max));
    q = std::min(q, cap - used);
    quotas[r] = std::max(0, q);
    used += quotas[r];
  }

  std::vector<std::pair<Score, CategorySet>> people;
  people.reserve(n);
  std::vector<Score> picks;
  if (space.distinct_scores) {
    std::shuffle(grid.begin(), grid.end(), rng);
    picks.assign(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(n));
  } else {
    for (std::size_t i = 0; i < n; ++i) picks.push_back(grid[uniform<std::size_t>(rng, 0, grid.size() - 1)]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = space.memberships.empty()
                        ? CategorySet::general()
                        : space.memberships[uniform<std::size_t>(rng, 0, space.memberships.size() - 1)];
    people.emplace_back(picks[i], m);
  }
  return make_instance(space, cap, quotas, std::move(people));
}

std::size_t find_gap_violations(const SearchSpace& space, const WitnessSink& sink) {
  const auto evaluate = [&](const Instance& inst) {
    std::vector<ViolationWitness> out;
    for (const auto& k : space.boosts) {
      if (auto v = audit_gap(inst, PolicySpec::elevated(k), k)) out.push_back(std::move(*v));
    }
    return out;
  };
  return run_batched(space, evaluate, sink);
}

std::size_t find_substitutes_violations(const SearchSpace& space,
                                        std::span<const PolicySpec> family,
                                        const WitnessSink& sink, std::size_t max_universe) {
  for (const auto& rule : family) validate_policy(rule);
  std::size_t largest = space.max_n;
  if (space.mode == SearchMode::Listed) {
    largest = 0;
    for (const auto& inst : space.listed) largest = std::max(largest, inst.size());
  }
  if (largest > max_universe) {
    throw Error(ErrorCode::UniverseTooLarge,
                "space allows " + std::to_string(largest) + " individuals; limit is " +
                    std::to_string(max_universe));
  }
  const auto evaluate = [&](const Instance& inst) {
    std::vector<ViolationWitness> out;
    for (const auto& rule : family) {
      if (auto v = check_substitutes(rule, inst, max_universe)) out.push_back(std::move(*v));
    }
    return out;
  };
  return run_batched(space, evaluate, sink);
}

ViolationWitness shrink(const ViolationWitness& w, std::span<const Score> grid) {
  if (!still_violates(w)) {
    throw Error(ErrorCode::NonReplayingWitness, "witness does not replay: " + summary(w));
  }
  ViolationWitness cur = w;
  const std::optional<Assignment> fixed0 = w.rule ? std::nullopt : w.assignment;
  std::optional<Assignment> fixed = fixed0;

  const auto protected_id = [&](const std::string& id) {
    return cur.axiom == Axiom::Substitutes &&
           std::find(cur.individuals.begin(), cur.individuals.end(), id) != cur.individuals.end();
  };
  const auto accept = [&](const Instance& inst, const std::optional<Assignment>& a) {
    auto v = rederive(cur, inst, a);
    if (!v || !still_violates(*v)) return false;
    cur = std::move(*v);
    fixed = a;
    if (fixed) cur.assignment = fixed;
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // Drop individuals, last roster position first.
    for (std::size_t k = cur.instance.size(); k-- > 0 && !changed;) {
      const auto id = cur.instance.at(k).id;
      if (protected_id(id)) continue;
      try {
        const auto smaller = remove_individual(cur.instance, id);
        std::optional<Assignment> a;
        if (fixed) a = drop_from(*fixed, smaller, id);
        changed = accept(smaller, a);
      } catch (const Error&) {
      }
    }
    // Quota and capacity moves need a rule to recompute the outcome.
    if (changed || !cur.rule) continue;

    for (auto r : kReserveCategories) {
      if (changed || cur.instance.reserved(r) == 0) continue;
      InstanceData data = cur.instance.data();
      data.reserved[r] -= 1;
      try {
        changed = accept(validate_instance(std::move(data)), std::nullopt);
      } catch (const Error&) {
      }
    }
    if (!changed && cur.instance.open_quota() > 0) {
      InstanceData data = cur.instance.data();
      data.capacity -= 1;
      try {
        changed = accept(validate_instance(std::move(data)), std::nullopt);
      } catch (const Error&) {
      }
    }
    for (std::size_t k = 0; k < cur.instance.size() && !changed; ++k) {
      const Score current = cur.instance.at(k).score;
      std::vector<Score> candidates;
      if (grid.empty()) {
        const auto top = current.is_integer() ? current.floor() - 1 : current.floor();
        for (std::int64_t v = 0; v <= top; ++v) candidates.emplace_back(v);
      } else {
        for (const auto& g : grid) {
          if (g < current && !g.is_negative()) candidates.push_back(g);
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      }
      for (const auto& v : candidates) {
        InstanceData data = cur.instance.data();
        data.individuals[k].score = v;
        try {
          if (accept(validate_instance(std::move(data)), std::nullopt)) {
            changed = true;
            break;
          }
        } catch (const Error&) {
        }
      }
    }
  }
  return cur;
}

ViolationWitness shrink(const ViolationWitness& w) { return shrink(w, {}); }

std::string canonical_form(const Instance& inst) {
  std::vector<std::pair<Score, CategorySet>> people;
  for (const auto& p : inst.individuals()) people.emplace_back(p.score, p.memberships);
  std::sort(people.begin(), people.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::ostringstream out;
  out << "cap=" << inst.capacity() << ";q=";
  for (auto r : kReserveCategories) out << to_string(r) << ":" << inst.reserved(r) << ",";
  out << ";prec=";
  for (auto c : inst.precedence()) out << to_string(c) << ",";
  out << ";distinct=" << inst.distinct_scores() << ";people=";
  for (const auto& [s, m] : people) out << s << to_string(m) << ",";
  return out.str();
}

std::string instance_hash(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_form(inst)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

}  // namespace reserve_lab
