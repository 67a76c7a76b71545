#include "reserve_lab/model.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_set>

#include "reserve_lab/error.hpp"

namespace reserve_lab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::QuotaOverflow: return "QuotaOverflow";
    case ErrorCode::InvalidQuota: return "InvalidQuota";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MalformedMembership: return "MalformedMembership";
    case ErrorCode::DuplicateScore: return "DuplicateScore";
    case ErrorCode::NegativeScore: return "NegativeScore";
    case ErrorCode::BadPrecedence: return "BadPrecedence";
    case ErrorCode::UnknownCategory: return "UnknownCategory";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::IntransitiveTie: return "IntransitiveTie";
    case ErrorCode::ForeignAssignment: return "ForeignAssignment";
    case ErrorCode::UniverseTooLarge: return "UniverseTooLarge";
    case ErrorCode::NonReplayingWitness: return "NonReplayingWitness";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::SC: return "SC";
    case Category::ST: return "ST";
    case Category::OBC: return "OBC";
    case Category::EWS: return "EWS";
    case Category::General: return "g";
    case Category::Open: return "OPEN";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view text) noexcept {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "sc") return Category::SC;
  if (lower == "st") return Category::ST;
  if (lower == "obc") return Category::OBC;
  if (lower == "ews") return Category::EWS;
  if (lower == "g" || lower == "gc" || lower == "general") return Category::General;
  if (lower == "open" || lower == "o") return Category::Open;
  return std::nullopt;
}

std::size_t CategorySet::size() const noexcept {
  return static_cast<std::size_t>(std::popcount(bits_));
}

std::vector<Category> CategorySet::to_vector() const {
  std::vector<Category> out;
  for (auto c : {Category::SC, Category::ST, Category::OBC, Category::EWS,
                 Category::General, Category::Open}) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::string to_string(CategorySet s) {
  std::string out = "{";
  bool first = true;
  for (auto c : s.to_vector()) {
    if (!first) out += ",";
    out += to_string(c);
    first = false;
  }
  return out + "}";
}

bool id_less(std::string_view a, std::string_view b) noexcept {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // strip leading zeros, then longer run is larger
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      const auto ra = a.substr(is, ie - is);
      const auto rb = b.substr(js, je - js);
      if (ra.size() != rb.size()) return ra.size() < rb.size();
      if (ra != rb) return ra < rb;
      if ((ie - i) != (je - j)) return (ie - i) < (je - j);
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) < (b.size() - j);
}

bool merit_before(const Individual& a, const Individual& b) noexcept {
  if (a.score != b.score) return a.score > b.score;
  return id_less(a.id, b.id);
}

std::vector<Category> default_precedence() {
  return {Category::Open, Category::SC, Category::ST, Category::OBC, Category::EWS};
}

Instance::Instance() { data_.precedence = default_precedence(); }

int Instance::reserved(Category r) const noexcept {
  if (!is_reserve(r)) return 0;
  return reserved_[static_cast<std::size_t>(r)];
}

int Instance::quota(Category seat) const noexcept {
  if (seat == Category::Open) return open_quota_;
  return reserved(seat);
}

std::optional<std::size_t> Instance::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Individual* Instance::find(std::string_view id) const {
  const auto idx = index_of(id);
  return idx ? &data_.individuals[*idx] : nullptr;
}

Instance validate_instance(InstanceData raw) {
  if (raw.capacity < 0) {
    throw Error(ErrorCode::InvalidQuota, "capacity must be non-negative");
  }
  std::array<int, 4> reserved{};
  long long reserved_total = 0;
  for (const auto& [cat, q] : raw.reserved) {
    if (!is_reserve(cat)) {
      throw Error(ErrorCode::InvalidQuota,
                  "quota keyed by non-reserve category " + std::string(to_string(cat)));
    }
    if (q < 0) {
      throw Error(ErrorCode::InvalidQuota,
                  "negative quota for " + std::string(to_string(cat)));
    }
    reserved[static_cast<std::size_t>(cat)] = q;
    reserved_total += q;
  }
  if (reserved_total > raw.capacity) {
    throw Error(ErrorCode::QuotaOverflow,
                "reserved seats " + std::to_string(reserved_total) +
                    " exceed capacity " + std::to_string(raw.capacity));
  }

  std::set<Category> seen;
  for (auto cat : raw.precedence) {
    if (cat == Category::General) {
      throw Error(ErrorCode::BadPrecedence, "g is not a seat category");
    }
    if (!seen.insert(cat).second) {
      throw Error(ErrorCode::BadPrecedence,
                  "category " + std::string(to_string(cat)) + " listed twice");
    }
  }
  if (!seen.contains(Category::Open)) {
    throw Error(ErrorCode::BadPrecedence, "precedence must include OPEN");
  }
  for (auto r : kReserveCategories) {
    if (reserved[static_cast<std::size_t>(r)] > 0 && !seen.contains(r)) {
      throw Error(ErrorCode::BadPrecedence,
                  "precedence is missing " + std::string(to_string(r)));
    }
  }

  std::unordered_map<std::string, std::size_t> index;
  std::unordered_set<Score> scores;
  for (std::size_t i = 0; i < raw.individuals.size(); ++i) {
    const auto& p = raw.individuals[i];
    if (p.memberships.empty()) {
      throw Error(ErrorCode::MalformedMembership, "individual " + p.id + " has no category");
    }
    if (p.memberships.contains(Category::Open)) {
      throw Error(ErrorCode::MalformedMembership,
                  "individual " + p.id + " declares OPEN, which is a seat category");
    }
    if (p.memberships.contains(Category::General) && !p.memberships.is_general()) {
      throw Error(ErrorCode::MalformedMembership,
                  "individual " + p.id + " mixes g with reserve labels");
    }
    if (p.score.is_negative()) {
      throw Error(ErrorCode::NegativeScore, "individual " + p.id + " has a negative score");
    }
    if (!index.emplace(p.id, i).second) {
      throw Error(ErrorCode::DuplicateId, "id " + p.id + " appears twice");
    }
    if (raw.distinct_scores && !scores.insert(p.score).second) {
      throw Error(ErrorCode::DuplicateScore,
                  "score " + p.score.to_string() + " is shared (distinct scores demanded)");
    }
  }

  Instance inst;
  inst.data_ = std::move(raw);
  inst.reserved_ = reserved;
  inst.open_quota_ = inst.data_.capacity - static_cast<int>(reserved_total);
  inst.index_ = std::move(index);
  return inst;
}

bool is_member(const Individual& person, Category c) noexcept {
  if (c == Category::General) return person.memberships.is_general();
  return person.memberships.contains(c);
}

std::vector<Individual> members_of(const Instance& inst, Category c) {
  if (c == Category::Open) {
    throw Error(ErrorCode::UnknownCategory, "OPEN has no members");
  }
  std::vector<Individual> out;
  for (const auto& p : inst.individuals()) {
    if (is_member(p, c)) out.push_back(p);
  }
  return out;
}

Instance restrict_to(const Instance& inst, std::span<const std::string> ids) {
  std::unordered_set<std::string_view> keep(ids.begin(), ids.end());
  InstanceData data = inst.data();
  std::erase_if(data.individuals, [&](const Individual& p) { return !keep.contains(p.id); });
  return validate_instance(std::move(data));
}

}  // namespace reserve_lab
