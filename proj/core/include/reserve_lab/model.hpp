#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reserve_lab/score.hpp"

namespace reserve_lab {

/// Reserve labels, the general label, and the seat-only OPEN label.
enum class Category : std::uint8_t { SC, ST, OBC, EWS, General, Open };

inline constexpr std::array<Category, 4> kReserveCategories{
    Category::SC, Category::ST, Category::OBC, Category::EWS};

constexpr bool is_reserve(Category c) noexcept {
  return c == Category::SC || c == Category::ST || c == Category::OBC ||
         c == Category::EWS;
}

/// "SC", "ST", "OBC", "EWS", "g", "OPEN".
std::string_view to_string(Category c) noexcept;

/// Case-insensitive; accepts "g", "gc", "general", "open", "o".
std::optional<Category> parse_category(std::string_view text) noexcept;

/// Small value set of categories, iterated in enum order.
class CategorySet {
 public:
  constexpr CategorySet() = default;
  CategorySet(std::initializer_list<Category> cats) {
    for (auto c : cats) insert(c);
  }

  static CategorySet general() { return CategorySet{Category::General}; }

  constexpr void insert(Category c) noexcept { bits_ |= bit(c); }
  constexpr void erase(Category c) noexcept { bits_ &= static_cast<std::uint8_t>(~bit(c)); }
  constexpr bool contains(Category c) const noexcept { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  std::size_t size() const noexcept;
  std::vector<Category> to_vector() const;
  constexpr std::uint8_t bits() const noexcept { return bits_; }

  /// True for exactly {g}.
  constexpr bool is_general() const noexcept { return bits_ == bit(Category::General); }

  friend constexpr bool operator==(CategorySet, CategorySet) = default;
  friend constexpr auto operator<=>(CategorySet a, CategorySet b) noexcept {
    return a.bits_ <=> b.bits_;
  }

 private:
  static constexpr std::uint8_t bit(Category c) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

std::string to_string(CategorySet s);

struct Individual {
  std::string id;
  CategorySet memberships;
  Score score;

  friend bool operator==(const Individual&, const Individual&) = default;
};

/// Natural ordering on ids: digit runs compare numerically, so "i2" < "i10".
bool id_less(std::string_view a, std::string_view b) noexcept;

struct IdLess {
  using is_transparent = void;
  bool operator()(std::string_view a, std::string_view b) const noexcept {
    return id_less(a, b);
  }
};

/// Baseline merit comparison: higher score first, ties by ascending id.
bool merit_before(const Individual& a, const Individual& b) noexcept;

/// OPEN, SC, ST, OBC, EWS.
std::vector<Category> default_precedence();

/// Unvalidated instance contents as read from a file or built by hand.
struct InstanceData {
  std::vector<Individual> individuals;
  int capacity = 0;
  std::map<Category, int> reserved;
  std::vector<Category> precedence = default_precedence();
  bool distinct_scores = false;
};

/// A validated instance. Only `validate_instance` constructs non-empty ones,
/// so holding an Instance means every structural invariant holds.
class Instance {
 public:
  /// The empty instance: no individuals, no seats.
  Instance();

  std::span<const Individual> individuals() const noexcept { return data_.individuals; }
  std::size_t size() const noexcept { return data_.individuals.size(); }
  const Individual& at(std::size_t index) const { return data_.individuals.at(index); }

  int capacity() const noexcept { return data_.capacity; }
  int reserved(Category r) const noexcept;
  int open_quota() const noexcept { return open_quota_; }
  /// Quota of a seat category: q^o for OPEN, q^r for reserves, 0 otherwise.
  int quota(Category seat) const noexcept;

  const std::vector<Category>& precedence() const noexcept { return data_.precedence; }
  bool distinct_scores() const noexcept { return data_.distinct_scores; }

  std::optional<std::size_t> index_of(std::string_view id) const;
  const Individual* find(std::string_view id) const;

  const InstanceData& data() const noexcept { return data_; }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.data_.individuals == b.data_.individuals &&
           a.data_.capacity == b.data_.capacity &&
           a.data_.precedence == b.data_.precedence &&
           a.data_.distinct_scores == b.data_.distinct_scores &&
           a.reserved_ == b.reserved_;
  }

 private:
  friend Instance validate_instance(InstanceData raw);

  InstanceData data_;
  std::array<int, 4> reserved_{};
  int open_quota_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Checks every instance invariant and returns the validated instance.
/// Throws Error with QuotaOverflow, InvalidQuota, DuplicateId,
/// MalformedMembership, DuplicateScore, NegativeScore or BadPrecedence.
Instance validate_instance(InstanceData raw);

/// Members of a reserve category, or the general pool for g, in roster
/// order. Throws Error(UnknownCategory) for OPEN.
std::vector<Individual> members_of(const Instance& inst, Category c);

/// True when the individual belongs to c (g meaning "no reserve label").
bool is_member(const Individual& person, Category c) noexcept;

/// Sub-instance keeping only the listed ids (in roster order). Quotas and
/// precedence are kept as they are.
Instance restrict_to(const Instance& inst, std::span<const std::string> ids);

}  // namespace reserve_lab
