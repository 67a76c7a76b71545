#pragma once

#include <set>
#include <string>
#include <vector>

#include "reserve_lab/engine.hpp"
#include "reserve_lab/model.hpp"

namespace reserve_lab::testing {

inline Individual person(std::string id, CategorySet cats, Score score) {
  return Individual{std::move(id), cats, score};
}

inline Instance example1() {
  InstanceData d;
  d.capacity = 4;
  d.reserved = {{Category::SC, 1}, {Category::ST, 1}, {Category::OBC, 1}};
  d.individuals = {
      person("i1", {Category::General}, 100), person("i2", {Category::SC}, 99),
      person("i3", {Category::ST}, 98),       person("i4", {Category::General}, 98),
      person("i5", {Category::OBC}, 89),
  };
  return validate_instance(d);
}

inline Instance example2() {
  InstanceData d;
  d.capacity = 5;
  d.reserved = {{Category::SC, 1}, {Category::ST, 1}, {Category::OBC, 2}};
  d.individuals = {
      person("i1", {Category::General}, 100), person("i2", {Category::SC}, 99),
      person("i3", {Category::ST}, 98),       person("i4", {Category::OBC}, 91),
      person("i5", {Category::OBC}, 90),      person("i6", {Category::General}, 98),
  };
  return validate_instance(d);
}

inline Instance example2_arrival() {
  return add_individual(example2(), person("i7", {Category::General}, 102));
}

using IdSet = std::set<std::string, IdLess>;

inline IdSet ids(std::initializer_list<const char*> list) {
  IdSet out;
  for (const auto* s : list) out.insert(s);
  return out;
}

inline std::vector<std::string> acceptable_ids(const PriorityOrder& o) {
  return {o.acceptable().begin(), o.acceptable().end()};
}

inline std::vector<std::string> restricted(const PriorityOrder& o, const IdSet& keep) {
  std::vector<std::string> out;
  for (const auto& id : o.ranked) {
    if (keep.contains(id)) out.push_back(id);
  }
  return out;
}

}  // namespace reserve_lab::testing
