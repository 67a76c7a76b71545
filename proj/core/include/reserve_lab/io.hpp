#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "reserve_lab/audit.hpp"
#include "reserve_lab/engine.hpp"
#include "reserve_lab/model.hpp"
#include "reserve_lab/policies.hpp"

namespace reserve_lab::io {

/// Insertion-ordered so ids keep natural order in emitted documents.
using json = nlohmann::ordered_json;

/// Contents of an instance document.
struct InstanceFile {
  InstanceData data;
  std::optional<PolicySpec> policy;
};

/// Integers, decimal strings ("98.5"), fractions ("197/2") and JSON floats
/// (read through their shortest round-trip text).
Score score_from_json(const json& j);
/// Integer when whole, else a decimal or fraction string.
json score_to_json(const Score& s);

/// Throws Error(ParseError) on structural problems. Does not validate.
InstanceFile instance_file_from_json(const json& j);
json instance_to_json(const Instance& inst, const std::optional<PolicySpec>& policy = {});

PolicySpec policy_from_json(const json& j);
json policy_to_json(const PolicySpec& spec);

/// {"seats": {id: category}, "rejected": [id], "vacancies": {category: n}},
/// ids in natural order.
json assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const json& j);

json trace_to_json(const Assignment& a);
json cutoffs_to_json(const CutoffReport& r);
json witness_to_json(const ViolationWitness& w);
ViolationWitness witness_from_json(const json& j);

/// Reads and parses a file. Throws std::filesystem::filesystem_error when
/// the file cannot be read and Error(ParseError) on malformed content.
json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

/// Accepts a bare instance document or one wrapped under "instance" (as
/// written by `allocate`).
InstanceFile load_instance_file(const std::filesystem::path& path);

/// Writes w00001.json ... plus index.tsv (kind, instance hash, file, summary).
void write_witness_corpus(const std::filesystem::path& dir,
                          std::span<const ViolationWitness> witnesses);

}  // namespace reserve_lab::io
