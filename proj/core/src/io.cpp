#include "reserve_lab/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "reserve_lab/error.hpp"
#include "reserve_lab/search.hpp"

namespace reserve_lab::io {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::ParseError, what);
}

Category category_from(const json& j, const char* where) {
  if (!j.is_string()) parse_error(std::string(where) + ": category must be a string");
  const auto c = parse_category(j.get<std::string>());
  if (!c) parse_error(std::string(where) + ": unknown category '" + j.get<std::string>() + "'");
  return *c;
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

PolicyKind kind_from(const std::string& name) {
  const auto n = lower(name);
  if (n == "hard") return PolicyKind::Hard;
  if (n == "soft") return PolicyKind::Soft;
  if (n == "elevated") return PolicyKind::Elevated;
  if (n == "gap") return PolicyKind::GapConstrained;
  parse_error("policy: unknown kind '" + name + "'");
}

SoftScope scope_from(const std::string& name) {
  const auto n = lower(name);
  if (n == "gc" || n == "gconly" || n == "general") return SoftScope::GcOnly;
  if (n == "all" || n == "everyone") return SoftScope::Everyone;
  parse_error("policy: unknown soft_scope '" + name + "'");
}

json witness_core(const ViolationWitness& w) {
  json j;
  j["axiom"] = std::string(to_string(w.axiom));
  j["individuals"] = w.individuals;
  if (!w.subset.empty() || w.axiom == Axiom::Substitutes) j["subset"] = w.subset;
  if (w.category) j["category"] = std::string(to_string(*w.category));
  if (w.bound) j["bound"] = score_to_json(*w.bound);
  if (w.gap) j["gap"] = score_to_json(*w.gap);
  j["trace"] = w.trace;
  j["summary"] = summary(w);
  return j;
}

}  // namespace

Score score_from_json(const json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      parse_error("score out of range");
    }
    return Score(j.get<std::int64_t>());
  }
  if (j.is_number_float()) return Score::parse(j.dump());
  if (j.is_string()) return Score::parse(j.get<std::string>());
  parse_error("score must be a number or a decimal string, got " + j.dump());
}

json score_to_json(const Score& s) {
  if (s.is_integer()) return s.numerator();
  return s.to_string();
}

PolicySpec policy_from_json(const json& j) {
  if (!j.is_object()) parse_error("policy must be an object");
  if (!j.contains("kind")) parse_error("policy: missing 'kind'");
  PolicySpec spec;
  spec.kind = kind_from(j.at("kind").get<std::string>());
  if (j.contains("target")) spec.target = category_from(j.at("target"), "policy.target");
  if (j.contains("k")) spec.boost = score_from_json(j.at("k"));
  if (j.contains("soft_scope")) spec.soft_scope = scope_from(j.at("soft_scope").get<std::string>());
  if (spec.kind == PolicyKind::GapConstrained) {
    if (j.contains("base")) {
      spec.base = kind_from(j.at("base").get<std::string>());
    } else {
      spec.base = spec.boost ? PolicyKind::Elevated
                             : (spec.soft_scope ? PolicyKind::Soft : PolicyKind::Hard);
    }
    if (j.contains("D")) {
      const auto& d = j.at("D");
      if (!(d.is_string() && lower(d.get<std::string>()) == "inf")) spec.gap_bound = score_from_json(d);
    }
  } else {
    if (j.contains("base")) parse_error("policy: 'base' only applies to kind 'gap'");
    if (j.contains("D")) parse_error("policy: 'D' only applies to kind 'gap'");
  }
  try {
    validate_policy(spec);
  } catch (const Error& e) {
    parse_error(std::string("policy: ") + e.what());
  }
  return spec;
}

json policy_to_json(const PolicySpec& spec) {
  json j;
  j["kind"] = std::string(to_string(spec.kind));
  if (spec.kind == PolicyKind::GapConstrained) {
    j["base"] = std::string(to_string(spec.ordering_kind()));
    j["D"] = spec.gap_bound ? score_to_json(*spec.gap_bound) : json("inf");
  }
  if (spec.boost) j["k"] = score_to_json(*spec.boost);
  if (spec.soft_scope) j["soft_scope"] = std::string(to_string(*spec.soft_scope));
  if (spec.target != Category::OBC) j["target"] = std::string(to_string(spec.target));
  return j;
}

InstanceFile instance_file_from_json(const json& j) {
  if (!j.is_object()) parse_error("instance document must be an object");
  InstanceFile out;
  try {
    out.data.capacity = j.value("capacity", 0);
    if (j.contains("reserved")) {
      const auto& r = j.at("reserved");
      if (!r.is_object()) parse_error("'reserved' must be an object");
      for (const auto& [key, value] : r.items()) {
        const auto c = parse_category(key);
        if (!c) parse_error("reserved: unknown category '" + key + "'");
        out.data.reserved[*c] = value.get<int>();
      }
    }
    if (j.contains("precedence")) {
      out.data.precedence.clear();
      for (const auto& c : j.at("precedence")) {
        out.data.precedence.push_back(category_from(c, "precedence"));
      }
    }
    out.data.distinct_scores = j.value("distinct_scores", false);
    if (j.contains("individuals")) {
      for (const auto& p : j.at("individuals")) {
        Individual person;
        person.id = p.at("id").get<std::string>();
        const auto& cats = p.at("categories");
        if (cats.is_string()) {
          person.memberships.insert(category_from(cats, "categories"));
        } else {
          for (const auto& c : cats) person.memberships.insert(category_from(c, "categories"));
        }
        person.score = score_from_json(p.at("score"));
        out.data.individuals.push_back(std::move(person));
      }
    }
    if (j.contains("policy") && !j.at("policy").is_null()) out.policy = policy_from_json(j.at("policy"));
  } catch (const json::exception& e) {
    parse_error(std::string("malformed instance document: ") + e.what());
  }
  return out;
}

json instance_to_json(const Instance& inst, const std::optional<PolicySpec>& policy) {
  json j;
  j["capacity"] = inst.capacity();
  json reserved = json::object();
  for (auto r : kReserveCategories) {
    if (inst.reserved(r) > 0) reserved[std::string(to_string(r))] = inst.reserved(r);
  }
  j["reserved"] = reserved;
  json prec = json::array();
  for (auto c : inst.precedence()) prec.push_back(std::string(to_string(c)));
  j["precedence"] = prec;
  if (inst.distinct_scores()) j["distinct_scores"] = true;
  json people = json::array();
  for (const auto& p : inst.individuals()) {
    json cats = json::array();
    for (auto c : p.memberships.to_vector()) cats.push_back(std::string(to_string(c)));
    people.push_back({{"id", p.id}, {"categories", cats}, {"score", score_to_json(p.score)}});
  }
  j["individuals"] = people;
  if (policy) j["policy"] = policy_to_json(*policy);
  return j;
}

json assignment_to_json(const Assignment& a) {
  json seats = json::object();
  json rejected = json::array();
  json vacancies = json::object();
  for (const auto& [id, seat] : a.seats) seats[id] = std::string(to_string(seat));
  for (const auto& id : a.rejected) rejected.push_back(id);
  for (const auto& [seat, n] : a.vacancies) vacancies[std::string(to_string(seat))] = n;
  json j;
  j["seats"] = seats;
  j["rejected"] = rejected;
  j["vacancies"] = vacancies;
  if (a.floor) j["floor"] = score_to_json(*a.floor);
  return j;
}

Assignment assignment_from_json(const json& j) {
  Assignment a;
  try {
    for (const auto& [id, seat] : j.at("seats").items()) {
      a.seats.emplace(id, category_from(seat, "seats"));
    }
    for (const auto& id : j.at("rejected")) a.rejected.insert(id.get<std::string>());
    if (j.contains("vacancies")) {
      for (const auto& [seat, n] : j.at("vacancies").items()) {
        const auto c = parse_category(seat);
        if (!c) parse_error("vacancies: unknown category '" + seat + "'");
        a.vacancies[*c] = n.get<int>();
      }
    }
    if (j.contains("floor")) a.floor = score_from_json(j.at("floor"));
  } catch (const json::exception& e) {
    parse_error(std::string("malformed assignment: ") + e.what());
  }
  return a;
}

json trace_to_json(const Assignment& a) {
  json out = json::array();
  for (const auto& t : a.trace) {
    json stage;
    stage["category"] = std::string(to_string(t.category));
    stage["quota"] = t.quota;
    stage["seated"] = t.seated;
    stage["cutoff"] = t.cutoff ? score_to_json(*t.cutoff) : json(nullptr);
    if (t.floor) stage["floor"] = score_to_json(*t.floor);
    out.push_back(stage);
  }
  return out;
}

json cutoffs_to_json(const CutoffReport& r) {
  json cut = json::object();
  for (const auto& [seat, value] : r.cutoff) {
    cut[std::string(to_string(seat))] = value ? score_to_json(*value) : json(nullptr);
  }
  json j;
  j["cutoffs"] = cut;
  j["gap_category"] = std::string(to_string(r.gap_category));
  j["gap"] = r.gap ? score_to_json(*r.gap) : json(nullptr);
  return j;
}

json witness_to_json(const ViolationWitness& w) {
  json j;
  j["witness"] = witness_core(w);
  j["instance"] = instance_to_json(w.instance, w.rule);
  if (w.assignment) j["assignment"] = assignment_to_json(*w.assignment);
  j["hash"] = instance_hash(w.instance);
  return j;
}

ViolationWitness witness_from_json(const json& j) {
  ViolationWitness w;
  try {
    const auto& core = j.at("witness");
    const auto axiom = core.at("axiom").get<std::string>();
    if (axiom == "gap") w.axiom = Axiom::Gap;
    else if (axiom == "fairness") w.axiom = Axiom::Fairness;
    else if (axiom == "waste") w.axiom = Axiom::NonWastefulness;
    else if (axiom == "substitutes") w.axiom = Axiom::Substitutes;
    else parse_error("unknown axiom '" + axiom + "'");
    w.individuals = core.at("individuals").get<std::vector<std::string>>();
    if (core.contains("subset")) w.subset = core.at("subset").get<std::vector<std::string>>();
    if (core.contains("category")) w.category = category_from(core.at("category"), "witness.category");
    if (core.contains("bound")) w.bound = score_from_json(core.at("bound"));
    if (core.contains("gap")) w.gap = score_from_json(core.at("gap"));
    w.trace = core.value("trace", "");
    auto file = instance_file_from_json(j.at("instance"));
    w.instance = validate_instance(std::move(file.data));
    w.rule = file.policy;
    if (j.contains("assignment")) w.assignment = assignment_from_json(j.at("assignment"));
  } catch (const json::exception& e) {
    parse_error(std::string("malformed witness: ") + e.what());
  }
  return w;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::filesystem::filesystem_error("cannot open", path,
                                            std::make_error_code(std::errc::no_such_file_or_directory));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::filesystem::filesystem_error("cannot write", path,
                                            std::make_error_code(std::errc::permission_denied));
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
  }
}

InstanceFile load_instance_file(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  if (doc.is_object() && doc.contains("instance") && doc.at("instance").is_object()) {
    return instance_file_from_json(doc.at("instance"));
  }
  return instance_file_from_json(doc);
}

void write_witness_corpus(const std::filesystem::path& dir,
                          std::span<const ViolationWitness> witnesses) {
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.tsv");
  if (!index) {
    throw std::filesystem::filesystem_error("cannot write", dir / "index.tsv",
                                            std::make_error_code(std::errc::permission_denied));
  }
  index << "kind\thash\tfile\tsummary\n";
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    std::ostringstream name;
    name << "w" << std::setw(5) << std::setfill('0') << (i + 1) << ".json";
    write_json_file(dir / name.str(), witness_to_json(witnesses[i]));
    index << to_string(witnesses[i].axiom) << "\t" << instance_hash(witnesses[i].instance) << "\t"
          << name.str() << "\t" << summary(witnesses[i]) << "\n";
  }
}

}  // namespace reserve_lab::io
