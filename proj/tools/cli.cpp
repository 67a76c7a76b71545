#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reserve_lab/audit.hpp"
#include "reserve_lab/engine.hpp"
#include "reserve_lab/error.hpp"
#include "reserve_lab/io.hpp"
#include "reserve_lab/search.hpp"

namespace reserve_lab::cli {

namespace {

using io::json;

struct PolicyFlags {
  std::string kind;
  std::string k;
  std::string gap;
  std::string soft_scope;
  std::string target;
};

struct RunConfig {
  std::string instance_path;
  PolicyFlags policy;
  std::string precedence;
  std::string output;
  std::string format = "text";
  // audit
  std::string checks = "gap,fairness,waste";
  std::string bound;
  std::string witness_dir;
  // search
  std::string property = "gap";
  std::size_t min_n = 0;
  std::size_t max_n = 5;
  std::string boosts = "10";
  std::string family;
  std::string scores;
  std::string categories;
  int capacity_min = 0;
  int capacity_max = -1;
  int quota_max = -1;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::size_t limit = 100;
  bool shrink = false;
};

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Category category_or_throw(const std::string& name) {
  const auto c = parse_category(name);
  if (!c) throw Error(ErrorCode::ParseError, "unknown category '" + name + "'");
  return *c;
}

std::size_t max_universe() {
  if (const char* env = std::getenv("RESERVE_LAB_MAX_N")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, std::string("RESERVE_LAB_MAX_N is not a number: ") + env);
    }
  }
  return kDefaultMaxUniverse;
}

std::optional<Score> parse_bound(const std::string& text) {
  if (text == "inf" || text == "none") return std::nullopt;
  return Score::parse(text);
}

PolicySpec resolve_policy(const std::optional<PolicySpec>& from_file, const PolicyFlags& f) {
  PolicySpec spec = from_file.value_or(PolicySpec::hard());
  const bool had_gap = spec.kind == PolicyKind::GapConstrained;
  const auto file_bound = spec.gap_bound;
  PolicySpec base = spec.base_spec();

  if (!f.kind.empty()) {
    const auto target = base.target;
    if (f.kind == "hard") base = PolicySpec::hard(target);
    else if (f.kind == "soft") base = PolicySpec::soft(SoftScope::GcOnly, target);
    else if (f.kind == "elevated") base = PolicySpec::elevated(0, target);
    else throw Error(ErrorCode::InvalidPolicy, "unknown --policy '" + f.kind + "' (hard|soft|elevated)");
  }
  if (!f.k.empty()) {
    if (base.kind != PolicyKind::Elevated) throw Error(ErrorCode::InvalidPolicy, "--k requires the elevated policy");
    base.boost = Score::parse(f.k);
  } else if (!f.kind.empty() && base.kind == PolicyKind::Elevated) {
    throw Error(ErrorCode::InvalidPolicy, "--policy elevated requires --k");
  }
  if (!f.soft_scope.empty()) {
    if (base.kind != PolicyKind::Soft) throw Error(ErrorCode::InvalidPolicy, "--soft-scope requires the soft policy");
    if (f.soft_scope == "gc") base.soft_scope = SoftScope::GcOnly;
    else if (f.soft_scope == "all") base.soft_scope = SoftScope::Everyone;
    else throw Error(ErrorCode::InvalidPolicy, "unknown --soft-scope '" + f.soft_scope + "' (gc|all)");
  }
  if (!f.target.empty()) base.target = category_or_throw(f.target);

  PolicySpec out = base;
  if (!f.gap.empty()) {
    out = PolicySpec::gap_constrained(base, parse_bound(f.gap));
  } else if (had_gap && f.kind.empty()) {
    out = PolicySpec::gap_constrained(base, file_bound);
  }
  validate_policy(out);
  return out;
}

// Loads, applies the precedence override, validates.
std::pair<Instance, PolicySpec> load(const RunConfig& cfg) {
  auto file = io::load_instance_file(cfg.instance_path);
  if (!cfg.precedence.empty()) {
    file.data.precedence.clear();
    for (const auto& name : split(cfg.precedence)) file.data.precedence.push_back(category_or_throw(name));
  }
  auto policy = resolve_policy(file.policy, cfg.policy);
  return {validate_instance(std::move(file.data)), policy};
}

std::string join(const auto& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ",";
    out += s;
  }
  return out;
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output);
  if (!file) {
    throw std::filesystem::filesystem_error("cannot write", cfg.output,
                                            std::make_error_code(std::errc::permission_denied));
  }
  file << text;
}

std::string allocation_text(const PolicySpec& spec, const Assignment& a,
                            const CutoffReport& r) {
  std::ostringstream out;
  out << "policy " << describe(spec) << "\n";
  for (const auto& t : a.trace) {
    out << "stage " << to_string(t.category) << " quota=" << t.quota << " seated=[" << join(t.seated)
        << "] cutoff=" << (t.cutoff ? t.cutoff->to_string() : "-");
    if (t.floor) out << " floor=" << *t.floor;
    out << "\n";
  }
  out << "chosen {" << join(a.chosen()) << "}\n";
  out << "rejected {" << join(a.rejected) << "}\n";
  out << "vacancies";
  bool any = false;
  for (const auto& t : a.trace) {
    if (const int n = a.vacancy(t.category); n > 0) {
      out << " " << to_string(t.category) << "=" << n;
      any = true;
    }
  }
  out << (any ? "" : " none") << "\n";
  out << "cutoffs";
  for (const auto& t : a.trace) {
    const auto value = r.of(t.category);
    out << " " << to_string(t.category) << "=" << (value ? value->to_string() : "-");
  }
  out << "\n";
  out << "gap " << (r.gap ? r.gap->to_string() : "-") << "\n";
  if (a.floor) out << "floor " << *a.floor << "\n";
  return out.str();
}

int cmd_allocate(const RunConfig& cfg, std::ostream& out) {
  const auto [inst, spec] = load(cfg);
  const auto a = apply_rule(inst, spec);
  const auto r = cutoffs(inst, a, spec.target);
  if (cfg.format == "json") {
    json doc;
    doc["instance"] = io::instance_to_json(inst, spec);
    doc["assignment"] = io::assignment_to_json(a);
    doc["cutoffs"] = io::cutoffs_to_json(r);
    doc["trace"] = io::trace_to_json(a);
    emit(cfg, out, doc.dump(2) + "\n");
  } else {
    emit(cfg, out, allocation_text(spec, a, r));
  }
  return kOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  const auto [inst, spec] = load(cfg);
  const auto a = apply_rule(inst, spec);
  Score bound = 10;
  if (!cfg.bound.empty()) bound = Score::parse(cfg.bound);
  else if (spec.kind == PolicyKind::GapConstrained && spec.gap_bound) bound = *spec.gap_bound;

  struct Result {
    std::string name;
    Verdict verdict;
  };
  std::vector<Result> results;
  for (const auto& check : split(cfg.checks)) {
    if (check == "gap") {
      results.push_back({check, audit_gap(inst, spec, bound)});
    } else if (check == "fairness") {
      results.push_back({check, audit_fairness(inst, spec)});
    } else if (check == "waste") {
      results.push_back({check, audit_nonwaste(inst, spec)});
    } else if (check == "substitutes") {
      results.push_back({check, check_substitutes(spec, inst, max_universe())});
    } else {
      throw Error(ErrorCode::ParseError, "unknown check '" + check + "' (gap,fairness,waste,substitutes)");
    }
  }

  bool violated = false;
  std::vector<ViolationWitness> witnesses;
  std::ostringstream text;
  json doc;
  doc["policy"] = io::policy_to_json(spec);
  doc["checks"] = json::array();
  text << "policy " << describe(spec) << "\n";
  for (const auto& res : results) {
    json entry;
    entry["name"] = res.name;
    entry["verdict"] = res.verdict ? "fail" : "pass";
    text << res.name << " " << (res.verdict ? "FAIL" : "pass");
    if (res.verdict) {
      violated = true;
      witnesses.push_back(*res.verdict);
      entry["witness"] = io::witness_to_json(*res.verdict);
      text << " " << summary(*res.verdict) << "\n  trace: " << res.verdict->trace;
    }
    text << "\n";
    doc["checks"].push_back(entry);
  }
  if (!cfg.witness_dir.empty() && !witnesses.empty()) {
    io::write_witness_corpus(cfg.witness_dir, witnesses);
  }
  emit(cfg, out, cfg.format == "json" ? doc.dump(2) + "\n" : text.str());
  return violated ? kViolation : kOk;
}

std::vector<Score> parse_grid(const std::string& text) {
  std::vector<Score> out;
  for (const auto& part : split(text)) {
    if (const auto colon = part.find(':'); colon != std::string::npos) {
      const auto lo = Score::parse(part.substr(0, colon));
      const auto hi = Score::parse(part.substr(colon + 1));
      for (Score s = lo; s <= hi; s += Score(1)) out.push_back(s);
    } else {
      out.push_back(Score::parse(part));
    }
  }
  return out;
}

std::vector<PolicySpec> parse_family(const RunConfig& cfg, const std::vector<Score>& boosts,
                                     const std::optional<Score>& bound) {
  std::vector<PolicySpec> family;
  for (const auto& name : split(cfg.family.empty() ? "gap" : cfg.family)) {
    if (name == "hard") {
      family.push_back(PolicySpec::hard());
    } else if (name == "soft") {
      family.push_back(PolicySpec::soft(SoftScope::GcOnly));
    } else if (name == "soft-all") {
      family.push_back(PolicySpec::soft(SoftScope::Everyone));
    } else if (name == "elevated") {
      for (const auto& k : boosts) family.push_back(PolicySpec::elevated(k));
    } else if (name == "gap") {
      for (const auto& k : boosts) family.push_back(PolicySpec::gap_constrained(PolicySpec::elevated(k), bound));
    } else if (name == "gap-hard") {
      family.push_back(PolicySpec::gap_constrained(PolicySpec::hard(), bound));
    } else {
      throw Error(ErrorCode::ParseError,
                  "unknown family '" + name + "' (hard,soft,soft-all,elevated,gap,gap-hard)");
    }
  }
  return family;
}

int cmd_search(const RunConfig& cfg, std::ostream& out) {
  const bool gap = cfg.property == "gap";
  if (!gap && cfg.property != "substitutes") {
    throw Error(ErrorCode::ParseError, "unknown --property '" + cfg.property + "' (gap|substitutes)");
  }
  SearchSpace space;
  space.min_n = cfg.min_n;
  space.max_n = cfg.max_n;
  space.score_grid = parse_grid(cfg.scores.empty() ? (gap ? "85:100" : "1:8") : cfg.scores);
  space.distinct_scores = true;
  space.memberships.clear();
  std::vector<Category> reserves;
  for (const auto& name : split(cfg.categories.empty() ? (gap ? "g,obc" : "g,sc,obc") : cfg.categories)) {
    const auto c = category_or_throw(name);
    if (c == Category::Open) throw Error(ErrorCode::ParseError, "OPEN is not a membership");
    space.memberships.push_back(c == Category::General ? CategorySet::general() : CategorySet{c});
    if (is_reserve(c)) reserves.push_back(c);
  }
  space.min_capacity = cfg.capacity_min;
  space.max_capacity = cfg.capacity_max >= 0 ? cfg.capacity_max : (gap ? 3 : 4);
  const int quota_max = cfg.quota_max >= 0 ? cfg.quota_max : (gap ? 1 : space.max_capacity);
  for (auto r : reserves) space.quotas[r] = {0, quota_max};
  space.boosts = parse_grid(cfg.boosts);
  space.threads = cfg.threads;
  if (cfg.samples > 0) {
    space.mode = SearchMode::Sample;
    space.samples = cfg.samples;
    space.seed = cfg.seed;
  }

  std::vector<ViolationWitness> kept;
  std::size_t not_replaying = 0;
  const WitnessSink sink = [&](const ViolationWitness& w) {
    if (!replays(w)) ++not_replaying;
    if (kept.size() < cfg.limit) kept.push_back(cfg.shrink ? shrink(w) : w);
    return true;
  };

  std::size_t count = 0;
  if (gap) {
    count = find_gap_violations(space, sink);
  } else {
    std::optional<Score> bound = Score(10);
    if (!cfg.policy.gap.empty()) bound = parse_bound(cfg.policy.gap);
    const auto family = parse_family(cfg, space.boosts, bound);
    count = find_substitutes_violations(space, family, sink, max_universe());
  }
  const std::size_t instances = for_each_instance(space, [](const Instance&) { return true; });

  if (!cfg.output.empty()) io::write_witness_corpus(cfg.output, kept);

  out << "property " << cfg.property << "\n";
  out << "instances " << instances << "\n";
  out << "witnesses " << count << "\n";
  if (not_replaying > 0) out << "non-replaying " << not_replaying << "\n";
  for (std::size_t i = 0; i < kept.size() && i < 5; ++i) {
    out << "  " << summary(kept[i]) << " [" << instance_hash(kept[i].instance) << "]\n";
  }
  if (!cfg.output.empty()) out << "corpus " << cfg.output << " (" << kept.size() << " files)\n";
  return kOk;
}

void add_policy_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--policy", cfg.policy.kind, "Reserve policy for the target category: hard|soft|elevated");
  cmd->add_option("--k", cfg.policy.k, "Boost for the elevated policy");
  cmd->add_option("--gap", cfg.policy.gap, "Gap bound D (wraps the policy in the gap-constrained rule; 'inf' for none)");
  cmd->add_option("--soft-scope", cfg.policy.soft_scope, "Reversion pool for soft seats: gc|all");
  cmd->add_option("--target", cfg.policy.target, "Category the policy applies to (default OBC)");
  cmd->add_option("--precedence", cfg.precedence, "Seat processing order, e.g. open,sc,st,obc,ews");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vertical reservation allocation, audits and counterexample search", "reserve-lab"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* allocate = app.add_subcommand("allocate", "Run the choice rule and report seats and cutoffs");
  allocate->add_option("--instance", cfg.instance_path, "Instance file (JSON)")->required();
  add_policy_flags(allocate, cfg);
  allocate->add_option("--format", cfg.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  allocate->add_option("--output,-o", cfg.output, "Write to this file instead of stdout");

  auto* audit = app.add_subcommand("audit", "Check gap, fairness, non-wastefulness and substitutes");
  audit->add_option("--instance", cfg.instance_path, "Instance file (JSON)")->required();
  add_policy_flags(audit, cfg);
  audit->add_option("--check", cfg.checks, "Comma list of gap,fairness,waste,substitutes");
  audit->add_option("--bound", cfg.bound, "D for the gap check (default: the rule's gap bound, else 10)");
  audit->add_option("--witness-dir", cfg.witness_dir, "Write violation witnesses here");
  audit->add_option("--format", cfg.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  audit->add_option("--output,-o", cfg.output, "Write the report to this file");

  auto* search = app.add_subcommand("search", "Enumerate or sample instances for violations");
  search->add_option("--property", cfg.property, "gap|substitutes");
  search->add_option("--min-n", cfg.min_n, "Smallest roster size");
  search->add_option("--max-n", cfg.max_n, "Largest roster size");
  search->add_option("--k", cfg.boosts, "Boost grid, e.g. 10 or 0,5,10 or 0:10");
  search->add_option("--gap", cfg.policy.gap, "Gap bound D for gap rules in the family (default 10)");
  search->add_option("--family", cfg.family, "Rules for substitutes: hard,soft,soft-all,elevated,gap,gap-hard");
  search->add_option("--scores", cfg.scores, "Score grid, e.g. 85:100 or 1,2,5");
  search->add_option("--categories", cfg.categories, "Memberships individuals may declare, e.g. g,obc");
  search->add_option("--capacity-min", cfg.capacity_min, "Smallest capacity");
  search->add_option("--capacity-max", cfg.capacity_max, "Largest capacity");
  search->add_option("--quota-max", cfg.quota_max, "Largest quota per reserve category");
  search->add_option("--samples", cfg.samples, "Sample this many instances instead of enumerating");
  search->add_option("--seed", cfg.seed, "Sampling seed");
  search->add_option("--threads", cfg.threads, "Worker threads (0 = hardware)");
  search->add_option("--out-dir,-o", cfg.output, "Write the witness corpus here");
  search->add_option("--limit", cfg.limit, "Keep at most this many witnesses for the corpus");
  search->add_flag("--shrink", cfg.shrink, "Shrink kept witnesses");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kValidationError;
  }

  try {
    if (allocate->parsed()) return cmd_allocate(cfg, out);
    if (audit->parsed()) return cmd_audit(cfg, out);
    return cmd_search(cfg, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::UniverseTooLarge ? kBoundExceeded : kValidationError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"reserve-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace reserve_lab::cli
