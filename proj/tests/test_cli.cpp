#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "reserve_lab/io.hpp"

namespace fs = std::filesystem;
using reserve_lab::cli::run;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (fs::path(RESERVE_LAB_DATA_DIR) / name).string(); }

fs::path scratch(const char* name) {
  auto dir = fs::temp_directory_path() / "reserve_lab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("allocate ex1 under the elevated policy") {
  const auto r = call({"allocate", "--instance", data("ex1.json"), "--policy", "elevated", "--k", "10"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "chosen {i1,i2,i3,i5}"));
  CHECK(contains(r.out, "gap 11"));
  CHECK(contains(r.out, "stage OPEN quota=1 seated=[i1] cutoff=100"));
}

TEST_CASE("allocate with no individuals leaves every seat vacant") {
  const auto r = call({"allocate", "--instance", data("empty.json"), "--policy", "hard"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "chosen {}"));
  CHECK(contains(r.out, "vacancies OPEN=1 SC=1 OBC=1"));
}

TEST_CASE("allocate the gap rule after the arrival reports the floor") {
  const auto r = call({"allocate", "--instance", data("ex2plus.json"), "--policy", "elevated", "--k", "10",
                       "--gap", "10"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "chosen {i1,i2,i3,i6,i7}"));
  CHECK(contains(r.out, "floor 92"));
}

TEST_CASE("the policy stored in the instance file is used when no flags are given") {
  const auto r = call({"allocate", "--instance", data("ex2.json")});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "policy gap(elevated(k=10), D=10)"));
  CHECK(contains(r.out, "chosen {i1,i2,i3,i4,i5}"));
}

TEST_CASE("audit exit codes") {
  SUBCASE("gap violation") {
    const auto dir = scratch("gap");
    const auto r = call({"audit", "--instance", data("ex1.json"), "--policy", "elevated", "--k", "10",
                         "--check", "gap", "--witness-dir", dir.string()});
    CHECK(r.code == 3);
    CHECK(contains(r.out, "gap FAIL"));
    CHECK(fs::exists(dir / "w00001.json"));
    CHECK(fs::exists(dir / "index.tsv"));
    const auto w = reserve_lab::io::witness_from_json(reserve_lab::io::read_json_file(dir / "w00001.json"));
    REQUIRE(w.gap);
    CHECK(*w.gap == reserve_lab::Score(11));
  }
  SUBCASE("substitutes violation under the gap rule") {
    const auto r = call({"audit", "--instance", data("ex2plus.json"), "--policy", "elevated", "--k", "10",
                         "--gap", "10", "--check", "substitutes"});
    CHECK(r.code == 3);
    CHECK(contains(r.out, "substitutes FAIL"));
    CHECK(contains(r.out, "i7"));
    CHECK(contains(r.out, "i6"));
  }
  SUBCASE("hard policy is clean") {
    const auto r = call({"audit", "--instance", data("ex1.json"), "--policy", "hard", "--check", "substitutes"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "substitutes pass"));
  }
  SUBCASE("universe bound exceeded") {
    ::setenv("RESERVE_LAB_MAX_N", "4", 1);
    const auto r = call({"audit", "--instance", data("ex1.json"), "--policy", "hard", "--check", "substitutes"});
    ::unsetenv("RESERVE_LAB_MAX_N");
    CHECK(r.code == 4);
  }
}

TEST_CASE("audit gap bound is boundary inclusive") {
  CHECK(call({"audit", "--instance", data("ex2.json"), "--check", "gap", "--bound", "10"}).code == 0);
  CHECK(call({"audit", "--instance", data("ex2.json"), "--check", "gap", "--bound", "9"}).code == 3);
}

TEST_CASE("input errors") {
  CHECK(call({"allocate", "--instance", data("missing.json")}).code == 1);
  CHECK(call({"allocate"}).code == 2);
  CHECK(call({"allocate", "--instance", data("ex1.json"), "--policy", "bogus"}).code == 2);
  CHECK(call({"allocate", "--instance", data("ex1.json"), "--policy", "elevated"}).code == 2);
  CHECK(call({"audit", "--instance", data("ex1.json"), "--check", "nope"}).code == 2);

  const auto dir = scratch("bad");
  {
    std::ofstream f(dir / "overflow.json");
    f << R"({"capacity": 1, "reserved": {"SC": 2}, "individuals": []})";
  }
  const auto r = call({"allocate", "--instance", (dir / "overflow.json").string()});
  CHECK(r.code == 2);
  CHECK(contains(r.err, "QuotaOverflow"));
}

TEST_CASE("allocate json output feeds back into audit with the same verdicts") {
  const auto dir = scratch("roundtrip");
  for (const char* file : {"ex1.json", "ex2.json", "ex2plus.json"}) {
    const auto out = (dir / file).string();
    REQUIRE(call({"allocate", "--instance", data(file), "--policy", "elevated", "--k", "10", "--format", "json",
                  "-o", out})
                .code == 0);
    const std::vector<std::string> checks{"--check", "gap,fairness,waste,substitutes", "--format", "json"};
    auto direct_args = std::vector<std::string>{"audit", "--instance", data(file), "--policy", "elevated", "--k", "10"};
    direct_args.insert(direct_args.end(), checks.begin(), checks.end());
    auto replay_args = std::vector<std::string>{"audit", "--instance", out};
    replay_args.insert(replay_args.end(), checks.begin(), checks.end());
    const auto direct = call(direct_args);
    const auto replay = call(replay_args);
    CHECK(direct.code == replay.code);
    CHECK(direct.out == replay.out);
  }
}

TEST_CASE("search summaries") {
  SUBCASE("gap witnesses exist") {
    const auto dir = scratch("search_gap");
    const auto r = call({"search", "--property", "gap", "--max-n", "5", "--k", "10", "-o", dir.string(), "--limit",
                         "3", "--shrink"});
    CHECK(r.code == 0);
    CHECK_FALSE(contains(r.out, "witnesses 0\n"));
    CHECK_FALSE(contains(r.out, "non-replaying"));
    CHECK(fs::exists(dir / "index.tsv"));
  }
  SUBCASE("hard family has no substitutes witnesses") {
    const auto r = call({"search", "--property", "substitutes", "--max-n", "3", "--family", "hard"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "witnesses 0\n"));
  }
  SUBCASE("empty space") {
    const auto r = call({"search", "--property", "gap", "--max-n", "0"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "witnesses 0\n"));
  }
  SUBCASE("unwritable corpus directory") {
    const auto dir = scratch("search_io");
    { std::ofstream f(dir / "blocker"); }
    const auto r = call({"search", "--property", "gap", "--max-n", "3", "-o", (dir / "blocker" / "sub").string()});
    CHECK(r.code == 1);
  }
}
