#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "etgbt/cli.hpp"
#include "etgbt/scenario_io.hpp"
#include "fixtures.hpp"

using namespace etgbt;
namespace fs = std::filesystem;

namespace {

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "etgbt_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path(const std::string& name) { return (work_dir() / name).string(); }

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the installed binary with the given arguments (already shell-quoted).
Outcome etgbt_cli(const std::string& args) {
  static int counter = 0;
  const std::string stem = path("call" + std::to_string(counter++));
  const std::string cmd = std::string(ETGBT_CLI_PATH) + " " + args + " >" + stem + ".out 2>" + stem + ".err";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_text_file(stem + ".out");
  o.err = read_text_file(stem + ".err");
  return o;
}

std::string scenario(const std::string& file) { return fixtures::scenario_path(file); }

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("usage errors") {
  CHECK(etgbt_cli("").code == 2);
  CHECK(etgbt_cli("frobnicate").code == 2);
  CHECK(etgbt_cli("--help").code == 0);
  CHECK(etgbt_cli("plan").code == 2);
  CHECK(etgbt_cli("plan /nonexistent.json -o " + path("x.json")).code == 2);
}

TEST_CASE("plan writes a plan file and reports the cost") {
  const Outcome o = etgbt_cli("-q plan " + scenario("open_field.json") + " -o " + path("open.plan.json") +
                              " --max-iterations 20000 --seed 3 --log-csv " + path("open.log.csv") +
                              " --log-every 5000");
  REQUIRE(o.code == 0);
  CHECK_THAT(o.out, Catch::Matchers::ContainsSubstring("best cost"));
  CHECK_THAT(o.out, Catch::Matchers::ContainsSubstring("tree size"));
  const PlanFile f = load_plan(path("open.plan.json"));
  CHECK(f.provenance.seed == 3);
  CHECK(f.provenance.iterations == 20000);
  CHECK(f.provenance.scenario_hash == scenario_hash(load_scenario(scenario("open_field.json"))));
  CHECK(f.plan.horizon > 0);

  const std::string log = read_text_file(path("open.log.csv"));
  CHECK(log.rfind("iteration,elapsed_s,tree_size,best_cost\n", 0) == 0);
  CHECK_THAT(log, Catch::Matchers::ContainsSubstring("\n20000,"));
  CHECK(count_lines(log) >= 5);
}

TEST_CASE("plan exit codes") {
  CHECK(etgbt_cli("-q plan " + scenario("walled_off.json") + " -o " + path("walled.json")).code == 3);
  CHECK_FALSE(fs::exists(path("walled.json")));

  Json doc = Json::parse(read_text_file(scenario("open_field.json")));
  doc["system"]["K"] = Json::array({Json::array({0.5, 0.0})});
  write_text_file(path("bad_k.json"), doc.dump());
  const Outcome bad = etgbt_cli("plan " + path("bad_k.json") + " -o " + path("bad.plan.json"));
  CHECK(bad.code == 2);
  CHECK_THAT(bad.err, Catch::Matchers::ContainsSubstring("system.K"));

  write_text_file(path("truncated.json"), "{\"schema_version\": 1, \"system\": {");
  const Outcome trunc = etgbt_cli("plan " + path("truncated.json") + " -o " + path("t.plan.json"));
  CHECK(trunc.code == 2);
  CHECK_THAT(trunc.err, Catch::Matchers::ContainsSubstring("malformed JSON"));
}

TEST_CASE("simulate a plan") {
  REQUIRE(etgbt_cli("-q plan " + scenario("open_field.json") + " -o " + path("sim.plan.json") +
                    " --max-iterations 10000")
              .code == 0);
  const Outcome one = etgbt_cli("-q simulate " + path("sim.plan.json") + " --runs 1 --seed 4 --threads 1 -o " +
                                path("sim1.json"));
  REQUIRE(one.code == 0);
  const Json stats = Json::parse(read_text_file(path("sim1.json")));
  CHECK(stats.at("runs") == 1);
  const int T = load_plan(path("sim.plan.json")).plan.horizon;
  CHECK(static_cast<int>(stats.at("per_step_trigger_rate").size()) == T);
  CHECK(count_lines(read_text_file(path("sim1_steps.csv"))) == T + 2);
  CHECK(count_lines(read_text_file(path("sim1_epsilon.csv"))) == T + 2);

  const Outcome matching = etgbt_cli("-q simulate " + path("sim.plan.json") + " --scenario " + scenario("open_field.json") +
                                     " --runs 20 -o " + path("sim20.json"));
  CHECK(matching.code == 0);
  CHECK_THAT(matching.out, Catch::Matchers::ContainsSubstring("collision"));

  const Outcome mismatch = etgbt_cli("-q simulate " + path("sim.plan.json") + " --scenario " +
                                     scenario("narrow_corridor.json") + " --runs 1 -o " + path("simx.json"));
  CHECK(mismatch.code == 2);

  Json doc = Json::parse(read_text_file(path("sim.plan.json")));
  doc["plan"]["bounds"][1][1] = doc["plan"]["bounds"][1][1].get<double>() * 1.001;
  write_text_file(path("corrupt.plan.json"), doc.dump(2));
  const Outcome corrupt = etgbt_cli("-q simulate " + path("corrupt.plan.json") + " --runs 1 -o " + path("simc.json"));
  CHECK(corrupt.code == 2);
  CHECK_THAT(corrupt.err, Catch::Matchers::ContainsSubstring("replay"));
}

TEST_CASE("verify-bounds") {
  const Outcome ok = etgbt_cli("-q verify-bounds " + scenario("open_field.json") + " -o " + path("eps.csv"));
  CHECK(ok.code == 0);
  CHECK_THAT(ok.out, Catch::Matchers::ContainsSubstring("PASS constant 0.25"));
  CHECK_THAT(ok.out, Catch::Matchers::ContainsSubstring("PASS cyclic"));
  // Six sequences, each with 2^13 - 1 (step, prefix) rows, plus the header.
  CHECK(count_lines(read_text_file(path("eps.csv"))) == 6 * 8191 + 1);

  CHECK(etgbt_cli("-q verify-bounds " + scenario("open_field.json") + " --horizon 25").code == 2);
  CHECK(etgbt_cli("-q verify-bounds " + scenario("open_field.json") + " --horizon 6 --delta-grid 1,-2").code == 2);
  const Outcome bad = etgbt_cli("-q verify-bounds " + scenario("open_field.json") +
                                " --horizon 8 --delta-grid 1 --corrupt-lambda-scale 0.5");
  CHECK(bad.code == 4);
  CHECK_THAT(bad.out, Catch::Matchers::ContainsSubstring("FAIL"));
}

TEST_CASE("benchmark tables") {
  const Outcome single = etgbt_cli("-q benchmark " + scenario("open_field.json") +
                                   " --budgets 3000 --unit iterations --trials 1 --threads 1 -o " + path("b1.csv"));
  REQUIRE(single.code == 0);
  std::istringstream lines(read_text_file(path("b1.csv")));
  std::vector<std::string> data;
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty() && line[0] != '#') data.push_back(line);
  }
  CHECK(data.size() == 2);  // header + one budget row

  const std::string random = "-q benchmark --random-envs 2 --budgets 1000,2000 --unit iterations --seed 5 --threads 1 -o ";
  REQUIRE(etgbt_cli(random + path("r1.csv")).code == 0);
  REQUIRE(etgbt_cli(random + path("r2.csv")).code == 0);
  CHECK(read_text_file(path("r1.csv")) == read_text_file(path("r2.csv")));
  CHECK(etgbt_cli("-q benchmark --random-envs 2 --trials 3 --budgets 10 -o " + path("r3.csv")).code == 2);
  CHECK(etgbt_cli("-q benchmark " + scenario("open_field.json") + " --budgets 20,10 -o " + path("r4.csv")).code == 2);
}

TEST_CASE("gen-env") {
  const std::string base = "-q gen-env --seed 12 -o ";
  REQUIRE(etgbt_cli(base + path("g1.json")).code == 0);
  REQUIRE(etgbt_cli(base + path("g2.json")).code == 0);
  CHECK(read_text_file(path("g1.json")) == read_text_file(path("g2.json")));
  const Scenario sc = load_scenario(path("g1.json"));
  CHECK(sc.environment.obstacles().size() == 15);
  REQUIRE(etgbt_cli("-q gen-env --seed 13 -o " + path("g3.json")).code == 0);
  CHECK(read_text_file(path("g1.json")) != read_text_file(path("g3.json")));

  CHECK(etgbt_cli("-q gen-env --count 0 -o " + path("g0.json")).code == 2);
  const Outcome crowded = etgbt_cli("-q gen-env --count 200 --radius-mean 30 --radius-std 1 -o " + path("gx.json"));
  CHECK(crowded.code == 2);
  CHECK_THAT(crowded.err, Catch::Matchers::ContainsSubstring("PlacementFailure"));
}

TEST_CASE("in-process entry point matches the binary") {
  REQUIRE(etgbt_cli("-q gen-env --seed 21 -o " + path("g5.json")).code == 0);
  CHECK(cli::run(std::vector<std::string>{"-q", "gen-env", "--seed", "21", "-o", path("g4.json")}) == 0);
  CHECK(read_text_file(path("g4.json")) == read_text_file(path("g5.json")));
}
