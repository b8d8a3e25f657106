#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "nangle/scenario.hpp"

using namespace nangle;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(NANGLE_DATA_DIR) + "/scenarios/" + name + ".json";
}

// Writes a scenario next to the bundled ones so that relative algebra paths resolve.
struct TempScenario {
  std::string path;
  TempScenario(const std::string& name, const nlohmann::json& j) {
    path = (std::filesystem::temp_directory_path() / (name + ".json")).string();
    std::ofstream(path) << j.dump();
  }
  ~TempScenario() { std::filesystem::remove(path); }
};

nlohmann::json base() {
  std::ifstream in(scenario_path("preproj_A2_n4"));
  auto j = nlohmann::json::parse(in);
  j["algebra"] = std::string(NANGLE_DATA_DIR) + "/algebras/preproj_A2.json";
  return j;
}

std::vector<nlohmann::json> without_timing(const Report& r) {
  auto out = r.checks;
  out.push_back(r.summary());
  out.back().erase("elapsed_ms");
  return out;
}

}  // namespace

TEST(ScenarioFiles, AllBundledScenariosLoad) {
  for (const auto& e : std::filesystem::directory_iterator(std::string(NANGLE_DATA_DIR) + "/scenarios")) {
    auto s = load_scenario(e.path().string());
    EXPECT_FALSE(s.name.empty());
    EXPECT_GE(s.n, 3u);
    EXPECT_TRUE(std::filesystem::exists(s.algebra_file)) << s.algebra_file;
  }
}

TEST(ScenarioFiles, RejectsBadInput) {
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), InputError);
  auto j = base();
  j["budgets"]["pair_samples"] = 0;
  EXPECT_THROW(load_scenario(TempScenario("nangle_zero_budget", j).path), InputError);
  j = base();
  j["algebra"] = "missing.json";
  EXPECT_THROW(load_scenario(TempScenario("nangle_missing_algebra", j).path), InputError);
  j = base();
  j["n"] = 2;
  EXPECT_THROW(load_scenario(TempScenario("nangle_small_n", j).path), InputError);
  j = base();
  j["kind"] = "other";
  EXPECT_THROW(load_scenario(TempScenario("nangle_kind", j).path), InputError);
}

TEST(Commands, VerifyIsDeterministicAndPasses) {
  auto s = load_scenario(scenario_path("preproj_A2_n4"));
  auto a = cmd_verify(s);
  auto b = cmd_verify(s);
  EXPECT_EQ(without_timing(a), without_timing(b));
  EXPECT_EQ(a.exit_code(), 0) << a.jsonl();
  std::set<std::string> seen;
  for (const auto& c : a.checks) seen.insert(c["check"].get<std::string>());
  for (auto name : {"F1a", "F1b", "F1c", "F2", "F3", "F4", "exactness"}) EXPECT_TRUE(seen.count(name)) << name;
  auto f2 = cmd_verify(s, {"F2"});
  ASSERT_EQ(f2.checks.size(), 1u);
  EXPECT_EQ(f2.checks[0]["check"], "F2");
  EXPECT_EQ(cmd_verify(s, {}, 77).seed, 77u);
}

TEST(Commands, FaultFixturesFail) {
  for (auto name : {"corrupted_rotation_sign", "corrupted_cone_entry", "corrupted_theta"}) {
    auto r = cmd_verify(load_scenario(scenario_path(name)));
    EXPECT_EQ(r.exit_code(), 1) << name;
    bool serialized = false;
    for (const auto& c : r.checks)
      if (c["status"] == "fail" && c["detail"].contains("counterexample")) serialized = true;
    EXPECT_TRUE(serialized) << name;
  }
}

TEST(Commands, HellerMicroVerify) {
  auto f2 = cmd_verify(load_scenario(scenario_path("heller_micro_f2")));
  EXPECT_EQ(f2.exit_code(), 0) << f2.jsonl();
  // over F_3 with n = 3 the class of a natural Theta is not closed under rotation
  auto f3 = cmd_verify(load_scenario(scenario_path("heller_micro_f3")), {"F2"});
  EXPECT_EQ(f3.exit_code(), 1);
}

TEST(Commands, ExpectedValuesAreCompared) {
  auto s = load_scenario(scenario_path("preproj_A3_n4"));
  EXPECT_EQ(cmd_suspension_order(s).exit_code(), 0);
  EXPECT_EQ(cmd_cy(s).exit_code(), 0);
  s.expected["suspension_order"] = 2;
  s.expected["cy_dimension"] = 5;
  EXPECT_EQ(cmd_suspension_order(s).exit_code(), 1);
  EXPECT_EQ(cmd_cy(s).exit_code(), 1);
}

TEST(Commands, ConstructFromMapSpec) {
  auto s = load_scenario(scenario_path("preproj_A3_n4"));
  auto r = cmd_construct(s, {{"source", {0}}, {"target", {1}}, {"blocks", {{{1}}}}});
  EXPECT_EQ(r.exit_code(), 0) << r.jsonl();
  EXPECT_THROW(cmd_construct(s, {{"source", {7}}, {"target", {1}}}), InputError);
  EXPECT_THROW(cmd_construct(s, {{"source", {0}}, {"target", {1}}, {"blocks", {{{1, 1}}}}}), InputError);
}

TEST(Commands, AlgebraInfo) {
  auto r = cmd_algebra_info(std::string(NANGLE_DATA_DIR) + "/algebras/preproj_A2.json");
  ASSERT_EQ(r.checks.size(), 2u);
  const auto& info = r.checks[1]["detail"];
  EXPECT_EQ(info["dim"], 4);
  EXPECT_EQ(info["selfinjective"], true);
  EXPECT_EQ(info["nakayama_permutation"], nlohmann::json({2, 1}));
}

TEST(Commands, Threads) {
  setenv("NANGLE_THREADS", "3", 1);
  EXPECT_EQ(requested_threads(), 3u);
  setenv("NANGLE_THREADS", "zero", 1);
  EXPECT_EQ(requested_threads(), 1u);
  unsetenv("NANGLE_THREADS");
  EXPECT_EQ(requested_threads(), 1u);
}
