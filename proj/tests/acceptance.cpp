// Acceptance run: one line per criterion, PASS or FAIL with the measured values.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "nangle/scenario.hpp"
#include "oracles.hpp"

using namespace nangle;

namespace {

using Clock = std::chrono::steady_clock;

std::string scenario_path(const std::string& name) {
  return std::string(NANGLE_DATA_DIR) + "/scenarios/" + name + ".json";
}
std::string algebra_path(const std::string& name) {
  return std::string(NANGLE_DATA_DIR) + "/algebras/" + name + ".json";
}

const std::vector<std::string> kStandard = {"preproj_A2_n4", "preproj_A3_n4", "nakayama_cyclic3_n5",
                                            "preproj_A5_n4"};
const std::vector<std::string> kHeller = {"heller_micro_f2", "heller_micro_f3", "heller_micro_n4_f3"};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string status_of(const Report& r, const std::string& check) {
  for (const auto& c : r.checks)
    if (c["check"] == check) return c["status"].get<std::string>();
  return "missing";
}

Outcome suspension_order_a5() {
  auto r = cmd_suspension_order(load_scenario(scenario_path("preproj_A5_n4")));
  const auto& d = r.checks[0]["detail"];
  std::ostringstream s;
  s << "order " << d["order"] << " on " << d["summands"] << " summands, endomorphism quiver "
    << status_of(r, "endomorphism_quiver");
  return {d["order"] == 3 && r.exit_code() == 0, s.str()};
}

Outcome verify_a2() {
  auto r = cmd_verify(load_scenario(scenario_path("preproj_A2_n4")));
  bool ok = r.exit_code() == 0;
  std::ostringstream s;
  for (auto name : {"F1a", "F1b", "F1c", "F2", "F3", "F4", "exactness"}) {
    ok = ok && status_of(r, name) == "pass";
    s << name << "=" << status_of(r, name) << " ";
  }
  for (const auto& c : r.checks)
    if (c["check"] == "F4") s << "(" << c["detail"].value("note", "") << ")";
  return {ok, s.str()};
}

// Criterion 5 reuses the angles built for criterion 3.
struct ConstructionStats {
  std::size_t angles = 0, inexact = 0, towers = 0, checks = 0, failures = 0;
};

ConstructionStats construction_stats() {
  ConstructionStats st;
  for (const auto& name : kStandard) {
    auto s = load_scenario(scenario_path(name));
    StandardSession ss(s);
    const auto& c = *ss.tilting().category();
    for (std::uint64_t seed : {s.budgets.seed, s.budgets.seed + 1, s.budgets.seed + 2})
      for (const auto& b : ss.constructions(seed)) {
        ++st.angles;
        if (!is_exact_sequence(c, b.seq)) ++st.inexact;
        ++st.towers;
        auto v = tower_vanishing(ss.tilting(), b.tower);
        st.checks += v.checks;
        st.failures += v.failures;
      }
  }
  return st;
}

Outcome weak_isos() {
  bool ok = true;
  std::ostringstream s;
  auto record = [&](const std::string& name, const Report& r) {
    for (const auto& c : r.checks)
      if (c["check"] == "weak_iso") {
        const auto& d = c["detail"];
        s << name << ":" << d["samples"] << "/" << d["failures"] << "f ";
        ok = ok && c["status"] == "pass" && d["samples"].get<std::size_t>() >= 50;
        return;
      }
    ok = false;
  };
  for (const auto& name : kStandard) record(name, cmd_verify(load_scenario(scenario_path(name)), {"weak_iso"}));
  for (const auto& name : kHeller) record(name, cmd_verify(load_scenario(scenario_path(name)), {"weak_iso"}));
  return {ok, s.str()};
}

Outcome heller_f3() {
  auto r = cmd_heller(load_scenario(scenario_path("heller_micro_f3")));
  std::ostringstream s;
  const auto& part = r.checks[0]["detail"];
  s << "partition=" << status_of(r, "partition") << " free=" << status_of(r, "free")
    << " transitive=" << status_of(r, "transitive") << "; " << part["weighted"] << " sequences ("
    << part["sequences"] << " orbit representatives), class sizes " << part["class_sizes"].dump() << ", "
    << part["outside"] << " outside every class";
  for (const auto& c : r.checks)
    if (c["check"] == "rotation_compatible")
      s << "; rotation-compatible candidates: " << c["detail"]["compatible"] << " of " << c["detail"]["candidates"];
  return {r.exit_code() == 0, s.str()};
}

Outcome calabi_yau_a3() {
  auto r = cmd_cy(load_scenario(scenario_path("preproj_A3_n4")));
  const auto& d = r.checks[0]["detail"];
  std::ostringstream s;
  s << "n=" << d["n"] << " d=" << d["d"] << " cy=" << d["cy_dimension"] << " modules=" << d["modules"]
    << " mismatches=" << d["mismatches"];
  return {r.exit_code() == 0 && d["d"] == 1 && d["n"] == 4 && d["mismatches"] == 0 && d["modules"] > 0, s.str()};
}

Outcome algebra_builder() {
  bool ok = true;
  std::ostringstream s;
  s << "dim Pi(A_n) =";
  for (std::size_t n = 2; n <= 5; ++n) {
    auto p = load_presentation(algebra_path("preproj_A" + std::to_string(n)));
    bool bound_ok = false;
    auto oracle_dim = oracle::naive_dimension(p, n, &bound_ok);
    auto dim = build_based_algebra(p)->dim();
    s << " " << dim;
    ok = ok && bound_ok && dim == oracle_dim;
  }
  const std::size_t expect[] = {4, 10, 20, 35};
  for (std::size_t n = 2; n <= 5; ++n)
    ok = ok && build_based_algebra(load_presentation(algebra_path("preproj_A" + std::to_string(n))))->dim() ==
                   expect[n - 2];
  s << "; potential algebras:";
  for (auto f : {"qp_Q1", "qp_Q2", "qp_Q3", "qp_Q4"}) {
    auto p = load_presentation(algebra_path(f));
    auto a = build_based_algebra(p);
    auto q = p;
    q.degree_bound += 1;
    bool stable = build_based_algebra(q)->dim() == a->dim();
    bool si = is_selfinjective(a).has_value();
    s << " " << f << "(dim " << a->dim() << ", p=" << a->p();
    for (const auto& [k, v] : p.params) s << ", " << k << "=" << v;
    s << (si ? ", self-injective" : ", NOT self-injective") << (stable ? "" : ", unstable") << ")";
    ok = ok && stable && si;
  }
  return {ok, s.str()};
}

Outcome faults() {
  bool ok = true;
  std::ostringstream s;
  for (auto name : {"corrupted_rotation_sign", "corrupted_cone_entry", "corrupted_theta"}) {
    auto r = cmd_verify(load_scenario(scenario_path(name)));
    std::vector<std::string> failing;
    bool serialized = false;
    for (const auto& c : r.checks)
      if (c["status"] == "fail") {
        failing.push_back(c["check"].get<std::string>());
        serialized = serialized || c["detail"].contains("counterexample");
      }
    s << name << ": fails";
    for (const auto& f : failing) s << " " << f;
    s << (serialized ? " (counterexample serialized); " : " (no counterexample); ");
    ok = ok && !failing.empty() && serialized;
  }
  return {ok, s.str()};
}

}  // namespace

int main() {
  int failed = 0;
  auto run = [&](int id, const std::string& what, double budget_s, const std::function<Outcome()>& f) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool in_time = secs <= budget_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << what << ": " << o.detail;
    std::cout << " [" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s, budget " << budget_s << " s" << (in_time ? "" : ", over budget") << "]" << std::endl;
  };

  run(1, "suspension order on Pi(A5)", 120, suspension_order_a5);
  run(2, "verify Pi(A2), n = 4", 30, verify_a2);
  ConstructionStats st;
  run(3, "constructed angles are exact", 600, [&] {
    st = construction_stats();
    std::ostringstream s;
    s << st.angles << " angles over " << kStandard.size() << " scenarios, " << st.inexact << " not exact";
    return Outcome{st.angles > 0 && st.inexact == 0, s.str()};
  });
  run(4, "weak isomorphisms transfer membership", 600, weak_isos);
  run(5, "tower vanishing", 600, [&] {
    std::ostringstream s;
    s << st.towers << " towers, " << st.checks << " vanishing checks, " << st.failures << " failures";
    return Outcome{st.towers > 0 && st.checks > 0 && st.failures == 0, s.str()};
  });
  run(6, "Heller parametrization over F_3, n = 3", 60, heller_f3);
  run(7, "Calabi-Yau dimension on Pi(A3)", 300, calabi_yau_a3);
  run(8, "algebra builder regression", 600, algebra_builder);
  run(9, "fault injection", 600, faults);
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
