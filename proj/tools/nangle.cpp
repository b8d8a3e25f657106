// nangle: command-line front end. JSON lines on stdout, a human summary on stderr.
// Exit codes: 0 pass, 1 check failure, 2 budget exhausted, 3 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nangle/scenario.hpp"

using namespace nangle;

namespace {

int emit(const Report& r) {
  std::cout << r.jsonl() << std::flush;
  std::cerr << r.human();
  return r.exit_code();
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',') {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  return out;
}

nlohmann::json read_spec(const std::string& arg) {
  try {
    if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return nlohmann::json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw InputError("cannot open map spec " + arg);
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("map spec: ") + e.what());
  }
}

int fail_input(const std::string& what) {
  std::cout << nlohmann::json{{"error", what}, {"exit_code", 3}}.dump() << "\n";
  std::cerr << "input error: " << what << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations with n-angulated categories"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kArtifactVersion);

  std::string file, scenario, axioms, from;
  std::optional<std::uint64_t> seed;

  auto* algebra = app.add_subcommand("algebra", "algebra presentations");
  algebra->require_subcommand(1);
  auto* info = algebra->add_subcommand("info", "dimension, grading, self-injectivity, projectives");
  info->add_option("file", file, "presentation file")->required();

  auto* verify = app.add_subcommand("verify", "axioms F1-F4, exactness, weak isomorphisms, towers");
  verify->add_option("scenario", scenario)->required();
  verify->add_option("--axioms", axioms, "comma-separated checks, e.g. F1,F2,weak_iso");
  verify->add_option("--seed", seed, "overrides the scenario seed");

  auto* order = app.add_subcommand("suspension-order", "order of the n-suspension on the summands");
  order->add_option("scenario", scenario)->required();
  auto* cy = app.add_subcommand("cy", "Calabi-Yau dimension of mod-E");
  cy->add_option("scenario", scenario)->required();
  auto* heller = app.add_subcommand("heller", "orbit check of Theta candidates on enumerated sequences");
  heller->add_option("scenario", scenario)->required();

  auto* angle = app.add_subcommand("angle", "n-angles");
  angle->require_subcommand(1);
  auto* construct = angle->add_subcommand("construct", "standard n-angle on a map of add T");
  construct->add_option("scenario", scenario)->required();
  construct->add_option("--from", from, "map spec: inline JSON or a file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (info->parsed()) return emit(cmd_algebra_info(file));
    auto s = load_scenario(scenario);
    if (verify->parsed()) return emit(cmd_verify(s, split_list(axioms), seed));
    if (order->parsed()) return emit(cmd_suspension_order(s));
    if (cy->parsed()) return emit(cmd_cy(s));
    if (heller->parsed()) return emit(cmd_heller(s));
    if (construct->parsed()) return emit(cmd_construct(s, read_spec(from)));
  } catch (const InputError& e) {
    return fail_input(e.what());
  } catch (const NangleError& e) {
    std::cout << nlohmann::json{{"error", e.what()}, {"exit_code", 1}}.dump() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 3;
}
