#pragma once

// Scenario files and the report-producing commands shared by the CLI and the acceptance run.

#include <json.hpp>

#include "nangle/heller.hpp"
#include "nangle/standardcons.hpp"

namespace nangle {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct Budgets {
  std::uint64_t seed = 1;
  std::size_t alpha_samples = 12;
  std::size_t pair_samples = 12;
  std::size_t square_samples = 3;
  std::size_t max_sweep_bits = 16;
  std::size_t sample_cap = 2000;
  std::size_t weak_iso_samples = 50;
  std::size_t max_modules = 400;
};

struct Scenario {
  std::string file;
  std::string name;
  std::string description;
  std::string kind;  // "standard" or "heller"
  std::string algebra_file;
  AlgebraPresentation presentation;
  AlgebraPtr algebra;
  std::size_t n = 0;
  nlohmann::json summands = nlohmann::json::array();
  nlohmann::json witnesses = nlohmann::json::array();
  nlohmann::json expected = nlohmann::json::object();
  Budgets budgets;
  Faults faults;
  Residue theta_scale = 1;
  std::string quiver_file;  // optional comparison presentation for the stable endomorphism quiver
  std::size_t max_rank = 2;
};

/// Parses a scenario; files it references are resolved relative to its directory.
/// Throws InputError on missing keys, unreadable files or bad values.
Scenario load_scenario(const std::string& path);

/// add(T) for a standard scenario with its oracle and sampled inputs.
class StandardSession {
 public:
  explicit StandardSession(const Scenario& s);
  const Scenario& scenario() const { return s_; }
  StableCategory& stable() { return *sc_; }
  ClusterTilting& tilting() { return *ct_; }
  StandardOracle& oracle() { return *oracle_; }
  const std::vector<ModulePtr>& summands() const { return t_; }
  const std::vector<ModulePtr>& witnesses() const { return w_; }

  Object random_object(std::mt19937_64& rng, std::size_t max_summands = 2) const;
  /// Sampled first maps, reproducible from the seed.
  std::vector<Morphism> sample_alphas(std::mt19937_64& rng, std::size_t count) const;
  /// Constructed angles for the sampled maps (with their towers).
  std::vector<Construction> constructions(std::uint64_t seed);
  VerifyInput verify_input(std::uint64_t seed);

 private:
  Scenario s_;
  std::unique_ptr<StableCategory> sc_;
  std::vector<ModulePtr> t_, w_;
  std::unique_ptr<ClusterTilting> ct_;
  std::unique_ptr<StandardOracle> oracle_;
  std::map<std::uint64_t, std::vector<Construction>> built_;
};

/// add(P) over k[x]/x^2 with the class of Theta = b (the first candidate).
class HellerSession {
 public:
  explicit HellerSession(const Scenario& s);
  const Scenario& scenario() const { return s_; }
  HellerCategory& category() { return *h_; }
  ThetaOracle& oracle() { return *oracle_; }
  ThetaFamily& theta() { return cands_[0]; }
  VerifyInput verify_input(std::uint64_t seed);
  const std::vector<NSigmaSequence>& pool() const { return pool_; }
  const std::vector<NSigmaSequence>& exact() const { return exact_; }

 private:
  Scenario s_;
  std::unique_ptr<HellerCategory> h_;
  std::vector<ThetaFamily> cands_;
  std::vector<NSigmaSequence> pool_, exact_;
  std::unique_ptr<ThetaOracle> oracle_;
};

/// One JSON object per check plus a closing summary line.
struct Report {
  std::string scenario;
  std::string command;
  std::uint64_t seed = 0;
  std::vector<nlohmann::json> checks;
  double elapsed_ms = 0;

  /// Adds a check with status pass, fail or budget.
  void add(const std::string& check, const std::string& status, nlohmann::json detail = nlohmann::json::object());
  int exit_code() const;  // 0 pass, 1 some fail, 2 some budget and no fail
  nlohmann::json summary() const;
  std::string jsonl() const;
  std::string human() const;
};

Report cmd_algebra_info(const std::string& file);
Report cmd_verify(const Scenario& s, const std::set<std::string>& checks = {}, std::optional<std::uint64_t> seed = {});
Report cmd_suspension_order(const Scenario& s);
Report cmd_cy(const Scenario& s);
Report cmd_heller(const Scenario& s);
/// Map spec: {"source": [...], "target": [...], "blocks": [[[...]]]} in summand indices and category coordinates.
Report cmd_construct(const Scenario& s, const nlohmann::json& map_spec);

/// Threads requested through NANGLE_THREADS (at least 1; default 1).
std::size_t requested_threads();

}  // namespace nangle
