#pragma once

// Cluster tilting subcategories of a stable module category and the standard n-angles on them.

#include <json.hpp>

#include "nangle/angulation.hpp"

namespace nangle {

/// Module given by dimension vector and one matrix per arrow (rows = target dim).
ModulePtr module_from_json(const AlgebraPtr& a, const nlohmann::json& j, const std::string& label = "");
nlohmann::json module_to_json(const Module& m);

struct WitnessResult {
  std::string label;
  bool in_add_t = false;
  bool left_orthogonal = false;   // Hom(T, Omega^{-j} W) = 0 for 1 <= j < d
  bool right_orthogonal = false;  // Hom(W, Omega^{-j} T) = 0 for 1 <= j < d
  bool consistent = false;        // orthogonal on either side exactly when in add T
};

struct ClusterTiltingReport {
  bool rigid = true;
  bool closed = true;  // Omega^{-d} permutes the summands
  bool degenerate = false;
  std::vector<std::size_t> permutation;
  std::vector<WitnessResult> witnesses;
  std::vector<std::string> failures;
  bool ok() const;
  nlohmann::json to_json() const;
};

ClusterTiltingReport check_cluster_tilting(StableCategory& sc, const std::vector<ModulePtr>& t, std::size_t d,
                                           const std::vector<ModulePtr>& witnesses = {});

/// add(T) in the stable category with Sigma_n = Omega^{-d}, n = d + 2.
class ClusterTilting {
 public:
  ClusterTilting(StableCategory& sc, std::vector<ModulePtr> t, std::size_t d);

  StableCategory& stable() const { return *sc_; }
  std::size_t d() const { return d_; }
  std::size_t n() const { return d_ + 2; }
  const std::vector<ModulePtr>& summands() const { return t_; }
  const CategoryPtr& category() const { return rc_.category; }
  Realizer& realizer() { return *realizer_; }
  /// mod-F for F = add(T); built on first use.
  FunctorCategory& functors();

 private:
  StableCategory* sc_;
  std::vector<ModulePtr> t_;
  std::size_t d_;
  RealizedCategory rc_;
  std::unique_ptr<Realizer> realizer_;
  std::unique_ptr<FunctorCategory> fc_;
};

struct Approximation {
  Object target;
  ModuleMap map;  // x -> realization of target
};
/// Minimal left add(T)-approximation; ties broken by basis order.
Approximation left_approximation(ClusterTilting& ct, const ModulePtr& x);
/// Every stable map x -> T_i factors through the approximation.
bool is_left_approximation(ClusterTilting& ct, const ModulePtr& x, const Approximation& a);

struct Tower {
  std::vector<ModulePtr> half;   // X_{2.5}, ..., X_{(n-1).5} without projective summands
  std::vector<Object> objects;   // X_1, ..., X_n
};
struct Construction {
  NSigmaSequence seq;
  Tower tower;
};
/// Completes alpha_1 to a standard n-angle. Throws NangleError when the coresolution is too long.
Construction construct_angle(ClusterTilting& ct, const Morphism& a1);

struct VanishingReport {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string detail;
};
/// stable_hom(X_{(i+1).5}, Omega^{-j} T_k) = 0 for 0 < j < i < n - 2.
VanishingReport tower_vanishing(ClusterTilting& ct, const Tower& t);

/// A map of add(T) with kernel K (K a non-projective mod-F module), built from injective envelopes.
Morphism morphism_with_kernel(FunctorCategory& fc, const ModulePtr& k);

/// The class of standard n-angles: exact sequences whose delta agrees with delta of a
/// standard n-angle on every kernel.
class StandardOracle : public AngleClassOracle {
 public:
  explicit StandardOracle(ClusterTilting* ct);
  std::string tag() const override { return "standard"; }
  const BasedCategory& category() const override { return *ct_->category(); }
  std::size_t arity() const override { return ct_->n(); }
  bool member(const NSigmaSequence& x) override;
  std::optional<NSigmaSequence> complete(const Morphism& f) override;
  ThetaFamily* theta() { return theta_.get(); }
  /// Multiplies the Theta value at one representative by s (fault injection).
  void corrupt_theta(std::size_t j, Residue s);

 private:
  ClusterTilting* ct_;
  std::unique_ptr<ThetaFamily> theta_;
};

/// Order of the permutation induced by Omega^{-d} on the summands.
std::size_t suspension_order(const ClusterTilting& ct);

struct CalabiYauReport {
  bool selfinjective = false;
  std::size_t n = 0;
  std::size_t serre_power = 0;  // least d with Sigma_n^d = Serre on summands, 0 when none found
  std::size_t cy_dimension = 0;
  std::size_t modules = 0;
  std::size_t mismatches = 0;
  bool degenerate = false;
  std::string note;
  nlohmann::json to_json() const;
};
CalabiYauReport calabi_yau_report(ClusterTilting& ct, std::size_t max_modules = 400);

/// Indecomposable non-projective summands of the simples, of P_v / rad^k and of the quotients of
/// P_v by submodules generated by basis paths, closed under Omega, Omega^{-1} and nu.
std::vector<ModulePtr> enumerate_indecomposables(StableCategory& sc, std::size_t max_modules,
                                                 bool include_path_quotients = true);

/// Searches for a basic rigid object (stable_hom(X, Omega^{-1} Y) = 0) closed under Omega^{-2}
/// with the given number of summands, among the candidates in order.
std::optional<std::vector<ModulePtr>> search_cluster_tilting(StableCategory& sc,
                                                             const std::vector<ModulePtr>& candidates,
                                                             std::size_t size,
                                                             const std::function<bool(const std::vector<ModulePtr>&)>& accept = {});

/// Gabriel quiver of the stable endomorphism algebra of T: arrow counts q[i][j] = dim irr(T_i, T_j).
std::vector<std::vector<std::size_t>> endomorphism_quiver(ClusterTilting& ct);
/// Quiver of a presentation as arrow counts.
std::vector<std::vector<std::size_t>> presentation_quiver(const AlgebraPresentation& p);
/// A vertex bijection carrying arrow counts a onto b, if one exists.
std::optional<std::vector<std::size_t>> quiver_isomorphism(const std::vector<std::vector<std::size_t>>& a,
                                                           const std::vector<std::vector<std::size_t>>& b);
/// Total dimension of the stable endomorphism algebra of T.
std::size_t stable_endomorphism_dim(ClusterTilting& ct);

}  // namespace nangle
