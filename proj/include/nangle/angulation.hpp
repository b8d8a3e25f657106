#pragma once

// n-Sigma-sequences over a based category: exactness, rotation, cones, morphism completion,
// periodic contractions, the delta invariant and axiom verification.

#include <random>
#include <set>

#include "nangle/category.hpp"

namespace nangle {

struct NSigmaSequence {
  std::size_t n = 0;
  std::vector<Object> x;      // X_1 .. X_n
  std::vector<Morphism> a;    // alpha_1 .. alpha_n, alpha_n: X_n -> Sigma X_1
};

struct SequenceMorphism {
  NSigmaSequence source;
  NSigmaSequence target;
  std::vector<Morphism> phi;  // phi_1 .. phi_n
};

/// Knobs that deliberately break conventions (used to show the checks have teeth).
struct Faults {
  bool rotation_sign = false;
  bool cone_entry = false;
};

/// Empty string when endpoints match.
std::string check_sequence(const BasedCategory& c, const NSigmaSequence& x);
bool is_complex(const BasedCategory& c, const NSigmaSequence& x);
bool is_exact_sequence(const BasedCategory& c, const NSigmaSequence& x);

NSigmaSequence rotate_left(const BasedCategory& c, const NSigmaSequence& x, const Faults& f = {});
NSigmaSequence rotate_right(const BasedCategory& c, const NSigmaSequence& x, const Faults& f = {});
/// Identity in slot l (1-based), zeros elsewhere.
NSigmaSequence trivial_sequence(const BasedCategory& c, std::size_t n, const Object& x, std::size_t l);
NSigmaSequence direct_sum(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y);
/// Splits the image of an idempotent endomorphism of sequences.
NSigmaSequence split_summand(const FunctorCategory& fc, const SequenceMorphism& e);
SequenceMorphism identity_morphism(const BasedCategory& c, const NSigmaSequence& x);

/// Empty string when all squares commute.
std::string check_morphism(const BasedCategory& c, const SequenceMorphism& phi);
NSigmaSequence cone(const BasedCategory& c, const SequenceMorphism& phi, const Faults& f = {});
bool is_weak_iso(const BasedCategory& c, const SequenceMorphism& phi);
bool is_iso(const BasedCategory& c, const SequenceMorphism& phi);

/// eta_1 .. eta_n with eta_i: X_i -> X_{i-1} (eta_1: X_1 -> Sigma^{-1} X_n).
std::optional<std::vector<Morphism>> periodic_contraction(const BasedCategory& c, const NSigmaSequence& x);
/// Trivial summands read off from a contraction: (slot, object) pairs; empty when not contractible.
std::optional<std::vector<std::pair<std::size_t, Object>>> decompose_contractible(const FunctorCategory& fc,
                                                                                 const NSigmaSequence& x);

/// Affine space of completions phi_3 .. phi_n.
struct CompletionSpace {
  Vec particular;
  Matrix kernel;  // columns
  std::vector<std::pair<Object, Object>> shapes;  // (X_i, Y_i) for i = 3..n
  SequenceMorphism at(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y,
                      const Morphism& phi1, const Morphism& phi2, const Vec& coeffs) const;
};
std::optional<CompletionSpace> completion_space(const BasedCategory& c, const NSigmaSequence& x,
                                                const NSigmaSequence& y, const Morphism& phi1, const Morphism& phi2);
std::optional<SequenceMorphism> complete_morphism(const BasedCategory& c, const NSigmaSequence& x,
                                                  const NSigmaSequence& y, const Morphism& phi1,
                                                  const Morphism& phi2);

/// Basis of commuting pairs (phi_1, phi_2) between the first squares of x and y.
std::vector<std::pair<Morphism, Morphism>> commuting_pairs(const BasedCategory& c, const NSigmaSequence& x,
                                                           const NSigmaSequence& y);

class AngleClassOracle;

struct ConeSearch {
  std::optional<SequenceMorphism> found;
  bool exhaustive = false;
  std::size_t tried = 0;
  std::size_t kernel_dim = 0;
};
/// Searches the completions for one whose cone is a member; exhaustive up to p^k <= 2^max_sweep_bits.
ConeSearch complete_with_exact_cone(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y,
                                    const Morphism& phi1, const Morphism& phi2, AngleClassOracle& oracle,
                                    std::mt19937_64& rng, std::size_t max_sweep_bits = 16,
                                    std::size_t sample_cap = 2000, const Faults& faults = {});

/// The delta invariant of an exact sequence, computed inside mod-F.
struct Delta {
  ModulePtr kernel;   // K = Ker F(-, alpha_1)
  ModulePtr shifted;  // Sigma K
  ModulePtr target;   // Omega^{-n} K
  ModuleMap map;      // Sigma K -> Omega^{-n} K
};
Delta delta_of(FunctorCategory& fc, const NSigmaSequence& x);

/// The isomorphism Sigma Omega^{-1} M -> Omega^{-1} Sigma M obtained by comparing envelopes.
ModuleMap sigma_iso(FunctorCategory& fc, const ModulePtr& m, const ModulePtr& sigma_cosyz,
                    const ModulePtr& sigma_m);

/// Stable inverse of a stable isomorphism, if it is one.
std::optional<ModuleMap> stable_inverse(StableCategory& sc, const ModuleMap& f);

/// A family Theta_R: Sigma R -> Omega^{-n} R on representatives R of the indecomposable
/// non-projective E-modules, extended additively.
class ThetaFamily {
 public:
  using Provider = std::function<std::optional<ModuleMap>(const ModulePtr& rep, const ModulePtr& twisted)>;
  ThetaFamily(FunctorCategory* fc, std::size_t n, Provider provider = nullptr);

  FunctorCategory& functors() const { return *fc_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return reps_.size(); }
  const ModulePtr& rep(std::size_t j) const { return reps_[j]; }
  const ModulePtr& twisted(std::size_t j) const { return twisted_[j]; }
  const ModuleMap& value(std::size_t j) const { return values_[j]; }
  void set_value(std::size_t j, ModuleMap v) { values_[j] = std::move(v); }
  /// Adds a representative with its value; returns its index.
  std::size_t add(const ModulePtr& rep, const ModuleMap& value);
  /// Index of the representative isomorphic to an indecomposable non-projective m (adding it
  /// through the provider when unknown), with an isomorphism rep -> m.
  std::optional<std::pair<std::size_t, ModuleMap>> locate(const ModulePtr& m);
  /// Theta at an arbitrary module k, as a map twisted -> Omega^{-n} k.
  std::optional<ModuleMap> at(const ModulePtr& k, const ModulePtr& twisted);

  struct Validation {
    bool isos = true, natural = true, compatible = true;
    std::string detail;
  };
  Validation validate();

 private:
  FunctorCategory* fc_;
  std::size_t n_;
  Provider provider_;
  std::vector<ModulePtr> reps_, twisted_;
  std::vector<ModuleMap> values_;
};

bool theta_membership(ThetaFamily& theta, const NSigmaSequence& x);

/// A natural family of stable automorphisms u_R of Omega^{-n} R.
struct UnitFamily {
  std::vector<ModuleMap> values;
};
/// u o Theta, or nullopt when u is not natural.
std::optional<ThetaFamily> act_on_class(const UnitFamily& u, const ThetaFamily& theta);
/// The unit family carrying a to b (b o a^{-1}), if natural.
std::optional<UnitFamily> unit_between(const ThetaFamily& a, const ThetaFamily& b);
bool same_theta(const ThetaFamily& a, const ThetaFamily& b);

class AngleClassOracle {
 public:
  virtual ~AngleClassOracle() = default;
  virtual std::string tag() const = 0;
  virtual const BasedCategory& category() const = 0;
  virtual std::size_t arity() const = 0;
  virtual bool member(const NSigmaSequence& x) = 0;
  /// A member whose first map is f, built or located; nullopt when out of reach.
  virtual std::optional<NSigmaSequence> complete(const Morphism& f) = 0;
};

/// Exact sequences with delta equal to a Theta family.
class ThetaOracle : public AngleClassOracle {
 public:
  ThetaOracle(CategoryPtr c, ThetaFamily* theta, std::vector<NSigmaSequence> pool = {});
  std::string tag() const override { return "theta-class"; }
  const BasedCategory& category() const override { return *cat_; }
  std::size_t arity() const override { return theta_->n(); }
  bool member(const NSigmaSequence& x) override { return theta_membership(*theta_, x); }
  std::optional<NSigmaSequence> complete(const Morphism& f) override;

 private:
  CategoryPtr cat_;
  ThetaFamily* theta_;
  std::vector<NSigmaSequence> pool_;
};

/// Membership by an explicit list (up to equality of data).
class ListOracle : public AngleClassOracle {
 public:
  ListOracle(CategoryPtr c, std::size_t n, std::vector<NSigmaSequence> list);
  std::string tag() const override { return "explicit"; }
  const BasedCategory& category() const override { return *cat_; }
  std::size_t arity() const override { return n_; }
  bool member(const NSigmaSequence& x) override;
  std::optional<NSigmaSequence> complete(const Morphism& f) override;

 private:
  CategoryPtr cat_;
  std::size_t n_;
  std::vector<NSigmaSequence> list_;
};

struct AxiomResult {
  std::string axiom;   // F1a, F1b, F1c, F2, F3, F4, exactness
  std::string status;  // pass, fail, budget
  std::size_t samples = 0;
  std::string counterexample;  // JSON, empty when none
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::set<std::string> axioms;  // empty = all
  std::size_t pair_samples = 12;
  std::size_t square_samples = 3;
  std::size_t max_sweep_bits = 16;
  std::size_t sample_cap = 2000;
  Faults faults;
};

struct VerifyInput {
  std::vector<NSigmaSequence> members;      // sampled members
  std::vector<NSigmaSequence> nonmembers;   // sampled exact non-members (for the converse of F2)
  std::vector<Object> objects;              // sampled objects for F1b
  std::vector<Morphism> morphisms;          // sampled morphisms for F1c
};

std::vector<AxiomResult> verify_axioms(AngleClassOracle& oracle, const VerifyInput& in, const VerifyOptions& opt,
                                       FunctorCategory* fc = nullptr);

/// Uniform random morphism x -> y.
Morphism random_morphism(const BasedCategory& c, const Object& x, const Object& y, std::mt19937_64& rng);
/// Random automorphism of x by rejection; nullopt after the given number of tries.
std::optional<Morphism> random_automorphism(const BasedCategory& c, const Object& x, std::mt19937_64& rng,
                                            std::size_t tries = 64);
/// The sequence with maps g_{i+1} a_i g_i^{-1} (g_{n+1} = Sigma g_1); g must be isomorphisms.
NSigmaSequence conjugate(const BasedCategory& c, const NSigmaSequence& x, const std::vector<Morphism>& g);

struct WeakIsoReport {
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;     // no automorphism found or no completion
  std::string counterexample;  // first failure
  bool ok() const { return failures == 0; }
};
/// Weak isomorphisms built from random automorphisms of the first two objects (completed into
/// a member of the class) and from full conjugations. Checks that membership transfers and that
/// each cone admits a periodic contraction.
WeakIsoReport weak_iso_suite(AngleClassOracle& oracle, const std::vector<NSigmaSequence>& seeds,
                             std::size_t samples, std::mt19937_64& rng);

std::string to_json(const BasedCategory& c, const NSigmaSequence& x);
std::string to_json(const BasedCategory& c, const Morphism& f);

}  // namespace nangle
