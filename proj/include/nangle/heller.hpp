#pragma once

// Heller's parametrization on a small example: F = proj k[x]/x^2 with Sigma = id.

#include <json.hpp>

#include "nangle/angulation.hpp"

namespace nangle {

class HellerCategory {
 public:
  /// add(P) for the projective P of a local algebra, with Sigma = identity.
  HellerCategory(const AlgebraPtr& local, std::size_t n);

  const CategoryPtr& category() const { return rc_.category; }
  FunctorCategory& functors() { return *fc_; }
  std::size_t n() const { return n_; }
  /// The indecomposable non-projective E-modules used as representatives (kernels of radical maps).
  std::vector<ModulePtr> representatives();
  /// Theta families theta * b on the representatives, b a stable Hom basis element, theta != 0.
  std::vector<ThetaFamily> candidates();

 private:
  RealizedCategory rc_;
  std::unique_ptr<FunctorCategory> fc_;
  std::size_t n_;
  std::vector<ModulePtr> reps_;
};

struct WeightedSequence {
  NSigmaSequence seq;
  std::uint64_t weight = 1;  // number of sequences represented (orbit of alpha_1)
};

/// Exact n-Sigma-sequences with every X_i = P^{r_i}, r_i <= max_rank. With normal_form, alpha_1
/// runs over one representative per orbit of Aut(X_1) x Aut(X_2) and carries the orbit size.
std::vector<WeightedSequence> enumerate_exact(const BasedCategory& c, std::size_t n, std::size_t max_rank,
                                              bool normal_form);

struct HellerReport {
  std::size_t candidates = 0;
  std::vector<ThetaFamily::Validation> validation;
  std::size_t compatible = 0;       // candidates passing the rotation compatibility check
  std::size_t sequences = 0;        // enumerated representatives
  std::uint64_t weighted = 0;       // sequences they stand for
  std::vector<std::uint64_t> class_sizes;  // weighted, per candidate
  std::uint64_t split_kernel = 0;   // stably zero kernel: member of every class
  std::uint64_t outside = 0;        // delta not a scalar multiple of Theta: in no class
  std::size_t inconsistent = 0;     // membership disagrees with the delta classification
  std::size_t overlaps = 0;         // non-split sequence in two classes
  std::size_t units = 0;
  bool free_action = true;
  bool transitive = true;
  bool ok() const;
  nlohmann::json to_json() const;
};

HellerReport heller_orbit_check(HellerCategory& h, std::size_t max_rank);

}  // namespace nangle
