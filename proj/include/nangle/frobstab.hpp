#pragma once

// Stable module category of a self-injective algebra.

#include <map>
#include <memory>
#include <mutex>

#include "nangle/algcore.hpp"

namespace nangle {

struct Envelope {
  ModulePtr module;
  ModulePtr injective;
  ModuleMap mono;
  ModulePtr cosyzygy;
  ModuleMap projection;         // injective -> cosyzygy
  std::vector<Matrix> section;  // linear section of projection, per vertex
};

struct Cover {
  ModulePtr module;
  ModulePtr projective;
  ModuleMap epi;
  ModulePtr syzygy;
  ModuleMap inclusion;  // syzygy -> projective
};

/// Hom(M, N) modulo maps factoring through projectives, with normal-form coordinates.
class StableHomSpace {
 public:
  StableHomSpace(HomSpace hom, const Matrix& projective_part);
  std::size_t dim() const { return free_.size(); }
  std::size_t hom_dim() const { return hom_.dim(); }
  const HomSpace& hom() const { return hom_; }
  std::vector<Residue> coords(const ModuleMap& f) const;
  ModuleMap representative(const std::vector<Residue>& coords) const;
  ModuleMap element(std::size_t i) const;
  bool is_zero(const ModuleMap& f) const;

 private:
  std::vector<Residue> reduce(std::vector<Residue> c) const;
  HomSpace hom_;
  Matrix rows_;  // rref basis of the projective part, in hom coordinates
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> free_;
};

struct TriangleData {
  ModuleMap f;
  ModulePtr cone;
  ModuleMap u;  // Y -> cone
  ModuleMap w;  // cone -> cosyzygy of X
  ModulePtr shift;
};

struct Stripped {
  ModulePtr module;    // no projective summands
  ModuleMap inclusion; // stripped -> original
  ModuleMap projection;
};

class StableCategory {
 public:
  explicit StableCategory(AlgebraPtr a);

  const AlgebraPtr& algebra() const { return alg_; }
  const std::vector<std::size_t>& nakayama_permutation() const { return nu_; }
  const ModulePtr& projective(std::size_t v) const { return proj_[v]; }
  const ModulePtr& injective(std::size_t v) const { return inj_[v]; }

  std::shared_ptr<const Envelope> envelope(const ModulePtr& m);
  std::shared_ptr<const Cover> cover(const ModulePtr& m);
  ModulePtr cosyzygy(const ModulePtr& m) { return envelope(m)->cosyzygy; }
  ModulePtr syzygy(const ModulePtr& m) { return cover(m)->syzygy; }
  /// Induced map between the chosen cosyzygies (a representative).
  ModuleMap cosyzygy_map(const ModuleMap& f);
  ModuleMap syzygy_map(const ModuleMap& f);
  /// Omega^{-k} on objects and maps (k >= 0), through the cached envelopes.
  ModulePtr cosyzygy_power(const ModulePtr& m, std::size_t k);
  ModuleMap cosyzygy_power_map(const ModuleMap& f, std::size_t k);

  StableHomSpace stable_hom(const ModulePtr& m, const ModulePtr& n);
  bool factors_through_projective(const ModuleMap& f);
  TriangleData triangle_of(const ModuleMap& f);
  Stripped strip_projectives(const ModulePtr& m);
  bool is_projective_indecomposable(const ModulePtr& m);
  /// True iff m is isomorphic to zero in the stable category.
  bool is_stably_zero(const ModulePtr& m);
  /// Stable isomorphism between two modules without projective summands.
  std::optional<ModuleMap> stable_iso(const ModulePtr& a, const ModulePtr& b);

  ModulePtr serre(const ModulePtr& m);
  /// Between serre(f.source) and serre(f.target).
  ModuleMap serre_map(const ModuleMap& f);
  /// Cached Nakayama image.
  ModulePtr nakayama_of(const ModulePtr& m);
  struct DualityResult {
    bool ok = false;
    std::size_t dim_left = 0, dim_right = 0;
  };
  DualityResult serre_duality_check(const ModulePtr& m, const ModulePtr& n, std::uint64_t seed = 1);

  /// Drops memoized envelopes, covers and Nakayama images.
  void clear_caches();

 private:
  AlgebraPtr alg_;
  std::vector<std::size_t> nu_;
  std::vector<ModulePtr> proj_, inj_;
  std::mutex mu_;
  std::map<const Module*, std::shared_ptr<const Envelope>> env_cache_;
  std::map<const Module*, std::shared_ptr<const Cover>> cover_cache_;
  std::map<const Module*, std::pair<ModulePtr, ModulePtr>> nu_cache_;
};

}  // namespace nangle
