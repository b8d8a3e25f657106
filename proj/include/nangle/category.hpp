#pragma once

// Krull-Schmidt categories given by Hom tables between finitely many indecomposables,
// with an automorphism Sigma, and their functor categories as module categories.

#include <functional>
#include <memory>

#include "nangle/frobstab.hpp"

namespace nangle {

using Vec = std::vector<Residue>;
/// An object of add(G): a list of indecomposable indices, repetitions allowed.
using Object = std::vector<std::size_t>;

struct Morphism {
  Object source;
  Object target;
  /// blocks[l][k]: coordinates in F(source[k], target[l]).
  std::vector<std::vector<Vec>> blocks;
};

class BasedCategory {
 public:
  /// Hom tables are given through a basis of each F(i, j). post[i][j][k][b] is the matrix
  /// F(i, j) -> F(i, k) of composing with basis element b of F(j, k). Basis element 0 of F(i, i)
  /// must be the identity and the others must lie in the radical.
  struct Tables {
    std::uint32_t p = 2;
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> hom_dim;
    std::vector<std::vector<std::vector<std::vector<Matrix>>>> post;
    std::vector<std::size_t> sigma;
    /// transport[i][j]: F(i, j) -> F(sigma i, sigma j)
    std::vector<std::vector<Matrix>> transport;
  };

  explicit BasedCategory(Tables t);

  std::uint32_t p() const { return t_.p; }
  std::size_t size() const { return t_.labels.size(); }
  const std::string& label(std::size_t i) const { return t_.labels[i]; }
  std::size_t hom_dim(std::size_t i, std::size_t j) const { return t_.hom_dim[i][j]; }
  const Matrix& post(std::size_t i, std::size_t j, std::size_t k, std::size_t b) const {
    return t_.post[i][j][k][b];
  }
  std::size_t sigma(std::size_t i) const { return t_.sigma[i]; }
  std::size_t sigma_inv(std::size_t i) const { return sigma_inv_[i]; }
  const Matrix& transport(std::size_t i, std::size_t j) const { return t_.transport[i][j]; }
  const Tables& tables() const { return t_; }

  /// g o f for f in F(i, j), g in F(j, k).
  Vec compose(std::size_t i, std::size_t j, std::size_t k, const Vec& g, const Vec& f) const;
  Vec unit(std::size_t i) const;

  std::size_t hom_dim(const Object& x, const Object& y) const;
  Morphism zero(const Object& x, const Object& y) const;
  Morphism identity(const Object& x) const;
  Morphism compose(const Morphism& g, const Morphism& f) const;
  Morphism add(const Morphism& a, const Morphism& b) const;
  Morphism scale(const Morphism& a, Residue s) const;
  Morphism neg(const Morphism& a) const { return scale(a, p() - 1); }
  bool is_zero(const Morphism& f) const;
  bool equal(const Morphism& a, const Morphism& b) const;
  Vec flatten(const Morphism& f) const;
  Morphism unflatten(const Object& x, const Object& y, const Vec& v, std::size_t offset = 0) const;

  Object shift(const Object& x) const;
  Object unshift(const Object& x) const;
  Morphism shift(const Morphism& f) const;
  Morphism unshift(const Morphism& f) const;
  /// Sigma^k for any integer k.
  Object shift(const Object& x, int k) const;
  Morphism shift(const Morphism& f, int k) const;

  /// F(T, f): F(T, x) -> F(T, y) as a matrix.
  Matrix represent(std::size_t t, const Morphism& f) const;
  std::size_t dim_from(std::size_t t, const Object& x) const;
  bool is_iso(const Morphism& f) const;
  std::optional<Morphism> inverse(const Morphism& f) const;

  /// Empty string when associativity, units and functoriality of Sigma hold on all basis triples.
  std::string check() const;

 private:
  Tables t_;
  std::vector<std::size_t> sigma_inv_;
  std::vector<std::vector<Matrix>> transport_inv_;  // [sigma i][sigma j]
};

using CategoryPtr = std::shared_ptr<const BasedCategory>;

Object object_sum(const Object& a, const Object& b);
Morphism morphism_sum(const BasedCategory& c, const Morphism& a, const Morphism& b);

/// A realization of the indecomposables as modules, with Hom spaces taken stably or not.
struct ModuleRealization {
  std::vector<ModulePtr> objects;
  /// Basis representatives of each F(i, j), in the category's basis.
  std::vector<std::vector<std::vector<ModuleMap>>> basis;
  std::vector<std::vector<StableHomSpace>> spaces;
  /// change of basis: category coordinates = to_cat[i][j] * space coordinates
  std::vector<std::vector<Matrix>> to_cat;
  /// psi[i]: Sigma-image of object i (as a module) -> objects[sigma i]; empty when Sigma = id.
  std::vector<ModuleMap> psi;
  int shift = 0;  // Sigma = Omega^{shift} when stable
  bool stable = false;
};

struct RealizedCategory {
  CategoryPtr category;
  std::shared_ptr<ModuleRealization> realization;
};

/// add(T) inside the stable category with Sigma = Omega^{-d}. The list must consist of pairwise
/// non-isomorphic indecomposable non-projective modules closed under Omega^{-d}.
RealizedCategory stable_subcategory(StableCategory& sc, const std::vector<ModulePtr>& t, std::size_t d);

/// add(T) inside the module category (ordinary Hom spaces) with Sigma = identity.
RealizedCategory module_subcategory(const std::vector<ModulePtr>& t);

/// Module realization of objects and morphisms of a realized category.
class Realizer {
 public:
  Realizer(RealizedCategory rc, StableCategory* sc);
  const CategoryPtr& category() const { return rc_.category; }
  const ModuleRealization& realization() const { return *rc_.realization; }
  StableCategory* stable() const { return sc_; }

  const DirectSum& module(const Object& x);
  ModuleMap to_module_map(const Morphism& f);
  /// Category coordinates of a module map between the realizations of x and y.
  Morphism to_morphism(const ModuleMap& f, const Object& x, const Object& y);
  /// Coordinates of a map between two indecomposables.
  Vec coords(std::size_t i, std::size_t j, const ModuleMap& f) const;
  /// Writes a module without projective summands as an object of add(T), with an isomorphism
  /// from the realization to m; nullopt if some summand is not in add(T).
  std::optional<std::pair<Object, ModuleMap>> recognise(const ModulePtr& m);

 private:
  RealizedCategory rc_;
  StableCategory* sc_;
  std::map<Object, DirectSum> cache_;
};

/// mod-F for F = add(G) as modules over E, the (opposite) endomorphism algebra of G:
/// the E-module of an object X has F(G_s, X) at vertex s.
class FunctorCategory {
 public:
  explicit FunctorCategory(CategoryPtr c);

  const CategoryPtr& category() const { return cat_; }
  const AlgebraPtr& algebra() const { return alg_; }
  /// E-basis index of basis element a of F(t, s), an arrow from s to t.
  std::size_t element(std::size_t s, std::size_t t, std::size_t a) const { return index_[s][t] + a; }

  ModulePtr representable(const Object& x) const;
  ModuleMap representable(const Morphism& f, const ModulePtr& src, const ModulePtr& tgt) const;
  ModuleMap representable(const Morphism& f) const;
  /// Yoneda: the morphism x -> y inducing a map of representables.
  Morphism yoneda(const ModuleMap& g, const Object& x, const Object& y) const;
  /// The object representing a projective E-module, with an iso from its representable.
  std::pair<Object, ModuleMap> represent_projective(const ModulePtr& m) const;

  /// Sigma acting on E-modules by transport of structure.
  ModulePtr twist(const ModulePtr& m) const;
  ModuleMap twist(const ModuleMap& f, const ModulePtr& src, const ModulePtr& tgt) const;
  ModuleMap twist(const ModuleMap& f) const { return twist(f, twist(f.source), twist(f.target)); }
  ModulePtr untwist(const ModulePtr& m) const;
  /// Identification of twist(F(-, x)) with F(-, Sigma x).
  ModuleMap twist_representable(const Object& x, const ModulePtr& twisted, const ModulePtr& rep) const;

  bool selfinjective() const { return stable_ != nullptr; }
  /// Stable category of mod-E; throws NangleError("E not self-injective") when E is not.
  StableCategory& stable() const;

 private:
  CategoryPtr cat_;
  AlgebraPtr alg_;
  std::vector<std::vector<std::size_t>> index_;
  Matrix sigma_alg_;  // Sigma on E as a matrix on the basis
  Matrix sigma_alg_inv_;
  std::unique_ptr<StableCategory> stable_;
};

using FunctorCategoryPtr = std::shared_ptr<FunctorCategory>;

/// E = End(G) for a list of modules (ordinary Hom spaces); throws on an empty list.
FunctorCategoryPtr functor_category(const std::vector<ModulePtr>& g);

}  // namespace nangle
