#pragma once

// Quivers with relations, finite-dimensional algebras with a path basis, and their modules.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nangle/exactla.hpp"

namespace nangle {

/// Decomposition could not certify a local endomorphism ring over F_p.
class FieldTooSmall : public NangleError {
 public:
  using NangleError::NangleError;
};

struct Arrow {
  std::string name;
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t weight = 1;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  std::size_t vertex_index(const std::string& label) const;
  std::size_t arrow_index(const std::string& name) const;
  /// Source and target of a path; the base vertex is used for the empty path.
  std::pair<std::size_t, std::size_t> endpoints(const std::vector<std::size_t>& path,
                                                std::size_t base) const;
};

struct PathTerm {
  Residue coeff = 0;
  std::vector<std::size_t> arrows;  // left to right: first arrow first
  std::size_t base = 0;             // vertex of a lazy path
};

using PathExpr = std::vector<PathTerm>;

struct AlgebraPresentation {
  std::string name;
  PrimeField field;
  std::size_t degree_bound = 0;
  Quiver quiver;
  std::vector<PathExpr> relations;
  std::optional<PathExpr> potential;
  std::map<std::string, Residue> params;
};

AlgebraPresentation parse_presentation(const std::string& text);
AlgebraPresentation load_presentation(const std::string& path);
std::string format_path_expr(const Quiver& q, const PathExpr& e);

/// Cyclic derivatives of the potential, one per arrow, in arrow order.
std::vector<PathExpr> jacobi_relations(const AlgebraPresentation& p);

using SparseVec = std::vector<std::pair<std::size_t, Residue>>;

struct BasisElement {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t degree = 0;
  std::string label;
};

/// An algebra element expressed through the generators: sum of coeff * (g_1 g_2 ... g_k).
struct GeneratorWord {
  Residue coeff = 0;
  std::vector<std::size_t> word;
};

class BasedAlgebra {
 public:
  std::uint32_t p() const { return field.p(); }
  std::size_t dim() const { return basis.size(); }
  std::size_t num_vertices() const { return vertex_labels.size(); }

  /// Coordinates of basis[b] * basis[c].
  const SparseVec& product(std::size_t b, std::size_t c) const { return mult[b * dim() + c]; }
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;

  std::vector<std::size_t> elements_between(std::size_t s, std::size_t t) const;

  std::string name;
  PrimeField field;
  std::vector<std::string> vertex_labels;
  std::vector<BasisElement> basis;
  std::vector<std::size_t> idempotent;  // basis index of e_v
  /// Generators of the radical as algebra elements, each sitting between two vertices.
  std::vector<BasisElement> generator_info;
  std::vector<SparseVec> generators;
  /// basis element -> its expansion in generator words (idempotents have empty expansion).
  std::vector<std::vector<GeneratorWord>> expansion;
  std::vector<SparseVec> mult;
  std::optional<AlgebraPresentation> presentation;
};

using AlgebraPtr = std::shared_ptr<const BasedAlgebra>;

AlgebraPtr build_based_algebra(const AlgebraPresentation& p);

/// Checks associativity on all basis triples and the unit law. Empty string when fine.
std::string check_algebra(const BasedAlgebra& a);

class Module;
using ModulePtr = std::shared_ptr<const Module>;

class Module {
 public:
  Module() = default;
  /// Builds the module from generator matrices; action of every basis element is derived.
  Module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Matrix> gen_action,
         std::string label = "");

  const AlgebraPtr& algebra() const { return alg_; }
  std::uint32_t p() const { return alg_->p(); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim(std::size_t v) const { return dims_[v]; }
  std::size_t total_dim() const { return total_; }
  std::size_t offset(std::size_t v) const { return offsets_[v]; }
  const Matrix& gen(std::size_t g) const { return gen_action_[g]; }
  const std::vector<Matrix>& gens() const { return gen_action_; }
  /// Action of basis element b: matrix M_target x M_source.
  const Matrix& act(std::size_t b) const { return action_[b]; }
  /// Action of an arbitrary element (sparse coordinates) restricted to s -> t.
  Matrix act_element(const SparseVec& x, std::size_t s, std::size_t t) const;
  bool is_zero() const { return total_ == 0; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  /// Empty string when the relations hold.
  std::string validate() const;

 private:
  AlgebraPtr alg_;
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
  std::vector<Matrix> gen_action_;
  std::vector<Matrix> action_;
  std::string label_;
};

ModulePtr make_module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Matrix> gen_action,
                      std::string label = "");

struct ModuleMap {
  ModulePtr source;
  ModulePtr target;
  std::vector<Matrix> comp;  // per vertex: target dim x source dim

  std::uint32_t p() const { return source->p(); }
  bool is_zero() const;
  bool is_iso() const;
  /// Commuting squares for all generators. Empty string when fine.
  std::string validate() const;
  /// Block-diagonal matrix on the total spaces.
  Matrix total() const;
  std::vector<Residue> vec() const;
};

ModuleMap identity_map(const ModulePtr& m);
ModuleMap zero_map(const ModulePtr& s, const ModulePtr& t);
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // g after f
ModuleMap operator+(const ModuleMap& a, const ModuleMap& b);
ModuleMap operator-(const ModuleMap& a, const ModuleMap& b);
ModuleMap scaled(const ModuleMap& a, Residue s);
ModuleMap map_from_vec(const ModulePtr& s, const ModulePtr& t, const std::vector<Residue>& v,
                       std::size_t offset = 0);
std::optional<ModuleMap> inverse(const ModuleMap& f);
std::size_t hom_vec_size(const Module& s, const Module& t);

/// Simple module at v.
ModulePtr simple_module(const AlgebraPtr& a, std::size_t v);
ModulePtr projective_module(const AlgebraPtr& a, std::size_t v);
ModulePtr injective_module(const AlgebraPtr& a, std::size_t v);
ModulePtr regular_module(const AlgebraPtr& a);

struct DirectSum {
  ModulePtr sum;
  std::vector<ModuleMap> inclusions;
  std::vector<ModuleMap> projections;
};
DirectSum direct_sum(const std::vector<ModulePtr>& parts, const AlgebraPtr& alg);
ModuleMap direct_sum_map(const DirectSum& src, const DirectSum& tgt,
                         const std::vector<std::vector<std::optional<ModuleMap>>>& blocks);

/// Submodule spanned per vertex by the columns of basis[v] (assumed independent and closed).
struct SubmoduleData {
  ModulePtr sub;
  ModuleMap inclusion;
};
SubmoduleData submodule(const ModulePtr& m, const std::vector<Matrix>& basis);

struct QuotientData {
  ModulePtr quotient;
  ModuleMap projection;
  std::vector<Matrix> section;  // per vertex linear section of the projection (not a module map)
};
QuotientData quotient_module(const ModulePtr& m, const std::vector<Matrix>& sub_basis);

SubmoduleData kernel(const ModuleMap& f);
SubmoduleData image(const ModuleMap& f);
QuotientData cokernel(const ModuleMap& f);

/// Basis of Hom(M, N) as vectorised maps, with coordinate extraction.
class HomSpace {
 public:
  HomSpace(ModulePtr m, ModulePtr n);
  std::size_t dim() const { return basis_.cols(); }
  ModuleMap element(std::size_t i) const;
  ModuleMap combination(const std::vector<Residue>& coords) const;
  /// Coordinates of a module map in the basis.
  std::vector<Residue> coords(const ModuleMap& f) const;
  const Matrix& basis_matrix() const { return basis_; }
  const ModulePtr& source() const { return m_; }
  const ModulePtr& target() const { return n_; }

 private:
  ModulePtr m_, n_;
  Matrix basis_;
  std::vector<std::size_t> pivot_rows_;
  Matrix pivot_inverse_;
};

std::vector<ModuleMap> hom(const ModulePtr& m, const ModulePtr& n);

/// Linear system whose unknown is a module map g: A -> B.
class MapSystem {
 public:
  MapSystem(ModulePtr a, ModulePtr b);
  /// g o x = y with x: C -> A, y: C -> B.
  void precompose_equals(const ModuleMap& x, const ModuleMap& y);
  /// x o g = y with x: B -> D, y: A -> D.
  void postcompose_equals(const ModuleMap& x, const ModuleMap& y);
  std::optional<ModuleMap> solve_one() const;

 private:
  ModulePtr a_, b_;
  std::vector<Matrix> rows_;
  std::vector<Matrix> rhs_;
};

struct DecompositionPiece {
  ModulePtr module;
  std::vector<ModuleMap> inclusions;  // one per copy
  std::vector<ModuleMap> projections;
  std::size_t multiplicity() const { return inclusions.size(); }
};

std::vector<DecompositionPiece> decompose(const ModulePtr& m, std::uint64_t seed = 1);

/// Isomorphism test between indecomposables: returns an iso if one exists.
std::optional<ModuleMap> indecomposable_iso(const ModulePtr& a, const ModulePtr& b);
std::optional<ModuleMap> find_iso(const ModulePtr& m, const ModulePtr& n);

/// The scalar c with x - c nilpotent, for x in a local endomorphism ring; nullopt otherwise.
std::optional<Residue> local_residue(const Matrix& x);

std::optional<std::vector<std::size_t>> is_selfinjective(const AlgebraPtr& a);

/// D Hom(M, A): the Nakayama functor.
ModulePtr nakayama(const ModulePtr& m);
ModuleMap nakayama_map(const ModuleMap& f, const ModulePtr& nu_source, const ModulePtr& nu_target);

/// Socle per vertex (basis columns) and radical per vertex.
std::vector<Matrix> socle_basis(const Module& m);
std::vector<Matrix> radical_basis(const Module& m);

}  // namespace nangle
