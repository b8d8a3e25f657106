#include "nangle/category.hpp"
#include <array>

namespace nangle {

namespace {

Matrix col(const Vec& v, std::uint32_t p) { return Matrix::column(p, v); }

Vec mat_vec(const Matrix& m, const Vec& v) {
  Vec out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += static_cast<std::uint64_t>(m(r, c)) * v[c];
    out[r] = static_cast<Residue>(acc % m.p());
  }
  return out;
}

void add_into(Vec& a, const Vec& b, Residue s, std::uint32_t p) {
  PrimeField f(p);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], f.mul(s, b[i]));
}

}  // namespace

BasedCategory::BasedCategory(Tables t) : t_(std::move(t)) {
  const std::size_t n = size();
  sigma_inv_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) sigma_inv_[t_.sigma[i]] = i;
  transport_inv_.assign(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto inv = invert(t_.transport[i][j]);
      if (!inv) throw NangleError("Sigma transport is not invertible");
      transport_inv_[t_.sigma[i]][t_.sigma[j]] = *inv;
    }
}

Vec BasedCategory::compose(std::size_t i, std::size_t j, std::size_t k, const Vec& g, const Vec& f) const {
  Vec out(hom_dim(i, k), 0);
  for (std::size_t b = 0; b < g.size(); ++b)
    if (g[b]) add_into(out, mat_vec(post(i, j, k, b), f), g[b], p());
  return out;
}

Vec BasedCategory::unit(std::size_t i) const {
  Vec v(hom_dim(i, i), 0);
  v[0] = 1;
  return v;
}

std::size_t BasedCategory::hom_dim(const Object& x, const Object& y) const {
  std::size_t d = 0;
  for (auto a : x)
    for (auto b : y) d += hom_dim(a, b);
  return d;
}

Morphism BasedCategory::zero(const Object& x, const Object& y) const {
  Morphism m{x, y, {}};
  m.blocks.resize(y.size());
  for (std::size_t l = 0; l < y.size(); ++l)
    for (std::size_t k = 0; k < x.size(); ++k) m.blocks[l].push_back(Vec(hom_dim(x[k], y[l]), 0));
  return m;
}

Morphism BasedCategory::identity(const Object& x) const {
  Morphism m = zero(x, x);
  for (std::size_t k = 0; k < x.size(); ++k) m.blocks[k][k][0] = 1;
  return m;
}

Morphism BasedCategory::compose(const Morphism& g, const Morphism& f) const {
  if (g.source != f.target) throw NangleError("composing morphisms with mismatched objects");
  Morphism m = zero(f.source, g.target);
  for (std::size_t mm = 0; mm < g.target.size(); ++mm)
    for (std::size_t k = 0; k < f.source.size(); ++k)
      for (std::size_t l = 0; l < f.target.size(); ++l)
        add_into(m.blocks[mm][k], compose(f.source[k], f.target[l], g.target[mm], g.blocks[mm][l], f.blocks[l][k]),
                 1, p());
  return m;
}

Morphism BasedCategory::add(const Morphism& a, const Morphism& b) const {
  if (a.source != b.source || a.target != b.target) throw NangleError("adding morphisms with different ends");
  Morphism m = a;
  for (std::size_t l = 0; l < m.blocks.size(); ++l)
    for (std::size_t k = 0; k < m.blocks[l].size(); ++k) add_into(m.blocks[l][k], b.blocks[l][k], 1, p());
  return m;
}

Morphism BasedCategory::scale(const Morphism& a, Residue s) const {
  Morphism m = a;
  PrimeField f(p());
  for (auto& row : m.blocks)
    for (auto& v : row)
      for (auto& x : v) x = f.mul(x, s);
  return m;
}

bool BasedCategory::is_zero(const Morphism& f) const {
  for (const auto& row : f.blocks)
    for (const auto& v : row)
      for (auto x : v)
        if (x) return false;
  return true;
}

bool BasedCategory::equal(const Morphism& a, const Morphism& b) const {
  return a.source == b.source && a.target == b.target && a.blocks == b.blocks;
}

Vec BasedCategory::flatten(const Morphism& f) const {
  Vec out;
  for (const auto& row : f.blocks)
    for (const auto& v : row) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Morphism BasedCategory::unflatten(const Object& x, const Object& y, const Vec& v, std::size_t offset) const {
  Morphism m = zero(x, y);
  std::size_t pos = offset;
  for (auto& row : m.blocks)
    for (auto& b : row)
      for (auto& e : b) e = v[pos++];
  return m;
}

Object BasedCategory::shift(const Object& x) const {
  Object y;
  for (auto a : x) y.push_back(sigma(a));
  return y;
}

Object BasedCategory::unshift(const Object& x) const {
  Object y;
  for (auto a : x) y.push_back(sigma_inv(a));
  return y;
}

Morphism BasedCategory::shift(const Morphism& f) const {
  Morphism m{shift(f.source), shift(f.target), f.blocks};
  for (std::size_t l = 0; l < f.target.size(); ++l)
    for (std::size_t k = 0; k < f.source.size(); ++k)
      m.blocks[l][k] = mat_vec(transport(f.source[k], f.target[l]), f.blocks[l][k]);
  return m;
}

Morphism BasedCategory::unshift(const Morphism& f) const {
  Morphism m{unshift(f.source), unshift(f.target), f.blocks};
  for (std::size_t l = 0; l < f.target.size(); ++l)
    for (std::size_t k = 0; k < f.source.size(); ++k)
      m.blocks[l][k] = mat_vec(transport_inv_[f.source[k]][f.target[l]], f.blocks[l][k]);
  return m;
}

Object BasedCategory::shift(const Object& x, int k) const {
  Object y = x;
  for (int i = 0; i < k; ++i) y = shift(y);
  for (int i = 0; i > k; --i) y = unshift(y);
  return y;
}

Morphism BasedCategory::shift(const Morphism& f, int k) const {
  Morphism g = f;
  for (int i = 0; i < k; ++i) g = shift(g);
  for (int i = 0; i > k; --i) g = unshift(g);
  return g;
}

std::size_t BasedCategory::dim_from(std::size_t t, const Object& x) const {
  std::size_t d = 0;
  for (auto a : x) d += hom_dim(t, a);
  return d;
}

Matrix BasedCategory::represent(std::size_t t, const Morphism& f) const {
  Matrix m(p(), dim_from(t, f.target), dim_from(t, f.source));
  std::size_t r0 = 0;
  for (std::size_t l = 0; l < f.target.size(); ++l) {
    std::size_t c0 = 0;
    for (std::size_t k = 0; k < f.source.size(); ++k) {
      Matrix blk(p(), hom_dim(t, f.target[l]), hom_dim(t, f.source[k]));
      for (std::size_t b = 0; b < f.blocks[l][k].size(); ++b)
        if (f.blocks[l][k][b]) blk.add_scaled(post(t, f.source[k], f.target[l], b), f.blocks[l][k][b]);
      m.set_block(r0, c0, blk);
      c0 += hom_dim(t, f.source[k]);
    }
    r0 += hom_dim(t, f.target[l]);
  }
  return m;
}

bool BasedCategory::is_iso(const Morphism& f) const {
  for (std::size_t t = 0; t < size(); ++t) {
    Matrix m = represent(t, f);
    if (m.rows() != m.cols()) return false;
    if (m.rows() > 0 && rank(m) != m.rows()) return false;
  }
  return true;
}

std::optional<Morphism> BasedCategory::inverse(const Morphism& f) const {
  if (!is_iso(f)) return std::nullopt;
  const std::size_t n = hom_dim(f.target, f.source);
  Vec target = flatten(identity(f.source));
  Matrix a(p(), target.size(), n);
  Vec e(n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1;
    Vec v = flatten(compose(unflatten(f.target, f.source, e), f));
    e[c] = 0;
    for (std::size_t r = 0; r < v.size(); ++r) a.at(r, c) = v[r];
  }
  auto s = solve(a, col(target, p()));
  if (!s.particular) return std::nullopt;
  return unflatten(f.target, f.source, s.particular->col(0));
}

std::string BasedCategory::check() const {
  const std::size_t n = size();
  auto basis = [&](std::size_t i, std::size_t j, std::size_t b) {
    Vec v(hom_dim(i, j), 0);
    v[b] = 1;
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (hom_dim(i, i) == 0) return "object " + label(i) + " has no identity";
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < hom_dim(i, j); ++a) {
        Vec f = basis(i, j, a);
        if (compose(i, j, j, unit(j), f) != f || compose(i, i, j, f, unit(i)) != f)
          return "unit law fails at " + label(i) + " -> " + label(j);
      }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < hom_dim(i, j); ++a)
          for (std::size_t b = 0; b < hom_dim(j, k); ++b) {
            Vec ba = compose(i, j, k, basis(j, k, b), basis(i, j, a));
            Vec lhs = mat_vec(transport(i, k), ba);
            Vec rhs = compose(sigma(i), sigma(j), sigma(k), mat_vec(transport(j, k), basis(j, k, b)),
                              mat_vec(transport(i, j), basis(i, j, a)));
            if (lhs != rhs) return "Sigma is not functorial on " + label(i) + " -> " + label(j) + " -> " + label(k);
            for (std::size_t l = 0; l < n; ++l)
              for (std::size_t c = 0; c < hom_dim(k, l); ++c) {
                Vec x = compose(i, k, l, basis(k, l, c), ba);
                Vec y = compose(i, j, l, compose(j, k, l, basis(k, l, c), basis(j, k, b)), basis(i, j, a));
                if (x != y) return "composition is not associative";
              }
          }
  for (std::size_t i = 0; i < n; ++i)
    if (mat_vec(transport(i, i), unit(i)) != unit(sigma(i))) return "Sigma does not preserve identities";
  return "";
}

Object object_sum(const Object& a, const Object& b) {
  Object o = a;
  o.insert(o.end(), b.begin(), b.end());
  return o;
}

Morphism morphism_sum(const BasedCategory& c, const Morphism& a, const Morphism& b) {
  Morphism m = c.zero(object_sum(a.source, b.source), object_sum(a.target, b.target));
  for (std::size_t l = 0; l < a.target.size(); ++l)
    for (std::size_t k = 0; k < a.source.size(); ++k) m.blocks[l][k] = a.blocks[l][k];
  for (std::size_t l = 0; l < b.target.size(); ++l)
    for (std::size_t k = 0; k < b.source.size(); ++k)
      m.blocks[a.target.size() + l][a.source.size() + k] = b.blocks[l][k];
  return m;
}

namespace {

using HomFn = std::function<StableHomSpace(const ModulePtr&, const ModulePtr&)>;

// Builds tables from hom spaces; sigma_map sends a basis map i -> j to a map
// objects[sigma i] -> objects[sigma j].
RealizedCategory build_realized(const std::vector<ModulePtr>& t, const HomFn& homfn, std::vector<std::size_t> sigma,
                                const std::function<ModuleMap(std::size_t, std::size_t, const ModuleMap&)>& sigma_map,
                                std::shared_ptr<ModuleRealization> real) {
  const std::size_t n = t.size();
  if (n == 0) throw InputError("empty list of objects");
  const auto p = t[0]->p();
  real->objects = t;
  real->spaces.assign(n, {});
  real->basis.assign(n, std::vector<std::vector<ModuleMap>>(n));
  real->to_cat.assign(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) real->spaces[i].push_back(homfn(t[i], t[j]));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& sp = real->spaces[i][j];
      const std::size_t d = sp.dim();
      Matrix b = Matrix::identity(p, d);
      if (i == j) {
        if (d == 0) throw NangleError("object " + std::to_string(i) + " is zero in the category");
        Vec id = sp.coords(identity_map(t[i]));
        Matrix cand(p, d, 0);
        cand = hstack(cand, col(id, p));
        PrimeField f(p);
        for (std::size_t a = 0; a < d; ++a) {
          ModuleMap x = sp.element(a);
          Matrix left(p, d, d);
          for (std::size_t c = 0; c < d; ++c) {
            Vec v = sp.coords(compose(x, sp.element(c)));
            for (std::size_t r = 0; r < d; ++r) left.at(r, c) = v[r];
          }
          auto lam = local_residue(left);
          if (!lam) throw FieldTooSmall("endomorphism ring of object " + std::to_string(i) + " is not split local");
          Vec rad = sp.coords(x);
          add_into(rad, id, f.neg(*lam), p);
          cand = hstack(cand, col(rad, p));
        }
        b = column_basis(cand);
        if (b.cols() != d) throw NangleError("internal: radical basis has wrong size");
      }
      auto inv = invert(b);
      real->to_cat[i][j] = *inv;
      for (std::size_t c = 0; c < d; ++c) real->basis[i][j].push_back(sp.representative(b.col(c)));
    }
  auto coords = [&](std::size_t i, std::size_t j, const ModuleMap& f) {
    return mat_vec(real->to_cat[i][j], real->spaces[i][j].coords(f));
  };
  BasedCategory::Tables tab;
  tab.p = p;
  for (std::size_t i = 0; i < n; ++i) tab.labels.push_back(t[i]->label().empty() ? "T" + std::to_string(i) : t[i]->label());
  tab.hom_dim.assign(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) tab.hom_dim[i][j] = real->basis[i][j].size();
  // pairwise non-isomorphic: no composite i -> j -> i hits the identity
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (const auto& a : real->basis[i][j])
        for (const auto& b : real->basis[j][i])
          if (coords(i, i, compose(b, a))[0] != 0)
            throw InputError("objects " + std::to_string(i) + " and " + std::to_string(j) + " are isomorphic");
    }
  tab.post.assign(n, std::vector<std::vector<std::vector<Matrix>>>(n, std::vector<std::vector<Matrix>>(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t b = 0; b < tab.hom_dim[j][k]; ++b) {
          Matrix m(p, tab.hom_dim[i][k], tab.hom_dim[i][j]);
          for (std::size_t a = 0; a < tab.hom_dim[i][j]; ++a) {
            Vec v = coords(i, k, compose(real->basis[j][k][b], real->basis[i][j][a]));
            for (std::size_t r = 0; r < v.size(); ++r) m.at(r, a) = v[r];
          }
          tab.post[i][j][k].push_back(m);
        }
  tab.sigma = sigma;
  tab.transport.assign(n, std::vector<Matrix>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix m(p, tab.hom_dim[sigma[i]][sigma[j]], tab.hom_dim[i][j]);
      for (std::size_t a = 0; a < tab.hom_dim[i][j]; ++a) {
        Vec v = coords(sigma[i], sigma[j], sigma_map(i, j, real->basis[i][j][a]));
        for (std::size_t r = 0; r < v.size(); ++r) m.at(r, a) = v[r];
      }
      tab.transport[i][j] = m;
    }
  return RealizedCategory{std::make_shared<BasedCategory>(std::move(tab)), real};
}

}  // namespace

RealizedCategory stable_subcategory(StableCategory& sc, const std::vector<ModulePtr>& t, std::size_t d) {
  auto real = std::make_shared<ModuleRealization>();
  real->stable = true;
  real->shift = -static_cast<int>(d);
  const std::size_t n = t.size();
  std::vector<std::size_t> sigma(n);
  std::vector<ModuleMap> psi_inv;
  for (std::size_t i = 0; i < n; ++i) {
    auto s = sc.cosyzygy_power(t[i], d);
    bool found = false;
    for (std::size_t j = 0; j < n && !found; ++j) {
      auto iso = find_iso(s, t[j]);
      if (!iso) continue;
      sigma[i] = j;
      real->psi.push_back(*iso);
      psi_inv.push_back(*inverse(*iso));
      found = true;
    }
    if (!found) throw NangleError("object list is not closed under the suspension (summand " + std::to_string(i) + ")");
  }
  auto homfn = [&sc](const ModulePtr& a, const ModulePtr& b) { return sc.stable_hom(a, b); };
  auto smap = [&](std::size_t i, std::size_t j, const ModuleMap& f) {
    return compose(real->psi[j], compose(sc.cosyzygy_power_map(f, d), psi_inv[i]));
  };
  return build_realized(t, homfn, sigma, smap, real);
}

RealizedCategory module_subcategory(const std::vector<ModulePtr>& t) {
  auto real = std::make_shared<ModuleRealization>();
  std::vector<std::size_t> sigma(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) sigma[i] = i;
  auto homfn = [](const ModulePtr& a, const ModulePtr& b) {
    return StableHomSpace(HomSpace(a, b), Matrix(a->p(), 0, 0));
  };
  auto smap = [](std::size_t, std::size_t, const ModuleMap& f) { return f; };
  return build_realized(t, homfn, sigma, smap, real);
}

Realizer::Realizer(RealizedCategory rc, StableCategory* sc) : rc_(std::move(rc)), sc_(sc) {}

const DirectSum& Realizer::module(const Object& x) {
  auto it = cache_.find(x);
  if (it != cache_.end()) return it->second;
  std::vector<ModulePtr> parts;
  for (auto a : x) parts.push_back(realization().objects[a]);
  auto alg = realization().objects[0]->algebra();
  return cache_.emplace(x, direct_sum(parts, alg)).first->second;
}

Vec Realizer::coords(std::size_t i, std::size_t j, const ModuleMap& f) const {
  return mat_vec(realization().to_cat[i][j], realization().spaces[i][j].coords(f));
}

ModuleMap Realizer::to_module_map(const Morphism& f) {
  const auto& src = module(f.source);
  const auto& tgt = module(f.target);
  ModuleMap out = zero_map(src.sum, tgt.sum);
  for (std::size_t l = 0; l < f.target.size(); ++l)
    for (std::size_t k = 0; k < f.source.size(); ++k) {
      const auto& v = f.blocks[l][k];
      const auto& basis = realization().basis[f.source[k]][f.target[l]];
      for (std::size_t b = 0; b < v.size(); ++b)
        if (v[b]) out = out + scaled(compose(tgt.inclusions[l], compose(basis[b], src.projections[k])), v[b]);
    }
  return out;
}

Morphism Realizer::to_morphism(const ModuleMap& f, const Object& x, const Object& y) {
  const auto& src = module(x);
  const auto& tgt = module(y);
  Morphism m = category()->zero(x, y);
  for (std::size_t l = 0; l < y.size(); ++l)
    for (std::size_t k = 0; k < x.size(); ++k)
      m.blocks[l][k] = coords(x[k], y[l], compose(tgt.projections[l], compose(f, src.inclusions[k])));
  return m;
}

std::optional<std::pair<Object, ModuleMap>> Realizer::recognise(const ModulePtr& m) {
  auto d = decompose(m);
  Object obj;
  std::vector<ModuleMap> pieces;  // objects[i] -> m
  for (const auto& pc : d) {
    std::optional<std::size_t> which;
    ModuleMap iso;
    for (std::size_t i = 0; i < realization().objects.size() && !which; ++i) {
      auto f = indecomposable_iso(realization().objects[i], pc.module);
      if (f) {
        which = i;
        iso = *f;
      }
    }
    if (!which) return std::nullopt;
    for (std::size_t k = 0; k < pc.multiplicity(); ++k) {
      obj.push_back(*which);
      pieces.push_back(compose(pc.inclusions[k], iso));
    }
  }
  const auto& ds = module(obj);
  ModuleMap total = zero_map(ds.sum, m);
  for (std::size_t k = 0; k < obj.size(); ++k) total = total + compose(pieces[k], ds.projections[k]);
  return std::make_pair(obj, total);
}

FunctorCategory::FunctorCategory(CategoryPtr c) : cat_(std::move(c)) {
  const auto& cat = *cat_;
  const std::size_t n = cat.size();
  const auto p = cat.p();
  auto a = std::make_shared<BasedAlgebra>();
  a->name = "End";
  a->field = PrimeField(p);
  a->vertex_labels.clear();
  for (std::size_t i = 0; i < n; ++i) a->vertex_labels.push_back(cat.label(i));
  index_.assign(n, std::vector<std::size_t>(n));
  std::vector<std::array<std::size_t, 3>> info;  // s, t, a
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      index_[s][t] = a->basis.size();
      for (std::size_t k = 0; k < cat.hom_dim(t, s); ++k) {
        BasisElement be;
        be.source = s;
        be.target = t;
        be.degree = (s == t && k == 0) ? 0 : 1;
        be.label = (s == t && k == 0) ? "e_" + cat.label(s)
                                       : "f" + std::to_string(s) + "_" + std::to_string(t) + "_" + std::to_string(k);
        a->basis.push_back(be);
        info.push_back({s, t, k});
      }
    }
  const std::size_t dim = a->basis.size();
  for (std::size_t s = 0; s < n; ++s) a->idempotent.push_back(index_[s][s]);
  a->mult.assign(dim * dim, {});
  for (std::size_t b = 0; b < dim; ++b)
    for (std::size_t c = 0; c < dim; ++c) {
      auto [s, t, ka] = info[b];
      auto [t2, u, kc] = info[c];
      if (t != t2) continue;
      Vec ea(cat.hom_dim(t, s), 0), ec(cat.hom_dim(u, t), 0);
      ea[ka] = 1;
      ec[kc] = 1;
      Vec v = cat.compose(u, t, s, ea, ec);
      SparseVec sv;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i]) sv.emplace_back(index_[s][u] + i, v[i]);
      a->mult[b * dim + c] = sv;
    }
  // radical = everything but the idempotents; generators complement rad^2
  auto dense = [&](const SparseVec& x) {
    Vec v(dim, 0);
    for (auto [i, c] : x) v[i] = c;
    return v;
  };
  auto sparse = [](const Vec& v) {
    SparseVec s;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i]) s.emplace_back(i, v[i]);
    return s;
  };
  std::vector<std::size_t> rad;
  for (std::size_t b = 0; b < dim; ++b)
    if (a->basis[b].degree == 1) rad.push_back(b);
  Matrix rad2(p, dim, 0);
  for (auto b : rad)
    for (auto c : rad) {
      Vec v = dense(a->mult[b * dim + c]);
      bool nz = false;
      for (auto x : v) nz = nz || x;
      if (nz) rad2 = hstack(rad2, col(v, p));
    }
  rad2 = column_basis(rad2);
  Matrix span = rad2;
  std::size_t rk = span.cols();
  for (auto b : rad) {
    Vec e(dim, 0);
    e[b] = 1;
    Matrix trial = hstack(span, col(e, p));
    if (rank(trial) == rk) continue;
    span = trial;
    ++rk;
    a->generators.push_back({{b, 1}});
    BasisElement gi = a->basis[b];
    a->generator_info.push_back(gi);
  }
  // expansions via words in the generators, kept while they add new directions
  std::vector<std::pair<std::vector<std::size_t>, Vec>> words;
  Matrix wspan(p, dim, 0);
  std::vector<std::pair<std::vector<std::size_t>, Vec>> frontier;
  for (std::size_t g = 0; g < a->generators.size(); ++g) frontier.push_back({{g}, dense(a->generators[g])});
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<std::size_t>, Vec>> next;
    for (auto& [w, v] : frontier) {
      Matrix trial = hstack(wspan, col(v, p));
      if (rank(trial) == wspan.cols()) continue;
      wspan = trial;
      words.push_back({w, v});
      for (std::size_t g = 0; g < a->generators.size(); ++g) {
        if (a->generator_info[g].source != a->generator_info[w.back()].target) continue;
        auto nw = w;
        nw.push_back(g);
        next.push_back({nw, dense(a->multiply(sparse(v), a->generators[g]))});
      }
    }
    frontier = std::move(next);
  }
  a->expansion.assign(dim, {});
  for (auto b : rad) {
    Vec e(dim, 0);
    e[b] = 1;
    auto s = solve(wspan, col(e, p));
    if (!s.particular) throw NangleError("internal: radical not generated by the chosen generators");
    for (std::size_t i = 0; i < words.size(); ++i)
      if ((*s.particular)(i, 0)) a->expansion[b].push_back({(*s.particular)(i, 0), words[i].first});
  }
  // Sigma as an algebra automorphism
  sigma_alg_ = Matrix(p, dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    auto [s, t, k] = info[b];
    Vec e(cat.hom_dim(t, s), 0);
    e[k] = 1;
    Vec img = mat_vec(cat.transport(t, s), e);
    for (std::size_t i = 0; i < img.size(); ++i) sigma_alg_.at(index_[cat.sigma(s)][cat.sigma(t)] + i, b) = img[i];
  }
  sigma_alg_inv_ = *invert(sigma_alg_);
  alg_ = a;
  try {
    stable_ = std::make_unique<StableCategory>(alg_);
  } catch (const FieldTooSmall&) {
    throw;
  } catch (const NangleError&) {
    stable_.reset();
  }
}

StableCategory& FunctorCategory::stable() const {
  if (!stable_) throw NangleError("E not self-injective");
  return *stable_;
}

namespace {

Matrix precompose_matrix(const BasedCategory& c, std::size_t t, std::size_t s, std::size_t y, const Vec& g) {
  // F(s, y) -> F(t, y), h -> h o g for g in F(t, s)
  Matrix m(c.p(), c.hom_dim(t, y), c.hom_dim(s, y));
  for (std::size_t b = 0; b < c.hom_dim(s, y); ++b) {
    Vec v = mat_vec(c.post(t, s, y, b), g);
    for (std::size_t r = 0; r < v.size(); ++r) m.at(r, b) = v[r];
  }
  return m;
}

}  // namespace

ModulePtr FunctorCategory::representable(const Object& x) const {
  const auto& c = *cat_;
  std::vector<std::size_t> dims;
  for (std::size_t s = 0; s < c.size(); ++s) dims.push_back(c.dim_from(s, x));
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg_->generators.size(); ++g) {
    const auto& gi = alg_->generator_info[g];
    const std::size_t s = gi.source, t = gi.target;
    Vec gv(c.hom_dim(t, s), 0);
    for (auto [b, coef] : alg_->generators[g]) gv[b - index_[s][t]] = coef;
    Matrix m(c.p(), dims[t], dims[s]);
    std::size_t r0 = 0, c0 = 0;
    for (auto y : x) {
      m.set_block(r0, c0, precompose_matrix(c, t, s, y, gv));
      r0 += c.hom_dim(t, y);
      c0 += c.hom_dim(s, y);
    }
    gens.push_back(m);
  }
  std::string label = "F(-,[";
  for (std::size_t k = 0; k < x.size(); ++k) label += (k ? "," : "") + c.label(x[k]);
  return make_module(alg_, dims, gens, label + "])");
}

ModuleMap FunctorCategory::representable(const Morphism& f, const ModulePtr& src, const ModulePtr& tgt) const {
  ModuleMap m{src, tgt, {}};
  for (std::size_t s = 0; s < cat_->size(); ++s) m.comp.push_back(cat_->represent(s, f));
  return m;
}

ModuleMap FunctorCategory::representable(const Morphism& f) const {
  return representable(f, representable(f.source), representable(f.target));
}

Morphism FunctorCategory::yoneda(const ModuleMap& g, const Object& x, const Object& y) const {
  const auto& c = *cat_;
  Morphism m = c.zero(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const std::size_t s = x[k];
    std::size_t off = 0;
    for (std::size_t j = 0; j < k; ++j) off += c.hom_dim(s, x[j]);
    Vec v = g.comp[s].col(off);
    std::size_t pos = 0;
    for (std::size_t l = 0; l < y.size(); ++l) {
      m.blocks[l][k] = Vec(v.begin() + pos, v.begin() + pos + c.hom_dim(s, y[l]));
      pos += c.hom_dim(s, y[l]);
    }
  }
  return m;
}

std::pair<Object, ModuleMap> FunctorCategory::represent_projective(const ModulePtr& m) const {
  auto d = decompose(m);
  Object obj;
  std::vector<ModuleMap> pieces;
  for (const auto& pc : d) {
    std::optional<std::size_t> which;
    ModuleMap iso;
    for (std::size_t v = 0; v < cat_->size() && !which; ++v) {
      auto f = indecomposable_iso(representable(Object{v}), pc.module);
      if (f) {
        which = v;
        iso = *f;
      }
    }
    if (!which) throw NangleError("module is not projective over E");
    for (std::size_t k = 0; k < pc.multiplicity(); ++k) {
      obj.push_back(*which);
      pieces.push_back(compose(pc.inclusions[k], iso));
    }
  }
  auto rep = representable(obj);
  ModuleMap total{rep, m, {}};
  for (std::size_t s = 0; s < cat_->size(); ++s) {
    std::vector<Matrix> blocks;
    for (const auto& pc : pieces) blocks.push_back(pc.comp[s]);
    total.comp.push_back(hstack(blocks, m->p(), m->dim(s)));
  }
  return {obj, total};
}

ModulePtr FunctorCategory::twist(const ModulePtr& m) const {
  const auto& c = *cat_;
  std::vector<std::size_t> dims(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) dims[c.sigma(s)] = m->dim(s);
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg_->generators.size(); ++g) {
    const auto& gi = alg_->generator_info[g];
    Vec gv(alg_->dim(), 0);
    for (auto [b, coef] : alg_->generators[g]) gv[b] = coef;
    Vec pre = mat_vec(sigma_alg_inv_, gv);
    SparseVec sv;
    for (std::size_t i = 0; i < pre.size(); ++i)
      if (pre[i]) sv.emplace_back(i, pre[i]);
    gens.push_back(m->act_element(sv, c.sigma_inv(gi.source), c.sigma_inv(gi.target)));
  }
  return make_module(alg_, dims, gens, "S(" + m->label() + ")");
}

ModulePtr FunctorCategory::untwist(const ModulePtr& m) const {
  const auto& c = *cat_;
  std::vector<std::size_t> dims(c.size());
  for (std::size_t s = 0; s < c.size(); ++s) dims[s] = m->dim(c.sigma(s));
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg_->generators.size(); ++g) {
    const auto& gi = alg_->generator_info[g];
    Vec gv(alg_->dim(), 0);
    for (auto [b, coef] : alg_->generators[g]) gv[b] = coef;
    Vec img = mat_vec(sigma_alg_, gv);
    SparseVec sv;
    for (std::size_t i = 0; i < img.size(); ++i)
      if (img[i]) sv.emplace_back(i, img[i]);
    gens.push_back(m->act_element(sv, c.sigma(gi.source), c.sigma(gi.target)));
  }
  return make_module(alg_, dims, gens, "S^-1(" + m->label() + ")");
}

ModuleMap FunctorCategory::twist(const ModuleMap& f, const ModulePtr& src, const ModulePtr& tgt) const {
  ModuleMap m{src, tgt, std::vector<Matrix>(cat_->size())};
  for (std::size_t s = 0; s < cat_->size(); ++s) m.comp[cat_->sigma(s)] = f.comp[s];
  return m;
}

ModuleMap FunctorCategory::twist_representable(const Object& x, const ModulePtr& twisted, const ModulePtr& rep) const {
  const auto& c = *cat_;
  ModuleMap m{twisted, rep, std::vector<Matrix>(c.size())};
  for (std::size_t s = 0; s < c.size(); ++s) {
    Matrix blk(c.p(), 0, 0);
    bool first = true;
    for (auto y : x) {
      blk = first ? c.transport(s, y) : direct_sum(blk, c.transport(s, y));
      first = false;
    }
    if (first) blk = Matrix(c.p(), 0, 0);
    m.comp[c.sigma(s)] = blk;
  }
  return m;
}

FunctorCategoryPtr functor_category(const std::vector<ModulePtr>& g) {
  if (g.empty()) throw InputError("functor category needs a nonempty generator list");
  return std::make_shared<FunctorCategory>(module_subcategory(g).category);
}

}  // namespace nangle
