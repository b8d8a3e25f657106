#include "nangle/frobstab.hpp"

#include <random>

namespace nangle {

StableHomSpace::StableHomSpace(HomSpace hom, const Matrix& projective_part) : hom_(std::move(hom)) {
  const std::size_t d = hom_.dim();
  if (projective_part.cols() > 0 && d > 0) {
    auto rr = rref(projective_part.transpose());
    rows_ = rr.reduced.block(0, 0, rr.rank, d);
    pivots_ = rr.pivots;
  } else {
    rows_ = Matrix(hom_.source()->p(), 0, d);
  }
  std::vector<bool> isp(d, false);
  for (auto p : pivots_) isp[p] = true;
  for (std::size_t i = 0; i < d; ++i)
    if (!isp[i]) free_.push_back(i);
}

std::vector<Residue> StableHomSpace::reduce(std::vector<Residue> c) const {
  const PrimeField f(hom_.source()->p());
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    Residue k = c[pivots_[r]];
    if (!k) continue;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = f.sub(c[j], f.mul(k, rows_(r, j)));
  }
  return c;
}

std::vector<Residue> StableHomSpace::coords(const ModuleMap& f) const {
  auto c = reduce(hom_.coords(f));
  std::vector<Residue> out;
  for (auto i : free_) out.push_back(c[i]);
  return out;
}

ModuleMap StableHomSpace::representative(const std::vector<Residue>& coords) const {
  std::vector<Residue> c(hom_.dim(), 0);
  for (std::size_t i = 0; i < free_.size(); ++i) c[free_[i]] = coords[i];
  return hom_.combination(c);
}

ModuleMap StableHomSpace::element(std::size_t i) const { return hom_.element(free_[i]); }

bool StableHomSpace::is_zero(const ModuleMap& f) const {
  for (auto v : coords(f))
    if (v) return false;
  return true;
}

StableCategory::StableCategory(AlgebraPtr a) : alg_(std::move(a)) {
  auto nu = is_selfinjective(alg_);
  if (!nu) throw NangleError("algebra '" + alg_->name + "' is not self-injective");
  nu_ = *nu;
  for (std::size_t v = 0; v < alg_->num_vertices(); ++v) {
    proj_.push_back(projective_module(alg_, v));
    inj_.push_back(injective_module(alg_, v));
  }
}

std::shared_ptr<const Envelope> StableCategory::envelope(const ModulePtr& m) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = env_cache_.find(m.get());
    if (it != env_cache_.end()) return it->second;
  }
  const auto& a = *alg_;
  const std::size_t nv = a.num_vertices();
  auto soc = socle_basis(*m);
  std::vector<ModulePtr> parts;
  std::vector<std::pair<std::size_t, std::vector<Residue>>> functionals;  // (vertex, row of Phi)
  for (std::size_t v = 0; v < nv; ++v) {
    if (soc[v].cols() == 0) continue;
    for (auto r : rref(soc[v].transpose()).pivots) {
      std::vector<Residue> phi(m->dim(v), 0);
      phi[r] = 1;
      functionals.emplace_back(v, phi);
      parts.push_back(inj_[v]);
    }
  }
  auto ds = direct_sum(parts, alg_);
  ModuleMap iota{m, ds.sum, {}};
  for (std::size_t w = 0; w < nv; ++w) {
    Matrix c(m->p(), ds.sum->dim(w), m->dim(w));
    std::size_t row = 0;
    for (const auto& [v, phi] : functionals) {
      Matrix phirow(m->p(), 1, phi.size());
      for (std::size_t k = 0; k < phi.size(); ++k) phirow.at(0, k) = phi[k];
      for (auto b : a.elements_between(w, v)) c.set_block(row++, 0, phirow * m->act(b));
    }
    iota.comp.push_back(c);
  }
  auto env = std::make_shared<Envelope>();
  env->module = m;
  env->injective = ds.sum;
  env->mono = iota;
  auto q = cokernel(iota);
  env->cosyzygy = q.quotient;
  env->projection = q.projection;
  env->section = q.section;
  std::lock_guard<std::mutex> lock(mu_);
  env_cache_[m.get()] = env;
  return env;
}

std::shared_ptr<const Cover> StableCategory::cover(const ModulePtr& m) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cover_cache_.find(m.get());
    if (it != cover_cache_.end()) return it->second;
  }
  const auto& a = *alg_;
  const std::size_t nv = a.num_vertices();
  auto rad = radical_basis(*m);
  std::vector<ModulePtr> parts;
  std::vector<std::pair<std::size_t, std::size_t>> tops;  // (vertex, coordinate of the top vector)
  for (std::size_t v = 0; v < nv; ++v) {
    std::vector<bool> isp(m->dim(v), false);
    if (rad[v].cols() > 0)
      for (auto r : rref(rad[v].transpose()).pivots) isp[r] = true;
    for (std::size_t i = 0; i < m->dim(v); ++i)
      if (!isp[i]) {
        tops.emplace_back(v, i);
        parts.push_back(proj_[v]);
      }
  }
  auto ds = direct_sum(parts, alg_);
  ModuleMap eps{ds.sum, m, {}};
  for (std::size_t w = 0; w < nv; ++w) {
    Matrix c(m->p(), m->dim(w), ds.sum->dim(w));
    std::size_t col = 0;
    for (const auto& [v, i] : tops) {
      Matrix e(m->p(), m->dim(v), 1);
      e.at(i, 0) = 1;
      for (auto b : a.elements_between(v, w)) c.set_block(0, col++, m->act(b) * e);
    }
    eps.comp.push_back(c);
  }
  auto cov = std::make_shared<Cover>();
  cov->module = m;
  cov->projective = ds.sum;
  cov->epi = eps;
  auto k = kernel(eps);
  cov->syzygy = k.sub;
  cov->inclusion = k.inclusion;
  std::lock_guard<std::mutex> lock(mu_);
  cover_cache_[m.get()] = cov;
  return cov;
}

ModuleMap StableCategory::cosyzygy_map(const ModuleMap& f) {
  auto es = envelope(f.source);
  auto et = envelope(f.target);
  MapSystem sys(es->injective, et->injective);
  sys.precompose_equals(es->mono, compose(et->mono, f));
  auto g = sys.solve_one();
  if (!g) throw NangleError("internal: map does not extend to injective envelopes");
  ModuleMap h{es->cosyzygy, et->cosyzygy, {}};
  for (std::size_t v = 0; v < g->comp.size(); ++v)
    h.comp.push_back(et->projection.comp[v] * g->comp[v] * es->section[v]);
  return h;
}

ModuleMap StableCategory::syzygy_map(const ModuleMap& f) {
  auto cs = cover(f.source);
  auto ct = cover(f.target);
  MapSystem sys(cs->projective, ct->projective);
  sys.postcompose_equals(ct->epi, compose(f, cs->epi));
  auto g = sys.solve_one();
  if (!g) throw NangleError("internal: map does not lift to projective covers");
  ModuleMap h{cs->syzygy, ct->syzygy, {}};
  for (std::size_t v = 0; v < g->comp.size(); ++v) {
    Matrix img = g->comp[v] * cs->inclusion.comp[v];
    auto s = solve(ct->inclusion.comp[v], img);
    if (!s.particular) throw NangleError("internal: lifted map leaves the syzygy");
    h.comp.push_back(*s.particular);
  }
  return h;
}

ModulePtr StableCategory::cosyzygy_power(const ModulePtr& m, std::size_t k) {
  ModulePtr cur = m;
  for (std::size_t i = 0; i < k; ++i) cur = cosyzygy(cur);
  return cur;
}

ModuleMap StableCategory::cosyzygy_power_map(const ModuleMap& f, std::size_t k) {
  ModuleMap cur = f;
  for (std::size_t i = 0; i < k; ++i) cur = cosyzygy_map(cur);
  return cur;
}

StableHomSpace StableCategory::stable_hom(const ModulePtr& m, const ModulePtr& n) {
  HomSpace h(m, n);
  if (h.dim() == 0) return StableHomSpace(std::move(h), Matrix(m->p(), 0, 0));
  auto cov = cover(n);
  HomSpace toproj(m, cov->projective);
  Matrix part(m->p(), h.dim(), toproj.dim());
  for (std::size_t j = 0; j < toproj.dim(); ++j) {
    auto c = h.coords(compose(cov->epi, toproj.element(j)));
    for (std::size_t i = 0; i < c.size(); ++i) part.at(i, j) = c[i];
  }
  return StableHomSpace(std::move(h), part);
}

bool StableCategory::factors_through_projective(const ModuleMap& f) {
  return stable_hom(f.source, f.target).is_zero(f);
}

TriangleData StableCategory::triangle_of(const ModuleMap& f) {
  auto env = envelope(f.source);
  auto ds = direct_sum({f.target, env->injective}, alg_);
  // X -> Y + I_X, x -> (f x, -iota x)
  ModuleMap into = compose(ds.inclusions[0], f) - compose(ds.inclusions[1], env->mono);
  auto q = cokernel(into);
  TriangleData t;
  t.f = f;
  t.cone = q.quotient;
  t.u = compose(q.projection, ds.inclusions[0]);
  ModuleMap down = compose(env->projection, ds.projections[1]);
  t.w = ModuleMap{t.cone, env->cosyzygy, {}};
  for (std::size_t v = 0; v < down.comp.size(); ++v) t.w.comp.push_back(down.comp[v] * q.section[v]);
  t.shift = env->cosyzygy;
  return t;
}

bool StableCategory::is_projective_indecomposable(const ModulePtr& m) {
  for (const auto& p : proj_)
    if (p->dims() == m->dims() && indecomposable_iso(m, p)) return true;
  return false;
}

Stripped StableCategory::strip_projectives(const ModulePtr& m) {
  auto d = decompose(m);
  std::vector<ModulePtr> keep;
  std::vector<ModuleMap> incs, projs;
  bool removed = false;
  for (const auto& pc : d) {
    if (is_projective_indecomposable(pc.module)) {
      removed = true;
      continue;
    }
    for (std::size_t k = 0; k < pc.multiplicity(); ++k) {
      keep.push_back(pc.module);
      incs.push_back(pc.inclusions[k]);
      projs.push_back(pc.projections[k]);
    }
  }
  if (!removed) return Stripped{m, identity_map(m), identity_map(m)};
  auto ds = direct_sum(keep, alg_);
  Stripped s;
  s.module = ds.sum;
  s.inclusion = zero_map(ds.sum, m);
  s.projection = zero_map(m, ds.sum);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.inclusion = s.inclusion + compose(incs[i], ds.projections[i]);
    s.projection = s.projection + compose(ds.inclusions[i], projs[i]);
  }
  return s;
}

bool StableCategory::is_stably_zero(const ModulePtr& m) {
  if (m->total_dim() == 0) return true;
  auto s = stable_hom(m, m);
  return s.is_zero(identity_map(m));
}

std::optional<ModuleMap> StableCategory::stable_iso(const ModulePtr& a, const ModulePtr& b) {
  // Without projective summands, stable isomorphism implies isomorphism.
  return find_iso(a, b);
}

ModulePtr StableCategory::nakayama_of(const ModulePtr& m) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = nu_cache_.find(m.get());
    if (it != nu_cache_.end()) return it->second.second;
  }
  auto n = nakayama(m);
  std::lock_guard<std::mutex> lock(mu_);
  nu_cache_[m.get()] = {m, n};
  return n;
}

ModulePtr StableCategory::serre(const ModulePtr& m) { return syzygy(nakayama_of(m)); }

ModuleMap StableCategory::serre_map(const ModuleMap& f) {
  return syzygy_map(nakayama_map(f, nakayama_of(f.source), nakayama_of(f.target)));
}

StableCategory::DualityResult StableCategory::serre_duality_check(const ModulePtr& m, const ModulePtr& n,
                                                                  std::uint64_t seed) {
  DualityResult r;
  auto sm = serre(m);
  auto left = stable_hom(m, n);
  auto right = stable_hom(n, sm);
  auto target = stable_hom(m, sm);
  r.dim_left = left.dim();
  r.dim_right = right.dim();
  if (r.dim_left != r.dim_right) return r;
  if (r.dim_left == 0) {
    r.ok = true;
    return r;
  }
  // Pairing (f, g) -> t(g o f); look for a functional t making it nondegenerate.
  const std::size_t d = r.dim_left, k = target.dim();
  const auto p = m->p();
  std::vector<std::vector<std::vector<Residue>>> comp(d, std::vector<std::vector<Residue>>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) comp[i][j] = target.coords(compose(right.element(j), left.element(i)));
  const PrimeField fld(p);
  auto test = [&](const std::vector<Residue>& t) {
    Matrix pm(p, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        Residue s = 0;
        for (std::size_t c = 0; c < k; ++c) s = fld.add(s, fld.mul(t[c], comp[i][j][c]));
        pm.at(i, j) = s;
      }
    return rank(pm) == d;
  };
  std::mt19937_64 rng(seed);
  std::vector<Residue> t(k, 0);
  std::uint64_t space = 1;
  for (std::size_t c = 0; c < k && space < 4096; ++c) space *= p;
  if (space < 4096) {
    for (std::uint64_t code = 1; code < space; ++code) {
      std::uint64_t x = code;
      for (std::size_t c = 0; c < k; ++c) {
        t[c] = static_cast<Residue>(x % p);
        x /= p;
      }
      if (test(t)) {
        r.ok = true;
        return r;
      }
    }
    return r;
  }
  for (int attempt = 0; attempt < 400; ++attempt) {
    for (auto& v : t) v = static_cast<Residue>(rng() % p);
    if (test(t)) {
      r.ok = true;
      return r;
    }
  }
  return r;
}

void StableCategory::clear_caches() {
  std::lock_guard<std::mutex> lock(mu_);
  env_cache_.clear();
  cover_cache_.clear();
  nu_cache_.clear();
}

}  // namespace nangle
