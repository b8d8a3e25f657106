#include <random>

#include "nangle/algcore.hpp"

namespace nangle {

ModulePtr regular_module(const AlgebraPtr& a) {
  std::vector<ModulePtr> parts;
  for (std::size_t v = 0; v < a->num_vertices(); ++v) parts.push_back(projective_module(a, v));
  auto m = direct_sum(parts, a).sum;
  return m;
}

std::optional<Residue> local_residue(const Matrix& x) {
  if (x.rows() == 0) return Residue{0};
  auto roots = poly_roots(charpoly(x), x.p());
  if (roots.size() != 1) return std::nullopt;
  if (!is_nilpotent(x - Matrix::identity(x.p(), x.rows()).scaled(roots[0]))) return std::nullopt;
  return roots[0];
}

namespace {

struct Piece {
  ModulePtr module;
  ModuleMap inclusion;
  ModuleMap projection;
};

// Fitting decomposition along y = x - r: M = ker y^N (+) im y^N.
std::pair<Piece, Piece> fitting_split(const ModulePtr& m, const ModuleMap& y) {
  const std::size_t n = m->total_dim();
  std::vector<Matrix> kb, ib;
  for (const auto& c : y.comp) {
    Matrix yn = power(c, n);
    kb.push_back(kernel_basis(yn));
    ib.push_back(column_basis(yn));
  }
  auto k = submodule(m, kb);
  auto i = submodule(m, ib);
  ModuleMap pk{m, k.sub, {}}, pi{m, i.sub, {}};
  for (std::size_t v = 0; v < kb.size(); ++v) {
    Matrix inv = *invert(hstack(kb[v], ib[v]));
    pk.comp.push_back(inv.block(0, 0, kb[v].cols(), inv.cols()));
    pi.comp.push_back(inv.block(kb[v].cols(), 0, ib[v].cols(), inv.cols()));
  }
  return {Piece{k.sub, k.inclusion, pk}, Piece{i.sub, i.inclusion, pi}};
}

bool certify_local(const HomSpace& end) {
  const auto& m = end.source();
  const auto p = m->p();
  const std::size_t n = m->total_dim();
  std::vector<Matrix> rad;
  for (std::size_t i = 0; i < end.dim(); ++i) {
    Matrix x = end.element(i).total();
    auto r = local_residue(x);
    if (!r) return false;
    Matrix j = x - Matrix::identity(p, n).scaled(*r);
    if (!j.is_zero()) rad.push_back(j);
  }
  if (rad.empty()) return true;
  // The span of the rad elements must be a nilpotent (hence two-sided, since End = F_p + J) ideal.
  std::vector<Matrix> level = rad;
  for (std::size_t step = 0; step <= n; ++step) {
    std::vector<std::vector<Residue>> vecs;
    for (const auto& a : level)
      for (const auto& b : rad) vecs.push_back((a * b).vec());
    Matrix span(p, n * n, vecs.size());
    for (std::size_t c = 0; c < vecs.size(); ++c)
      for (std::size_t r = 0; r < n * n; ++r) span.at(r, c) = vecs[c][r];
    Matrix basis = column_basis(span);
    if (basis.cols() == 0) return true;
    level.clear();
    for (std::size_t c = 0; c < basis.cols(); ++c) level.push_back(Matrix::unvec(p, basis.col(c), n, n));
  }
  return false;
}

ModuleMap from_total(const ModulePtr& m, const Matrix& t) {
  ModuleMap f{m, m, {}};
  for (std::size_t v = 0; v < m->dims().size(); ++v)
    f.comp.push_back(t.block(m->offset(v), m->offset(v), m->dim(v), m->dim(v)));
  return f;
}

void split(const ModulePtr& m, std::mt19937_64& rng, std::vector<Piece>& out) {
  if (m->total_dim() == 0) return;
  HomSpace end(m, m);
  if (end.dim() == 1) {
    out.push_back(Piece{m, identity_map(m), identity_map(m)});
    return;
  }
  const auto p = m->p();
  const std::size_t n = m->total_dim();
  auto try_split = [&](const ModuleMap& x) -> bool {
    Matrix t = x.total();
    for (auto r : poly_roots(charpoly(t), p)) {
      Matrix y = t - Matrix::identity(p, n).scaled(r);
      if (is_nilpotent(y)) continue;
      auto [a, b] = fitting_split(m, from_total(m, y));
      std::vector<Piece> sub;
      split(a.module, rng, sub);
      for (auto& s : sub)
        out.push_back(Piece{s.module, compose(a.inclusion, s.inclusion), compose(s.projection, a.projection)});
      sub.clear();
      split(b.module, rng, sub);
      for (auto& s : sub)
        out.push_back(Piece{s.module, compose(b.inclusion, s.inclusion), compose(s.projection, b.projection)});
      return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < end.dim(); ++i)
    if (try_split(end.element(i))) return;
  if (certify_local(end)) {
    out.push_back(Piece{m, identity_map(m), identity_map(m)});
    return;
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Residue> c(end.dim());
    for (auto& v : c) v = static_cast<Residue>(rng() % p);
    if (try_split(end.combination(c))) return;
  }
  throw FieldTooSmall("field too small to split: endomorphism ring of a module of dimension " +
                      std::to_string(n) + " over F_" + std::to_string(p) +
                      " has a residue field larger than F_p");
}

}  // namespace

std::optional<ModuleMap> indecomposable_iso(const ModulePtr& a, const ModulePtr& b) {
  if (a->dims() != b->dims()) return std::nullopt;
  if (a == b) return identity_map(a);
  HomSpace h(a, b);
  for (std::size_t i = 0; i < h.dim(); ++i) {
    ModuleMap f = h.element(i);
    if (f.is_iso()) return f;
  }
  return std::nullopt;
}

std::vector<DecompositionPiece> decompose(const ModulePtr& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Piece> pieces;
  split(m, rng, pieces);
  std::vector<DecompositionPiece> out;
  for (auto& pc : pieces) {
    bool placed = false;
    for (auto& d : out) {
      auto iso = indecomposable_iso(pc.module, d.module);
      if (!iso) continue;
      auto inv = *inverse(*iso);
      d.inclusions.push_back(compose(pc.inclusion, inv));
      d.projections.push_back(compose(*iso, pc.projection));
      placed = true;
      break;
    }
    if (!placed) {
      DecompositionPiece d;
      d.module = pc.module;
      d.inclusions.push_back(pc.inclusion);
      d.projections.push_back(pc.projection);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::optional<ModuleMap> find_iso(const ModulePtr& m, const ModulePtr& n) {
  if (m->dims() != n->dims()) return std::nullopt;
  if (m == n) return identity_map(m);
  auto dm = decompose(m);
  auto dn = decompose(n);
  if (dm.size() != dn.size()) return std::nullopt;
  ModuleMap total = zero_map(m, n);
  std::vector<bool> used(dn.size(), false);
  for (const auto& a : dm) {
    bool found = false;
    for (std::size_t j = 0; j < dn.size(); ++j) {
      if (used[j] || dn[j].multiplicity() != a.multiplicity()) continue;
      auto iso = indecomposable_iso(a.module, dn[j].module);
      if (!iso) continue;
      used[j] = true;
      found = true;
      for (std::size_t k = 0; k < a.multiplicity(); ++k)
        total = total + compose(dn[j].inclusions[k], compose(*iso, a.projections[k]));
      break;
    }
    if (!found) return std::nullopt;
  }
  return total;
}

std::optional<std::vector<std::size_t>> is_selfinjective(const AlgebraPtr& a) {
  const std::size_t nv = a->num_vertices();
  std::vector<ModulePtr> inj;
  for (std::size_t w = 0; w < nv; ++w) inj.push_back(injective_module(a, w));
  std::vector<std::size_t> nu(nv);
  std::vector<bool> used(nv, false);
  for (std::size_t v = 0; v < nv; ++v) {
    auto pv = projective_module(a, v);
    bool found = false;
    for (std::size_t w = 0; w < nv && !found; ++w) {
      if (used[w] || !indecomposable_iso(pv, inj[w])) continue;
      nu[v] = w;
      used[w] = true;
      found = true;
    }
    if (!found) return std::nullopt;
  }
  return nu;
}

namespace {

// Left multiplication by the generator g: P_t -> P_s.
ModuleMap left_mult_map(const AlgebraPtr& a, std::size_t g, const ModulePtr& ps, const ModulePtr& pt,
                        std::size_t s, std::size_t t) {
  ModuleMap f{pt, ps, {}};
  for (std::size_t w = 0; w < a->num_vertices(); ++w) {
    auto from = a->elements_between(t, w);
    auto to = a->elements_between(s, w);
    std::vector<std::size_t> pos(a->dim(), 0);
    for (std::size_t i = 0; i < to.size(); ++i) pos[to[i]] = i;
    Matrix m(a->p(), to.size(), from.size());
    for (std::size_t j = 0; j < from.size(); ++j)
      for (auto [c, coef] : a->multiply(a->generators[g], {{from[j], 1}})) m.at(pos[c], j) = coef;
    f.comp.push_back(m);
  }
  return f;
}

struct NakayamaData {
  std::vector<ModulePtr> proj;
  std::vector<HomSpace> homs;
};

NakayamaData nakayama_data(const ModulePtr& m) {
  const auto& a = m->algebra();
  NakayamaData d;
  for (std::size_t v = 0; v < a->num_vertices(); ++v) {
    d.proj.push_back(projective_module(a, v));
    d.homs.emplace_back(m, d.proj.back());
  }
  return d;
}

}  // namespace

ModulePtr nakayama(const ModulePtr& m) {
  const auto& a = m->algebra();
  auto d = nakayama_data(m);
  std::vector<std::size_t> dims;
  for (const auto& h : d.homs) dims.push_back(h.dim());
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < a->generators.size(); ++g) {
    const auto& gi = a->generator_info[g];
    const std::size_t s = gi.source, t = gi.target;
    ModuleMap lg = left_mult_map(a, g, d.proj[s], d.proj[t], s, t);
    // Hom(M, P_t) -> Hom(M, P_s), then dualise.
    Matrix post(a->p(), d.homs[s].dim(), d.homs[t].dim());
    for (std::size_t j = 0; j < d.homs[t].dim(); ++j) {
      auto c = d.homs[s].coords(compose(lg, d.homs[t].element(j)));
      for (std::size_t i = 0; i < c.size(); ++i) post.at(i, j) = c[i];
    }
    gens.push_back(post.transpose());
  }
  return make_module(a, dims, gens, "nu(" + m->label() + ")");
}

ModuleMap nakayama_map(const ModuleMap& f, const ModulePtr& nu_source, const ModulePtr& nu_target) {
  auto ds = nakayama_data(f.source);
  auto dt = nakayama_data(f.target);
  ModuleMap out{nu_source, nu_target, {}};
  for (std::size_t v = 0; v < ds.homs.size(); ++v) {
    // Hom(N, P_v) -> Hom(M, P_v), h -> h o f, then dualise.
    Matrix pre(f.p(), ds.homs[v].dim(), dt.homs[v].dim());
    for (std::size_t j = 0; j < dt.homs[v].dim(); ++j) {
      auto c = ds.homs[v].coords(compose(dt.homs[v].element(j), f));
      for (std::size_t i = 0; i < c.size(); ++i) pre.at(i, j) = c[i];
    }
    out.comp.push_back(pre.transpose());
  }
  return out;
}

}  // namespace nangle
