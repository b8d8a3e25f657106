#include "nangle/standardcons.hpp"

#include <algorithm>
#include <numeric>

namespace nangle {

ModulePtr module_from_json(const AlgebraPtr& a, const nlohmann::json& j, const std::string& label) {
  if (!a->presentation) throw InputError("module specs need an algebra built from a presentation");
  const auto& q = a->presentation->quiver;
  std::vector<std::size_t> dims;
  try {
    dims = j.at("dims").get<std::vector<std::size_t>>();
  } catch (const std::exception&) {
    throw InputError("module spec needs a \"dims\" list");
  }
  if (dims.size() != a->num_vertices()) throw InputError("module spec: dims has the wrong length");
  std::vector<Matrix> gens;
  const nlohmann::json arrows = j.value("arrows", nlohmann::json::object());
  for (auto it = arrows.begin(); it != arrows.end(); ++it) q.arrow_index(it.key());  // throws on unknown names
  for (std::size_t g = 0; g < a->generator_info.size(); ++g) {
    const auto& gi = a->generator_info[g];
    Matrix m(a->p(), dims[gi.target], dims[gi.source]);
    if (arrows.contains(gi.label)) {
      const auto rows = arrows[gi.label].get<std::vector<std::vector<long long>>>();
      if (rows.size() != m.rows()) throw InputError("module spec: arrow " + gi.label + " has the wrong number of rows");
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) throw InputError("module spec: arrow " + gi.label + " has a row of wrong length");
        for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = a->field.reduce(rows[r][c]);
      }
    }
    gens.push_back(m);
  }
  auto mod = make_module(a, dims, gens, label);
  if (auto err = mod->validate(); !err.empty()) throw InputError("module spec " + label + ": " + err);
  return mod;
}

nlohmann::json module_to_json(const Module& m) {
  nlohmann::json j;
  j["dims"] = m.dims();
  nlohmann::json arrows = nlohmann::json::object();
  const auto& a = *m.algebra();
  for (std::size_t g = 0; g < a.generator_info.size(); ++g) {
    const Matrix& x = m.gen(g);
    if (x.rows() == 0 || x.cols() == 0) continue;
    bool zero = true;
    std::vector<std::vector<long long>> rows(x.rows(), std::vector<long long>(x.cols()));
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.cols(); ++c) {
        rows[r][c] = x(r, c);
        zero = zero && x(r, c) == 0;
      }
    if (!zero) arrows[a.generator_info[g].label] = rows;
  }
  j["arrows"] = arrows;
  return j;
}

namespace {

bool in_add(const std::vector<ModulePtr>& t, const ModulePtr& m, StableCategory& sc) {
  auto st = sc.strip_projectives(m);
  for (const auto& pc : decompose(st.module)) {
    bool found = false;
    for (const auto& x : t) found = found || (x->dims() == pc.module->dims() && indecomposable_iso(x, pc.module));
    if (!found) return false;
  }
  return true;
}

std::size_t lcm_of_cycles(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t order = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    order = std::lcm(order, len);
  }
  return order;
}

}  // namespace

bool ClusterTiltingReport::ok() const {
  if (!rigid || !closed) return false;
  if (degenerate) return true;
  for (const auto& w : witnesses)
    if (!w.consistent) return false;
  return true;
}

nlohmann::json ClusterTiltingReport::to_json() const {
  nlohmann::json j;
  j["rigid"] = rigid;
  j["closed"] = closed;
  j["degenerate"] = degenerate;
  j["permutation"] = permutation;
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& w : witnesses)
    ws.push_back({{"label", w.label},
                  {"in_add_T", w.in_add_t},
                  {"left_orthogonal", w.left_orthogonal},
                  {"right_orthogonal", w.right_orthogonal},
                  {"consistent", w.consistent}});
  j["witnesses"] = ws;
  j["failures"] = failures;
  j["ok"] = ok();
  return j;
}

ClusterTiltingReport check_cluster_tilting(StableCategory& sc, const std::vector<ModulePtr>& t, std::size_t d,
                                           const std::vector<ModulePtr>& witnesses) {
  ClusterTiltingReport r;
  r.degenerate = d <= 1;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t k = 0; k < t.size(); ++k)
      for (std::size_t j = 1; j < d; ++j)
        if (sc.stable_hom(t[i], sc.cosyzygy_power(t[k], j)).dim() != 0) {
          r.rigid = false;
          r.failures.push_back("Hom(T" + std::to_string(i) + ", Omega^-" + std::to_string(j) + " T" +
                               std::to_string(k) + ") is nonzero");
        }
  for (std::size_t i = 0; i < t.size(); ++i) {
    auto s = sc.strip_projectives(sc.cosyzygy_power(t[i], d)).module;
    std::optional<std::size_t> which;
    for (std::size_t k = 0; k < t.size() && !which; ++k)
      if (s->dims() == t[k]->dims() && indecomposable_iso(s, t[k])) which = k;
    if (!which) {
      r.closed = false;
      r.failures.push_back("Omega^-" + std::to_string(d) + " T" + std::to_string(i) + " is not a summand");
      r.permutation.push_back(i);
    } else {
      r.permutation.push_back(*which);
    }
  }
  for (const auto& w : witnesses) {
    WitnessResult wr;
    wr.label = w->label();
    wr.in_add_t = in_add(t, w, sc);
    wr.left_orthogonal = wr.right_orthogonal = true;
    for (const auto& x : t)
      for (std::size_t j = 1; j < d; ++j) {
        if (sc.stable_hom(x, sc.cosyzygy_power(w, j)).dim()) wr.left_orthogonal = false;
        if (sc.stable_hom(w, sc.cosyzygy_power(x, j)).dim()) wr.right_orthogonal = false;
      }
    wr.consistent = wr.left_orthogonal == wr.in_add_t && wr.right_orthogonal == wr.in_add_t;
    if (!wr.consistent && !r.degenerate) r.failures.push_back("witness " + wr.label + " contradicts maximality");
    r.witnesses.push_back(wr);
  }
  if (r.degenerate) r.failures.push_back("note: d = 1, the orthogonality conditions are empty");
  return r;
}

ClusterTilting::ClusterTilting(StableCategory& sc, std::vector<ModulePtr> t, std::size_t d)
    : sc_(&sc), t_(std::move(t)), d_(d) {
  if (d == 0) throw InputError("d must be positive");
  if (t_.empty()) throw InputError("no summands");
  rc_ = stable_subcategory(sc, t_, d);
  realizer_ = std::make_unique<Realizer>(rc_, sc_);
}

FunctorCategory& ClusterTilting::functors() {
  if (!fc_) fc_ = std::make_unique<FunctorCategory>(rc_.category);
  return *fc_;
}

Approximation left_approximation(ClusterTilting& ct, const ModulePtr& x) {
  auto& sc = ct.stable();
  const auto& real = ct.realizer().realization();
  const std::size_t m = ct.summands().size();
  std::vector<StableHomSpace> h;
  for (std::size_t t = 0; t < m; ++t) h.push_back(sc.stable_hom(x, real.objects[t]));
  Object target;
  std::vector<ModuleMap> chosen;
  for (std::size_t t = 0; t < m; ++t) {
    const std::size_t dim = h[t].dim();
    if (dim == 0) continue;
    // radical composites x -> T_s -> T_t
    std::vector<Vec> rows;
    for (std::size_t s = 0; s < m; ++s)
      for (std::size_t b = 0; b < h[s].dim(); ++b) {
        auto g = h[s].element(b);
        const auto& basis = real.basis[s][t];
        for (std::size_t c = s == t ? 1 : 0; c < basis.size(); ++c) rows.push_back(h[t].coords(compose(basis[c], g)));
      }
    auto rank_of = [&](const std::vector<Vec>& vs) {
      if (vs.empty()) return std::size_t{0};
      Matrix a(ct.category()->p(), vs.size(), dim);
      for (std::size_t r = 0; r < vs.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c) a.at(r, c) = vs[r][c];
      return rank(a);
    };
    std::size_t cur = rank_of(rows);
    for (std::size_t b = 0; b < dim && cur < dim; ++b) {
      Vec e(dim, 0);
      e[b] = 1;
      rows.push_back(e);
      std::size_t nxt = rank_of(rows);
      if (nxt > cur) {
        cur = nxt;
        target.push_back(t);
        chosen.push_back(h[t].element(b));
      } else {
        rows.pop_back();
      }
    }
  }
  const auto& ds = ct.realizer().module(target);
  ModuleMap f = zero_map(x, ds.sum);
  for (std::size_t k = 0; k < chosen.size(); ++k) f = f + compose(ds.inclusions[k], chosen[k]);
  return {target, f};
}

bool is_left_approximation(ClusterTilting& ct, const ModulePtr& x, const Approximation& a) {
  auto& sc = ct.stable();
  const auto& real = ct.realizer().realization();
  for (std::size_t t = 0; t < ct.summands().size(); ++t) {
    auto target_space = sc.stable_hom(x, real.objects[t]);
    if (target_space.dim() == 0) continue;
    auto through = sc.stable_hom(a.map.target, real.objects[t]);
    Matrix m(ct.category()->p(), target_space.dim(), through.dim());
    for (std::size_t c = 0; c < through.dim(); ++c) {
      auto v = target_space.coords(compose(through.element(c), a.map));
      for (std::size_t r = 0; r < v.size(); ++r) m.at(r, c) = v[r];
    }
    if (through.dim() == 0 || rank(m) < target_space.dim()) return false;
  }
  return true;
}

Construction construct_angle(ClusterTilting& ct, const Morphism& a1) {
  auto& sc = ct.stable();
  auto& r = ct.realizer();
  const auto& c = *ct.category();
  const std::size_t n = ct.n();
  Construction out;
  out.seq.n = n;
  out.seq.x = {a1.source, a1.target};
  out.seq.a = {a1};
  const ModulePtr m1 = r.module(a1.source).sum;
  auto tri = sc.triangle_of(r.to_module_map(a1));
  auto st = sc.strip_projectives(tri.cone);
  ModulePtr z = st.module;
  ModuleMap u = compose(st.projection, tri.u);
  std::vector<ModuleMap> lower{compose(tri.w, st.inclusion)};  // X_{i.5} -> Omega^{-1} X_{(i-1).5}
  out.tower.half.push_back(z);
  for (std::size_t i = 3; i < n; ++i) {
    auto ap = left_approximation(ct, z);
    out.seq.a.push_back(r.to_morphism(compose(ap.map, u), out.seq.x.back(), ap.target));
    out.seq.x.push_back(ap.target);
    tri = sc.triangle_of(ap.map);
    st = sc.strip_projectives(tri.cone);
    u = compose(st.projection, tri.u);
    lower.push_back(compose(tri.w, st.inclusion));
    z = st.module;
    out.tower.half.push_back(z);
  }
  auto rec = r.recognise(z);
  if (!rec) throw NangleError("coresolution did not terminate in n-2 steps");
  auto [xn, psi] = *rec;
  out.seq.a.push_back(r.to_morphism(compose(*inverse(psi), u), out.seq.x.back(), xn));
  out.seq.x.push_back(xn);
  ModuleMap g = compose(lower.back(), psi);
  for (std::size_t k = 1; k < lower.size(); ++k)
    g = compose(sc.cosyzygy_power_map(lower[lower.size() - 1 - k], k), g);
  // g: X_n -> Omega^{-(n-2)} X_1; transport summandwise into the realization of Sigma X_1
  const Object sx1 = c.shift(a1.source);
  const auto& src = r.module(a1.source);
  const auto& tgt = r.module(sx1);
  const auto& real = r.realization();
  ModuleMap transport = zero_map(sc.cosyzygy_power(m1, ct.d()), tgt.sum);
  for (std::size_t k = 0; k < a1.source.size(); ++k)
    transport = transport + compose(tgt.inclusions[k], compose(real.psi[a1.source[k]],
                                                                sc.cosyzygy_power_map(src.projections[k], ct.d())));
  out.seq.a.push_back(r.to_morphism(compose(transport, g), xn, sx1));
  out.tower.objects = out.seq.x;
  return out;
}

VanishingReport tower_vanishing(ClusterTilting& ct, const Tower& t) {
  VanishingReport v;
  auto& sc = ct.stable();
  const std::size_t n = ct.n();
  // X_{(i+1).5} is half[i - 1]
  for (std::size_t i = 2; i + 2 < n; ++i)
    for (std::size_t j = 1; j < i; ++j)
      for (std::size_t k = 0; k < ct.summands().size(); ++k) {
        ++v.checks;
        if (sc.stable_hom(t.half[i - 1], sc.cosyzygy_power(ct.summands()[k], j)).dim() != 0) {
          ++v.failures;
          v.detail += "X_" + std::to_string(i + 1) + ".5 maps to Omega^-" + std::to_string(j) + " T" +
                      std::to_string(k) + "; ";
        }
      }
  return v;
}

Morphism morphism_with_kernel(FunctorCategory& fc, const ModulePtr& k) {
  auto& sc = fc.stable();
  auto e1 = sc.envelope(k);
  auto e2 = sc.envelope(e1->cosyzygy);
  ModuleMap g = compose(e2->mono, e1->projection);
  auto [x1, iso1] = fc.represent_projective(e1->injective);
  auto [x2, iso2] = fc.represent_projective(e2->injective);
  ModuleMap h = compose(*inverse(iso2), compose(g, iso1));
  return fc.yoneda(h, x1, x2);
}

StandardOracle::StandardOracle(ClusterTilting* ct) : ct_(ct) {
  auto& fc = ct_->functors();
  fc.stable();  // throws when E is not self-injective
  auto provider = [this](const ModulePtr& rep, const ModulePtr& twisted) -> std::optional<ModuleMap> {
    auto& f = ct_->functors();
    auto built = construct_angle(*ct_, morphism_with_kernel(f, rep));
    Delta d = delta_of(f, built.seq);
    auto phi = find_iso(d.kernel, rep);
    if (!phi) return std::nullopt;
    auto back = inverse(*phi);
    return compose(f.stable().cosyzygy_power_map(*phi, ct_->n()),
                   compose(d.map, f.twist(*back, twisted, d.shifted)));
  };
  theta_ = std::make_unique<ThetaFamily>(&fc, ct_->n(), provider);
}

bool StandardOracle::member(const NSigmaSequence& x) { return theta_membership(*theta_, x); }

std::optional<NSigmaSequence> StandardOracle::complete(const Morphism& f) {
  try {
    return construct_angle(*ct_, f).seq;
  } catch (const NangleError&) {
    return std::nullopt;
  }
}

void StandardOracle::corrupt_theta(std::size_t j, Residue s) {
  theta_->set_value(j, scaled(theta_->value(j), s));
}

std::size_t suspension_order(const ClusterTilting& ct) {
  const auto& c = *ct.category();
  std::vector<std::size_t> perm(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) perm[i] = c.sigma(i);
  return lcm_of_cycles(perm);
}

nlohmann::json CalabiYauReport::to_json() const {
  return {{"selfinjective", selfinjective}, {"n", n},
          {"d", serre_power},             {"cy_dimension", cy_dimension},
          {"modules", modules},           {"mismatches", mismatches},
          {"degenerate", degenerate},     {"note", note}};
}

CalabiYauReport calabi_yau_report(ClusterTilting& ct, std::size_t max_modules) {
  CalabiYauReport r;
  r.n = ct.n();
  auto& fc = ct.functors();
  r.selfinjective = fc.selfinjective();
  if (!r.selfinjective) {
    r.note = "E not self-injective";
    return r;
  }
  auto& sc = ct.stable();
  const auto& t = ct.summands();
  const std::size_t bound = 4 * suspension_order(ct) + 8;
  for (std::size_t e = 1; e <= bound && !r.serre_power; ++e) {
    bool all = true;
    for (const auto& x : t) {
      auto lhs = sc.strip_projectives(sc.serre(x)).module;
      auto rhs = sc.cosyzygy_power(x, ct.d() * e);
      if (lhs->dims() != rhs->dims() || !find_iso(lhs, rhs)) {
        all = false;
        break;
      }
    }
    if (all) r.serre_power = e;
  }
  if (!r.serre_power) {
    r.note = "no power of the suspension agrees with the Serre functor on the summands";
    return r;
  }
  r.cy_dimension = r.n * r.serre_power - 1;
  auto& se = fc.stable();
  auto mods = enumerate_indecomposables(se, max_modules);
  r.modules = mods.size();
  if (mods.empty()) {
    r.degenerate = true;
    r.note = "mod-E has no non-projective indecomposables; the check is vacuous";
    return r;
  }
  for (const auto& m : mods) {
    auto lhs = se.strip_projectives(se.serre(m)).module;
    auto rhs = se.strip_projectives(se.cosyzygy_power(m, r.cy_dimension)).module;
    if (lhs->dims() != rhs->dims() || !find_iso(lhs, rhs)) ++r.mismatches;
  }
  return r;
}

namespace {

// Submodule generated per vertex by the given columns.
std::vector<Matrix> generated(const Module& m, std::vector<Matrix> span) {
  const auto& a = *m.algebra();
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t g = 0; g < a.generator_info.size(); ++g) {
      const auto& gi = a.generator_info[g];
      if (span[gi.source].cols() == 0 || m.dim(gi.target) == 0) continue;
      Matrix img = m.gen(g) * span[gi.source];
      Matrix both = hstack(span[gi.target], img);
      Matrix basis = column_basis(both);
      if (basis.cols() > span[gi.target].cols()) {
        span[gi.target] = basis;
        grew = true;
      }
    }
  }
  return span;
}

std::vector<Matrix> radical_power(const Module& m, std::size_t k) {
  std::vector<Matrix> span;
  for (std::size_t v = 0; v < m.dims().size(); ++v) span.push_back(Matrix::identity(m.p(), m.dim(v)));
  const auto& a = *m.algebra();
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Matrix> next;
    for (std::size_t v = 0; v < m.dims().size(); ++v) next.push_back(Matrix(m.p(), m.dim(v), 0));
    for (std::size_t g = 0; g < a.generator_info.size(); ++g) {
      const auto& gi = a.generator_info[g];
      if (span[gi.source].cols() == 0 || m.dim(gi.target) == 0) continue;
      next[gi.target] = column_basis(hstack(next[gi.target], m.gen(g) * span[gi.source]));
    }
    span = next;
  }
  return span;
}

class Catalogue {
 public:
  Catalogue(StableCategory& sc, std::size_t cap) : sc_(sc), cap_(cap) {}
  bool full() const { return list_.size() >= cap_; }
  const std::vector<ModulePtr>& list() const { return list_; }
  // adds the non-projective indecomposable summands of m; returns the new ones
  void add(const ModulePtr& m) {
    if (full() || m->total_dim() == 0) return;
    auto st = sc_.strip_projectives(m);
    if (st.module->total_dim() == 0) return;
    for (const auto& pc : decompose(st.module)) {
      if (full()) return;
      bool seen = false;
      for (auto idx : by_dims_[pc.module->dims()])
        if (indecomposable_iso(list_[idx], pc.module)) {
          seen = true;
          break;
        }
      if (seen) continue;
      by_dims_[pc.module->dims()].push_back(list_.size());
      list_.push_back(pc.module);
    }
  }

 private:
  StableCategory& sc_;
  std::size_t cap_;
  std::vector<ModulePtr> list_;
  std::map<std::vector<std::size_t>, std::vector<std::size_t>> by_dims_;
};

}  // namespace

std::vector<ModulePtr> enumerate_indecomposables(StableCategory& sc, std::size_t max_modules,
                                                 bool include_path_quotients) {
  const auto& a = sc.algebra();
  Catalogue cat(sc, max_modules);
  for (std::size_t v = 0; v < a->num_vertices(); ++v) cat.add(simple_module(a, v));
  for (std::size_t v = 0; v < a->num_vertices(); ++v) {
    auto p = projective_module(a, v);
    std::size_t loewy = 0;
    while (loewy <= p->total_dim()) {
      auto r = radical_power(*p, loewy);
      std::size_t tot = 0;
      for (const auto& x : r) tot += x.cols();
      if (tot == 0) break;
      ++loewy;
    }
    for (std::size_t k = 1; k <= loewy; ++k) cat.add(quotient_module(p, radical_power(*p, k)).quotient);
    if (!include_path_quotients) continue;
    // quotients by submodules generated by sets of basis paths of positive length
    std::vector<std::pair<std::size_t, std::size_t>> paths;  // (vertex, position)
    for (std::size_t w = 0; w < a->num_vertices(); ++w) {
      auto els = a->elements_between(v, w);
      for (std::size_t i = 0; i < els.size(); ++i)
        if (els[i] != a->idempotent[v]) paths.push_back({w, i});
    }
    if (paths.size() > 12) continue;
    for (std::size_t mask = 1; mask < (std::size_t{1} << paths.size()); ++mask) {
      std::vector<Matrix> gen(a->num_vertices());
      for (std::size_t w = 0; w < a->num_vertices(); ++w) gen[w] = Matrix(a->p(), p->dim(w), 0);
      for (std::size_t b = 0; b < paths.size(); ++b) {
        if (!(mask >> b & 1)) continue;
        auto [w, i] = paths[b];
        Matrix e(a->p(), p->dim(w), 1);
        e.at(i, 0) = 1;
        gen[w] = hstack(gen[w], e);
      }
      cat.add(quotient_module(p, generated(*p, gen)).quotient);
      if (cat.full()) break;
    }
  }
  // closure under Omega, Omega^{-1} and nu
  for (std::size_t i = 0; i < cat.list().size() && !cat.full(); ++i) {
    auto m = cat.list()[i];
    cat.add(sc.syzygy(m));
    cat.add(sc.cosyzygy(m));
    cat.add(sc.nakayama_of(m));
  }
  return cat.list();
}

std::optional<std::vector<ModulePtr>> search_cluster_tilting(
    StableCategory& sc, const std::vector<ModulePtr>& candidates, std::size_t size,
    const std::function<bool(const std::vector<ModulePtr>&)>& accept) {
  const std::size_t m = candidates.size();
  auto index_of = [&](const ModulePtr& x) -> std::optional<std::size_t> {
    auto s = sc.strip_projectives(x).module;
    for (std::size_t i = 0; i < m; ++i)
      if (candidates[i]->dims() == s->dims() && indecomposable_iso(candidates[i], s)) return i;
    return std::nullopt;
  };
  // Omega^{-2}-orbits
  std::vector<int> orbit_of(m, -1);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t i = 0; i < m; ++i) {
    if (orbit_of[i] >= 0) continue;
    std::vector<std::size_t> orb{i};
    bool ok = true;
    auto cur = candidates[i];
    for (std::size_t step = 0; step < 12; ++step) {
      cur = sc.cosyzygy_power(cur, 2);
      auto j = index_of(cur);
      if (!j) {
        ok = false;
        break;
      }
      if (*j == i) break;
      orb.push_back(*j);
    }
    if (!ok) continue;
    for (auto j : orb) orbit_of[j] = static_cast<int>(orbits.size());
    orbits.push_back(orb);
  }
  // rigidity: Hom(X, Omega^{-1} Y) = 0 and Hom(Y, Omega^{-1} X) = 0
  auto rigid_pair = [&](std::size_t x, std::size_t y) {
    return sc.stable_hom(candidates[x], sc.cosyzygy(candidates[y])).dim() == 0 &&
           sc.stable_hom(candidates[y], sc.cosyzygy(candidates[x])).dim() == 0;
  };
  const std::size_t no = orbits.size();
  std::vector<bool> self(no);
  for (std::size_t o = 0; o < no; ++o) {
    bool ok = true;
    for (auto j : orbits[o]) ok = ok && rigid_pair(orbits[o][0], j);
    self[o] = ok;
  }
  std::map<std::pair<std::size_t, std::size_t>, bool> compat;
  auto compatible = [&](std::size_t a, std::size_t b) {
    auto key = std::minmax(a, b);
    auto it = compat.find(key);
    if (it != compat.end()) return it->second;
    bool ok = true;
    for (auto j : orbits[b]) ok = ok && rigid_pair(orbits[a][0], j);
    compat[key] = ok;
    return ok;
  };
  std::vector<std::size_t> chosen;
  std::optional<std::vector<ModulePtr>> result;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t count) {
    if (result) return;
    if (count == size) {
      std::vector<ModulePtr> t;
      for (auto o : chosen)
        for (auto j : orbits[o]) t.push_back(candidates[j]);
      if (!accept || accept(t)) result = t;
      return;
    }
    for (std::size_t o = start; o < no && !result; ++o) {
      if (!self[o] || count + orbits[o].size() > size) continue;
      bool ok = true;
      for (auto c : chosen) ok = ok && compatible(c, o);
      if (!ok) continue;
      chosen.push_back(o);
      rec(o + 1, count + orbits[o].size());
      chosen.pop_back();
    }
  };
  rec(0, 0);
  return result;
}

std::vector<std::vector<std::size_t>> endomorphism_quiver(ClusterTilting& ct) {
  const auto& c = *ct.category();
  const std::size_t m = c.size();
  std::vector<std::vector<std::size_t>> q(m, std::vector<std::size_t>(m, 0));
  auto rad_start = [](std::size_t i, std::size_t j) { return i == j ? 1u : 0u; };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t dim = c.hom_dim(i, j);
      const std::size_t rad = dim - rad_start(i, j);
      if (rad == 0) continue;
      std::vector<Vec> rows;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t f = rad_start(i, k); f < c.hom_dim(i, k); ++f)
          for (std::size_t g = rad_start(k, j); g < c.hom_dim(k, j); ++g) {
            Vec fv(c.hom_dim(i, k), 0), gv(c.hom_dim(k, j), 0);
            fv[f] = 1;
            gv[g] = 1;
            rows.push_back(c.compose(i, k, j, gv, fv));
          }
      std::size_t r2 = 0;
      if (!rows.empty()) {
        Matrix a(c.p(), rows.size(), dim);
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t col = 0; col < dim; ++col) a.at(r, col) = rows[r][col];
        r2 = rank(a);
      }
      q[i][j] = rad - r2;
    }
  return q;
}

std::vector<std::vector<std::size_t>> presentation_quiver(const AlgebraPresentation& p) {
  const std::size_t m = p.quiver.vertices.size();
  std::vector<std::vector<std::size_t>> q(m, std::vector<std::size_t>(m, 0));
  for (const auto& a : p.quiver.arrows) ++q[a.source][a.target];
  return q;
}

std::optional<std::vector<std::size_t>> quiver_isomorphism(const std::vector<std::vector<std::size_t>>& a,
                                                           const std::vector<std::vector<std::size_t>>& b) {
  const std::size_t m = a.size();
  if (b.size() != m) return std::nullopt;
  auto signature = [&](const std::vector<std::vector<std::size_t>>& q, std::size_t v) {
    std::size_t in = 0, out = 0;
    for (std::size_t w = 0; w < m; ++w) {
      out += q[v][w];
      in += q[w][v];
    }
    return std::make_tuple(in, out, q[v][v]);
  };
  std::vector<std::size_t> map(m), used(m, 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t v) {
    if (v == m) return true;
    for (std::size_t w = 0; w < m; ++w) {
      if (used[w] || signature(a, v) != signature(b, w)) continue;
      bool ok = true;
      for (std::size_t u = 0; u < v && ok; ++u)
        ok = a[u][v] == b[map[u]][w] && a[v][u] == b[w][map[u]];
      if (!ok || a[v][v] != b[w][w]) continue;
      map[v] = w;
      used[w] = 1;
      if (rec(v + 1)) return true;
      used[w] = 0;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return map;
}

std::size_t stable_endomorphism_dim(ClusterTilting& ct) {
  const auto& c = *ct.category();
  std::size_t total = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) total += c.hom_dim(i, j);
  return total;
}

}  // namespace nangle
