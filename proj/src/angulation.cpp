#include "nangle/angulation.hpp"

#include <algorithm>
#include <json.hpp>

namespace nangle {

namespace {

Residue sign_pow(std::size_t n, std::uint32_t p) { return n % 2 == 0 ? 1 : p - 1; }

Matrix column_of(const Vec& v, std::uint32_t p) { return Matrix::column(p, v); }

// 2x2 block morphism [[a, b], [c, d]] from s1 + s2 to t1 + t2.
Morphism block2(const BasedCategory& c, const Object& s1, const Object& s2, const Object& t1, const Object& t2,
                const Morphism& a, const Morphism& b, const Morphism& cc, const Morphism& d) {
  Morphism m = c.zero(object_sum(s1, s2), object_sum(t1, t2));
  auto put = [&](const Morphism& f, std::size_t r0, std::size_t c0) {
    for (std::size_t l = 0; l < f.target.size(); ++l)
      for (std::size_t k = 0; k < f.source.size(); ++k) m.blocks[r0 + l][c0 + k] = f.blocks[l][k];
  };
  put(a, 0, 0);
  put(b, 0, s1.size());
  put(cc, t1.size(), 0);
  put(d, t1.size(), s1.size());
  return m;
}

// Matrix of a linear map on flattened morphisms, evaluated on unit vectors.
template <class F>
Matrix linear_matrix(std::uint32_t p, std::size_t in_dim, std::size_t out_dim, F&& f) {
  Matrix m(p, out_dim, in_dim);
  Vec e(in_dim, 0);
  for (std::size_t c = 0; c < in_dim; ++c) {
    e[c] = 1;
    Vec v = f(e);
    e[c] = 0;
    for (std::size_t r = 0; r < out_dim; ++r) m.at(r, c) = v[r];
  }
  return m;
}

Vec concat(const std::vector<Vec>& parts) {
  Vec out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// Per-vertex solve of mono * x = f.
ModuleMap factor_through_mono(const ModuleMap& mono, const ModuleMap& f) {
  ModuleMap out{f.source, mono.source, {}};
  for (std::size_t v = 0; v < f.comp.size(); ++v) {
    auto s = solve(mono.comp[v], f.comp[v]);
    if (!s.particular) throw NangleError("internal: map does not factor through the submodule");
    out.comp.push_back(*s.particular);
  }
  return out;
}

// The map c with c o epi = f, assuming ker epi lies in ker f.
ModuleMap factor_through_epi(const ModuleMap& epi, const ModuleMap& f) {
  ModuleMap out{epi.target, f.target, {}};
  for (std::size_t v = 0; v < f.comp.size(); ++v) {
    const auto& e = epi.comp[v];
    auto s = solve(e, Matrix::identity(e.p(), e.rows()));
    if (!s.particular) throw NangleError("internal: map is not surjective");
    out.comp.push_back(f.comp[v] * *s.particular);
  }
  return out;
}

}  // namespace

std::string check_sequence(const BasedCategory& c, const NSigmaSequence& x) {
  if (x.n < 3) return "arity must be at least 3";
  if (x.x.size() != x.n || x.a.size() != x.n) return "arity mismatch";
  for (std::size_t i = 0; i < x.n; ++i) {
    const Object& tgt = i + 1 < x.n ? x.x[i + 1] : c.shift(x.x[0]);
    if (x.a[i].source != x.x[i] || x.a[i].target != tgt) return "alpha_" + std::to_string(i + 1) + " has wrong ends";
  }
  return "";
}

bool is_complex(const BasedCategory& c, const NSigmaSequence& x) {
  for (std::size_t i = 0; i + 1 < x.n; ++i)
    if (!c.is_zero(c.compose(x.a[i + 1], x.a[i]))) return false;
  return c.is_zero(c.compose(c.shift(x.a[0]), x.a[x.n - 1]));
}

bool is_exact_sequence(const BasedCategory& c, const NSigmaSequence& x) {
  if (auto e = check_sequence(c, x); !e.empty()) throw InputError(e);
  if (!is_complex(c, x)) return false;
  std::vector<Morphism> maps = x.a;
  maps.push_back(c.shift(x.a[0]));
  for (std::size_t t = 0; t < c.size(); ++t) {
    std::vector<std::size_t> rk;
    for (const auto& m : maps) {
      Matrix r = c.represent(t, m);
      rk.push_back(r.empty() ? 0 : rank(r));
    }
    for (std::size_t i = 0; i < x.n; ++i)
      if (rk[i] + rk[i + 1] != c.dim_from(t, maps[i].target)) return false;
  }
  return true;
}

NSigmaSequence rotate_left(const BasedCategory& c, const NSigmaSequence& x, const Faults& f) {
  NSigmaSequence y;
  y.n = x.n;
  for (std::size_t i = 1; i < x.n; ++i) {
    y.x.push_back(x.x[i]);
    y.a.push_back(x.a[i]);
  }
  y.x.push_back(c.shift(x.x[0]));
  Residue s = sign_pow(x.n, c.p());
  if (f.rotation_sign) s = PrimeField(c.p()).neg(s);
  y.a.push_back(c.scale(c.shift(x.a[0]), s));
  return y;
}

NSigmaSequence rotate_right(const BasedCategory& c, const NSigmaSequence& x, const Faults& f) {
  NSigmaSequence y;
  y.n = x.n;
  Residue s = sign_pow(x.n, c.p());
  if (f.rotation_sign) s = PrimeField(c.p()).neg(s);
  y.x.push_back(c.unshift(x.x[x.n - 1]));
  y.a.push_back(c.scale(c.unshift(x.a[x.n - 1]), s));
  for (std::size_t i = 0; i + 1 < x.n; ++i) {
    y.x.push_back(x.x[i]);
    y.a.push_back(x.a[i]);
  }
  return y;
}

NSigmaSequence trivial_sequence(const BasedCategory& c, std::size_t n, const Object& x, std::size_t l) {
  if (l < 1 || l > n) throw InputError("slot out of range");
  NSigmaSequence s;
  s.n = n;
  s.x.assign(n, Object{});
  s.x[l - 1] = x;
  if (l < n)
    s.x[l] = x;
  else
    s.x[0] = c.unshift(x);
  for (std::size_t i = 0; i < n; ++i) {
    const Object& tgt = i + 1 < n ? s.x[i + 1] : c.shift(s.x[0]);
    s.a.push_back(i + 1 == l ? c.identity(x) : c.zero(s.x[i], tgt));
  }
  return s;
}

NSigmaSequence direct_sum(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y) {
  if (x.n != y.n) throw InputError("arity mismatch");
  NSigmaSequence s;
  s.n = x.n;
  for (std::size_t i = 0; i < x.n; ++i) {
    s.x.push_back(object_sum(x.x[i], y.x[i]));
    s.a.push_back(morphism_sum(c, x.a[i], y.a[i]));
  }
  return s;
}

SequenceMorphism identity_morphism(const BasedCategory& c, const NSigmaSequence& x) {
  SequenceMorphism m{x, x, {}};
  for (const auto& o : x.x) m.phi.push_back(c.identity(o));
  return m;
}

std::string check_morphism(const BasedCategory& c, const SequenceMorphism& phi) {
  const auto& x = phi.source;
  const auto& y = phi.target;
  if (x.n != y.n || phi.phi.size() != x.n) return "arity mismatch";
  for (std::size_t i = 0; i < x.n; ++i) {
    const Morphism next = i + 1 < x.n ? phi.phi[i + 1] : c.shift(phi.phi[0]);
    if (!c.equal(c.compose(next, x.a[i]), c.compose(y.a[i], phi.phi[i])))
      return "square " + std::to_string(i + 1) + " does not commute";
  }
  return "";
}

NSigmaSequence split_summand(const FunctorCategory& fc, const SequenceMorphism& e) {
  const auto& c = *fc.category();
  const auto& x = e.source;
  for (std::size_t i = 0; i < x.n; ++i)
    if (!c.equal(c.compose(e.phi[i], e.phi[i]), e.phi[i])) throw InputError("not an idempotent");
  if (auto err = check_morphism(c, e); !err.empty()) throw InputError("not a morphism of sequences: " + err);
  std::vector<Morphism> incl, proj;
  NSigmaSequence y;
  y.n = x.n;
  for (std::size_t i = 0; i < x.n; ++i) {
    auto rep = fc.representable(x.x[i]);
    auto img = image(fc.representable(e.phi[i], rep, rep));
    auto [obj, iso] = fc.represent_projective(img.sub);
    // iota: obj -> x_i, pi: x_i -> obj
    ModuleMap inc = compose(img.inclusion, iso);
    auto inv = inverse(iso);
    ModuleMap corestrict = factor_through_mono(img.inclusion, fc.representable(e.phi[i], rep, rep));
    ModuleMap pr = compose(*inv, corestrict);
    incl.push_back(fc.yoneda(inc, obj, x.x[i]));
    proj.push_back(fc.yoneda(pr, x.x[i], obj));
    y.x.push_back(obj);
  }
  for (std::size_t i = 0; i < x.n; ++i) {
    const Morphism p = i + 1 < x.n ? proj[i + 1] : c.shift(proj[0]);
    y.a.push_back(c.compose(p, c.compose(x.a[i], incl[i])));
  }
  return y;
}

NSigmaSequence cone(const BasedCategory& c, const SequenceMorphism& phi, const Faults& f) {
  const auto& x = phi.source;
  const auto& y = phi.target;
  const std::size_t n = x.n;
  auto xs = [&](std::size_t i) -> Object { return i < n ? x.x[i] : c.shift(x.x[i - n]); };  // 0-based
  auto as = [&](std::size_t i) -> Morphism { return i < n ? x.a[i] : c.shift(x.a[i - n]); };
  auto ph = [&](std::size_t i) -> Morphism { return i < n ? phi.phi[i] : c.shift(phi.phi[i - n]); };
  NSigmaSequence s;
  s.n = n;
  for (std::size_t i = 0; i < n; ++i) s.x.push_back(object_sum(xs(i + 1), y.x[i]));
  for (std::size_t i = 0; i < n; ++i) {
    const Object& ytgt = i + 1 < n ? y.x[i + 1] : c.shift(y.x[0]);
    Morphism lower = ph(i + 1);
    if (f.cone_entry && i == 0) lower = c.zero(lower.source, lower.target);
    s.a.push_back(block2(c, xs(i + 1), y.x[i], xs(i + 2), ytgt, c.neg(as(i + 1)), c.zero(y.x[i], xs(i + 2)), lower,
                         y.a[i]));
  }
  return s;
}

bool is_iso(const BasedCategory& c, const SequenceMorphism& phi) {
  for (const auto& m : phi.phi)
    if (!c.is_iso(m)) return false;
  return true;
}

bool is_weak_iso(const BasedCategory& c, const SequenceMorphism& phi) {
  const std::size_t n = phi.phi.size();
  std::vector<bool> iso;
  for (const auto& m : phi.phi) iso.push_back(c.is_iso(m));
  iso.push_back(iso[0]);  // Sigma preserves isomorphisms
  for (std::size_t i = 0; i < n; ++i)
    if (iso[i] && iso[i + 1]) return true;
  return false;
}

std::optional<std::vector<Morphism>> periodic_contraction(const BasedCategory& c, const NSigmaSequence& x) {
  const std::size_t n = x.n;
  std::vector<std::pair<Object, Object>> shape;  // eta_i: X_i -> X_{i-1}
  shape.push_back({x.x[0], c.unshift(x.x[n - 1])});
  for (std::size_t i = 1; i < n; ++i) shape.push_back({x.x[i], x.x[i - 1]});
  std::vector<std::size_t> off;
  std::size_t total = 0;
  for (const auto& [s, t] : shape) {
    off.push_back(total);
    total += c.hom_dim(s, t);
  }
  auto unpack = [&](const Vec& v) {
    std::vector<Morphism> eta;
    for (std::size_t i = 0; i < n; ++i) eta.push_back(c.unflatten(shape[i].first, shape[i].second, v, off[i]));
    return eta;
  };
  Morphism back = c.unshift(x.a[n - 1]);  // Sigma^{-1} X_n -> X_1
  auto lhs = [&](const std::vector<Morphism>& eta) {
    std::vector<Vec> parts;
    for (std::size_t i = 0; i < n; ++i) {
      Morphism in = i == 0 ? c.compose(back, eta[0]) : c.compose(x.a[i - 1], eta[i]);
      Morphism out = i + 1 < n ? c.compose(eta[i + 1], x.a[i]) : c.compose(c.shift(eta[0]), x.a[n - 1]);
      parts.push_back(c.flatten(c.add(in, out)));
    }
    return concat(parts);
  };
  std::vector<Vec> rhs_parts;
  for (std::size_t i = 0; i < n; ++i) rhs_parts.push_back(c.flatten(c.identity(x.x[i])));
  Vec rhs = concat(rhs_parts);
  Matrix a = linear_matrix(c.p(), total, rhs.size(), [&](const Vec& v) { return lhs(unpack(v)); });
  auto s = solve(a, column_of(rhs, c.p()));
  if (!s.particular) return std::nullopt;
  return unpack(s.particular->col(0));
}

std::optional<std::vector<std::pair<std::size_t, Object>>> decompose_contractible(const FunctorCategory& fc,
                                                                                 const NSigmaSequence& x) {
  const auto& c = *fc.category();
  auto eta = periodic_contraction(c, x);
  if (!eta) return std::nullopt;
  std::vector<std::pair<std::size_t, Object>> out;
  for (std::size_t i = 0; i < x.n; ++i) {
    Morphism next = i + 1 < x.n ? (*eta)[i + 1] : c.shift((*eta)[0]);
    Morphism e = c.compose(next, x.a[i]);  // idempotent on X_i
    auto rep = fc.representable(x.x[i]);
    auto img = image(fc.representable(e, rep, rep));
    if (img.sub->total_dim() == 0) continue;
    out.push_back({i + 1, fc.represent_projective(img.sub).first});
  }
  return out;
}

SequenceMorphism CompletionSpace::at(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y,
                                     const Morphism& phi1, const Morphism& phi2, const Vec& coeffs) const {
  Vec v = particular;
  PrimeField f(c.p());
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k])
      for (std::size_t r = 0; r < v.size(); ++r) v[r] = f.add(v[r], f.mul(coeffs[k], kernel(r, k)));
  SequenceMorphism m{x, y, {phi1, phi2}};
  std::size_t pos = 0;
  for (const auto& [s, t] : shapes) {
    m.phi.push_back(c.unflatten(s, t, v, pos));
    pos += c.hom_dim(s, t);
  }
  return m;
}

std::optional<CompletionSpace> completion_space(const BasedCategory& c, const NSigmaSequence& x,
                                                const NSigmaSequence& y, const Morphism& phi1, const Morphism& phi2) {
  const std::size_t n = x.n;
  if (!c.equal(c.compose(y.a[0], phi1), c.compose(phi2, x.a[0]))) throw InputError("the given square does not commute");
  CompletionSpace cs;
  std::vector<std::size_t> off;
  std::size_t total = 0;
  for (std::size_t i = 2; i < n; ++i) {
    cs.shapes.push_back({x.x[i], y.x[i]});
    off.push_back(total);
    total += c.hom_dim(x.x[i], y.x[i]);
  }
  auto unpack = [&](const Vec& v) {
    std::vector<Morphism> phi;
    for (std::size_t i = 0; i < cs.shapes.size(); ++i)
      phi.push_back(c.unflatten(cs.shapes[i].first, cs.shapes[i].second, v, off[i]));
    return phi;  // phi[k] is phi_{k+3}
  };
  // square i (1-based, 2..n): phi_{i+1} alpha_i - beta_i phi_i = 0 with phi_{n+1} = Sigma phi_1
  auto lhs = [&](const std::vector<Morphism>& phi) {
    std::vector<Vec> parts;
    for (std::size_t i = 2; i <= n; ++i) {
      Morphism term(c.zero(x.x[i - 1], i < n ? y.x[i] : c.shift(y.x[0])));
      if (i + 1 <= n) term = c.add(term, c.compose(phi[i + 1 - 3], x.a[i - 1]));
      if (i >= 3) term = c.add(term, c.neg(c.compose(y.a[i - 1], phi[i - 3])));
      parts.push_back(c.flatten(term));
    }
    return concat(parts);
  };
  std::vector<Vec> rhs_parts;
  for (std::size_t i = 2; i <= n; ++i) {
    Morphism term(c.zero(x.x[i - 1], i < n ? y.x[i] : c.shift(y.x[0])));
    if (i == 2) term = c.add(term, c.compose(y.a[1], phi2));
    if (i == n) term = c.add(term, c.neg(c.compose(c.shift(phi1), x.a[n - 1])));
    rhs_parts.push_back(c.flatten(term));
  }
  // Signs: lhs collects phi_{i+1} alpha_i - beta_i phi_i over unknowns; known parts go right.
  Vec rhs = concat(rhs_parts);
  Matrix a = linear_matrix(c.p(), total, rhs.size(), [&](const Vec& v) { return lhs(unpack(v)); });
  auto s = solve(a, column_of(rhs, c.p()));
  if (!s.particular) return std::nullopt;
  cs.particular = s.particular->col(0);
  cs.kernel = s.kernel;
  return cs;
}

std::optional<SequenceMorphism> complete_morphism(const BasedCategory& c, const NSigmaSequence& x,
                                                  const NSigmaSequence& y, const Morphism& phi1,
                                                  const Morphism& phi2) {
  auto cs = completion_space(c, x, y, phi1, phi2);
  if (!cs) return std::nullopt;
  return cs->at(c, x, y, phi1, phi2, Vec(cs->kernel.cols(), 0));
}

std::vector<std::pair<Morphism, Morphism>> commuting_pairs(const BasedCategory& c, const NSigmaSequence& x,
                                                           const NSigmaSequence& y) {
  const std::size_t d1 = c.hom_dim(x.x[0], y.x[0]), d2 = c.hom_dim(x.x[1], y.x[1]);
  auto eval = [&](const Vec& v) {
    Morphism p1 = c.unflatten(x.x[0], y.x[0], v, 0);
    Morphism p2 = c.unflatten(x.x[1], y.x[1], v, d1);
    return c.flatten(c.add(c.compose(y.a[0], p1), c.neg(c.compose(p2, x.a[0]))));
  };
  const std::size_t out = c.hom_dim(x.x[0], y.x[1]);
  Matrix a = linear_matrix(c.p(), d1 + d2, out, eval);
  Matrix k = out == 0 ? Matrix::identity(c.p(), d1 + d2) : kernel_basis(a);
  std::vector<std::pair<Morphism, Morphism>> res;
  for (std::size_t j = 0; j < k.cols(); ++j) {
    Vec v = k.col(j);
    res.push_back({c.unflatten(x.x[0], y.x[0], v, 0), c.unflatten(x.x[1], y.x[1], v, d1)});
  }
  return res;
}

ConeSearch complete_with_exact_cone(const BasedCategory& c, const NSigmaSequence& x, const NSigmaSequence& y,
                                    const Morphism& phi1, const Morphism& phi2, AngleClassOracle& oracle,
                                    std::mt19937_64& rng, std::size_t max_sweep_bits, std::size_t sample_cap,
                                    const Faults& faults) {
  ConeSearch r;
  auto cs = completion_space(c, x, y, phi1, phi2);
  if (!cs) return r;
  const std::size_t k = cs->kernel.cols();
  r.kernel_dim = k;
  double bits = static_cast<double>(k) * std::log2(static_cast<double>(c.p()));
  auto test = [&](const Vec& coeffs) {
    ++r.tried;
    auto m = cs->at(c, x, y, phi1, phi2, coeffs);
    if (oracle.member(cone(c, m, faults))) {
      r.found = m;
      return true;
    }
    return false;
  };
  if (bits <= static_cast<double>(max_sweep_bits)) {
    r.exhaustive = true;
    Vec coeffs(k, 0);
    while (true) {
      if (test(coeffs)) return r;
      std::size_t i = 0;
      while (i < k && ++coeffs[i] == c.p()) coeffs[i++] = 0;
      if (i == k) break;
    }
    return r;
  }
  Vec coeffs(k, 0);
  if (test(coeffs)) return r;
  for (std::size_t s = 1; s < sample_cap; ++s) {
    for (auto& v : coeffs) v = static_cast<Residue>(rng() % c.p());
    if (test(coeffs)) return r;
  }
  return r;
}

Delta delta_of(FunctorCategory& fc, const NSigmaSequence& x) {
  const auto& c = *fc.category();
  if (!is_exact_sequence(c, x)) throw NangleError("delta needs an exact sequence");
  auto& sc = fc.stable();
  const std::size_t n = x.n;
  std::vector<ModulePtr> y;
  for (const auto& o : x.x) y.push_back(fc.representable(o));
  Object sx1 = c.shift(x.x[0]);
  y.push_back(fc.representable(sx1));
  y.push_back(fc.representable(c.shift(x.x[1])));
  std::vector<ModuleMap> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(fc.representable(x.a[i], y[i], y[i + 1]));
  a.push_back(fc.representable(c.shift(x.a[0]), y[n], y[n + 1]));
  std::vector<SubmoduleData> k;
  for (std::size_t i = 0; i <= n; ++i) k.push_back(kernel(a[i]));
  ModulePtr w = k[0].sub;
  ModuleMap cmp = identity_map(w);
  for (std::size_t i = 0; i < n; ++i) {
    auto env = sc.envelope(w);
    MapSystem sys(y[i], env->injective);
    sys.precompose_equals(k[i].inclusion, compose(env->mono, cmp));
    auto g = sys.solve_one();
    if (!g) throw NangleError("internal: comparison map does not extend");
    ModuleMap e = factor_through_mono(k[i + 1].inclusion, a[i]);
    cmp = factor_through_epi(e, compose(env->projection, *g));
    w = env->cosyzygy;
  }
  Delta d;
  d.kernel = k[0].sub;
  d.shifted = fc.twist(d.kernel);
  d.target = w;
  auto ty = fc.twist(y[0]);
  ModuleMap j = compose(fc.twist_representable(x.x[0], ty, y[n]), fc.twist(k[0].inclusion, d.shifted, ty));
  ModuleMap s = factor_through_mono(k[n].inclusion, j);
  d.map = compose(cmp, s);
  return d;
}

ModuleMap sigma_iso(FunctorCategory& fc, const ModulePtr& m, const ModulePtr& sigma_cosyz, const ModulePtr& sigma_m) {
  auto& sc = fc.stable();
  const auto& c = *fc.category();
  auto env = sc.envelope(m);
  auto ti = fc.twist(env->injective);
  ModuleMap tmono = fc.twist(env->mono, sigma_m, ti);
  auto env2 = sc.envelope(sigma_m);
  MapSystem sys(ti, env2->injective);
  sys.precompose_equals(tmono, env2->mono);
  auto g = sys.solve_one();
  if (!g) throw NangleError("internal: envelopes are not comparable");
  ModuleMap out{sigma_cosyz, env2->cosyzygy, std::vector<Matrix>(c.size())};
  for (std::size_t s = 0; s < c.size(); ++s) {
    const std::size_t t = c.sigma(s);
    out.comp[t] = env2->projection.comp[t] * g->comp[t] * env->section[s];
  }
  return out;
}

std::optional<ModuleMap> stable_inverse(StableCategory& sc, const ModuleMap& f) {
  auto back = sc.stable_hom(f.target, f.source);
  auto ea = sc.stable_hom(f.source, f.source);
  auto eb = sc.stable_hom(f.target, f.target);
  const std::size_t d = back.dim();
  if (ea.dim() == 0 && eb.dim() == 0) return zero_map(f.target, f.source);
  Matrix a(f.p(), ea.dim() + eb.dim(), d);
  for (std::size_t j = 0; j < d; ++j) {
    auto g = back.element(j);
    auto c1 = ea.coords(compose(g, f));
    auto c2 = eb.coords(compose(f, g));
    for (std::size_t r = 0; r < c1.size(); ++r) a.at(r, j) = c1[r];
    for (std::size_t r = 0; r < c2.size(); ++r) a.at(c1.size() + r, j) = c2[r];
  }
  Vec rhs = ea.coords(identity_map(f.source));
  Vec r2 = eb.coords(identity_map(f.target));
  rhs.insert(rhs.end(), r2.begin(), r2.end());
  auto s = solve(a, column_of(rhs, f.p()));
  if (!s.particular) return std::nullopt;
  return back.representative(s.particular->col(0));
}

ThetaFamily::ThetaFamily(FunctorCategory* fc, std::size_t n, Provider provider)
    : fc_(fc), n_(n), provider_(std::move(provider)) {}

std::size_t ThetaFamily::add(const ModulePtr& rep, const ModuleMap& value) {
  reps_.push_back(rep);
  twisted_.push_back(value.source);
  values_.push_back(value);
  return reps_.size() - 1;
}

std::optional<std::pair<std::size_t, ModuleMap>> ThetaFamily::locate(const ModulePtr& m) {
  for (std::size_t j = 0; j < reps_.size(); ++j) {
    if (reps_[j]->dims() != m->dims()) continue;
    if (auto iso = indecomposable_iso(reps_[j], m)) return std::make_pair(j, *iso);
  }
  if (!provider_) return std::nullopt;
  auto tw = fc_->twist(m);
  auto v = provider_(m, tw);
  if (!v) return std::nullopt;
  return std::make_pair(add(m, *v), identity_map(m));
}

std::optional<ModuleMap> ThetaFamily::at(const ModulePtr& k, const ModulePtr& twisted) {
  auto& sc = fc_->stable();
  auto tgt = sc.cosyzygy_power(k, n_);
  ModuleMap total = zero_map(twisted, tgt);
  for (const auto& pc : decompose(k)) {
    if (sc.is_projective_indecomposable(pc.module)) continue;
    for (std::size_t c = 0; c < pc.multiplicity(); ++c) {
      auto loc = locate(pc.module);
      if (!loc) return std::nullopt;
      auto [j, psi] = *loc;
      ModuleMap iota = compose(pc.inclusions[c], psi);
      ModuleMap pi = compose(*inverse(psi), pc.projections[c]);
      ModuleMap term = compose(sc.cosyzygy_power_map(iota, n_),
                               compose(values_[j], fc_->twist(pi, twisted, twisted_[j])));
      total = total + term;
    }
  }
  return total;
}

ThetaFamily::Validation ThetaFamily::validate() {
  Validation v;
  auto& sc = fc_->stable();
  const std::size_t count = reps_.size();
  const Residue sign = sign_pow(n_, fc_->category()->p());
  for (std::size_t j = 0; j < count; ++j)
    if (!stable_inverse(sc, values_[j])) {
      v.isos = false;
      v.detail += "Theta at " + reps_[j]->label() + " is not a stable isomorphism; ";
    }
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = 0; k < count; ++k) {
      auto h = sc.stable_hom(reps_[j], reps_[k]);
      auto chk = sc.stable_hom(twisted_[j], values_[k].target);
      for (std::size_t b = 0; b < h.dim(); ++b) {
        auto f = h.element(b);
        ModuleMap lhs = compose(values_[k], fc_->twist(f, twisted_[j], twisted_[k]));
        ModuleMap rhs = compose(sc.cosyzygy_power_map(f, n_), values_[j]);
        if (!chk.is_zero(lhs - rhs)) {
          v.natural = false;
          v.detail += "naturality fails on " + reps_[j]->label() + " -> " + reps_[k]->label() + "; ";
        }
      }
    }
  for (std::size_t j = 0; j < count; ++j) {
    auto cm = sc.cosyzygy(reps_[j]);
    if (sc.is_stably_zero(cm)) continue;
    auto tcm = fc_->twist(cm);
    ModuleMap sig = sigma_iso(*fc_, reps_[j], tcm, twisted_[j]);
    auto th = at(cm, tcm);
    if (!th) {
      v.compatible = false;
      v.detail += "no Theta value at the cosyzygy of " + reps_[j]->label() + "; ";
      continue;
    }
    ModuleMap lhs = scaled(*th, sign);
    ModuleMap rhs = compose(sc.cosyzygy_map(values_[j]), sig);
    auto chk = sc.stable_hom(tcm, lhs.target);
    if (!chk.is_zero(lhs - rhs)) {
      v.compatible = false;
      const auto& l = reps_[j]->label();
      v.detail += "triangle compatibility fails at " + (l.empty() ? "representative " + std::to_string(j) : l) + "; ";
    }
  }
  return v;
}

bool theta_membership(ThetaFamily& theta, const NSigmaSequence& x) {
  auto& fc = theta.functors();
  const auto& c = *fc.category();
  if (!is_exact_sequence(c, x)) return false;
  auto& sc = fc.stable();
  auto k = kernel(fc.representable(x.a[0]));
  if (sc.is_stably_zero(k.sub)) return true;
  Delta d = delta_of(fc, x);
  auto th = theta.at(d.kernel, d.shifted);
  if (!th) return false;
  return sc.stable_hom(d.shifted, d.target).is_zero(d.map - *th);
}

std::optional<ThetaFamily> act_on_class(const UnitFamily& u, const ThetaFamily& theta) {
  ThetaFamily out = theta;
  auto& fc = theta.functors();
  auto& sc = fc.stable();
  const std::size_t count = theta.size();
  if (u.values.size() != count) return std::nullopt;
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = 0; k < count; ++k) {
      auto h = sc.stable_hom(theta.rep(j), theta.rep(k));
      auto chk = sc.stable_hom(u.values[j].source, u.values[k].target);
      for (std::size_t b = 0; b < h.dim(); ++b) {
        auto f = sc.cosyzygy_power_map(h.element(b), theta.n());
        if (!chk.is_zero(compose(u.values[k], f) - compose(f, u.values[j]))) return std::nullopt;
      }
    }
  for (std::size_t j = 0; j < count; ++j) out.set_value(j, compose(u.values[j], theta.value(j)));
  return out;
}

std::optional<UnitFamily> unit_between(const ThetaFamily& a, const ThetaFamily& b) {
  auto& sc = a.functors().stable();
  UnitFamily u;
  for (std::size_t j = 0; j < a.size(); ++j) {
    auto inv = stable_inverse(sc, a.value(j));
    if (!inv) return std::nullopt;
    u.values.push_back(compose(b.value(j), *inv));
  }
  if (!act_on_class(u, a)) return std::nullopt;
  return u;
}

bool same_theta(const ThetaFamily& a, const ThetaFamily& b) {
  auto& sc = a.functors().stable();
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (!sc.stable_hom(a.value(j).source, a.value(j).target).is_zero(a.value(j) - b.value(j))) return false;
  return true;
}

ThetaOracle::ThetaOracle(CategoryPtr c, ThetaFamily* theta, std::vector<NSigmaSequence> pool)
    : cat_(std::move(c)), theta_(theta), pool_(std::move(pool)) {}

std::optional<NSigmaSequence> ThetaOracle::complete(const Morphism& f) {
  for (const auto& x : pool_)
    if (cat_->equal(x.a[0], f) && member(x)) return x;
  return std::nullopt;
}

namespace {

bool same_sequence(const BasedCategory& c, const NSigmaSequence& a, const NSigmaSequence& b) {
  if (a.n != b.n || a.x != b.x) return false;
  for (std::size_t i = 0; i < a.n; ++i)
    if (!c.equal(a.a[i], b.a[i])) return false;
  return true;
}

}  // namespace

ListOracle::ListOracle(CategoryPtr c, std::size_t n, std::vector<NSigmaSequence> list)
    : cat_(std::move(c)), n_(n), list_(std::move(list)) {}

bool ListOracle::member(const NSigmaSequence& x) {
  for (const auto& y : list_)
    if (same_sequence(*cat_, x, y)) return true;
  return false;
}

std::optional<NSigmaSequence> ListOracle::complete(const Morphism& f) {
  for (const auto& x : list_)
    if (cat_->equal(x.a[0], f)) return x;
  return std::nullopt;
}

std::string to_json(const BasedCategory& c, const Morphism& f) {
  nlohmann::json j;
  j["source"] = f.source;
  j["target"] = f.target;
  j["blocks"] = f.blocks;
  (void)c;
  return j.dump();
}

std::string to_json(const BasedCategory& c, const NSigmaSequence& x) {
  nlohmann::json j;
  j["n"] = x.n;
  j["objects"] = x.x;
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& m : x.a) maps.push_back(nlohmann::json::parse(to_json(c, m)));
  j["maps"] = maps;
  return j.dump();
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> sample_pairs(std::size_t n, std::size_t cap, std::mt19937_64& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> all;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) all.push_back({i, j});
  if (all.size() <= cap) return all;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(cap);
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace

std::vector<AxiomResult> verify_axioms(AngleClassOracle& oracle, const VerifyInput& in, const VerifyOptions& opt,
                                       FunctorCategory* fc) {
  const auto& c = oracle.category();
  std::mt19937_64 rng(opt.seed);
  auto wanted = [&](const std::string& a) {
    if (opt.axioms.empty()) return true;
    if (opt.axioms.count(a)) return true;
    return a.size() == 3 && opt.axioms.count(a.substr(0, 2)) > 0;
  };
  std::vector<AxiomResult> out;
  auto fail = [](AxiomResult& r, const std::string& ce, const std::string& note) {
    if (r.status == "fail") return;
    r.status = "fail";
    r.counterexample = ce;
    r.note = note;
  };

  if (wanted("exactness")) {
    AxiomResult r{"exactness", "pass", 0, "", ""};
    for (const auto& x : in.members) {
      ++r.samples;
      if (!is_exact_sequence(c, x)) fail(r, to_json(c, x), "member is not exact");
    }
    out.push_back(r);
  }
  if (wanted("F1a")) {
    AxiomResult r{"F1a", "pass", 0, "", ""};
    for (auto [i, j] : sample_pairs(in.members.size(), opt.pair_samples, rng)) {
      auto s = direct_sum(c, in.members[i], in.members[j]);
      ++r.samples;
      if (!oracle.member(s)) {
        fail(r, to_json(c, s), "direct sum of members is not a member");
        continue;
      }
      if (fc) {
        SequenceMorphism e = identity_morphism(c, s);
        for (std::size_t k = 0; k < s.n; ++k) {
          const auto& a = in.members[i].x[k];
          for (std::size_t l = 0; l < e.phi[k].target.size(); ++l)
            for (std::size_t m = 0; m < e.phi[k].source.size(); ++m)
              if (l >= a.size() || m >= a.size())
                std::fill(e.phi[k].blocks[l][m].begin(), e.phi[k].blocks[l][m].end(), 0);
        }
        auto part = split_summand(*fc, e);
        ++r.samples;
        if (!oracle.member(part)) fail(r, to_json(c, part), "summand of a member is not a member");
      }
    }
    out.push_back(r);
  }
  if (wanted("F1b")) {
    AxiomResult r{"F1b", "pass", 0, "", ""};
    for (const auto& o : in.objects)
      for (std::size_t l = 1; l <= oracle.arity(); ++l) {
        auto t = trivial_sequence(c, oracle.arity(), o, l);
        ++r.samples;
        if (!oracle.member(t)) fail(r, to_json(c, t), "trivial sequence is not a member");
      }
    out.push_back(r);
  }
  if (wanted("F1c")) {
    AxiomResult r{"F1c", "pass", 0, "", ""};
    std::size_t missing = 0;
    for (const auto& f : in.morphisms) {
      ++r.samples;
      auto s = oracle.complete(f);
      if (!s) {
        ++missing;
        continue;
      }
      if (!c.equal(s->a[0], f) || !oracle.member(*s)) fail(r, to_json(c, *s), "constructed sequence is not a member");
    }
    if (missing && r.status == "pass") {
      r.status = "budget";
      r.note = std::to_string(missing) + " morphisms could not be completed within the enumerated pool";
    }
    out.push_back(r);
  }
  if (wanted("F2")) {
    AxiomResult r{"F2", "pass", 0, "", ""};
    for (const auto& x : in.members) {
      for (auto rot : {rotate_left(c, x, opt.faults), rotate_right(c, x, opt.faults)}) {
        ++r.samples;
        if (!oracle.member(rot)) fail(r, to_json(c, x), "rotation of this member is not a member");
      }
    }
    for (const auto& x : in.nonmembers) {
      for (auto rot : {rotate_left(c, x, opt.faults), rotate_right(c, x, opt.faults)}) {
        ++r.samples;
        if (oracle.member(rot)) fail(r, to_json(c, x), "rotation of this non-member is a member");
      }
    }
    out.push_back(r);
  }
  bool f3 = wanted("F3"), f4 = wanted("F4");
  if (f3 || f4) {
    AxiomResult r3{"F3", "pass", 0, "", ""}, r4{"F4", "pass", 0, "", ""};
    std::size_t sweeps = 0, budget = 0;
    for (auto [i, j] : sample_pairs(in.members.size(), opt.pair_samples, rng)) {
      const auto& x = in.members[i];
      const auto& y = in.members[j];
      auto basis = commuting_pairs(c, x, y);
      std::vector<Morphism> b1, b2;
      for (auto& [p1, p2] : basis) {
        b1.push_back(p1);
        b2.push_back(p2);
      }
      for (std::size_t s = 0; s < opt.square_samples; ++s) {
        Vec coeff(basis.size());
        for (auto& v : coeff) v = static_cast<Residue>(rng() % c.p());
        Morphism p1 = c.zero(x.x[0], y.x[0]), p2 = c.zero(x.x[1], y.x[1]);
        for (std::size_t k = 0; k < basis.size(); ++k) {
          p1 = c.add(p1, c.scale(b1[k], coeff[k]));
          p2 = c.add(p2, c.scale(b2[k], coeff[k]));
        }
        if (f3) {
          ++r3.samples;
          auto m = complete_morphism(c, x, y, p1, p2);
          if (!m) fail(r3, "[" + to_json(c, x) + "," + to_json(c, y) + "," + to_json(c, p1) + "," + to_json(c, p2) + "]",
                       "commuting square does not complete");
        }
        if (f4) {
          ++r4.samples;
          auto cs = complete_with_exact_cone(c, x, y, p1, p2, oracle, rng, opt.max_sweep_bits, opt.sample_cap, opt.faults);
          if (cs.exhaustive) ++sweeps;
          if (!cs.found) {
            if (cs.exhaustive || cs.kernel_dim == 0)
              fail(r4, "[" + to_json(c, x) + "," + to_json(c, y) + "," + to_json(c, p1) + "," + to_json(c, p2) + "]",
                   "no completion has a member cone (searched " + std::to_string(cs.tried) + ")");
            else
              ++budget;
          }
        }
      }
    }
    if (f3) out.push_back(r3);
    if (f4) {
      if (r4.status == "pass" && budget) {
        r4.status = "budget";
        r4.note = std::to_string(budget) + " squares exceeded the sampling cap";
      }
      if (r4.note.empty()) r4.note = std::to_string(sweeps) + " of " + std::to_string(r4.samples) + " searches exhaustive";
      out.push_back(r4);
    }
  }
  std::sort(out.begin(), out.end(), [](const AxiomResult& a, const AxiomResult& b) { return a.axiom < b.axiom; });
  return out;
}

Morphism random_morphism(const BasedCategory& c, const Object& x, const Object& y, std::mt19937_64& rng) {
  Vec v(c.hom_dim(x, y));
  for (auto& e : v) e = static_cast<Residue>(rng() % c.p());
  return c.unflatten(x, y, v);
}

std::optional<Morphism> random_automorphism(const BasedCategory& c, const Object& x, std::mt19937_64& rng,
                                            std::size_t tries) {
  for (std::size_t t = 0; t < tries; ++t) {
    auto g = random_morphism(c, x, x, rng);
    if (c.is_iso(g)) return g;
  }
  return std::nullopt;
}

NSigmaSequence conjugate(const BasedCategory& c, const NSigmaSequence& x, const std::vector<Morphism>& g) {
  NSigmaSequence y = x;
  for (std::size_t i = 0; i < x.n; ++i) {
    const Morphism next = i + 1 < x.n ? g[i + 1] : c.shift(g[0]);
    auto inv = c.inverse(g[i]);
    if (!inv) throw NangleError("conjugate: not an isomorphism");
    y.a[i] = c.compose(next, c.compose(x.a[i], *inv));
  }
  return y;
}

WeakIsoReport weak_iso_suite(AngleClassOracle& oracle, const std::vector<NSigmaSequence>& seeds,
                             std::size_t samples, std::mt19937_64& rng) {
  WeakIsoReport rep;
  const auto& c = oracle.category();
  if (seeds.empty()) return rep;
  auto fail = [&](const std::string& why, const NSigmaSequence& x, const NSigmaSequence& y) {
    if (rep.counterexample.empty()) {
      nlohmann::json j;
      j["reason"] = why;
      j["source"] = nlohmann::json::parse(to_json(c, x));
      j["target"] = nlohmann::json::parse(to_json(c, y));
      rep.counterexample = j.dump();
    }
    ++rep.failures;
  };
  auto check = [&](const NSigmaSequence& x, const NSigmaSequence& y, const SequenceMorphism& phi) {
    ++rep.samples;
    if (!is_weak_iso(c, phi) || !check_morphism(c, phi).empty()) return fail("not a weak isomorphism", x, y);
    if (oracle.member(x) != oracle.member(y)) return fail("membership differs", x, y);
    if (!periodic_contraction(c, cone(c, phi))) return fail("cone not contractible", x, y);
  };
  for (std::size_t s = 0; rep.samples < samples && s < 8 * samples; ++s) {
    const auto& x = seeds[s % seeds.size()];
    std::vector<Morphism> g;
    for (const auto& o : x.x) {
      auto a = random_automorphism(c, o, rng);
      if (!a) break;
      g.push_back(*a);
    }
    if (g.size() != x.n) {
      ++rep.skipped;
      continue;
    }
    if (s % 2 == 0) {
      // only phi_1, phi_2 invertible: the rest comes from completing into a member
      if (!oracle.member(x)) {
        ++rep.skipped;
        continue;
      }
      auto inv = c.inverse(g[0]);
      auto y = oracle.complete(c.compose(g[1], c.compose(x.a[0], *inv)));
      auto phi = y ? complete_morphism(c, x, *y, g[0], g[1]) : std::nullopt;
      if (!phi) {
        ++rep.skipped;
        continue;
      }
      check(x, *y, *phi);
    } else {
      auto y = conjugate(c, x, g);
      check(x, y, SequenceMorphism{x, y, g});
    }
  }
  return rep;
}

}  // namespace nangle
