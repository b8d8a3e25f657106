#include "nangle/heller.hpp"

#include <map>

namespace nangle {

namespace {

Morphism radical_map() { return Morphism{{0}, {0}, {{Vec{0, 1}}}}; }

// All vectors in the column span of k.
std::vector<Vec> span_of(const Matrix& k, std::size_t dim, std::uint32_t p) {
  std::vector<Vec> out;
  const std::size_t d = k.cols();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= p;
  PrimeField f(p);
  for (std::uint64_t t = 0; t < total; ++t) {
    Vec v(dim, 0);
    std::uint64_t r = t;
    for (std::size_t j = 0; j < d; ++j, r /= p) {
      Residue c = static_cast<Residue>(r % p);
      if (!c) continue;
      for (std::size_t i = 0; i < dim; ++i) v[i] = f.add(v[i], f.mul(c, k(i, j)));
    }
    out.push_back(std::move(v));
  }
  return out;
}

// Matrix of the linear map alpha -> flatten(post(alpha)) on Hom(x, y).
Matrix linear_in(const BasedCategory& c, const Object& x, const Object& y,
                 const std::function<Morphism(const Morphism&)>& post) {
  const std::size_t dim = c.hom_dim(x, y);
  std::vector<Vec> cols;
  for (std::size_t j = 0; j < dim; ++j) {
    Vec e(dim, 0);
    e[j] = 1;
    cols.push_back(c.flatten(post(c.unflatten(x, y, e))));
  }
  const std::size_t rows = cols.empty() ? 0 : cols[0].size();
  Matrix m(c.p(), rows, dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  return m;
}

std::size_t rk(const BasedCategory& c, const Morphism& f) {
  if (f.source.empty() || f.target.empty()) return 0;
  return rank(c.represent(0, f));
}

// Rank of the map modulo the radical (basis element 0 of each block).
std::size_t top_rank(const BasedCategory& c, const Morphism& f) {
  if (f.source.empty() || f.target.empty()) return 0;
  Matrix m(c.p(), f.target.size(), f.source.size());
  for (std::size_t l = 0; l < f.target.size(); ++l)
    for (std::size_t k = 0; k < f.source.size(); ++k) m.at(l, k) = f.blocks[l][k][0];
  return rank(m);
}

struct Enumerator {
  const BasedCategory& c;
  std::size_t n, max_rank;
  std::vector<WeightedSequence> out;

  void extend(NSigmaSequence& s, std::uint64_t w) {
    const std::size_t i = s.a.size();  // next map alpha_{i+1}: X_{i+1} -> X_{i+2}
    const Morphism prev = s.a.back();
    if (i + 1 == n) {
      const Object xn = s.x.back();
      Object sx1 = c.shift(s.x[0]);
      Morphism sa1 = c.shift(s.a[0]);
      Matrix m = vstack(linear_in(c, xn, sx1, [&](const Morphism& a) { return c.compose(a, prev); }),
                        linear_in(c, xn, sx1, [&](const Morphism& a) { return c.compose(sa1, a); }));
      const std::size_t dim = c.hom_dim(xn, sx1);
      Matrix k = dim ? kernel_basis(m) : Matrix(c.p(), 0, 0);
      const std::size_t rp = rk(c, prev), r1 = rk(c, sa1);
      for (const auto& v : span_of(k, dim, c.p())) {
        Morphism a = c.unflatten(xn, sx1, v);
        std::size_t r = rk(c, a);
        if (rp + r != c.dim_from(0, xn) || r + r1 != c.dim_from(0, sx1)) continue;
        s.a.push_back(a);
        if (is_exact_sequence(c, s)) out.push_back({s, w});
        s.a.pop_back();
      }
      return;
    }
    const Object xi = s.x.back();
    const std::size_t rp = rk(c, prev);
    for (std::size_t r = 0; r <= max_rank; ++r) {
      Object y(r, 0);
      const std::size_t dim = c.hom_dim(xi, y);
      Matrix m = linear_in(c, xi, y, [&](const Morphism& a) { return c.compose(a, prev); });
      Matrix k = dim ? kernel_basis(m) : Matrix(c.p(), 0, 0);
      for (const auto& v : span_of(k, dim, c.p())) {
        Morphism a = c.unflatten(xi, y, v);
        if (rp + rk(c, a) != c.dim_from(0, xi)) continue;
        s.x.push_back(y);
        s.a.push_back(a);
        extend(s, w);
        s.a.pop_back();
        s.x.pop_back();
      }
    }
  }
};

}  // namespace

HellerCategory::HellerCategory(const AlgebraPtr& local, std::size_t n) : n_(n) {
  if (local->num_vertices() != 1 || local->dim() != 2)
    throw InputError("the Heller example needs a local algebra of dimension 2");
  rc_ = module_subcategory({projective_module(local, 0)});
  fc_ = std::make_unique<FunctorCategory>(rc_.category);
}

std::vector<ModulePtr> HellerCategory::representatives() {
  if (reps_.empty()) {
    NSigmaSequence s;
    s.n = n_;
    for (std::size_t i = 0; i < n_; ++i) {
      s.x.push_back({0});
      s.a.push_back(radical_map());
    }
    reps_.push_back(delta_of(*fc_, s).kernel);
  }
  return reps_;
}

std::vector<ThetaFamily> HellerCategory::candidates() {
  auto& sc = fc_->stable();
  auto r = representatives()[0];
  auto tw = fc_->twist(r);
  auto space = sc.stable_hom(tw, sc.cosyzygy_power(r, n_));
  if (space.dim() != 1) throw NangleError("expected a one-dimensional stable Hom for Theta");
  std::vector<ThetaFamily> out;
  for (Residue t = 1; t < category()->p(); ++t) {
    ThetaFamily th(fc_.get(), n_);
    th.add(r, scaled(space.element(0), t));
    out.push_back(std::move(th));
  }
  return out;
}

std::vector<WeightedSequence> enumerate_exact(const BasedCategory& c, std::size_t n, std::size_t max_rank,
                                              bool normal_form) {
  if (c.size() != 1) throw InputError("enumeration needs a category with one indecomposable");
  if (n < 3) throw InputError("n must be at least 3");
  Enumerator e{c, n, max_rank, {}};
  for (std::size_t r1 = 0; r1 <= max_rank; ++r1)
    for (std::size_t r2 = 0; r2 <= max_rank; ++r2) {
      Object x1(r1, 0), x2(r2, 0);
      const std::size_t dim = c.hom_dim(x1, x2);
      Matrix all = Matrix::identity(c.p(), dim);
      // over k[x]/x^2 an orbit of Aut x Aut is fixed by the rank and the rank modulo the radical
      std::map<std::pair<std::size_t, std::size_t>, std::pair<Morphism, std::uint64_t>> orbits;
      std::vector<std::pair<Morphism, std::uint64_t>> firsts;
      for (const auto& v : span_of(all, dim, c.p())) {
        Morphism a = c.unflatten(x1, x2, v);
        if (!normal_form) {
          firsts.push_back({a, 1});
          continue;
        }
        auto key = std::make_pair(rk(c, a), top_rank(c, a));
        auto it = orbits.find(key);
        if (it == orbits.end())
          orbits.emplace(key, std::make_pair(a, std::uint64_t{1}));
        else
          ++it->second.second;
      }
      for (auto& [key, rep] : orbits) firsts.push_back(rep);
      for (auto& [a, w] : firsts) {
        NSigmaSequence s;
        s.n = n;
        s.x = {x1, x2};
        s.a = {a};
        e.extend(s, w);
      }
    }
  return std::move(e.out);
}

bool HellerReport::ok() const {
  return candidates > 0 && inconsistent == 0 && overlaps == 0 && free_action && transitive;
}

nlohmann::json HellerReport::to_json() const {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& x : validation)
    v.push_back({{"isos", x.isos}, {"natural", x.natural}, {"compatible", x.compatible}, {"detail", x.detail}});
  return {{"candidates", candidates},   {"validation", v},         {"compatible", compatible},
          {"sequences", sequences},     {"weighted", weighted},    {"class_sizes", class_sizes},
          {"split_kernel", split_kernel}, {"outside", outside}, {"inconsistent", inconsistent},
          {"overlaps", overlaps},       {"units", units},          {"free", free_action},
          {"transitive", transitive},   {"ok", ok()}};
}

HellerReport heller_orbit_check(HellerCategory& h, std::size_t max_rank) {
  HellerReport rep;
  auto& fc = h.functors();
  auto& sc = fc.stable();
  const auto& c = *h.category();
  const std::uint32_t p = c.p();
  auto cands = h.candidates();
  rep.candidates = cands.size();
  for (auto& t : cands) {
    rep.validation.push_back(t.validate());
    if (rep.validation.back().isos && rep.validation.back().natural && rep.validation.back().compatible)
      ++rep.compatible;
  }
  rep.class_sizes.assign(cands.size(), 0);

  auto seqs = enumerate_exact(c, h.n(), max_rank, true);
  rep.sequences = seqs.size();
  for (const auto& [s, w] : seqs) {
    rep.weighted += w;
    std::vector<bool> labels;
    for (auto& t : cands) labels.push_back(theta_membership(t, s));
    std::vector<bool> expect(cands.size(), false);
    bool split = sc.is_stably_zero(kernel(fc.representable(s.a[0])).sub);
    if (split) {
      expect.assign(cands.size(), true);
      rep.split_kernel += w;
    } else {
      // delta is a multiple lambda of the first candidate; class theta holds it iff theta = lambda
      Delta d = delta_of(fc, s);
      auto base = cands[0].at(d.kernel, d.shifted);
      auto space = sc.stable_hom(d.shifted, d.target);
      bool found = false;
      for (Residue lam = 1; base && lam < p; ++lam)
        if (space.is_zero(d.map - scaled(*base, lam))) {
          expect[lam - 1] = true;
          found = true;
        }
      if (!found) rep.outside += w;
      std::size_t count = 0;
      for (bool b : labels) count += b;
      if (count > 1) ++rep.overlaps;
    }
    if (labels != expect) ++rep.inconsistent;
    for (std::size_t j = 0; j < cands.size(); ++j)
      if (labels[j]) rep.class_sizes[j] += w;
  }

  // unit families: natural stable automorphisms of Omega^{-n} R
  std::vector<std::pair<UnitFamily, bool>> units;  // (u, u == 1)
  {
    auto target = cands[0].value(0).target;
    auto end = sc.stable_hom(target, target);
    Matrix all = Matrix::identity(p, end.dim());
    for (const auto& v : span_of(all, end.dim(), p)) {
      auto u = end.representative(v);
      if (!stable_inverse(sc, u)) continue;
      UnitFamily fam{{u}};
      if (!act_on_class(fam, cands[0])) continue;
      units.push_back({fam, end.is_zero(u - identity_map(target))});
    }
  }
  rep.units = units.size();
  for (auto& t : cands)
    for (auto& [u, is_one] : units) {
      auto moved = act_on_class(u, t);
      if (!moved || (!is_one && same_theta(*moved, t))) rep.free_action = false;
    }
  for (auto& a : cands)
    for (auto& b : cands) {
      std::size_t hits = 0;
      for (auto& [u, is_one] : units) {
        auto moved = act_on_class(u, a);
        if (moved && same_theta(*moved, b)) ++hits;
      }
      if (hits != 1) rep.transitive = false;
    }
  return rep;
}

}  // namespace nangle
