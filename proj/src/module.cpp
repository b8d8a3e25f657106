#include <algorithm>
#include <random>

#include "nangle/algcore.hpp"

namespace nangle {

Module::Module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Matrix> gen_action,
               std::string label)
    : alg_(std::move(alg)), dims_(std::move(dims)), gen_action_(std::move(gen_action)), label_(std::move(label)) {
  const auto& a = *alg_;
  if (dims_.size() != a.num_vertices()) throw InputError("module dimension vector has wrong length");
  if (gen_action_.size() != a.generators.size()) throw InputError("module needs one matrix per arrow");
  offsets_.resize(dims_.size());
  for (std::size_t v = 0; v < dims_.size(); ++v) {
    offsets_[v] = total_;
    total_ += dims_[v];
  }
  for (std::size_t g = 0; g < gen_action_.size(); ++g) {
    const auto& gi = a.generator_info[g];
    if (gen_action_[g].rows() != dims_[gi.target] || gen_action_[g].cols() != dims_[gi.source])
      throw InputError("matrix for arrow '" + gi.label + "' has wrong shape");
    if (gen_action_[g].p() != a.p()) throw InputError("matrix for arrow '" + gi.label + "' over wrong field");
  }
  action_.reserve(a.dim());
  for (std::size_t b = 0; b < a.dim(); ++b) {
    const auto& be = a.basis[b];
    Matrix m(a.p(), dims_[be.target], dims_[be.source]);
    if (a.expansion[b].empty()) {
      m = Matrix::identity(a.p(), dims_[be.source]);
    } else {
      for (const auto& w : a.expansion[b]) {
        Matrix cur = Matrix::identity(a.p(), dims_[be.source]);
        for (auto g : w.word) cur = gen_action_[g] * cur;
        m.add_scaled(cur, w.coeff);
      }
    }
    action_.push_back(std::move(m));
  }
}

Matrix Module::act_element(const SparseVec& x, std::size_t s, std::size_t t) const {
  Matrix m(p(), dims_[t], dims_[s]);
  for (auto [b, c] : x) {
    const auto& be = alg_->basis[b];
    if (be.source == s && be.target == t) m.add_scaled(action_[b], c);
  }
  return m;
}

std::string Module::validate() const {
  const auto& a = *alg_;
  for (std::size_t g = 0; g < a.generators.size(); ++g) {
    const auto& gi = a.generator_info[g];
    if (!(act_element(a.generators[g], gi.source, gi.target) == gen_action_[g]))
      return "arrow '" + gi.label + "' disagrees with its normal form";
  }
  for (std::size_t b = 0; b < a.dim(); ++b) {
    const auto& be = a.basis[b];
    for (std::size_t g = 0; g < a.generators.size(); ++g) {
      const auto& gi = a.generator_info[g];
      if (gi.source != be.target) continue;
      SparseVec prod = a.multiply({{b, 1}}, a.generators[g]);
      if (!(act_element(prod, be.source, gi.target) == gen_action_[g] * action_[b]))
        return "relation fails: " + be.label + " then " + gi.label;
    }
  }
  return "";
}

ModulePtr make_module(AlgebraPtr alg, std::vector<std::size_t> dims, std::vector<Matrix> gen_action,
                      std::string label) {
  return std::make_shared<Module>(std::move(alg), std::move(dims), std::move(gen_action), std::move(label));
}

bool ModuleMap::is_zero() const {
  for (const auto& c : comp)
    if (!c.is_zero()) return false;
  return true;
}

bool ModuleMap::is_iso() const {
  if (source->dims() != target->dims()) return false;
  for (const auto& c : comp)
    if (rank(c) != c.rows()) return false;
  return true;
}

std::string ModuleMap::validate() const {
  const auto& a = *source->algebra();
  if (comp.size() != a.num_vertices()) return "wrong number of components";
  for (std::size_t v = 0; v < comp.size(); ++v)
    if (comp[v].rows() != target->dim(v) || comp[v].cols() != source->dim(v))
      return "component at vertex " + a.vertex_labels[v] + " has wrong shape";
  for (std::size_t g = 0; g < a.generators.size(); ++g) {
    const auto& gi = a.generator_info[g];
    if (!(target->gen(g) * comp[gi.source] == comp[gi.target] * source->gen(g)))
      return "square for arrow '" + gi.label + "' does not commute";
  }
  return "";
}

Matrix ModuleMap::total() const {
  Matrix m(p(), target->total_dim(), source->total_dim());
  for (std::size_t v = 0; v < comp.size(); ++v) m.set_block(target->offset(v), source->offset(v), comp[v]);
  return m;
}

std::vector<Residue> ModuleMap::vec() const {
  std::vector<Residue> out;
  for (const auto& c : comp) {
    auto v = c.vec();
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

ModuleMap identity_map(const ModulePtr& m) {
  ModuleMap f{m, m, {}};
  for (auto d : m->dims()) f.comp.push_back(Matrix::identity(m->p(), d));
  return f;
}

ModuleMap zero_map(const ModulePtr& s, const ModulePtr& t) {
  ModuleMap f{s, t, {}};
  for (std::size_t v = 0; v < s->dims().size(); ++v) f.comp.emplace_back(s->p(), t->dim(v), s->dim(v));
  return f;
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (g.source->dims() != f.target->dims()) throw InputError("composition of incompatible module maps");
  ModuleMap h{f.source, g.target, {}};
  for (std::size_t v = 0; v < f.comp.size(); ++v) h.comp.push_back(g.comp[v] * f.comp[v]);
  return h;
}

ModuleMap operator+(const ModuleMap& a, const ModuleMap& b) {
  ModuleMap h = a;
  for (std::size_t v = 0; v < a.comp.size(); ++v) h.comp[v] += b.comp[v];
  return h;
}

ModuleMap operator-(const ModuleMap& a, const ModuleMap& b) {
  ModuleMap h = a;
  for (std::size_t v = 0; v < a.comp.size(); ++v) h.comp[v] = a.comp[v] - b.comp[v];
  return h;
}

ModuleMap scaled(const ModuleMap& a, Residue s) {
  ModuleMap h = a;
  for (auto& c : h.comp) c = c.scaled(s);
  return h;
}

std::size_t hom_vec_size(const Module& s, const Module& t) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < s.dims().size(); ++v) n += s.dim(v) * t.dim(v);
  return n;
}

ModuleMap map_from_vec(const ModulePtr& s, const ModulePtr& t, const std::vector<Residue>& vec,
                       std::size_t offset) {
  ModuleMap f{s, t, {}};
  for (std::size_t v = 0; v < s->dims().size(); ++v) {
    f.comp.push_back(Matrix::unvec(s->p(), vec, t->dim(v), s->dim(v), offset));
    offset += t->dim(v) * s->dim(v);
  }
  return f;
}

std::optional<ModuleMap> inverse(const ModuleMap& f) {
  ModuleMap g{f.target, f.source, {}};
  for (const auto& c : f.comp) {
    auto i = invert(c);
    if (!i) return std::nullopt;
    g.comp.push_back(*i);
  }
  return g;
}

ModulePtr simple_module(const AlgebraPtr& a, std::size_t v) {
  std::vector<std::size_t> dims(a->num_vertices(), 0);
  dims[v] = 1;
  std::vector<Matrix> gens;
  for (const auto& gi : a->generator_info) gens.emplace_back(a->p(), dims[gi.target], dims[gi.source]);
  return make_module(a, dims, gens, "S_" + a->vertex_labels[v]);
}

ModulePtr projective_module(const AlgebraPtr& a, std::size_t v) {
  const std::size_t nv = a->num_vertices();
  std::vector<std::vector<std::size_t>> at(nv);
  std::vector<std::size_t> pos(a->dim(), 0);
  for (std::size_t w = 0; w < nv; ++w) {
    at[w] = a->elements_between(v, w);
    for (std::size_t i = 0; i < at[w].size(); ++i) pos[at[w][i]] = i;
  }
  std::vector<std::size_t> dims(nv);
  for (std::size_t w = 0; w < nv; ++w) dims[w] = at[w].size();
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < a->generators.size(); ++g) {
    const auto& gi = a->generator_info[g];
    Matrix m(a->p(), dims[gi.target], dims[gi.source]);
    for (std::size_t i = 0; i < at[gi.source].size(); ++i)
      for (auto [c, coef] : a->multiply({{at[gi.source][i], 1}}, a->generators[g]))
        m.at(pos[c], i) = a->field.add(m(pos[c], i), coef);
    gens.push_back(m);
  }
  return make_module(a, dims, gens, "P_" + a->vertex_labels[v]);
}

ModulePtr injective_module(const AlgebraPtr& a, std::size_t v) {
  const std::size_t nv = a->num_vertices();
  std::vector<std::vector<std::size_t>> at(nv);
  std::vector<std::size_t> pos(a->dim(), 0);
  for (std::size_t w = 0; w < nv; ++w) {
    at[w] = a->elements_between(w, v);
    for (std::size_t i = 0; i < at[w].size(); ++i) pos[at[w][i]] = i;
  }
  std::vector<std::size_t> dims(nv);
  for (std::size_t w = 0; w < nv; ++w) dims[w] = at[w].size();
  std::vector<Matrix> gens;
  // (phi . g)(b') = phi(g b') for b' in e_t A e_v.
  for (std::size_t g = 0; g < a->generators.size(); ++g) {
    const auto& gi = a->generator_info[g];
    Matrix m(a->p(), dims[gi.target], dims[gi.source]);
    for (std::size_t j = 0; j < at[gi.target].size(); ++j)
      for (auto [c, coef] : a->multiply(a->generators[g], {{at[gi.target][j], 1}}))
        m.at(j, pos[c]) = a->field.add(m(j, pos[c]), coef);
    gens.push_back(m);
  }
  return make_module(a, dims, gens, "I_" + a->vertex_labels[v]);
}

DirectSum direct_sum(const std::vector<ModulePtr>& parts, const AlgebraPtr& alg) {
  const std::size_t nv = alg->num_vertices();
  const auto p = alg->p();
  std::vector<std::size_t> dims(nv, 0);
  for (const auto& m : parts)
    for (std::size_t v = 0; v < nv; ++v) dims[v] += m->dim(v);
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg->generators.size(); ++g) {
    const auto& gi = alg->generator_info[g];
    Matrix m(p, dims[gi.target], dims[gi.source]);
    std::size_t r = 0, c = 0;
    for (const auto& part : parts) {
      m.set_block(r, c, part->gen(g));
      r += part->dim(gi.target);
      c += part->dim(gi.source);
    }
    gens.push_back(m);
  }
  std::string label;
  for (const auto& part : parts) label += (label.empty() ? "" : "+") + part->label();
  DirectSum ds;
  ds.sum = make_module(alg, dims, gens, label);
  std::vector<std::size_t> off(nv, 0);
  for (const auto& part : parts) {
    ModuleMap inc{part, ds.sum, {}}, proj{ds.sum, part, {}};
    for (std::size_t v = 0; v < nv; ++v) {
      Matrix i(p, dims[v], part->dim(v));
      for (std::size_t k = 0; k < part->dim(v); ++k) i.at(off[v] + k, k) = 1;
      proj.comp.push_back(i.transpose());
      inc.comp.push_back(std::move(i));
      off[v] += part->dim(v);
    }
    ds.inclusions.push_back(inc);
    ds.projections.push_back(proj);
  }
  return ds;
}

ModuleMap direct_sum_map(const DirectSum& src, const DirectSum& tgt,
                         const std::vector<std::vector<std::optional<ModuleMap>>>& blocks) {
  ModuleMap f = zero_map(src.sum, tgt.sum);
  for (std::size_t r = 0; r < blocks.size(); ++r)
    for (std::size_t c = 0; c < blocks[r].size(); ++c)
      if (blocks[r][c]) f = f + compose(tgt.inclusions[r], compose(*blocks[r][c], src.projections[c]));
  return f;
}

SubmoduleData submodule(const ModulePtr& m, const std::vector<Matrix>& basis) {
  const auto& alg = m->algebra();
  const std::size_t nv = alg->num_vertices();
  std::vector<std::size_t> dims(nv);
  for (std::size_t v = 0; v < nv; ++v) dims[v] = basis[v].cols();
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg->generators.size(); ++g) {
    const auto& gi = alg->generator_info[g];
    Matrix img = m->gen(g) * basis[gi.source];
    auto s = solve(basis[gi.target], img);
    if (!s.particular) throw NangleError("submodule basis is not closed under the action");
    gens.push_back(*s.particular);
  }
  SubmoduleData d;
  d.sub = make_module(alg, dims, gens);
  d.inclusion = ModuleMap{d.sub, m, basis};
  return d;
}

QuotientData quotient_module(const ModulePtr& m, const std::vector<Matrix>& sub_basis) {
  const auto& alg = m->algebra();
  const std::size_t nv = alg->num_vertices();
  const auto p = m->p();
  std::vector<Matrix> proj(nv), sect(nv);
  std::vector<std::size_t> dims(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const Matrix& u = sub_basis[v];
    const std::size_t n = m->dim(v);
    std::vector<std::size_t> piv, comp;
    if (u.cols() > 0) piv = rref(u.transpose()).pivots;
    std::vector<bool> isp(n, false);
    for (auto i : piv) isp[i] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!isp[i]) comp.push_back(i);
    dims[v] = comp.size();
    Matrix sc(p, comp.size(), n), sp(p, piv.size(), n), ec(p, n, comp.size());
    for (std::size_t k = 0; k < comp.size(); ++k) {
      sc.at(k, comp[k]) = 1;
      ec.at(comp[k], k) = 1;
    }
    for (std::size_t k = 0; k < piv.size(); ++k) sp.at(k, piv[k]) = 1;
    if (piv.empty()) {
      proj[v] = sc;
    } else {
      Matrix upinv = *invert(u.select_rows(piv));
      proj[v] = sc - u.select_rows(comp) * upinv * sp;
    }
    sect[v] = ec;
  }
  std::vector<Matrix> gens;
  for (std::size_t g = 0; g < alg->generators.size(); ++g) {
    const auto& gi = alg->generator_info[g];
    gens.push_back(proj[gi.target] * m->gen(g) * sect[gi.source]);
  }
  QuotientData q;
  q.quotient = make_module(alg, dims, gens);
  q.projection = ModuleMap{m, q.quotient, proj};
  q.section = sect;
  return q;
}

SubmoduleData kernel(const ModuleMap& f) {
  std::vector<Matrix> b;
  for (const auto& c : f.comp) b.push_back(kernel_basis(c));
  return submodule(f.source, b);
}

SubmoduleData image(const ModuleMap& f) {
  std::vector<Matrix> b;
  for (const auto& c : f.comp) b.push_back(column_basis(c));
  return submodule(f.target, b);
}

QuotientData cokernel(const ModuleMap& f) {
  std::vector<Matrix> b;
  for (const auto& c : f.comp) b.push_back(column_basis(c));
  return quotient_module(f.target, b);
}

namespace {

// Rows expressing that g: A -> B commutes with all generators.
Matrix commuting_rows(const Module& a, const Module& b) {
  const auto& alg = *a.algebra();
  const std::size_t nv = alg.num_vertices();
  std::vector<std::size_t> off(nv + 1, 0);
  for (std::size_t v = 0; v < nv; ++v) off[v + 1] = off[v] + b.dim(v) * a.dim(v);
  std::size_t nrows = 0;
  for (const auto& gi : alg.generator_info) nrows += b.dim(gi.target) * a.dim(gi.source);
  Matrix sys(a.p(), nrows, off[nv]);
  const PrimeField f(a.p());
  std::size_t row = 0;
  for (std::size_t g = 0; g < alg.generators.size(); ++g) {
    const auto& gi = alg.generator_info[g];
    const std::size_t s = gi.source, t = gi.target;
    const Matrix& ng = b.gen(g);
    const Matrix& mg = a.gen(g);
    // (N(g) f_s)_{ij} - (f_t M(g))_{ij}
    for (std::size_t i = 0; i < b.dim(t); ++i)
      for (std::size_t j = 0; j < a.dim(s); ++j) {
        for (std::size_t k = 0; k < b.dim(s); ++k)
          if (ng(i, k)) sys.at(row, off[s] + j * b.dim(s) + k) = f.add(sys(row, off[s] + j * b.dim(s) + k), ng(i, k));
        for (std::size_t k = 0; k < a.dim(t); ++k)
          if (mg(k, j)) sys.at(row, off[t] + k * b.dim(t) + i) = f.sub(sys(row, off[t] + k * b.dim(t) + i), mg(k, j));
        ++row;
      }
  }
  return sys;
}

}  // namespace

HomSpace::HomSpace(ModulePtr m, ModulePtr n) : m_(std::move(m)), n_(std::move(n)) {
  basis_ = kernel_basis(commuting_rows(*m_, *n_));
  if (basis_.cols() > 0) {
    pivot_rows_ = rref(basis_.transpose()).pivots;
    pivot_inverse_ = *invert(basis_.select_rows(pivot_rows_));
  }
}

ModuleMap HomSpace::element(std::size_t i) const { return map_from_vec(m_, n_, basis_.col(i)); }

ModuleMap HomSpace::combination(const std::vector<Residue>& coords) const {
  Matrix v = basis_ * Matrix::column(m_->p(), coords);
  return map_from_vec(m_, n_, v.col(0));
}

std::vector<Residue> HomSpace::coords(const ModuleMap& f) const {
  if (dim() == 0) return {};
  auto v = f.vec();
  Matrix sel(m_->p(), pivot_rows_.size(), 1);
  for (std::size_t i = 0; i < pivot_rows_.size(); ++i) sel.at(i, 0) = v[pivot_rows_[i]];
  return (pivot_inverse_ * sel).col(0);
}

std::vector<ModuleMap> hom(const ModulePtr& m, const ModulePtr& n) {
  HomSpace h(m, n);
  std::vector<ModuleMap> out;
  for (std::size_t i = 0; i < h.dim(); ++i) out.push_back(h.element(i));
  return out;
}

MapSystem::MapSystem(ModulePtr a, ModulePtr b) : a_(std::move(a)), b_(std::move(b)) {
  Matrix c = commuting_rows(*a_, *b_);
  rows_.push_back(c);
  rhs_.emplace_back(a_->p(), c.rows(), 1);
}

void MapSystem::precompose_equals(const ModuleMap& x, const ModuleMap& y) {
  const std::size_t nv = a_->dims().size();
  std::size_t ncols = hom_vec_size(*a_, *b_), nrows = 0;
  for (std::size_t v = 0; v < nv; ++v) nrows += b_->dim(v) * x.source->dim(v);
  Matrix sys(a_->p(), nrows, ncols), rhs(a_->p(), nrows, 1);
  std::size_t row = 0, off = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t br = b_->dim(v), ac = a_->dim(v), cc = x.source->dim(v);
    // (g_v x_v)_{ij} = sum_k g_v[i,k] x_v[k,j]
    for (std::size_t i = 0; i < br; ++i)
      for (std::size_t j = 0; j < cc; ++j) {
        for (std::size_t k = 0; k < ac; ++k) sys.at(row, off + k * br + i) = x.comp[v](k, j);
        rhs.at(row, 0) = y.comp[v](i, j);
        ++row;
      }
    off += br * ac;
  }
  rows_.push_back(sys);
  rhs_.push_back(rhs);
}

void MapSystem::postcompose_equals(const ModuleMap& x, const ModuleMap& y) {
  const std::size_t nv = a_->dims().size();
  std::size_t ncols = hom_vec_size(*a_, *b_), nrows = 0;
  for (std::size_t v = 0; v < nv; ++v) nrows += x.target->dim(v) * a_->dim(v);
  Matrix sys(a_->p(), nrows, ncols), rhs(a_->p(), nrows, 1);
  std::size_t row = 0, off = 0;
  for (std::size_t v = 0; v < nv; ++v) {
    const std::size_t br = b_->dim(v), ac = a_->dim(v), dr = x.target->dim(v);
    // (x_v g_v)_{ij} = sum_k x_v[i,k] g_v[k,j]
    for (std::size_t i = 0; i < dr; ++i)
      for (std::size_t j = 0; j < ac; ++j) {
        for (std::size_t k = 0; k < br; ++k) sys.at(row, off + j * br + k) = x.comp[v](i, k);
        rhs.at(row, 0) = y.comp[v](i, j);
        ++row;
      }
    off += br * ac;
  }
  rows_.push_back(sys);
  rhs_.push_back(rhs);
}

std::optional<ModuleMap> MapSystem::solve_one() const {
  std::size_t ncols = hom_vec_size(*a_, *b_);
  Matrix sys = vstack(rows_, a_->p(), ncols);
  Matrix rhs = vstack(rhs_, a_->p(), 1);
  auto s = solve(sys, rhs);
  if (!s.particular) return std::nullopt;
  return map_from_vec(a_, b_, s.particular->col(0));
}

std::vector<Matrix> socle_basis(const Module& m) {
  const auto& alg = *m.algebra();
  std::vector<Matrix> out;
  for (std::size_t v = 0; v < alg.num_vertices(); ++v) {
    std::vector<Matrix> parts;
    std::size_t rows = 0;
    for (std::size_t g = 0; g < alg.generators.size(); ++g)
      if (alg.generator_info[g].source == v) {
        parts.push_back(m.gen(g));
        rows += m.gen(g).rows();
      }
    if (parts.empty())
      out.push_back(Matrix::identity(m.p(), m.dim(v)));
    else
      out.push_back(kernel_basis(vstack(parts, m.p(), m.dim(v))));
  }
  return out;
}

std::vector<Matrix> radical_basis(const Module& m) {
  const auto& alg = *m.algebra();
  std::vector<Matrix> out;
  for (std::size_t v = 0; v < alg.num_vertices(); ++v) {
    std::vector<Matrix> parts;
    for (std::size_t g = 0; g < alg.generators.size(); ++g)
      if (alg.generator_info[g].target == v) parts.push_back(m.gen(g));
    if (parts.empty())
      out.emplace_back(m.p(), m.dim(v), 0);
    else
      out.push_back(column_basis(hstack(parts, m.p(), m.dim(v))));
  }
  return out;
}

}  // namespace nangle
