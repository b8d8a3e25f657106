#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nangle/algcore.hpp"

namespace nangle {

using json = nlohmann::json;

std::size_t Quiver::vertex_index(const std::string& label) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == label) return i;
  throw InputError("unknown vertex '" + label + "'");
}

std::size_t Quiver::arrow_index(const std::string& name) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == name) return i;
  throw InputError("unknown arrow '" + name + "'");
}

std::pair<std::size_t, std::size_t> Quiver::endpoints(const std::vector<std::size_t>& path,
                                                      std::size_t base) const {
  if (path.empty()) return {base, base};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (arrows[path[i]].target != arrows[path[i + 1]].source)
      throw InputError("path is not composable at '" + arrows[path[i]].name + "' then '" +
                       arrows[path[i + 1]].name + "'");
  }
  return {arrows[path.front()].source, arrows[path.back()].target};
}

namespace {

std::string label_of(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError("vertex labels must be strings or integers");
}

Residue parse_coeff(const json& j, const PrimeField& f, const std::map<std::string, Residue>& params,
                    const std::string& where) {
  if (j.is_number_integer()) return f.reduce(j.get<long long>());
  if (!j.is_string()) throw InputError(where + ": coefficient must be an integer or a parameter name");
  std::string s = j.get<std::string>();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  bool negate = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negate = s[0] == '-';
    s = s.substr(1);
  }
  Residue factor = 1;
  auto star = s.find('*');
  if (star != std::string::npos) {
    try {
      factor = f.reduce(std::stoll(s.substr(0, star)));
    } catch (const std::exception&) {
      throw InputError(where + ": bad coefficient '" + j.get<std::string>() + "'");
    }
    s = s.substr(star + 1);
  }
  Residue v;
  if (!s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    v = f.reduce(std::stoll(s));
  } else {
    auto it = params.find(s);
    if (it == params.end()) throw InputError(where + ": unknown parameter '" + s + "'");
    v = it->second;
  }
  v = f.mul(v, factor);
  return negate ? f.neg(v) : v;
}

PathExpr parse_expr(const json& j, const AlgebraPresentation& p, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected a list of terms");
  PathExpr e;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = where + "[" + std::to_string(i) + "]";
    const json& t = j[i];
    if (!t.is_object() || !t.contains("path")) throw InputError(w + ": term needs \"path\"");
    PathTerm term;
    term.coeff = t.contains("coeff") ? parse_coeff(t["coeff"], p.field, p.params, w) : 1;
    for (const auto& a : t["path"]) {
      if (!a.is_string()) throw InputError(w + ": arrow names must be strings");
      try {
        term.arrows.push_back(p.quiver.arrow_index(a.get<std::string>()));
      } catch (const InputError& err) {
        throw InputError(w + ": " + err.what());
      }
    }
    if (term.arrows.empty()) {
      if (!t.contains("vertex")) throw InputError(w + ": empty path needs \"vertex\"");
      term.base = p.quiver.vertex_index(label_of(t["vertex"]));
    }
    try {
      p.quiver.endpoints(term.arrows, term.base);
    } catch (const InputError& err) {
      throw InputError(w + ": " + err.what());
    }
    e.push_back(term);
  }
  return e;
}

std::size_t weight_of(const Quiver& q, const PathTerm& t) {
  std::size_t w = 0;
  for (auto a : t.arrows) w += q.arrows[a].weight;
  return w;
}

void check_homogeneous(const Quiver& q, const PathExpr& e, const std::string& where) {
  if (e.empty()) return;
  auto ends = q.endpoints(e[0].arrows, e[0].base);
  std::size_t w = weight_of(q, e[0]);
  for (const auto& t : e) {
    if (q.endpoints(t.arrows, t.base) != ends)
      throw InputError(where + ": terms do not share source and target");
    if (weight_of(q, t) != w)
      throw InputError(where + ": terms have different weighted lengths; supply arrow \"weights\"");
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

AlgebraPresentation parse_presentation(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("presentation syntax error at line " + std::to_string(line_of(text, e.byte)) +
                     ": " + e.what());
  }
  if (!j.is_object()) throw InputError("presentation must be a JSON object");
  AlgebraPresentation p;
  try {
    p.name = j.value("name", std::string("algebra"));
    p.field = PrimeField(j.value("field", 2u));
    if (!j.contains("vertices") || !j["vertices"].is_array())
      throw InputError("presentation needs a \"vertices\" list");
    for (const auto& v : j["vertices"]) {
      std::string l = label_of(v);
      if (std::find(p.quiver.vertices.begin(), p.quiver.vertices.end(), l) != p.quiver.vertices.end())
        throw InputError("duplicate vertex '" + l + "'");
      p.quiver.vertices.push_back(l);
    }
    if (j.contains("params")) {
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
        if (!it.value().is_number_integer())
          throw InputError("parameter '" + it.key() + "' must be an integer");
        p.params[it.key()] = p.field.reduce(it.value().get<long long>());
      }
    }
    std::set<std::string> names;
    for (const auto& a : j.value("arrows", json::array())) {
      Arrow ar;
      ar.name = a.at("name").get<std::string>();
      if (!names.insert(ar.name).second) throw InputError("duplicate arrow '" + ar.name + "'");
      ar.source = p.quiver.vertex_index(label_of(a.at("source")));
      ar.target = p.quiver.vertex_index(label_of(a.at("target")));
      p.quiver.arrows.push_back(ar);
    }
    if (j.contains("weights")) {
      for (auto it = j["weights"].begin(); it != j["weights"].end(); ++it) {
        long long w = it.value().get<long long>();
        if (w < 1) throw InputError("arrow weight must be positive");
        p.quiver.arrows[p.quiver.arrow_index(it.key())].weight = static_cast<std::size_t>(w);
      }
    }
    p.degree_bound = j.value("degree_bound", 2 * p.quiver.vertices.size() + 2);
    if (j.contains("relations")) {
      std::size_t i = 0;
      for (const auto& r : j["relations"]) {
        std::string w = "relations[" + std::to_string(i++) + "]";
        PathExpr e = parse_expr(r, p, w);
        if (e.empty()) throw InputError(w + ": empty relation");
        check_homogeneous(p.quiver, e, w);
        p.relations.push_back(e);
      }
    }
    if (j.contains("potential")) {
      PathExpr w = parse_expr(j["potential"], p, "potential");
      for (std::size_t i = 0; i < w.size(); ++i) {
        auto ends = p.quiver.endpoints(w[i].arrows, w[i].base);
        if (w[i].arrows.empty() || ends.first != ends.second)
          throw InputError("potential[" + std::to_string(i) + "]: term is not a cycle");
      }
      p.potential = w;
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("presentation schema error: ") + e.what());
  }
  if (p.potential) {
    auto jr = jacobi_relations(p);
    for (std::size_t i = 0; i < jr.size(); ++i)
      check_homogeneous(p.quiver, jr[i], "jacobi relation " + std::to_string(i));
  }
  return p;
}

AlgebraPresentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open presentation file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_presentation(ss.str());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_path_expr(const Quiver& q, const PathExpr& e) {
  std::ostringstream os;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) os << " + ";
    os << e[i].coeff << "*";
    if (e[i].arrows.empty()) os << "e_" << q.vertices[e[i].base];
    for (std::size_t k = 0; k < e[i].arrows.size(); ++k)
      os << (k ? "." : "") << q.arrows[e[i].arrows[k]].name;
  }
  return os.str();
}

std::vector<PathExpr> jacobi_relations(const AlgebraPresentation& p) {
  if (!p.potential) throw InputError("presentation has no potential");
  const auto& f = p.field;
  std::vector<PathExpr> out;
  for (std::size_t a = 0; a < p.quiver.arrows.size(); ++a) {
    std::map<std::vector<std::size_t>, Residue> acc;
    for (const auto& term : *p.potential) {
      const auto& c = term.arrows;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] != a) continue;
        std::vector<std::size_t> rest;
        for (std::size_t k = 1; k < c.size(); ++k) rest.push_back(c[(i + k) % c.size()]);
        acc[rest] = f.add(acc[rest], term.coeff);
      }
    }
    PathExpr e;
    for (auto& [path, coeff] : acc) {
      if (!coeff) continue;
      PathTerm t;
      t.coeff = coeff;
      t.arrows = path;
      t.base = p.quiver.arrows[a].target;
      e.push_back(t);
    }
    if (!e.empty()) out.push_back(e);
  }
  return out;
}

SparseVec BasedAlgebra::multiply(const SparseVec& x, const SparseVec& y) const {
  std::vector<Residue> acc(dim(), 0);
  for (auto [b, cb] : x)
    for (auto [c, cc] : y) {
      Residue s = field.mul(cb, cc);
      for (auto [d, cd] : product(b, c)) acc[d] = field.add(acc[d], field.mul(s, cd));
    }
  SparseVec out;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i]) out.emplace_back(i, acc[i]);
  return out;
}

std::vector<std::size_t> BasedAlgebra::elements_between(std::size_t s, std::size_t t) const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < basis.size(); ++b)
    if (basis[b].source == s && basis[b].target == t) out.push_back(b);
  return out;
}

namespace {

// Degreewise construction of kQ/I for an ideal homogeneous in a positive arrow grading.
class Closure {
 public:
  explicit Closure(const AlgebraPresentation& p) : p_(p), f_(p.field), q_(p.quiver) {}

  AlgebraPtr run() {
    std::vector<PathExpr> rels = p_.relations;
    if (p_.potential) {
      auto jr = jacobi_relations(p_);
      rels.insert(rels.end(), jr.begin(), jr.end());
    }
    std::size_t maxw = 1;
    for (const auto& a : q_.arrows) maxw = std::max(maxw, a.weight);
    std::map<std::size_t, std::vector<PathExpr>> by_degree;
    for (const auto& r : rels) {
      std::size_t d = weight_of(q_, r[0]);
      if (d == 0) throw InputError("relations may not involve trivial paths");
      by_degree[d].push_back(r);
    }
    const std::size_t nv = q_.vertices.size();
    for (std::size_t v = 0; v < nv; ++v) {
      Elem e;
      e.source = e.target = v;
      e.degree = 0;
      elems_.push_back(e);
    }
    by_deg_.push_back({});
    for (std::size_t v = 0; v < nv; ++v) by_deg_[0].push_back(v);
    std::size_t empty_run = 0;
    std::size_t d = 1;
    for (; d <= p_.degree_bound; ++d) {
      process_degree(d, by_degree[d]);
      if (by_deg_[d].empty()) {
        if (++empty_run >= maxw) break;
      } else {
        empty_run = 0;
      }
    }
    if (d > p_.degree_bound)
      throw NangleError("dimension did not stabilize below degree_bound " +
                        std::to_string(p_.degree_bound) + " (algebra infinite-dimensional or bound too small)");
    return finish();
  }

 private:
  struct Elem {
    std::size_t source = 0, target = 0, degree = 0;
    std::size_t prefix = 0;  // element index of the prefix (degree > 0)
    std::size_t arrow = 0;   // last arrow (degree > 0)
  };
  // Coordinates of V_d: (element, arrow) pairs.
  struct VSpace {
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    std::vector<SparseVec> kernel;  // relation rows (reduced), over coords
    std::vector<SparseVec> reduced; // per coordinate: its normal form over element indices
  };

  SparseVec reduce_path(const std::vector<std::size_t>& path, std::size_t base) const {
    std::size_t start = path.empty() ? base : q_.arrows[path[0]].source;
    SparseVec v{{start, 1}};
    for (auto a : path) v = right_mult(v, a);
    return v;
  }

  SparseVec right_mult(const SparseVec& v, std::size_t a) const {
    std::map<std::size_t, Residue> acc;
    for (auto [x, c] : v) {
      auto it = red_r_.find({x, a});
      if (it == red_r_.end()) continue;
      for (auto [y, cy] : it->second) acc[y] = f_.add(acc[y], f_.mul(c, cy));
    }
    return to_sparse(acc);
  }

  static SparseVec to_sparse(const std::map<std::size_t, Residue>& acc) {
    SparseVec out;
    for (auto [k, v] : acc)
      if (v) out.emplace_back(k, v);
    return out;
  }

  void process_degree(std::size_t d, const std::vector<PathExpr>& rels) {
    by_deg_.resize(d + 1);
    // Group V_d by (source, target).
    std::map<std::pair<std::size_t, std::size_t>, VSpace> spaces;
    for (std::size_t a = 0; a < q_.arrows.size(); ++a) {
      const Arrow& ar = q_.arrows[a];
      if (ar.weight > d) continue;
      for (auto x : by_deg_[d - ar.weight]) {
        if (elems_[x].target != ar.source) continue;
        auto& sp = spaces[{elems_[x].source, ar.target}];
        sp.index[{x, a}] = sp.coords.size();
        sp.coords.emplace_back(x, a);
      }
    }
    for (auto& [key, sp] : spaces) {
      std::vector<SparseVec> rows;
      auto to_v = [&](const std::map<std::pair<std::size_t, std::size_t>, Residue>& m) {
        std::map<std::size_t, Residue> acc;
        for (auto& [xa, c] : m) {
          auto it = sp.index.find(xa);
          if (it == sp.index.end()) throw NangleError("internal: coordinate outside V_d");
          acc[it->second] = f_.add(acc[it->second], c);
        }
        return to_sparse(acc);
      };
      for (const auto& r : rels) {
        if (q_.endpoints(r[0].arrows, r[0].base) != key) continue;
        std::map<std::pair<std::size_t, std::size_t>, Residue> m;
        for (const auto& t : r) {
          std::vector<std::size_t> pre(t.arrows.begin(), t.arrows.end() - 1);
          std::size_t last = t.arrows.back();
          for (auto [x, c] : reduce_path(pre, t.base)) {
            auto& slot = m[{x, last}];
            slot = f_.add(slot, f_.mul(c, t.coeff));
          }
        }
        rows.push_back(to_v(m));
      }
      // Left multiples of lower kernels.
      for (std::size_t a = 0; a < q_.arrows.size(); ++a) {
        const Arrow& ar = q_.arrows[a];
        if (ar.source != key.first || ar.weight > d) continue;
        auto lower = kernels_.find({d - ar.weight, ar.target, key.second});
        if (lower == kernels_.end()) continue;
        const auto& lsp = lower->second;
        for (const auto& k : lsp.kernel) {
          std::map<std::pair<std::size_t, std::size_t>, Residue> m;
          for (auto [ci, c] : k) {
            auto [xp, carrow] = lsp.coords[ci];
            for (auto [z, cz] : left_mult(a, xp)) {
              auto& slot = m[{z, carrow}];
              slot = f_.add(slot, f_.mul(c, cz));
            }
          }
          rows.push_back(to_v(m));
        }
      }
      // Row reduce; pivots are eliminated in favour of later coordinates.
      Matrix rm(f_.p(), rows.size(), sp.coords.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (auto [c, v] : rows[i]) rm.at(i, c) = v;
      auto rr = rref(rm);
      std::vector<bool> is_pivot(sp.coords.size(), false);
      for (auto pc : rr.pivots) is_pivot[pc] = true;
      std::vector<std::size_t> new_index(sp.coords.size(), 0);
      for (std::size_t c = 0; c < sp.coords.size(); ++c) {
        if (is_pivot[c]) continue;
        Elem e;
        e.source = key.first;
        e.target = key.second;
        e.degree = d;
        e.prefix = sp.coords[c].first;
        e.arrow = sp.coords[c].second;
        new_index[c] = elems_.size();
        elems_.push_back(e);
        by_deg_[d].push_back(new_index[c]);
      }
      sp.reduced.resize(sp.coords.size());
      for (std::size_t c = 0; c < sp.coords.size(); ++c)
        if (!is_pivot[c]) sp.reduced[c] = {{new_index[c], 1}};
      for (std::size_t r = 0; r < rr.rank; ++r) {
        std::size_t pc = rr.pivots[r];
        SparseVec nf;
        for (std::size_t c = 0; c < sp.coords.size(); ++c)
          if (!is_pivot[c] && rr.reduced(r, c)) nf.emplace_back(new_index[c], f_.neg(rr.reduced(r, c)));
        sp.reduced[pc] = nf;
        SparseVec krow;
        for (std::size_t c = 0; c < sp.coords.size(); ++c)
          if (rr.reduced(r, c)) krow.emplace_back(c, rr.reduced(r, c));
        sp.kernel.push_back(krow);
      }
      for (std::size_t c = 0; c < sp.coords.size(); ++c) red_r_[sp.coords[c]] = sp.reduced[c];
    }
    // Left multiplication by arrows landing in degree d.
    for (std::size_t a = 0; a < q_.arrows.size(); ++a) {
      const Arrow& ar = q_.arrows[a];
      if (ar.weight > d) continue;
      for (auto y : by_deg_[d - ar.weight]) {
        if (elems_[y].source != ar.target) continue;
        SparseVec out;
        if (elems_[y].degree == 0) {
          out = reduce_coord(spaces, {ar.source, ar.target}, {ar.source, a});
        } else {
          std::map<std::size_t, Residue> acc;
          const Elem& ye = elems_[y];
          for (auto [z, cz] : left_mult(a, ye.prefix))
            for (auto [w, cw] : reduce_coord(spaces, {ar.source, ye.target}, {z, ye.arrow}))
              acc[w] = f_.add(acc[w], f_.mul(cz, cw));
          out = to_sparse(acc);
        }
        red_l_[{a, y}] = out;
      }
    }
    for (auto& [key, sp] : spaces) kernels_[{d, key.first, key.second}] = std::move(sp);
  }

  SparseVec reduce_coord(const std::map<std::pair<std::size_t, std::size_t>, VSpace>& spaces,
                         std::pair<std::size_t, std::size_t> key,
                         std::pair<std::size_t, std::size_t> coord) const {
    auto it = spaces.find(key);
    if (it == spaces.end()) throw NangleError("internal: missing V_d block");
    auto ci = it->second.index.find(coord);
    if (ci == it->second.index.end()) throw NangleError("internal: missing V_d coordinate");
    return it->second.reduced[ci->second];
  }

  const SparseVec& left_mult(std::size_t a, std::size_t y) const {
    static const SparseVec empty;
    auto it = red_l_.find({a, y});
    return it == red_l_.end() ? empty : it->second;
  }

  std::vector<std::size_t> path_of(std::size_t x) const {
    std::vector<std::size_t> path;
    while (elems_[x].degree > 0) {
      path.push_back(elems_[x].arrow);
      x = elems_[x].prefix;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  AlgebraPtr finish() {
    auto alg = std::make_shared<BasedAlgebra>();
    alg->name = p_.name;
    alg->field = f_;
    alg->vertex_labels = q_.vertices;
    alg->presentation = p_;
    const std::size_t n = elems_.size();
    for (std::size_t x = 0; x < n; ++x) {
      BasisElement b;
      b.source = elems_[x].source;
      b.target = elems_[x].target;
      b.degree = elems_[x].degree;
      auto path = path_of(x);
      if (path.empty()) {
        b.label = "e_" + q_.vertices[b.source];
      } else {
        for (std::size_t k = 0; k < path.size(); ++k) b.label += (k ? "." : "") + q_.arrows[path[k]].name;
      }
      alg->basis.push_back(b);
      alg->expansion.push_back(path.empty() ? std::vector<GeneratorWord>{}
                                            : std::vector<GeneratorWord>{{1, path}});
    }
    for (std::size_t v = 0; v < q_.vertices.size(); ++v) alg->idempotent.push_back(v);
    for (std::size_t a = 0; a < q_.arrows.size(); ++a) {
      BasisElement g;
      g.source = q_.arrows[a].source;
      g.target = q_.arrows[a].target;
      g.degree = q_.arrows[a].weight;
      g.label = q_.arrows[a].name;
      alg->generator_info.push_back(g);
      alg->generators.push_back(reduce_path({a}, 0));
    }
    alg->mult.assign(n * n, {});
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (alg->basis[b].target != alg->basis[c].source) continue;
        SparseVec v{{b, 1}};
        for (auto a : path_of(c)) v = right_mult(v, a);
        alg->mult[b * n + c] = v;
      }
    return alg;
  }

  const AlgebraPresentation& p_;
  PrimeField f_;
  const Quiver& q_;
  std::vector<Elem> elems_;
  std::vector<std::vector<std::size_t>> by_deg_;
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> red_r_;
  std::map<std::pair<std::size_t, std::size_t>, SparseVec> red_l_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, VSpace> kernels_;
};

}  // namespace

AlgebraPtr build_based_algebra(const AlgebraPresentation& p) { return Closure(p).run(); }

std::string check_algebra(const BasedAlgebra& a) {
  const std::size_t n = a.dim();
  const auto& f = a.field;
  for (std::size_t b = 0; b < n; ++b) {
    SparseVec lhs_unit, rhs_unit;
    for (std::size_t v = 0; v < a.num_vertices(); ++v) {
      for (auto e : a.product(a.idempotent[v], b)) lhs_unit.push_back(e);
      for (auto e : a.product(b, a.idempotent[v])) rhs_unit.push_back(e);
    }
    SparseVec id{{b, 1}};
    if (lhs_unit != id || rhs_unit != id) return "unit law fails on " + a.basis[b].label;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (a.basis[x].target != a.basis[y].source) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (a.basis[y].target != a.basis[z].source) continue;
        SparseVec l = a.multiply(a.product(x, y), {{z, 1}});
        SparseVec r = a.multiply({{x, 1}}, a.product(y, z));
        if (l != r)
          return "associativity fails on (" + a.basis[x].label + ", " + a.basis[y].label + ", " +
                 a.basis[z].label + ")";
      }
    }
  (void)f;
  return "";
}

}  // namespace nangle
