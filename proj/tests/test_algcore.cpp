#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "nangle/algcore.hpp"
#include "oracles.hpp"

using namespace nangle;
using nangle::oracle::naive_dimension;

namespace {

std::string data(const std::string& f) { return std::string(NANGLE_DATA_DIR) + "/algebras/" + f; }

AlgebraPtr load(const std::string& f) { return build_based_algebra(load_presentation(data(f))); }

// Brute force: count tuples of per-vertex matrices commuting with all arrows.
std::size_t brute_hom_count(const Module& m, const Module& n) {
  std::size_t bits = hom_vec_size(m, n);
  std::size_t count = 0;
  auto mp = std::make_shared<Module>(m);
  auto np = std::make_shared<Module>(n);
  for (std::size_t mask = 0; mask < (1u << bits); ++mask) {
    std::vector<Residue> v(bits);
    for (std::size_t i = 0; i < bits; ++i) v[i] = (mask >> i) & 1;
    if (map_from_vec(mp, np, v).validate().empty()) ++count;
  }
  return count;
}

ModulePtr random_module_f2(const AlgebraPtr& a, std::mt19937& rng, std::size_t max_total) {
  // Random quotient of a random direct sum of projectives, truncated by dimension.
  while (true) {
    std::vector<ModulePtr> parts;
    std::size_t k = 1 + rng() % 2;
    for (std::size_t i = 0; i < k; ++i) parts.push_back(projective_module(a, rng() % a->num_vertices()));
    auto ds = direct_sum(parts, a);
    // random submodule generated by one random element at a random vertex
    std::size_t v = rng() % a->num_vertices();
    if (ds.sum->dim(v) == 0) continue;
    std::vector<Residue> x(ds.sum->dim(v));
    for (auto& c : x) c = rng() % 2;
    std::vector<Matrix> basis;
    for (std::size_t w = 0; w < a->num_vertices(); ++w) {
      std::vector<Matrix> cols;
      for (auto b : a->elements_between(v, w)) cols.push_back(ds.sum->act(b) * Matrix::column(2, x));
      basis.push_back(cols.empty() ? Matrix(2, ds.sum->dim(w), 0)
                                   : column_basis(hstack(cols, 2, ds.sum->dim(w))));
    }
    auto q = quotient_module(ds.sum, basis).quotient;
    if (q->total_dim() <= max_total) return q;
  }
}

}  // namespace

TEST(Presentation, PathA2) {
  auto p = load_presentation(data("path_A2.json"));
  EXPECT_EQ(p.quiver.arrows.size(), 1u);
  EXPECT_EQ(p.quiver.vertices, (std::vector<std::string>{"1", "2"}));
}

TEST(Presentation, PotentialQ2) {
  auto p = load_presentation(data("qp_Q2.json"));
  EXPECT_EQ(p.quiver.arrows.size(), 8u);
  ASSERT_TRUE(p.potential);
  EXPECT_EQ(p.potential->size(), 4u);
  EXPECT_EQ(p.field.p(), 5u);
  EXPECT_EQ((*p.potential)[0].coeff, 2u);  // lambda = 2
}

TEST(Presentation, Errors) {
  const std::string base = R"({"field":2,"vertices":[1,2],"arrows":[{"name":"a","source":1,"target":2}],)";
  EXPECT_THROW(parse_presentation(base + R"("potential":[{"coeff":1,"path":["a"]}]})"), InputError);
  EXPECT_THROW(parse_presentation(base + R"("relations":[[{"coeff":1,"path":["b"]}]]})"), InputError);
  EXPECT_THROW(parse_presentation(R"({"field":4,"vertices":[1]})"), InputError);
  try {
    parse_presentation("{\n\"field\": 2,\n\"vertices\": [1,,]\n}");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Jacobi, ThreeCycle) {
  auto p = parse_presentation(R"({"field":3,"vertices":[1,2,3],"arrows":[
    {"name":"a","source":1,"target":2},{"name":"b","source":2,"target":3},{"name":"c","source":3,"target":1}],
    "potential":[{"coeff":1,"path":["a","b","c"]}]})");
  auto r = jacobi_relations(p);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0][0].arrows, (std::vector<std::size_t>{1, 2}));  // d_a: bc
  EXPECT_EQ(r[1][0].arrows, (std::vector<std::size_t>{2, 0}));  // d_b: ca
  EXPECT_EQ(r[2][0].arrows, (std::vector<std::size_t>{0, 1}));  // d_c: ab
  p.potential = PathExpr{};
  EXPECT_TRUE(jacobi_relations(p).empty());
  p.potential.reset();
  EXPECT_THROW(jacobi_relations(p), InputError);
}

TEST(Jacobi, PotentialQ2) {
  auto p = load_presentation(data("qp_Q2.json"));
  auto r = jacobi_relations(p);
  ASSERT_EQ(r.size(), 8u);
  for (const auto& e : r) {
    EXPECT_EQ(e.size(), 2u);
    for (const auto& t : e) EXPECT_EQ(t.arrows.size(), 3u);
  }
  // Oracle by hand: d_{a0} W2 = lambda*(d0 c0 b0) - (d0 c1 b1) in left-to-right order.
  const auto& q = p.quiver;
  std::map<std::vector<std::size_t>, Residue> expect{
      {{q.arrow_index("d0"), q.arrow_index("c0"), q.arrow_index("b0")}, 2},
      {{q.arrow_index("d0"), q.arrow_index("c1"), q.arrow_index("b1")}, 4}};
  std::map<std::vector<std::size_t>, Residue> got;
  for (const auto& t : r[q.arrow_index("a0")]) got[t.arrows] = t.coeff;
  EXPECT_EQ(got, expect);
}

TEST(Build, SmallAlgebras) {
  auto a2 = load("path_A2.json");
  EXPECT_EQ(a2->dim(), 3u);
  auto pi2 = load("preproj_A2.json");
  EXPECT_EQ(pi2->dim(), 4u);
  std::set<std::string> labels;
  for (const auto& b : pi2->basis) labels.insert(b.label);
  EXPECT_EQ(labels, (std::set<std::string>{"e_1", "e_2", "a1", "a1*"}));
  auto loop = parse_presentation(R"({"field":2,"vertices":[0],"arrows":[{"name":"x","source":0,"target":0}],
    "relations":[[{"coeff":1,"path":["x","x"]}]]})");
  EXPECT_EQ(build_based_algebra(loop)->dim(), 2u);
  loop.relations.clear();
  EXPECT_THROW(build_based_algebra(loop), NangleError);
}

TEST(Build, PreprojectiveDimensionsMatchNaiveClosure) {
  const std::size_t expected[] = {4, 10, 20, 35};
  for (std::size_t n = 2; n <= 5; ++n) {
    auto p = load_presentation(data("preproj_A" + std::to_string(n) + ".json"));
    bool bound_ok = false;
    std::size_t oracle = naive_dimension(p, n, &bound_ok);
    EXPECT_TRUE(bound_ok);
    EXPECT_EQ(oracle, expected[n - 2]);
    auto a = build_based_algebra(p);
    EXPECT_EQ(a->dim(), oracle);
    EXPECT_EQ(check_algebra(*a), "");
    std::size_t sum = 0;
    for (std::size_t v = 0; v < a->num_vertices(); ++v) sum += projective_module(a, v)->total_dim();
    EXPECT_EQ(sum, a->dim());
  }
}

TEST(Build, PotentialAlgebrasAreAssociative) {
  for (auto f : {"qp_Q1.json", "qp_Q2.json", "qp_Q3.json", "qp_Q4.json"}) {
    auto a = load(f);
    EXPECT_EQ(check_algebra(*a), "") << f;
    for (std::size_t v = 0; v < a->num_vertices(); ++v) {
      EXPECT_EQ(projective_module(a, v)->validate(), "");
      EXPECT_EQ(injective_module(a, v)->validate(), "");
    }
  }
}

TEST(Modules, ProjectivesAndInjectives) {
  auto a2 = load("path_A2.json");
  EXPECT_EQ(projective_module(a2, 0)->dims(), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(projective_module(a2, 1)->dims(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(injective_module(a2, 0)->dims(), (std::vector<std::size_t>{1, 0}));
  auto pi2 = load("preproj_A2.json");
  EXPECT_EQ(projective_module(pi2, 0)->dims(), (std::vector<std::size_t>{1, 1}));
  auto i1 = injective_module(pi2, 0);
  EXPECT_TRUE(indecomposable_iso(i1, projective_module(pi2, 1)));
  for (const auto& a : {a2, pi2})
    for (std::size_t v = 0; v < a->num_vertices(); ++v) {
      EXPECT_EQ(projective_module(a, v)->validate(), "");
      EXPECT_EQ(injective_module(a, v)->validate(), "");
    }
}

TEST(Modules, RejectsBrokenRelation) {
  auto pi2 = load("preproj_A2.json");
  Matrix one = Matrix::identity(2, 1);
  Module bad(pi2, {1, 1}, {one, one});  // a1 a1* acts as 1, not 0
  EXPECT_NE(bad.validate(), "");
}

TEST(Hom, Examples) {
  auto a2 = load("path_A2.json");
  EXPECT_EQ(hom(simple_module(a2, 0), simple_module(a2, 1)).size(), 0u);
  auto pi2 = load("preproj_A2.json");
  auto p1 = projective_module(pi2, 0);
  EXPECT_EQ(hom(p1, p1).size(), 1u);
  EXPECT_EQ(hom(simple_module(pi2, 1), simple_module(pi2, 1)).size(), 1u);
}

TEST(Hom, MatchesBruteForceEnumeration) {
  std::mt19937 rng(3);
  for (auto f : {"path_A2.json", "preproj_A2.json", "path_A3.json"}) {
    auto a = load(f);
    for (int trial = 0; trial < 25; ++trial) {
      auto m = random_module_f2(a, rng, 3);
      auto n = random_module_f2(a, rng, 3);
      if (hom_vec_size(*m, *n) > 14) continue;
      std::size_t d = hom(m, n).size();
      EXPECT_EQ(std::size_t{1} << d, brute_hom_count(*m, *n)) << f;
    }
  }
}

TEST(Decompose, Examples) {
  auto pi2 = load("preproj_A2.json");
  auto p1 = projective_module(pi2, 0);
  auto ds = direct_sum({p1, p1}, pi2);
  auto d = decompose(ds.sum);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].multiplicity(), 2u);
  EXPECT_TRUE(find_iso(d[0].module, p1));

  auto a2 = load("path_A2.json");
  auto reg = decompose(regular_module(a2));
  ASSERT_EQ(reg.size(), 2u);
  std::multiset<std::vector<std::size_t>> dims{reg[0].module->dims(), reg[1].module->dims()};
  EXPECT_EQ(dims, (std::multiset<std::vector<std::size_t>>{{1, 1}, {0, 1}}));

  auto dual = load("dual_numbers.json");
  auto r = regular_module(dual);
  auto dd = decompose(r);
  ASSERT_EQ(dd.size(), 1u);
  EXPECT_EQ(dd[0].module->total_dim(), 2u);
  // oracle: End(k[x]/x^2) has dim 2; brute force its idempotents over F_3
  HomSpace end(r, r);
  ASSERT_EQ(end.dim(), 2u);
  std::size_t idempotents = 0;
  for (Residue a = 0; a < 3; ++a)
    for (Residue b = 0; b < 3; ++b) {
      Matrix e = end.combination({a, b}).total();
      if (e * e == e) ++idempotents;
    }
  EXPECT_EQ(idempotents, 2u);  // only 0 and 1
}

TEST(Decompose, ReassemblesRandomModules) {
  std::mt19937 rng(5);
  for (auto f : {"preproj_A3.json", "path_A3.json", "preproj_A4.json"}) {
    auto a = load(f);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<ModulePtr> parts;
      for (int k = 0; k < 3; ++k) {
        auto s = rng() % 3;
        auto v = rng() % a->num_vertices();
        parts.push_back(s == 0 ? projective_module(a, v) : s == 1 ? injective_module(a, v) : simple_module(a, v));
      }
      auto m = direct_sum(parts, a).sum;
      auto d = decompose(m, trial);
      std::vector<std::size_t> dims(a->num_vertices(), 0);
      ModuleMap id = zero_map(m, m);
      std::vector<ModulePtr> copies;
      for (const auto& pc : d) {
        for (std::size_t k = 0; k < pc.multiplicity(); ++k) {
          for (std::size_t v = 0; v < dims.size(); ++v) dims[v] += pc.module->dim(v);
          EXPECT_TRUE(compose(pc.projections[k], pc.inclusions[k]).total() ==
                      identity_map(pc.module).total());
          id = id + compose(pc.inclusions[k], pc.projections[k]);
          copies.push_back(pc.module);
        }
        EXPECT_TRUE(local_residue(HomSpace(pc.module, pc.module).element(0).total()));
      }
      EXPECT_EQ(dims, m->dims());
      EXPECT_TRUE(id.total() == identity_map(m).total());
      auto again = direct_sum(copies, a).sum;
      auto iso = find_iso(again, m);
      ASSERT_TRUE(iso);
      EXPECT_TRUE(iso->is_iso());
      EXPECT_EQ(iso->validate(), "");
    }
  }
}

TEST(Decompose, FieldTooSmall) {
  // Kronecker quiver module whose endomorphism ring is F_4: not splittable over F_2 and not local over F_2.
  auto k = build_based_algebra(parse_presentation(R"({"field":2,"vertices":[1,2],"arrows":[
    {"name":"a","source":1,"target":2},{"name":"b","source":1,"target":2}]})"));
  auto m = make_module(k, {2, 2}, {Matrix::identity(2, 2), Matrix::from_rows(2, {{0, 1}, {1, 1}})});
  ASSERT_EQ(m->validate(), "");
  EXPECT_EQ(hom(m, m).size(), 2u);
  EXPECT_THROW(decompose(m), FieldTooSmall);
}

TEST(FindIso, Examples) {
  auto a2 = load("path_A2.json");
  auto s1 = simple_module(a2, 0), s2 = simple_module(a2, 1), p1 = projective_module(a2, 0);
  auto id = find_iso(p1, p1);
  ASSERT_TRUE(id);
  EXPECT_TRUE(id->total() == identity_map(p1).total());
  EXPECT_FALSE(find_iso(s1, s2));
  auto x = direct_sum({p1, s1}, a2).sum, y = direct_sum({s1, p1}, a2).sum;
  auto iso = find_iso(x, y);
  ASSERT_TRUE(iso);
  EXPECT_TRUE(iso->is_iso());
  EXPECT_EQ(iso->validate(), "");
}

TEST(SelfInjective, Examples) {
  EXPECT_FALSE(is_selfinjective(load("path_A2.json")));
  auto nu = is_selfinjective(load("preproj_A2.json"));
  ASSERT_TRUE(nu);
  EXPECT_EQ(*nu, (std::vector<std::size_t>{1, 0}));
  EXPECT_EQ(*is_selfinjective(load("dual_numbers.json")), (std::vector<std::size_t>{0}));
}

TEST(SelfInjective, SocleOfProjectiveIsTopOfNakayamaImage) {
  for (auto f : {"preproj_A3.json", "preproj_A5.json", "qp_Q1.json"}) {
    auto a = load(f);
    auto nu = is_selfinjective(a);
    ASSERT_TRUE(nu);
    std::set<std::size_t> image(nu->begin(), nu->end());
    EXPECT_EQ(image.size(), nu->size());
    for (std::size_t v = 0; v < a->num_vertices(); ++v) {
      auto soc = socle_basis(*projective_module(a, v));
      for (std::size_t w = 0; w < a->num_vertices(); ++w)
        EXPECT_EQ(soc[w].cols(), w == (*nu)[v] ? 1u : 0u);
    }
  }
}

TEST(Nakayama, ProjectivesGoToInjectives) {
  for (auto f : {"preproj_A2.json", "preproj_A3.json", "dual_numbers.json"}) {
    auto a = load(f);
    for (std::size_t v = 0; v < a->num_vertices(); ++v) {
      auto pv = projective_module(a, v);
      auto n = nakayama(pv);
      EXPECT_EQ(n->validate(), "");
      EXPECT_TRUE(indecomposable_iso(n, injective_module(a, v))) << f;
      auto nid = nakayama_map(identity_map(pv), n, n);
      EXPECT_TRUE(nid.total() == identity_map(n).total());
    }
  }
  // functoriality on maps between projectives
  auto a = load("preproj_A3.json");
  auto p0 = projective_module(a, 0), p1 = projective_module(a, 1), p2 = projective_module(a, 2);
  auto n0 = nakayama(p0), n1 = nakayama(p1), n2 = nakayama(p2);
  for (const auto& f : hom(p0, p1))
    for (const auto& g : hom(p1, p2)) {
      auto lhs = nakayama_map(compose(g, f), n0, n2);
      auto rhs = compose(nakayama_map(g, n1, n2), nakayama_map(f, n0, n1));
      EXPECT_TRUE(lhs.total() == rhs.total());
      EXPECT_EQ(nakayama_map(f, n0, n1).validate(), "");
    }
  // over k[x]/x^2 the Nakayama functor fixes the simple
  auto d = load("dual_numbers.json");
  EXPECT_TRUE(indecomposable_iso(nakayama(simple_module(d, 0)), simple_module(d, 0)));
}
