#include <gtest/gtest.h>

#include <random>

#include "nangle/category.hpp"

using namespace nangle;

namespace {

std::string data(const std::string& f) { return std::string(NANGLE_DATA_DIR) + "/algebras/" + f; }
AlgebraPtr load(const std::string& f) { return build_based_algebra(load_presentation(data(f))); }

Morphism random_morphism(const BasedCategory& c, const Object& x, const Object& y, std::mt19937_64& rng) {
  Vec v(c.hom_dim(x, y));
  for (auto& e : v) e = static_cast<Residue>(rng() % c.p());
  return c.unflatten(x, y, v);
}

std::vector<ModulePtr> projectives(const AlgebraPtr& a) {
  std::vector<ModulePtr> out;
  for (std::size_t v = 0; v < a->num_vertices(); ++v) out.push_back(projective_module(a, v));
  return out;
}

}  // namespace

TEST(FunctorCategory, EmptyGeneratorIsAnError) { EXPECT_THROW(functor_category({}), InputError); }

TEST(FunctorCategory, ProjectiveGeneratorGivesAlgebraOfSameDimension) {
  for (auto f : {"dual_numbers.json", "preproj_A2.json", "preproj_A3.json", "path_A3.json"}) {
    auto a = load(f);
    auto fc = functor_category(projectives(a));
    EXPECT_EQ(fc->algebra()->dim(), a->dim()) << f;
    EXPECT_EQ(check_algebra(*fc->algebra()), "") << f;
    EXPECT_EQ(fc->category()->check(), "") << f;
    // the representables are exactly the indecomposable projective E-modules
    for (std::size_t v = 0; v < a->num_vertices(); ++v) {
      auto rep = fc->representable(Object{v});
      EXPECT_EQ(rep->validate(), "");
      EXPECT_TRUE(indecomposable_iso(rep, projective_module(fc->algebra(), v))) << f << " " << v;
    }
  }
}

TEST(FunctorCategory, SelfInjectivityIsDetected) {
  EXPECT_TRUE(functor_category(projectives(load("preproj_A3.json")))->selfinjective());
  auto fc = functor_category(projectives(load("path_A3.json")));
  EXPECT_FALSE(fc->selfinjective());
  EXPECT_THROW(fc->stable(), NangleError);
}

TEST(FunctorCategory, DictionaryPreservesHomAndComposition) {
  auto a = load("preproj_A3.json");
  auto fc = functor_category(projectives(a));
  const auto& c = *fc->category();
  std::mt19937_64 rng(5);
  std::vector<Object> objs = {{0}, {1}, {2}, {0, 1}, {2, 2}, {1, 0, 2}};
  for (const auto& x : objs)
    for (const auto& y : objs) {
      auto rx = fc->representable(x), ry = fc->representable(y);
      EXPECT_EQ(HomSpace(rx, ry).dim(), c.hom_dim(x, y));
      for (int t = 0; t < 3; ++t) {
        auto f = random_morphism(c, x, y, rng);
        auto mf = fc->representable(f, rx, ry);
        EXPECT_EQ(mf.validate(), "");
        EXPECT_TRUE(c.equal(fc->yoneda(mf, x, y), f));
        for (const auto& z : objs) {
          auto g = random_morphism(c, y, z, rng);
          auto rz = fc->representable(z);
          auto lhs = fc->representable(c.compose(g, f), rx, rz);
          auto rhs = compose(fc->representable(g, ry, rz), mf);
          EXPECT_EQ(lhs.total(), rhs.total());
        }
      }
    }
}

TEST(FunctorCategory, StableSimpleGivesPrimeField) {
  auto pi2 = load("preproj_A2.json");
  StableCategory sc(pi2);
  auto rc = stable_subcategory(sc, {simple_module(pi2, 0)}, 2);
  EXPECT_EQ(rc.category->hom_dim(0, 0), 1u);
  EXPECT_EQ(rc.category->sigma(0), 0u);
  FunctorCategory fc(rc.category);
  EXPECT_EQ(fc.algebra()->dim(), 1u);
  EXPECT_TRUE(fc.selfinjective());
}

TEST(BasedCategory, StableSubcategoryIsACategoryWithAutomorphism) {
  auto pi3 = load("preproj_A3.json");
  StableCategory sc(pi3);
  // all three simples together with their suspensions
  std::vector<ModulePtr> t;
  for (std::size_t v = 0; v < 3; ++v) {
    auto s = simple_module(pi3, v);
    for (int k = 0; k < 6; ++k) {
      bool seen = false;
      for (const auto& u : t) seen = seen || find_iso(u, s).has_value();
      if (!seen) t.push_back(s);
      s = sc.cosyzygy(s);
    }
  }
  auto rc = stable_subcategory(sc, t, 1);
  const auto& c = *rc.category;
  EXPECT_EQ(c.check(), "");
  std::mt19937_64 rng(3);
  Object x{0, 1}, y{2, 3};
  auto f = random_morphism(c, x, y, rng);
  EXPECT_TRUE(c.equal(c.unshift(c.shift(f)), f));
  Realizer r(rc, &sc);
  auto mf = r.to_module_map(f);
  EXPECT_EQ(mf.validate(), "");
  EXPECT_TRUE(c.equal(r.to_morphism(mf, x, y), f));
}

TEST(FunctorCategory, TwistMatchesRepresentables) {
  auto pi3 = load("preproj_A3.json");
  StableCategory sc(pi3);
  std::vector<ModulePtr> t;
  auto s = simple_module(pi3, 0);
  for (int k = 0; k < 6; ++k) {
    bool seen = false;
    for (const auto& u : t) seen = seen || find_iso(u, s).has_value();
    if (!seen) t.push_back(s);
    s = sc.cosyzygy(s);
  }
  auto rc = stable_subcategory(sc, t, 1);
  FunctorCategory fc(rc.category);
  const auto& c = *rc.category;
  Object x{0, 1};
  auto rep = fc.representable(x);
  auto tw = fc.twist(rep);
  EXPECT_EQ(tw->validate(), "");
  auto iso = fc.twist_representable(x, tw, fc.representable(c.shift(x)));
  EXPECT_EQ(iso.validate(), "");
  EXPECT_TRUE(iso.is_iso());
  auto back = fc.untwist(tw);
  EXPECT_EQ(back->dims(), rep->dims());
  EXPECT_TRUE(find_iso(back, rep));
}
