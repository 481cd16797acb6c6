#include "doctest.h"

#include <algorithm>

#include "orbicover/atlas.hpp"
#include "orbicover/errors.hpp"

using namespace orbicover;

namespace {

bool has_code(const ValidationReport& r, const std::string& code, std::vector<std::size_t> charts) {
  return std::any_of(r.begin(), r.end(), [&](const Violation& v) {
    return v.code == code && v.charts == charts;
  });
}

}  // namespace

TEST_CASE("catalog atlases validate") {
  for (const auto& name : builtin_atlas_names()) {
    CAPTURE(name);
    auto a = builtin_atlas(name);
    auto report = validate_atlas(a);
    for (const auto& v : report) MESSAGE(to_string(v));
    CHECK(report.empty());
    // every element of Gamma_ij has its inverse in Gamma_ji
    for (const auto& g : a.gluings) {
      const GluingSet* back = a.gluing(g.j, g.i);
      REQUIRE(back);
      for (const auto& w : g.elements) {
        Word inv = a.normal_form(inverse(w));
        CHECK(std::find(back->elements.begin(), back->elements.end(), inv) != back->elements.end());
      }
    }
  }
  CHECK_THROWS_AS(builtin_atlas("klein_bottle"), LookupError);
  CHECK_THROWS_AS(builtin_atlas("triangle(1,2,3)"), LookupError);
  CHECK_THROWS_AS(builtin_atlas("triangle(2,3)"), LookupError);
}

TEST_CASE("catalog shapes") {
  auto interval = builtin_atlas("interval_two_mirrors");
  REQUIRE(interval.charts.size() == 2);
  CHECK(interval.charts[0].group->order() == 2);
  CHECK(interval.charts[1].group->order() == 2);
  auto tri = builtin_atlas("triangle(2,4,4)");
  REQUIRE(tri.charts.size() == 3);
  CHECK(tri.charts[0].group->order() == 2);
  CHECK(tri.charts[1].group->order() == 4);
  CHECK(tri.charts[2].group->order() == 4);
  auto torus = builtin_atlas("torus");
  for (const auto& c : torus.charts) CHECK(c.group->order() == 1);
}

TEST_CASE("single chart atlas") {
  OrbifoldAtlas a;
  add_chart(a, "Z2", {"a"});
  add_local_gluings(a);
  CHECK(validate_atlas(a).empty());
  CHECK(presentation_from_atlas(a).to_string() == "<a | aa>");
}

TEST_CASE("presentations of catalog atlases") {
  CHECK(presentation_from_atlas(builtin_atlas("torus")).to_string() == "<a,b | abAB>");
  CHECK(presentation_from_atlas(builtin_atlas("pillowcase")).to_string() ==
        "<a,b,c,d | aa, bb, cc, dd, abcd>");
  CHECK(presentation_from_atlas(builtin_atlas("triangle(2,3,7)")).to_string() ==
        "<a,b,c | aa, bbb, ccccccc, abc>");
  CHECK(presentation_from_atlas(builtin_atlas("triangle(2,4,4)")).to_string() ==
        "<a,b,c | aa, bbbb, cccc, abc>");
  CHECK(presentation_from_atlas(builtin_atlas("interval_two_mirrors")).to_string() == "<a,b | aa, bb>");

  CHECK(abelian_invariants(presentation_from_atlas(builtin_atlas("torus"))) == std::vector<long long>{0, 0});
  CHECK(abelian_invariants(presentation_from_atlas(builtin_atlas("pillowcase"))) ==
        std::vector<long long>{2, 2, 2});
  // The triangle group abelianizes to Z^3 / <p e1, q e2, r e3, e1+e2+e3>;
  // for these orders the invariants are small enough to check by hand.
  CHECK(abelian_invariants(presentation_from_atlas(builtin_atlas("triangle(2,3,7)"))).empty());
  CHECK(abelian_invariants(presentation_from_atlas(builtin_atlas("triangle(3,3,3)"))) ==
        std::vector<long long>{3, 3});
  CHECK(abelian_invariants(presentation_from_atlas(builtin_atlas("triangle(2,3,6)"))) ==
        std::vector<long long>{6});
}

TEST_CASE("disk mirror has the D4 relations") {
  auto a = builtin_atlas("disk_mirror");
  auto p = presentation_from_atlas(a);
  CHECK(p.generators == std::vector<std::string>{"r", "s"});
  // every relation evaluates to the identity in the chart group
  for (const auto& r : p.relations) CHECK(a.evaluate_local(0, r) == FiniteGroup::identity());
  CHECK(abelian_invariants(p) == std::vector<long long>{2, 2});
  CHECK(a.local_sign(0, a.charts[0].group->generators()[1]) == -1);
  CHECK(a.local_sign(0, a.charts[0].group->generators()[0]) == 1);
}

TEST_CASE("violations are reported") {
  SUBCASE("symmetry") {
    auto a = builtin_atlas("interval_two_mirrors");
    for (auto& g : a.gluings) {
      if (g.i == 1 && g.j == 0) g.elements.pop_back();
    }
    auto r = validate_atlas(a);
    CHECK(has_code(r, "symmetry", {0, 1}));
    CHECK_THROWS_AS(presentation_from_atlas(a), PreconditionError);
  }
  SUBCASE("local group") {
    auto a = builtin_atlas("triangle(2,3,7)");
    for (auto& g : a.gluings) {
      if (g.i == 1 && g.j == 1) g.elements.pop_back();
    }
    CHECK(has_code(validate_atlas(a), "local_group_mismatch", {1, 1}));
  }
  SUBCASE("coset count") {
    auto a = builtin_atlas("pillowcase");
    a.gluings.push_back({0, 1, {}});
    CHECK(has_code(validate_atlas(a), "duplicate_gluing", {0, 1}));
  }
  SUBCASE("product") {
    auto a = builtin_atlas("pillowcase");
    a.products.push_back({0, 1, 2, a.parse("c"), a.parse("1"), a.parse("1")});
    CHECK(has_code(validate_atlas(a), "product_membership", {0, 1, 2}));
  }
  SUBCASE("nerve") {
    OrbifoldAtlas a;
    add_chart(a, "Z2", {"a"});
    add_chart(a, "Z3", {"b"});
    add_local_gluings(a);
    CHECK(has_code(validate_atlas(a), "disconnected_nerve", {1}));
  }
  SUBCASE("unfaithful action") {
    auto a = builtin_atlas("disk_mirror");
    a.charts[0].action[0] = Isometry::identity(Geometry::euclidean2);
    auto r = validate_atlas(a);
    CHECK(has_code(r, "action_not_faithful", {0}));
    CHECK_FALSE(has_code(r, "action_not_homomorphism", {0}));
    a.charts[0].action[0] = rotation_about(Point::origin(Geometry::euclidean2), 1.0);
    CHECK(has_code(validate_atlas(a), "action_not_homomorphism", {0}));
  }
  SUBCASE("closure") {
    OrbifoldAtlas a;
    add_chart(a, "Z2", {"a"});
    add_chart(a, "Z2", {"b"});
    add_local_gluings(a);
    a.gluings.push_back({0, 1, {a.parse("1"), a.parse("b")}});
    a.gluings.push_back({1, 0, {a.parse("1"), a.parse("b")}});
    auto r = validate_atlas(a);
    CHECK(has_code(r, "coset_closure", {0, 1}));
  }
}

TEST_CASE("normal form") {
  auto a = builtin_atlas("triangle(2,3,7)");
  CHECK(a.format(a.normal_form(a.parse("aaab"))) == "ab");
  CHECK(a.format(a.normal_form(a.parse("bbb"))) == "1");
  CHECK(a.format(a.normal_form(a.parse("BB"))) == "b");
  auto t = builtin_atlas("torus");
  CHECK(t.format(t.normal_form(t.parse("abBA"))) == "1");
  CHECK_THROWS_AS(a.normal_form({9}), DomainError);
}
