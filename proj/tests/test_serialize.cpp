#include "doctest.h"

#include "orbicover/errors.hpp"
#include "orbicover/serialize.hpp"

using namespace orbicover;

TEST_CASE("group json") {
  for (const auto& name : catalog_names()) {
    GroupPtr g = catalog_group(name);
    GroupPtr back = group_from_json(group_to_json(*g));
    CHECK(back->order() == g->order());
    CHECK(back->elements() == g->elements());
  }
  CHECK(group_from_json(Json("S3"))->order() == 6);
  CHECK_THROWS_AS(group_from_json(Json::parse(R"({"degree": 3, "generators": [[1, 0]]})")), DomainError);
  CHECK_THROWS_AS(group_from_json(Json::parse(R"({"generators": []})")), DomainError);
}

TEST_CASE("matrix json is row-major") {
  Matrix3 m;
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  Json j = to_json(m);
  CHECK(j[0] == Json::array({1.0, 2.0, 3.0}));
  CHECK(j[2][0] == 7.0);
  CHECK(matrix_from_json(j) == m);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1, 2], [3, 4]]")), DomainError);
}

TEST_CASE("atlas json round trip") {
  for (const auto& name : {"interval_two_mirrors", "triangle(2,3,7)", "triangle(2,3,3)", "pillowcase", "torus",
                           "disk_mirror"}) {
    CAPTURE(name);
    OrbifoldAtlas a = builtin_atlas(name);
    OrbifoldAtlas b = atlas_from_json(atlas_to_json(a));
    CHECK(validate_atlas(b).empty());
    CHECK(presentation_from_atlas(b) == presentation_from_atlas(a));
    CHECK(b.charts.size() == a.charts.size());
    CHECK(b.free_signs == a.free_signs);
    CHECK(atlas_to_json(b) == atlas_to_json(a));
  }
}

TEST_CASE("product entries without chart indices") {
  Json j = atlas_to_json(builtin_atlas("triangle(2,3,7)"));
  for (auto& p : j["products"]) {
    p.erase("i");
    p.erase("j");
    p.erase("k");
  }
  OrbifoldAtlas a = atlas_from_json(j);
  REQUIRE(a.products.size() == 1);
  CHECK(a.products[0].i == 0);
  CHECK(a.products[0].j == 1);
  CHECK(a.products[0].k == 2);
  CHECK(presentation_from_atlas(a).to_string() == "<a,b,c | aa, bbb, ccccccc, abc>");

  j["products"][0]["right"] = "x";
  CHECK_THROWS_AS(atlas_from_json(j), DomainError);
}

TEST_CASE("malformed atlases") {
  CHECK_THROWS_AS(atlas_from_json(Json::parse("{}")), DomainError);
  CHECK_THROWS_AS(atlas_from_json(Json::parse(R"({"charts": [{"group": "Z2", "symbols": ["a", "b"]}]})")),
                  DomainError);
  CHECK_THROWS_AS(atlas_from_json(Json::parse(R"({"charts": [{"group": "Z9x", "symbols": ["a"]}]})")),
                  LookupError);
  CHECK_THROWS_AS(atlas_from_json(Json::parse(
                      R"({"charts": [{"group": "Z2", "symbols": ["a"]}, {"group": "Z2", "symbols": ["a"]}]})")),
                  DomainError);
  CHECK_THROWS_AS(
      atlas_from_json(Json::parse(R"({"charts": [{"group": "Z2", "symbols": ["a"]}], "gluings": [{"i": 0, "j": 3,
                                     "elements": ["1"]}]})")),
      DomainError);
}

TEST_CASE("covering json") {
  MonodromyCovering c(Presentation::parse("<t | >"), {Perm({1, 2, 3, 0})});
  MonodromyCovering back = covering_from_json(covering_to_json(c));
  CHECK(back.presentation() == c.presentation());
  CHECK(back.action() == c.action());
  CHECK(back.basepoint() == 0);

  // relations must act trivially
  CHECK_THROWS_AS(covering_from_json(Json::parse(R"({"presentation": "<a | aa>", "action": {"a": [1, 2, 0]}})")),
                  DomainError);
  CHECK_THROWS_AS(covering_from_json(Json::parse(R"({"presentation": "<a | aa>", "action": {}})")), DomainError);
  CHECK_THROWS_AS(
      covering_from_json(Json::parse(R"({"presentation": "<a | aa>", "action": {"a": [1, 0], "b": [0, 1]}})")),
      DomainError);
}

TEST_CASE("reports") {
  auto fam = make_family("hyperbolic_triangle(2,3,7)");
  GeometricStructure s = base_structure(fam);
  Json t = tangent_report_to_json(tangent_report(preholonomy(s)));
  CHECK(t["dim_h1"] == 0);
  const auto sv = t["singular_values"].get<std::vector<double>>();
  for (std::size_t k = 1; k < sv.size(); ++k) CHECK(sv[k - 1] >= sv[k]);

  Json st = structure_to_json(base_structure(make_family("pillowcase")));
  CHECK(st["family"] == "euclidean_pillowcase");
  CHECK(st["params"].size() == 8);

  Json rep = roundtrip_report_to_json(roundtrip_experiment(base_structure(make_family("flat_torus")), {3, 1e-2, 5}));
  for (const char* key : {"family", "n_trials", "seed", "max_roundtrip_error", "min_injectivity_ratio",
                          "flagged_trials"}) {
    CHECK(rep.contains(key));
  }
  CHECK(rep["n_trials"] == 3);
  CHECK(rep["seed"] == 5);

  Json r = representation_to_json(preholonomy(s));
  CHECK(r["geometry"] == "hyperbolic2");
  CHECK(r["images"].size() == 3);

  CHECK(element_word(*catalog_group("Z4"), 0) == "1");
  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), DomainError);
}
