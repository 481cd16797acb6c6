#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "orbicover/serialize.hpp"

using namespace orbicover;

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(ORBICOVER_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("covers") {
  auto r = run({"covers", "S3"});
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["count"] == oracle::conjugacy_class_count(*catalog_group("S3")));
  CHECK(j["coverings"].size() == j["count"]);
  CHECK(j["morphisms"].size() == j["count"]);
  // the trivial subgroup covers everything, G covers only itself
  for (const auto& row : j["morphisms"][0]) CHECK(!row.empty());
  CHECK(j["morphisms"][3][0].empty());
}

TEST_CASE("fiber-product") {
  auto r = run({"fiber-product", "Z2", "e", "e"});
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["count"] == 2);
  for (const auto& c : j["components"]) {
    CHECK(c["subgroup_order"] == 1);
    CHECK(c["index"] == 2);
  }

  Json s3 = Json::parse(run({"fiber-product", "S3", "g1", "p:1,0,2", "#1"}).out);
  CHECK(s3["factor_orders"] == Json::array({2, 2, 2}));
  CHECK(run({"fiber-product", "S3", "#9"}).status == 1);
}

TEST_CASE("monodromy-product") {
  Json j = Json::parse(run({"monodromy-product", data("circle_double.json"), data("folded_interval.json")}).out);
  CHECK(j["fiber_size"] == 4);
  CHECK(j["connected"] == true);
  CHECK(j["components"][0]["deck_order"] == 4);

  Json k = Json::parse(run({"monodromy-product", data("circle_shift2.json"), data("circle_shift4.json")}).out);
  CHECK(k["count"] == 2);
  for (const auto& c : k["components"]) CHECK(c["size"] == 4);

  auto bad = run({"monodromy-product", data("circle_double.json"), data("circle_shift4.json")});
  CHECK(bad.status == 1);
  CHECK(Json::parse(bad.err)["error"] == "domain_error");
}

TEST_CASE("atlas commands") {
  Json p = Json::parse(run({"presentation", "triangle(2,3,7)"}).out);
  CHECK(p["presentation"] == "<a,b,c | aa, bbb, ccccccc, abc>");

  Json u = Json::parse(run({"universal-cover", data("triangle_233.json")}).out);
  // the (2,3,3) triangle group is the tetrahedral rotation group
  CHECK(u["order"] == catalog_group("A4")->order());
  CHECK(u["simply_transitive"] == true);

  Json v = Json::parse(run({"validate", data("interval_two_mirrors.json")}).out);
  CHECK(v["valid"] == true);

  Json d = Json::parse(run({"double-cover", data("interval_two_mirrors.json")}).out);
  CHECK(d["presentation"] == "<x1 | >");

  auto big = run({"universal-cover", "pillowcase", "--max-cosets", "300"});
  CHECK(big.status == 2);
  CHECK(Json::parse(big.err)["error"] == "resource_error");
}

TEST_CASE("geometry commands") {
  Json h = Json::parse(run({"holonomy", "flat_torus", "1,0,0.5,1"}).out);
  CHECK(h["structure"]["params"] == Json::array({1.0, 0.0, 0.5, 1.0}));
  CHECK(h["residual"].get<double>() <= 1e-12);

  Json t = Json::parse(run({"tangent", "hyperbolic_triangle(2,3,7)"}).out);
  CHECK(t["dim_h1"] == 0);

  Json d = Json::parse(run({"deform", "pillowcase", "--scale", "1e-2", "--trials", "10", "--seed", "7"}).out);
  CHECK(d["n_trials"] == 10);
  CHECK(d["seed"] == 7);
  CHECK(d["max_roundtrip_error"].get<double>() <= 1e-8);

  auto bad = run({"holonomy", "pillowcase", "0,0,1"});
  CHECK(bad.status == 1);
  CHECK(Json::parse(bad.err)["error"] == "precondition_error");
  CHECK(run({"holonomy", "pillowcase", "x"}).status == 1);
}

TEST_CASE("formats and output") {
  auto csv = run({"fiber-product", "Z2", "e", "e", "--format", "csv"});
  REQUIRE(csv.status == 0);
  CHECK(csv.out.rfind("index,representatives,size,subgroup_order\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 3);

  const std::string path = "test_cli_output.json";
  std::remove(path.c_str());
  auto r = run({"covers", "Z4", "--output", path});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(Json::parse(in)["count"] == oracle::conjugacy_class_count(*catalog_group("Z4")));
  std::remove(path.c_str());

  CHECK(run({"covers", "S3", "--format", "xml"}).status == 1);
  auto none = run({});
  CHECK(none.status == 1);
  CHECK(Json::parse(none.err)["error"] == "usage_error");
}

TEST_CASE("repeatable output") {
  const std::vector<std::string> cmd = {"deform", "flat_torus", "--trials", "5", "--seed", "3"};
  CHECK(run(cmd).out == run(cmd).out);
  auto other = cmd;
  other.back() = "4";
  CHECK(run(cmd).out != run(other).out);
}
