#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "orbicover/deformation.hpp"
#include "orbicover/errors.hpp"

using namespace orbicover;
using std::numbers::pi;

namespace {

const Geometry kE = Geometry::euclidean2;

// x -> 2c - x
Matrix3 half_turn(double cx, double cy) {
  Matrix3 m = Matrix3::Identity();
  m(0, 0) = m(1, 1) = -1;
  m(0, 2) = 2 * cx;
  m(1, 2) = 2 * cy;
  return m;
}

FiniteAction rotations(const char* group, int n) {
  return make_action(catalog_group(group), kE, {rotation_about(Point::origin(kE), 2 * pi / n)});
}

FiniteAction dihedral4() {
  return make_action(catalog_group("D4"), kE,
                     {rotation_about(Point::origin(kE), pi / 2), reflection_through_origin(kE, 0)});
}

}  // namespace

TEST_CASE("families") {
  CHECK(make_family("flat_torus").parameter_dim == 4);
  CHECK(make_family("pillowcase").parameter_dim == 8);
  CHECK(make_family("euclidean_triangle(2,4,4)").parameter_dim == 1);
  CHECK(make_family("hyperbolic_triangle(2,3,7)").parameter_dim == 0);
  CHECK(make_family("hyperbolic_triangle(2,3,7)").presentation.to_string() == "<a,b,c | aa, bbb, ccccccc, abc>");
  CHECK_THROWS_AS(make_family("euclidean_triangle(2,3,7)"), DomainError);
  CHECK_THROWS_AS(make_family("hyperbolic_triangle(3,3,3)"), DomainError);
  CHECK_THROWS_AS(make_family("klein_bottle"), LookupError);
  CHECK_THROWS_AS(make_family("hyperbolic_triangle(2,3)"), LookupError);
}

TEST_CASE("intertwiner") {
  FiniteAction z4 = rotations("Z4", 4);
  Intertwiner same = intertwiner(z4, z4);
  CHECK(distance_to_identity(same.map) <= 1e-15);

  // reflection in the x-axis against reflection in the line at angle 0.1
  GroupPtr z2 = catalog_group("Z2");
  FiniteAction h = make_action(z2, kE, {Isometry(kE, Vector3(1, -1, 1).asDiagonal())});
  FiniteAction h2 = make_action(z2, kE, {reflection_through_origin(kE, 0.1)});
  // the mirrors differ by sin(0.2) ~ 0.2 entrywise, beyond the default 0.1
  CHECK_THROWS_AS(intertwiner(h, h2), PreconditionError);
  Intertwiner f = intertwiner(h, h2, 0.25);
  CHECK(f.residual <= 1e-10);
  const Matrix3 m = h2.generator_images[0].matrix();
  CHECK((f.map * h.generator_images[0].matrix() - m * f.map).cwiseAbs().maxCoeff() <= 1e-10);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    Vector3 v(u(rng), u(rng), u(rng));
    Isometry c = exp(LieVector{kE, 0.05 * v.normalized()});
    Intertwiner g = intertwiner(z4, conjugate(z4, c));
    CHECK(g.residual <= 1e-10);
    // c^-1 f centralizes the action
    Matrix3 z = inverse(c).matrix() * g.map;
    for (const auto& im : z4.all_images()) CHECK((z * im.matrix() - im.matrix() * z).cwiseAbs().maxCoeff() <= 1e-10);
  }

  CHECK_THROWS_AS(intertwiner(h, make_action(z2, kE, {reflection_through_origin(kE, 0.5)})), PreconditionError);
  // perpendicular mirrors average to a singular matrix
  CHECK_THROWS_AS(intertwiner(h, make_action(z2, kE, {reflection_through_origin(kE, pi / 2)}), 10.0),
                  NumericError);
  CHECK_THROWS_AS(intertwiner(h, z4), DomainError);
  CHECK_THROWS_AS(make_action(z2, kE, {rotation_about(Point::origin(kE), 1.0)}), DomainError);
}

TEST_CASE("intertwiner continuity") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const FiniteAction& h : {rotations("Z2", 2), rotations("Z4", 4), dihedral4()}) {
    for (int t = 0; t < 10; ++t) {
      Vector3 v(u(rng), u(rng), u(rng));
      CHECK(intertwiner_amplification(h, v.normalized(), 0.05) <= 10);
    }
  }
}

TEST_CASE("preholonomy") {
  auto torus = preholonomy(base_structure(make_family("flat_torus")));
  CHECK(relation_residual(torus) == 0.0);
  CHECK(distance(torus.images[0], translation(1, 0)) == 0.0);
  CHECK(distance(torus.images[1], translation(0, 1)) == 0.0);

  auto pc = preholonomy(base_structure(make_family("pillowcase")));
  const double centers[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  Matrix3 prod = Matrix3::Identity();
  for (int k = 0; k < 4; ++k) {
    CHECK((pc.images[k].matrix() - half_turn(centers[k][0], centers[k][1])).cwiseAbs().maxCoeff() <= 1e-15);
    prod = prod * half_turn(centers[k][0], centers[k][1]);
  }
  CHECK((prod - Matrix3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(relation_residual(pc) <= 1e-15);

  for (const char* name : {"euclidean_triangle(2,4,4)", "euclidean_triangle(3,3,3)", "euclidean_triangle(2,3,6)",
                           "hyperbolic_triangle(2,3,7)", "hyperbolic_triangle(3,3,4)"}) {
    CAPTURE(name);
    CHECK(relation_residual(preholonomy(base_structure(make_family(name)))) <= 1e-10);
  }

  // first edge of the (2,3,7) triangle from the hyperbolic law of cosines
  auto f = make_family("hyperbolic_triangle(2,3,7)");
  auto v = triangle_vertices(f);
  const double want = std::acosh(std::cos(pi / 7) / std::sin(pi / 3));
  CHECK(distance(v[0], v[1]) == doctest::Approx(want).epsilon(1e-12));

  GeometricStructure bad = base_structure(make_family("pillowcase"));
  bad.params[6] += 1e-3;
  CHECK_THROWS_AS(preholonomy(bad), PreconditionError);
  GeometricStructure flat = base_structure(make_family("flat_torus"));
  flat.params = {1, 0, 2, 0};
  CHECK_THROWS_AS(preholonomy(flat), PreconditionError);
}

TEST_CASE("conjugation equivariance") {
  auto fam = make_family("pillowcase");
  GeometricStructure s = base_structure(fam);
  s.params = {0.1, 0.2, 1.3, 0.1, 1.5, 1.2, 0.3, 1.3};
  Isometry g = compose(translation(0.4, -0.7), rotation_about(Point::origin(kE), 0.9));
  GeometricStructure moved = s;
  for (int k = 0; k < 4; ++k) {
    Point p = g.apply(Point::euclidean(s.params[2 * k], s.params[2 * k + 1]));
    moved.params[2 * k] = p.internal()(0);
    moved.params[2 * k + 1] = p.internal()(1);
  }
  CHECK(distance(preholonomy(moved), conjugate(preholonomy(s), g)) <= 1e-10);
}

TEST_CASE("section") {
  for (const char* name : {"flat_torus", "pillowcase", "euclidean_triangle(2,4,4)", "hyperbolic_triangle(2,3,7)"}) {
    auto fam = make_family(name);
    GeometricStructure s = base_structure(fam);
    auto back = section(fam, preholonomy(s));
    REQUIRE(back.params.size() == s.params.size());
    for (std::size_t k = 0; k < s.params.size(); ++k) CHECK(back.params[k] == doctest::Approx(s.params[k]).epsilon(1e-12));
  }

  auto fam = make_family("pillowcase");
  const double eps = 1e-3;
  Representation r{fam.presentation, kE,
                   {Isometry(kE, half_turn(eps, 0)), Isometry(kE, half_turn(1 + eps, 0)),
                    Isometry(kE, half_turn(1, 1)), Isometry(kE, half_turn(0, 1))}};
  auto s = section(fam, r);
  const std::vector<double> want = {eps, 0, 1 + eps, 0, 1, 1, 0, 1};
  for (std::size_t k = 0; k < 8; ++k) CHECK(s.params[k] == doctest::Approx(want[k]).epsilon(1e-14));
  CHECK(distance(preholonomy(s), r) <= 1e-9);

  r.images[3] = Isometry(kE, half_turn(eps, 1));
  CHECK_THROWS_AS(section(fam, r), PreconditionError);

  Representation idle{fam.presentation, kE, std::vector<Isometry>(4, Isometry::identity(kE))};
  CHECK_THROWS_WITH_AS(section(fam, idle), "generator a is not a half-turn", DomainError);

  // a triangle moved away from canonical position comes back up to conjugation
  auto tri = make_family("hyperbolic_triangle(2,3,7)");
  Representation base = preholonomy(base_structure(tri));
  Representation away = conjugate(base, exp(LieVector{Geometry::hyperbolic2, Vector3(0.3, 0.2, -0.4)}));
  CHECK(roundtrip_distance(tri, away, preholonomy(section(tri, away))) <= 1e-9);
}

TEST_CASE("roundtrip experiments") {
  for (const char* name : {"flat_torus", "pillowcase", "euclidean_triangle(2,3,6)", "hyperbolic_triangle(2,3,7)"}) {
    auto rep = roundtrip_experiment(base_structure(make_family(name)), {5, 0.0, 3});
    CHECK(rep.max_roundtrip_error <= 1e-11);
    CHECK(rep.flagged_trials.empty());
  }

  // rep distance of half-turns is 2 max|dp| <= 2 |dp|, of translations
  // max|dv| <= |dv|; hence the lower bounds 1/2 and 1
  auto pc = roundtrip_experiment(base_structure(make_family("pillowcase")), {30, 1e-2, 7});
  CHECK(pc.cocycle_dim == 6);
  CHECK(pc.flagged_trials.empty());
  CHECK(pc.max_roundtrip_error <= 1e-8);
  CHECK(pc.injectivity_pairs > 0);
  CHECK(pc.injectivity_violations == 0);
  CHECK(pc.min_injectivity_ratio >= 0.45);

  auto torus = roundtrip_experiment(base_structure(make_family("flat_torus")), {30, 1e-2, 7});
  CHECK(torus.max_roundtrip_error <= 1e-8);
  CHECK(torus.min_injectivity_ratio >= 0.95);

  auto hyp = roundtrip_experiment(base_structure(make_family("hyperbolic_triangle(2,3,7)")), {20, 1e-2, 7});
  CHECK(hyp.cocycle_dim == 3);
  CHECK(hyp.flagged_trials.empty());
  CHECK(hyp.max_conjugacy_distance <= 1e-6);
  CHECK(hyp.injectivity_pairs == 0);

  auto euc = roundtrip_experiment(base_structure(make_family("euclidean_triangle(2,4,4)")), {20, 1e-2, 7});
  CHECK(euc.cocycle_dim == 4);
  CHECK(euc.max_roundtrip_error <= 1e-8);
}
