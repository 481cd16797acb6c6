#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "orbicover/errors.hpp"
#include "orbicover/rep_variety.hpp"

using namespace orbicover;
using std::numbers::pi;

namespace {

// Affine oracle: x -> R(theta)(x - c) + c as a 3x3 matrix.
Matrix3 affine_rotation(double cx, double cy, double theta) {
  Matrix3 m = Matrix3::Identity();
  m.topLeftCorner<2, 2>() << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Eigen::Vector2d c(cx, cy);
  m.topRightCorner<2, 1>() = c - m.topLeftCorner<2, 2>() * c;
  return m;
}

// Hyperboloid oracle: rotation by theta about the point at distance d from
// the origin in direction phi, as T R T^-1 with T = rot(phi) boost(d).
Matrix3 rot(double t) {
  Matrix3 m = Matrix3::Identity();
  m.topLeftCorner<2, 2>() << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

Matrix3 boost(double d) {
  Matrix3 m = Matrix3::Identity();
  m(0, 0) = m(2, 2) = std::cosh(d);
  m(0, 2) = m(2, 0) = std::sinh(d);
  return m;
}

Matrix3 hyperbolic_rotation(double d, double phi, double theta) {
  Matrix3 t = rot(phi) * boost(d);
  return t * rot(theta) * t.inverse();
}

// (2,3,7) triangle with vertices v1 at the origin, v2 along +x, v3 at angle
// pi/2 from the first edge, built from the hyperbolic laws of cosines.
Representation hyperbolic_237() {
  const double a = pi / 2, b = pi / 3, c = pi / 7;
  const double s12 = std::acosh((std::cos(a) * std::cos(b) + std::cos(c)) / (std::sin(a) * std::sin(b)));
  const double s13 = std::acosh((std::cos(a) * std::cos(c) + std::cos(b)) / (std::sin(a) * std::sin(c)));
  Geometry h = Geometry::hyperbolic2;
  return {Presentation::parse("<a,b,c | aa, bbb, ccccccc, abc>"),
          h,
          {Isometry(h, hyperbolic_rotation(0, 0, 2 * a)), Isometry(h, hyperbolic_rotation(s12, 0, 2 * b)),
           Isometry(h, hyperbolic_rotation(s13, a, 2 * c))}};
}

Representation pillowcase(double dx = 0) {
  Geometry e = Geometry::euclidean2;
  return {Presentation::parse("<a,b,c,d | aa, bb, cc, dd, abcd>"),
          e,
          {Isometry(e, affine_rotation(0, 0, pi)), Isometry(e, affine_rotation(1, 0, pi)),
           Isometry(e, affine_rotation(1, 1, pi)), Isometry(e, affine_rotation(-dx, 1, pi))}};
}

Matrix3 generator(Geometry g, const Vector3& v) {
  const double k = g == Geometry::euclidean2 ? 0.0 : (g == Geometry::hyperbolic2 ? -1.0 : 1.0);
  Matrix3 x = Matrix3::Zero();
  x(1, 0) = v(0);
  x(0, 1) = -v(0);
  x(0, 2) = v(1);
  x(2, 0) = -k * v(1);
  x(1, 2) = v(2);
  x(2, 1) = -k * v(2);
  return x;
}

// Relation Jacobian through the Eigen matrix exponential and logarithm,
// with forward differences: shares no code with the library's chart.
Eigen::MatrixXd oracle_jacobian(const Representation& r, double step) {
  const Geometry g = r.geometry;
  auto defect = [&](const std::vector<Matrix3>& imgs) {
    Eigen::VectorXd out(3 * r.presentation.relations.size());
    for (std::size_t j = 0; j < r.presentation.relations.size(); ++j) {
      Matrix3 m = Matrix3::Identity();
      for (Letter l : r.presentation.relations[j]) {
        const Matrix3& x = imgs[static_cast<std::size_t>(std::abs(l) - 1)];
        m = m * (l > 0 ? x : x.inverse());
      }
      Matrix3 lg = m.log();
      out.segment<3>(3 * j) = Vector3(lg(1, 0), lg(0, 2), lg(1, 2));
    }
    return out;
  };
  std::vector<Matrix3> base;
  for (const auto& im : r.images) base.push_back(im.matrix());
  Eigen::VectorXd f0 = defect(base);
  Eigen::MatrixXd j(f0.size(), 3 * base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      Vector3 v = Vector3::Zero();
      v(k) = step;
      auto moved = base;
      moved[i] = generator(g, v).exp() * base[i];
      j.col(static_cast<Eigen::Index>(3 * i + k)) = (defect(moved) - f0) / step;
    }
  }
  return j;
}

std::size_t rank_of(const Eigen::MatrixXd& m, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  std::size_t n = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k) n += s(k) >= rel * s(0);
  return n;
}

}  // namespace

TEST_CASE("relation residual") {
  Geometry e = Geometry::euclidean2;
  Representation triv{Presentation::parse("<a,b | abAB, aab>"), e, {Isometry::identity(e), Isometry::identity(e)}};
  CHECK(relation_residual(triv) == 0.0);

  // right isosceles triangle, right angle at the origin
  Representation t244{Presentation::parse("<a,b,c | aa, bbbb, cccc, abc>"),
                      e,
                      {Isometry(e, affine_rotation(0, 0, pi)), Isometry(e, affine_rotation(1, 0, pi / 2)),
                       Isometry(e, affine_rotation(0, 1, pi / 2))}};
  CHECK(relation_residual(t244) <= 1e-12);

  CHECK(relation_residual(pillowcase()) <= 1e-15);
  CHECK(relation_residual(pillowcase(0.1)) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(relation_residual(hyperbolic_237()) <= 1e-12);

  Representation bad = triv;
  bad.images.pop_back();
  CHECK_THROWS_AS(relation_residual(bad), DomainError);
}

TEST_CASE("conjugation") {
  Representation r = pillowcase();
  CHECK(distance(conjugate(r, Isometry::identity(Geometry::euclidean2)), r) == 0.0);
  Representation moved = conjugate(r, translation(0.25, -0.5));
  // x -> 2c - x about c + t
  CHECK(moved.images[2].matrix()(0, 2) == doctest::Approx(2 * 1.25));
  CHECK(moved.images[2].matrix()(1, 2) == doctest::Approx(2 * 0.5));
  CHECK_THROWS_AS(conjugate(r, Isometry::identity(Geometry::spherical2)), DomainError);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  Representation defect = pillowcase(0.1);
  Representation on = pillowcase();
  Representation h = hyperbolic_237();
  for (int t = 0; t < 100; ++t) {
    Vector3 v(u(rng), u(rng), u(rng));
    // the abcd defect is a translation, so translations leave it alone
    Isometry shift = translation(v(1), v(2));
    CHECK(std::abs(relation_residual(conjugate(defect, shift)) - relation_residual(defect)) <= 1e-11);
    Isometry ge = exp(LieVector{Geometry::euclidean2, v});
    CHECK(std::abs(relation_residual(conjugate(on, ge)) - relation_residual(on)) <= 1e-11);
    Isometry gh = exp(LieVector{Geometry::hyperbolic2, 0.5 * v});
    CHECK(std::abs(relation_residual(conjugate(h, gh)) - relation_residual(h)) <= 1e-11);
  }
}

TEST_CASE("tangent report on a free group") {
  Geometry s = Geometry::spherical2;
  Representation r{Presentation::parse("<a,b | >"), s,
                   {exp(LieVector{s, Vector3(0.2, 0.1, 0)}), exp(LieVector{s, Vector3(0, 0.3, -0.1)})}};
  auto rep = tangent_report(r);
  CHECK(rep.dim_z1 == 6);
  CHECK(rep.dim_b1 <= 3);
  CHECK(rep.dim_h1 == rep.dim_z1 - rep.dim_b1);
  CHECK(rep.singular_values.empty());
}

TEST_CASE("rigidity of the (2,3,7) triangle") {
  Representation r = hyperbolic_237();
  auto rep = tangent_report(r);
  CHECK(rep.parameters == 9);
  CHECK(rep.equations == 12);
  CHECK(rep.dim_z1 == 3);
  CHECK(rep.dim_b1 == 3);
  CHECK(rep.dim_h1 == 0);
  CHECK(rep.gap >= 1e4);
  CHECK_FALSE(rep.rank_ambiguous);
  CHECK(rep.cocycle_defect <= 10 * 1e-10);
  CHECK(9 - rank_of(oracle_jacobian(r, 1e-7), 1e-5) == rep.dim_z1);
  for (std::size_t k = 1; k < rep.singular_values.size(); ++k) {
    CHECK(rep.singular_values[k - 1] >= rep.singular_values[k]);
  }
}

TEST_CASE("pillowcase tangent space") {
  // Each generator stays a half-turn (2 dims each) and abcd = 1 costs the
  // two translation components: Z1 = 8 - 2 = 6; conjugation gives B1 = 3.
  Representation r = pillowcase();
  auto rep = tangent_report(r);
  CHECK(rep.dim_z1 == 6);
  CHECK(rep.dim_b1 == 3);
  CHECK(rep.dim_h1 == 3);
  CHECK(12 - rank_of(oracle_jacobian(r, 1e-7), 1e-5) == rep.dim_z1);
  CHECK(rep.cocycle_defect <= 10 * 1e-10);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    Isometry g = exp(LieVector{Geometry::euclidean2, Vector3(u(rng), u(rng), u(rng))});
    auto other = tangent_report(conjugate(r, g));
    CHECK(other.dim_z1 == rep.dim_z1);
    CHECK(other.dim_b1 == rep.dim_b1);
  }

  CHECK_THROWS_AS(tangent_report(pillowcase(1e-3)), PreconditionError);
}

TEST_CASE("finite difference consistency") {
  for (const Representation& r : {pillowcase(), hyperbolic_237()}) {
    TangentOptions a, b;
    b.fd_step = a.fd_step / 2;
    auto ra = tangent_report(r, a), rb = tangent_report(r, b);
    REQUIRE(ra.singular_values.size() == rb.singular_values.size());
    for (std::size_t k = 0; k < ra.singular_values.size(); ++k) {
      CHECK(std::abs(ra.singular_values[k] - rb.singular_values[k]) <=
            8 * a.fd_step * a.fd_step * std::max(1.0, ra.singular_values.front()));
    }
  }
}

TEST_CASE("projection to the variety") {
  Representation r = pillowcase();
  Eigen::VectorXd v(12);
  for (int k = 0; k < 12; ++k) v(k) = 0.01 * std::sin(k + 1.0);
  auto p = project_to_variety(perturb(r, v));
  CHECK(p.converged);
  CHECK(p.residual <= 1e-12);
  CHECK(p.iterations <= 50);
  CHECK(distance(p.rep, r) < 0.05);

  Eigen::MatrixXd z = cocycle_basis(r);
  CHECK(z.cols() == 6);
  Eigen::MatrixXd j = relation_jacobian(r);
  CHECK((j * z).cwiseAbs().maxCoeff() <= 1e-8);
}
