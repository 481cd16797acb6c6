#include "orbicover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {

const Matrix3 kEta = Vector3(1.0, 1.0, -1.0).asDiagonal();

constexpr double kMaxResidual = 1e-8;
constexpr double kProjectAbove = 1e-12;

double max_abs(const Matrix3& m) { return m.cwiseAbs().maxCoeff(); }

double minkowski(const Vector3& a, const Vector3& b) {
  return a(0) * b(0) + a(1) * b(1) - a(2) * b(2);
}

void require_same(Geometry a, Geometry b) {
  if (a != b) {
    throw DomainError("geometry mismatch: " + to_string(a) + " vs " + to_string(b));
  }
}

// Nearest model matrix, for undoing round-off after long products.
Matrix3 project(Geometry g, const Matrix3& m) {
  Matrix3 out = m;
  switch (g) {
    case Geometry::euclidean2: {
      Eigen::JacobiSVD<Eigen::Matrix2d> svd(m.topLeftCorner<2, 2>(),
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      out.topLeftCorner<2, 2>() = svd.matrixU() * svd.matrixV().transpose();
      out.row(2) << 0.0, 0.0, 1.0;
      break;
    }
    case Geometry::spherical2: {
      Eigen::JacobiSVD<Matrix3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      out = svd.matrixU() * svd.matrixV().transpose();
      break;
    }
    case Geometry::hyperbolic2: {
      // Minkowski Gram-Schmidt, timelike column first.
      Vector3 c2 = m.col(2);
      c2 /= std::sqrt(-minkowski(c2, c2));
      Vector3 c0 = m.col(0);
      c0 += minkowski(c0, c2) * c2;
      c0 /= std::sqrt(minkowski(c0, c0));
      Vector3 c1 = m.col(1);
      c1 += minkowski(c1, c2) * c2;
      c1 -= minkowski(c1, c0) * c0;
      c1 /= std::sqrt(minkowski(c1, c1));
      out.col(0) = c0;
      out.col(1) = c1;
      out.col(2) = c2;
      break;
    }
  }
  return out;
}

Isometry checked(Geometry g, const Matrix3& m) {
  if (invariant_residual(g, m) > kProjectAbove) {
    Matrix3 p = project(g, m);
    if (!p.allFinite() || invariant_residual(g, p) > kMaxResidual) {
      throw NumericError("isometry drifted off the model");
    }
    return Isometry(g, p);
  }
  return Isometry(g, m);
}

// sin(x)/x and (1 - cos x)/x^2 as functions of q = x^2 (q may be negative).
double f1(double q) {
  if (std::abs(q) < 1e-4) return 1.0 - q / 6.0 + q * q / 120.0 - q * q * q / 5040.0;
  if (q > 0) {
    double s = std::sqrt(q);
    return std::sin(s) / s;
  }
  double s = std::sqrt(-q);
  return std::sinh(s) / s;
}

double f2(double q) {
  if (std::abs(q) < 1e-4) return 0.5 - q / 24.0 + q * q / 720.0 - q * q * q / 40320.0;
  if (q > 0) return (1.0 - std::cos(std::sqrt(q))) / q;
  return (std::cosh(std::sqrt(-q)) - 1.0) / (-q);
}

Vector3 disk_to_hyperboloid(double x, double y) {
  double r2 = x * x + y * y;
  return Vector3(2 * x, 2 * y, 1 + r2) / (1 - r2);
}

}  // namespace

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::euclidean2:
      return "euclidean2";
    case Geometry::hyperbolic2:
      return "hyperbolic2";
    case Geometry::spherical2:
      return "spherical2";
  }
  return "?";
}

Geometry parse_geometry(std::string_view name) {
  if (name == "euclidean2") return Geometry::euclidean2;
  if (name == "hyperbolic2") return Geometry::hyperbolic2;
  if (name == "spherical2") return Geometry::spherical2;
  throw DomainError("unknown geometry '" + std::string(name) + "'");
}

int curvature(Geometry g) {
  switch (g) {
    case Geometry::euclidean2:
      return 0;
    case Geometry::hyperbolic2:
      return -1;
    case Geometry::spherical2:
      return 1;
  }
  return 0;
}

// -------------------------------------------------------------- points

Point Point::euclidean(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("non-finite point");
  return Point(Geometry::euclidean2, Vector3(x, y, 1.0));
}

Point Point::poincare(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y) || x * x + y * y >= 1.0) {
    throw DomainError("point outside the Poincare disk");
  }
  return Point(Geometry::hyperbolic2, disk_to_hyperboloid(x, y));
}

Point Point::spherical(double x, double y, double z) {
  Vector3 v(x, y, z);
  double n = v.norm();
  if (!std::isfinite(n) || n == 0.0) throw DomainError("zero vector is not a point of the sphere");
  return Point(Geometry::spherical2, v / n);
}

Point Point::from_internal(Geometry g, const Vector3& v) {
  if (!v.allFinite()) throw DomainError("non-finite point");
  switch (g) {
    case Geometry::euclidean2:
      if (std::abs(v(2)) < 1e-300) throw DomainError("point at infinity");
      return Point(g, v / v(2));
    case Geometry::spherical2:
      return spherical(v(0), v(1), v(2));
    case Geometry::hyperbolic2: {
      double m = minkowski(v, v);
      if (m >= 0) throw DomainError("vector is not timelike");
      Vector3 w = v / std::sqrt(-m);
      if (w(2) < 0) w = -w;
      return Point(g, w);
    }
  }
  throw DomainError("unknown geometry");
}

Point Point::origin(Geometry g) { return Point(g, Vector3(0, 0, 1)); }

std::vector<double> Point::model_coordinates() const {
  switch (geometry_) {
    case Geometry::euclidean2:
      return {v_(0), v_(1)};
    case Geometry::hyperbolic2:
      return {v_(0) / (1 + v_(2)), v_(1) / (1 + v_(2))};
    case Geometry::spherical2:
      return {v_(0), v_(1), v_(2)};
  }
  return {};
}

double distance(const Point& a, const Point& b) {
  require_same(a.geometry(), b.geometry());
  switch (a.geometry()) {
    case Geometry::euclidean2:
      return (a.internal() - b.internal()).norm();
    case Geometry::hyperbolic2:
      return std::acosh(std::max(1.0, -minkowski(a.internal(), b.internal())));
    case Geometry::spherical2:
      // atan2 keeps precision for nearly equal points.
      return std::atan2(a.internal().cross(b.internal()).norm(), a.internal().dot(b.internal()));
  }
  return 0.0;
}

// ----------------------------------------------------------- isometries

double invariant_residual(Geometry g, const Matrix3& m) {
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  switch (g) {
    case Geometry::euclidean2: {
      Eigen::Matrix2d a = m.topLeftCorner<2, 2>();
      double r = (a.transpose() * a - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
      r = std::max(r, std::abs(m(2, 0)));
      r = std::max(r, std::abs(m(2, 1)));
      return std::max(r, std::abs(m(2, 2) - 1.0));
    }
    case Geometry::hyperbolic2:
      if (m(2, 2) <= 0) return std::numeric_limits<double>::infinity();
      return max_abs(m.transpose() * kEta * m - kEta);
    case Geometry::spherical2:
      return max_abs(m.transpose() * m - Matrix3::Identity());
  }
  return std::numeric_limits<double>::infinity();
}

Isometry::Isometry(Geometry g, const Matrix3& m) : geometry_(g), m_(m) {
  double r = invariant_residual(g, m);
  if (!(r <= kMaxResidual)) {
    throw NumericError("matrix is not an isometry of " + to_string(g) +
                       " (residual " + std::to_string(r) + ")");
  }
}

Isometry Isometry::identity(Geometry g) { return Isometry(g, Matrix3::Identity()); }

int Isometry::orientation() const { return m_.determinant() > 0 ? 1 : -1; }

Point Isometry::apply(const Point& p) const {
  require_same(geometry_, p.geometry());
  return Point::from_internal(geometry_, m_ * p.internal());
}

double distance(const Isometry& a, const Isometry& b) {
  require_same(a.geometry(), b.geometry());
  return max_abs(a.matrix() - b.matrix());
}

double distance_to_identity(const Matrix3& m) { return max_abs(m - Matrix3::Identity()); }

Isometry compose(const Isometry& a, const Isometry& b) {
  require_same(a.geometry(), b.geometry());
  return checked(a.geometry(), a.matrix() * b.matrix());
}

Isometry inverse(const Isometry& a) {
  const Matrix3& m = a.matrix();
  Matrix3 inv;
  switch (a.geometry()) {
    case Geometry::euclidean2: {
      Eigen::Matrix2d rt = m.topLeftCorner<2, 2>().transpose();
      inv.setIdentity();
      inv.topLeftCorner<2, 2>() = rt;
      inv.topRightCorner<2, 1>() = -rt * m.topRightCorner<2, 1>();
      break;
    }
    case Geometry::hyperbolic2:
      inv = kEta * m.transpose() * kEta;
      break;
    case Geometry::spherical2:
      inv = m.transpose();
      break;
  }
  return checked(a.geometry(), inv);
}

Isometry conjugate(const Isometry& g, const Isometry& a) {
  return compose(compose(g, a), inverse(g));
}

Isometry transvection_to(const Point& p) {
  const Geometry g = p.geometry();
  if (g == Geometry::euclidean2) return translation(p.internal()(0), p.internal()(1));
  double d = distance(Point::origin(g), p);
  double x = p.internal()(0), y = p.internal()(1);
  double r = std::hypot(x, y);
  if (r == 0.0) {
    if (d > 1.0) throw DomainError("antipodal point has no unique transvection");
    return Isometry::identity(g);
  }
  return exp(LieVector{g, Vector3(0.0, d * x / r, d * y / r)});
}

Isometry rotation_about(const Point& p, double angle) {
  const Geometry g = p.geometry();
  Isometry m = transvection_to(p);
  Isometry r = exp(LieVector{g, Vector3(angle, 0.0, 0.0)});
  return conjugate(m, r);
}

Isometry reflection_through_origin(Geometry g, double angle) {
  Matrix3 m = Matrix3::Identity();
  double c = std::cos(2 * angle), s = std::sin(2 * angle);
  m(0, 0) = c;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -c;
  return Isometry(g, m);
}

Isometry translation(double x, double y) {
  Matrix3 m = Matrix3::Identity();
  m(0, 2) = x;
  m(1, 2) = y;
  return Isometry(Geometry::euclidean2, m);
}

// ------------------------------------------------------------- Lie chart

Matrix3 lie_matrix(Geometry g, const Vector3& c) {
  const double k = curvature(g);
  Matrix3 x = Matrix3::Zero();
  x(0, 1) = -c(0);
  x(1, 0) = c(0);
  x(0, 2) = c(1);
  x(1, 2) = c(2);
  x(2, 0) = -k * c(1);
  x(2, 1) = -k * c(2);
  return x;
}

Vector3 lie_coords(const Matrix3& x) { return Vector3(x(1, 0), x(0, 2), x(1, 2)); }

Isometry exp(const LieVector& v) {
  if (!v.coords.allFinite()) throw DomainError("non-finite Lie vector");
  const double k = curvature(v.geometry);
  const Vector3& c = v.coords;
  // X^3 = -q X in every model, so the series collapses.
  double q = c(0) * c(0) + k * (c(1) * c(1) + c(2) * c(2));
  Matrix3 x = lie_matrix(v.geometry, c);
  Matrix3 m = Matrix3::Identity() + f1(q) * x + f2(q) * x * x;
  return checked(v.geometry, m);
}

LieVector log(const Isometry& a) {
  if (a.orientation() < 0) throw DomainError("log of an orientation reversing isometry");
  const Matrix3& m = a.matrix();
  double c = (m.trace() - 1.0) / 2.0;
  double q;
  if (c <= 1.0) {
    double phi = std::acos(std::max(-1.0, c));
    if (std::numbers::pi - phi < 1e-6) {
      throw DomainError("log at the cut locus (rotation angle near pi)");
    }
    q = phi * phi;
  } else {
    double s = std::acosh(c);
    q = -s * s;
  }
  Matrix3 x = (m - inverse(a).matrix()) / (2.0 * f1(q));
  return LieVector{a.geometry(), lie_coords(x)};
}

Matrix3 adjoint(const Isometry& h) {
  const Geometry g = h.geometry();
  const Matrix3 hinv = inverse(h).matrix();
  Matrix3 ad;
  for (int k = 0; k < 3; ++k) {
    Vector3 e = Vector3::Zero();
    e(k) = 1.0;
    ad.col(k) = lie_coords(h.matrix() * lie_matrix(g, e) * hinv);
  }
  return ad;
}

Isometry evaluate_word(Geometry g, const Word& w, std::span<const Isometry> images) {
  Matrix3 acc = Matrix3::Identity();
  std::vector<std::optional<Isometry>> inverses(images.size());
  for (Letter l : w) {
    std::size_t k = static_cast<std::size_t>(std::abs(l)) - 1;
    if (l == 0 || k >= images.size()) {
      throw DomainError("word letter " + std::to_string(l) + " has no image");
    }
    require_same(g, images[k].geometry());
    if (l > 0) {
      acc = acc * images[k].matrix();
    } else {
      if (!inverses[k]) inverses[k] = inverse(images[k]);
      acc = acc * inverses[k]->matrix();
    }
    if (invariant_residual(g, acc) > kProjectAbove) acc = checked(g, acc).matrix();
  }
  return checked(g, acc);
}

std::optional<Point> fixed_point(const Isometry& a) {
  const Geometry g = a.geometry();
  if (distance_to_identity(a.matrix()) < 1e-14) return std::nullopt;
  Eigen::JacobiSVD<Matrix3> svd(a.matrix() - Matrix3::Identity(), Eigen::ComputeFullV);
  Vector3 v = svd.matrixV().col(2);
  const Vector3 sv = svd.singularValues();
  // A unique fixed direction needs a one-dimensional kernel.
  if (sv(1) < 1e-9 * std::max(1.0, sv(0))) return std::nullopt;
  switch (g) {
    case Geometry::euclidean2:
      if (std::abs(v(2)) < 1e-9) return std::nullopt;
      return Point::from_internal(g, v);
    case Geometry::hyperbolic2:
      if (minkowski(v, v) >= -1e-12) return std::nullopt;
      return Point::from_internal(g, v);
    case Geometry::spherical2: {
      Point p = Point::from_internal(g, v);
      if (rotation_angle(a, p) < 0) p = Point::from_internal(g, -v);
      return p;
    }
  }
  return std::nullopt;
}

double rotation_angle(const Isometry& a, const Point& center) {
  Isometry m = transvection_to(center);
  Matrix3 r = (inverse(m).matrix() * a.matrix() * m.matrix());
  return std::atan2(r(1, 0), r(0, 0));
}

}  // namespace orbicover
