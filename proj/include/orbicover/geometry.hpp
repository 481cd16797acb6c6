#pragma once

// 3x3 matrix models of the two-dimensional geometries
//
//   euclidean2   affine matrices [[R, t], [0, 0, 1]] acting on (x, y, 1)
//   hyperbolic2  O(2,1) matrices preserving diag(1, 1, -1) and the upper
//                sheet of the hyperboloid x^2 + y^2 - z^2 = -1
//   spherical2   O(3) acting on the unit sphere
//
// The origin of every model is (0, 0, 1). The Lie algebra basis is the
// same in all three: J (rotation about the origin) and P1, P2 (unit
// translations/boosts along x and y), P_k = e_{k,3} - K e_{3,k} where K is
// the curvature.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "orbicover/presentation.hpp"

namespace orbicover {

using Matrix3 = Eigen::Matrix3d;
using Vector3 = Eigen::Vector3d;

enum class Geometry { euclidean2, hyperbolic2, spherical2 };

inline constexpr int kGroupDim = 3;
inline constexpr int kMatrixSize = 3;

std::string to_string(Geometry g);
Geometry parse_geometry(std::string_view name);
/// 0, -1, +1.
int curvature(Geometry g);

/// A point of the model, stored in internal homogeneous coordinates.
class Point {
 public:
  static Point euclidean(double x, double y);
  /// Poincare disk coordinates; |(x, y)| < 1 or DomainError.
  static Point poincare(double x, double y);
  /// Any nonzero vector; normalized onto the sphere.
  static Point spherical(double x, double y, double z);
  /// Internal coordinates, validated for the given model.
  static Point from_internal(Geometry g, const Vector3& v);
  static Point origin(Geometry g);

  Geometry geometry() const { return geometry_; }
  const Vector3& internal() const { return v_; }
  /// (x, y) for the plane and the disk, (x, y, z) for the sphere.
  std::vector<double> model_coordinates() const;

 private:
  Point(Geometry g, Vector3 v) : geometry_(g), v_(std::move(v)) {}
  Geometry geometry_;
  Vector3 v_;
};

double distance(const Point& a, const Point& b);

/// Residual of the defining identities of the model (0 for an exact
/// isometry). For hyperbolic2 a matrix that swaps the sheets gets +inf.
double invariant_residual(Geometry g, const Matrix3& m);

class Isometry {
 public:
  /// Throws NumericError if invariant_residual(g, m) > 1e-8.
  Isometry(Geometry g, const Matrix3& m);
  static Isometry identity(Geometry g);

  Geometry geometry() const { return geometry_; }
  const Matrix3& matrix() const { return m_; }
  double residual() const { return invariant_residual(geometry_, m_); }
  /// +1 orientation preserving, -1 reversing.
  int orientation() const;
  Point apply(const Point& p) const;

 private:
  Geometry geometry_;
  Matrix3 m_;
};

/// Entrywise max norm of a - b.
double distance(const Isometry& a, const Isometry& b);
/// Entrywise max norm of m - I.
double distance_to_identity(const Matrix3& m);

/// Product a * b (apply b first). Re-projects onto the model when the
/// residual exceeds 1e-12. Throws DomainError on geometry mismatch.
Isometry compose(const Isometry& a, const Isometry& b);
Isometry inverse(const Isometry& a);
/// g * a * g^-1.
Isometry conjugate(const Isometry& g, const Isometry& a);

/// The transvection along the geodesic from the origin to `p`.
Isometry transvection_to(const Point& p);
/// Counterclockwise rotation by `angle` about `p`.
Isometry rotation_about(const Point& p, double angle);
/// Reflection in the geodesic through the origin at angle `angle` to the
/// x-axis.
Isometry reflection_through_origin(Geometry g, double angle);
/// Euclidean translation by (x, y).
Isometry translation(double x, double y);

struct LieVector {
  Geometry geometry;
  Vector3 coords;  // (rotation, P1, P2)
};

Matrix3 lie_matrix(Geometry g, const Vector3& coords);
Vector3 lie_coords(const Matrix3& x);

Isometry exp(const LieVector& v);
/// Principal logarithm of an orientation preserving isometry. Throws
/// DomainError at the cut locus (rotation part within 1e-6 of pi) and for
/// orientation reversing input.
LieVector log(const Isometry& a);

/// Ad(h) in the (J, P1, P2) basis.
Matrix3 adjoint(const Isometry& h);

/// Product of the generator images along `w` (right to left). Throws
/// DomainError for a letter without an image.
Isometry evaluate_word(Geometry g, const Word& w, std::span<const Isometry> images);

/// Fixed point of an elliptic (or, on the sphere, any nontrivial) element,
/// chosen so that the rotation angle about it lies in [0, pi]. Empty for
/// translations and the identity.
std::optional<Point> fixed_point(const Isometry& a);
/// Counterclockwise rotation angle about `center`, in (-pi, pi]; the
/// element is assumed to fix `center`.
double rotation_angle(const Isometry& a, const Point& center);

}  // namespace orbicover
