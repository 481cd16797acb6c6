#pragma once

// Points of Hom(pi_1, G) for a finitely presented group and the
// first-order structure there. A tangent vector at h is a tuple
// (v_1, ..., v_n) of Lie algebra vectors, acting by h_i -> exp(v_i) h_i.

#include <vector>

#include <Eigen/Dense>

#include "orbicover/geometry.hpp"
#include "orbicover/presentation.hpp"

namespace orbicover {

struct Representation {
  Presentation presentation;
  Geometry geometry = Geometry::euclidean2;
  std::vector<Isometry> images;
  double tolerance = 1e-9;
};

/// Max over relations of the entrywise max norm of (image - I). Throws
/// DomainError if the image count does not match the presentation.
double relation_residual(const Representation& r);
bool on_variety(const Representation& r);

/// Images g h_i g^-1.
Representation conjugate(const Representation& r, const Isometry& g);

/// Entrywise max distance between corresponding images.
double distance(const Representation& a, const Representation& b);

/// h_i -> exp(v_i) h_i with v stacked as 3 coordinates per generator.
Representation perturb(const Representation& r, const Eigen::VectorXd& v);

/// Logs of all relation images, stacked (3 per relation).
Eigen::VectorXd relation_defect(const Representation& r);

/// Jacobian of relation_defect with respect to the stacked perturbation,
/// by central differences with step `fd_step`.
Eigen::MatrixXd relation_jacobian(const Representation& r, double fd_step = 1e-5);

/// Columns: the coboundaries of the basis vectors of the Lie algebra,
/// u -> (u - Ad(h_i) u)_i.
Eigen::MatrixXd coboundary_matrix(const Representation& r);

struct TangentOptions {
  double fd_step = 1e-5;
  double rank_tolerance = 1e-7;     // relative to the largest singular value
  double max_residual = 1e-9;
};

struct TangentReport {
  std::size_t dim_z1 = 0;
  std::size_t dim_b1 = 0;
  std::size_t dim_h1 = 0;
  /// Singular values of the relation Jacobian, descending.
  std::vector<double> singular_values;
  std::vector<double> coboundary_singular_values;
  /// Smallest kept singular value over the largest dropped one (+inf when
  /// nothing is dropped or nothing is kept).
  double gap = 0;
  /// A singular value lies within a factor 10 of the rank threshold.
  bool rank_ambiguous = false;
  /// max |J c| / |c| over coboundary columns c.
  double cocycle_defect = 0;
  double residual = 0;
  std::size_t parameters = 0;
  std::size_t equations = 0;
};

/// Throws PreconditionError when the residual exceeds max_residual.
TangentReport tangent_report(const Representation& r, const TangentOptions& opt = {});

/// Orthonormal basis of the numerical null space of the relation Jacobian
/// (the cocycles Z^1), as columns.
Eigen::MatrixXd cocycle_basis(const Representation& r, const TangentOptions& opt = {});

struct ProjectionResult {
  Representation rep;
  std::size_t iterations = 0;
  double residual = 0;
  bool converged = false;
};

/// Gauss-Newton on the relation defect with minimal-norm steps.
ProjectionResult project_to_variety(const Representation& r, std::size_t max_iterations = 50,
                                    double tolerance = 1e-12, double fd_step = 1e-5);

}  // namespace orbicover
