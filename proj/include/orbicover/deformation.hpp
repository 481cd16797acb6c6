#pragma once

// Geometric structures on explicit families of 2-orbifolds, their
// holonomy, the inverse map from nearby representations back to
// structures, and the roundtrip experiment that checks the two agree.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "orbicover/atlas.hpp"
#include "orbicover/group_core.hpp"
#include "orbicover/rep_variety.hpp"

namespace orbicover {

// ---------------------------------------------------------- intertwiners

/// A finite group acting by isometries, given on its generators.
struct FiniteAction {
  GroupPtr group;
  Geometry geometry = Geometry::euclidean2;
  std::vector<Isometry> generator_images;

  /// Images of every element, indexed by element id.
  std::vector<Isometry> all_images() const;
};

/// Checks that the generator images define a homomorphism (DomainError).
FiniteAction make_action(GroupPtr group, Geometry geometry, std::vector<Isometry> generator_images);

/// c h(.) c^-1.
FiniteAction conjugate(const FiniteAction& h, const Isometry& c);

struct Intertwiner {
  Geometry geometry;
  Matrix3 map;
  /// max over g of |f h(g) - h'(g) f|.
  double residual = 0;
  double condition = 0;
  double smallest_singular_value = 0;
};

/// f = (1/|G|) sum_g h'(g) h(g)^-1. Throws DomainError for different groups
/// or geometries, PreconditionError if some |h'(g) - h(g)| > closeness, and
/// NumericError if f is singular.
Intertwiner intertwiner(const FiniteAction& h, const FiniteAction& h2, double closeness = 0.1);

/// Largest |f_t - I| / |h'_t - h| over the conjugations h'_t = c_t h c_t^-1,
/// c_t = exp(t u), t = scale, scale/2, ..., scale/2^(levels-1). Pairs with
/// |h'_t - h| below 1e-14 are skipped.
double intertwiner_amplification(const FiniteAction& h, const Vector3& u, double scale, int levels = 6);

// ------------------------------------------------------------ structures

enum class FamilyKind { flat_torus, euclidean_pillowcase, euclidean_triangle, hyperbolic_triangle };

struct StructureFamily {
  FamilyKind kind = FamilyKind::flat_torus;
  std::string name;
  int p = 0, q = 0, r = 0;
  std::size_t parameter_dim = 0;
  OrbifoldAtlas atlas;
  Geometry geometry = Geometry::euclidean2;
  Presentation presentation;
};

/// "flat_torus", "euclidean_pillowcase" (or "pillowcase"),
/// "euclidean_triangle(p,q,r)" with 1/p+1/q+1/r = 1,
/// "hyperbolic_triangle(p,q,r)" with 1/p+1/q+1/r < 1. LookupError for an
/// unknown name, DomainError for orders that do not fit the geometry.
StructureFamily make_family(std::string_view name);
std::vector<std::string> family_names();

struct GeometricStructure {
  StructureFamily family;
  /// torus: v1 v2 w1 w2; pillowcase: the four centers; Euclidean
  /// triangle: the length of the first edge; hyperbolic triangle: none.
  std::vector<double> params;
};

/// The family's standard structure: unit square torus, unit square
/// pillowcase, Euclidean triangle with first edge 1, the hyperbolic
/// triangle.
GeometricStructure base_structure(const StructureFamily& f);

/// Family constraint residual: pillowcase |p1 - p2 + p3 - p4|; torus
/// 0 when |det(v, w)| > 1e-10, else 1; triangles 0.
double constraint_residual(const GeometricStructure& s);

/// Vertices of the triangle in canonical position: first at the origin,
/// second on the positive x-axis, counterclockwise.
std::vector<Point> triangle_vertices(const StructureFamily& f, double first_edge = 1.0);

/// Holonomy of the structure. PreconditionError when a constraint fails or
/// the parameter count is wrong.
Representation preholonomy(const GeometricStructure& s);

/// Conjugate of a triangle representation moving the fixed point of the
/// first generator to the origin and that of the second onto the positive
/// x-axis. Other families are returned unchanged.
Representation canonical_position(const StructureFamily& f, const Representation& r);

/// Structure read off a representation near the family. PreconditionError
/// when the relation residual exceeds 1e-9; DomainError naming the first
/// generator of the wrong type.
GeometricStructure section(const StructureFamily& f, const Representation& r);

/// Distance used for roundtrips: plain for torus and pillowcase, after
/// canonical_position for triangles.
double roundtrip_distance(const StructureFamily& f, const Representation& a, const Representation& b);

/// Quantities invariant under conjugation (center configuration modulo
/// isometry); different values certify non-conjugate representations.
std::vector<double> shape_invariants(const StructureFamily& f, const Representation& r);

struct RoundtripOptions {
  std::size_t trials = 100;
  double scale = 1e-2;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  double fd_step = 1e-5;
};

struct TrialRecord {
  std::size_t index = 0;
  bool converged = false;
  std::size_t iterations = 0;
  double projected_residual = 0;
  double roundtrip_error = 0;
  double parameter_distance = 0;
  double conjugacy_distance = 0;
};

struct RoundtripReport {
  std::string family;
  std::size_t n_trials = 0;
  std::uint64_t seed = 0;
  double scale = 0;
  std::size_t cocycle_dim = 0;
  double max_roundtrip_error = 0;
  /// Largest distance between the canonical forms of a projected
  /// perturbation and of the base (triangles only, else 0).
  double max_conjugacy_distance = 0;
  /// min over consecutive non-conjugate trial pairs of
  /// parameter distance / representation distance; +inf if no pair
  /// qualifies.
  double min_injectivity_ratio = 0;
  std::size_t injectivity_pairs = 0;
  std::size_t injectivity_violations = 0;
  std::vector<std::size_t> flagged_trials;
  std::vector<TrialRecord> trials;
};

RoundtripReport roundtrip_experiment(const GeometricStructure& base, const RoundtripOptions& opt = {});

}  // namespace orbicover
