#include "orbicover/deformation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "orbicover/errors.hpp"

namespace orbicover {

using std::numbers::pi;

// ---------------------------------------------------------- intertwiners

std::vector<Isometry> FiniteAction::all_images() const {
  std::vector<Isometry> out;
  out.reserve(group->order());
  for (const auto& w : group->shortlex_words()) out.push_back(evaluate_word(geometry, w, generator_images));
  return out;
}

FiniteAction make_action(GroupPtr group, Geometry geometry, std::vector<Isometry> generator_images) {
  if (generator_images.size() != group->generators().size()) {
    throw DomainError("need one image per group generator");
  }
  FiniteAction h{std::move(group), geometry, std::move(generator_images)};
  const auto images = h.all_images();
  const FiniteGroup& g = *h.group;
  for (ElementId e = 0; e < g.order(); ++e) {
    for (std::size_t s = 0; s < g.generators().size(); ++s) {
      Isometry want = images[g.multiply(e, g.generators()[s])];
      if (distance(compose(images[e], h.generator_images[s]), want) > 1e-9) {
        throw DomainError("generator images do not define a homomorphism");
      }
    }
  }
  return h;
}

FiniteAction conjugate(const FiniteAction& h, const Isometry& c) {
  FiniteAction out = h;
  for (auto& im : out.generator_images) im = conjugate(c, im);
  return out;
}

Intertwiner intertwiner(const FiniteAction& h, const FiniteAction& h2, double closeness) {
  if (h.group != h2.group) throw DomainError("actions of different groups");
  if (h.geometry != h2.geometry) throw DomainError("actions in different geometries");
  const auto a = h.all_images();
  const auto b = h2.all_images();
  Matrix3 f = Matrix3::Zero();
  for (std::size_t g = 0; g < a.size(); ++g) {
    if (distance(a[g], b[g]) > closeness) {
      throw PreconditionError("actions differ by " + std::to_string(distance(a[g], b[g])) + " at element " +
                              std::to_string(g) + ", more than " + std::to_string(closeness));
    }
    f += b[g].matrix() * inverse(a[g]).matrix();
  }
  f /= static_cast<double>(a.size());
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(Eigen::MatrixXd(f)).singularValues();
  Intertwiner out{h.geometry, f, 0, s(0) / s(2), s(2)};
  if (s(2) < 1e-12 * std::max(1.0, s(0))) {
    throw NumericError("intertwiner is singular (smallest singular value " + std::to_string(s(2)) + ")");
  }
  for (std::size_t g = 0; g < a.size(); ++g) {
    out.residual = std::max(out.residual, (f * a[g].matrix() - b[g].matrix() * f).cwiseAbs().maxCoeff());
  }
  return out;
}

double intertwiner_amplification(const FiniteAction& h, const Vector3& u, double scale, int levels) {
  const auto base = h.all_images();
  double worst = 0;
  double t = scale;
  for (int l = 0; l < levels; ++l, t /= 2) {
    FiniteAction h2 = conjugate(h, exp(LieVector{h.geometry, t * u}));
    const auto moved = h2.all_images();
    double change = 0;
    for (std::size_t g = 0; g < base.size(); ++g) change = std::max(change, distance(base[g], moved[g]));
    if (change < 1e-14) continue;
    Intertwiner f = intertwiner(h, h2);
    worst = std::max(worst, distance_to_identity(f.map) / change);
  }
  return worst;
}

// ------------------------------------------------------------ structures

namespace {

bool parse_orders(std::string_view args, int& p, int& q, int& r) {
  int* out[] = {&p, &q, &r};
  const char* c = args.data();
  const char* end = args.data() + args.size();
  for (int k = 0; k < 3; ++k) {
    auto res = std::from_chars(c, end, *out[k]);
    if (res.ec != std::errc()) return false;
    c = res.ptr;
    if (k < 2) {
      if (c == end || *c != ',') return false;
      ++c;
    }
  }
  return c == end;
}

std::string triangle_name(std::string_view prefix, int p, int q, int r) {
  return std::string(prefix) + "(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r) + ")";
}

bool is_triangle(FamilyKind k) {
  return k == FamilyKind::euclidean_triangle || k == FamilyKind::hyperbolic_triangle;
}

Vector3 xy(const Point& p) { return p.internal(); }

double param_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

}  // namespace

StructureFamily make_family(std::string_view name) {
  StructureFamily f;
  if (name == "flat_torus" || name == "torus") {
    f.kind = FamilyKind::flat_torus;
    f.name = "flat_torus";
    f.parameter_dim = 4;
    f.atlas = builtin_atlas("torus");
  } else if (name == "euclidean_pillowcase" || name == "pillowcase") {
    f.kind = FamilyKind::euclidean_pillowcase;
    f.name = "euclidean_pillowcase";
    f.parameter_dim = 8;
    f.atlas = builtin_atlas("pillowcase");
  } else {
    const bool euc = name.starts_with("euclidean_triangle(");
    const bool hyp = name.starts_with("hyperbolic_triangle(");
    if (!(euc || hyp) || !name.ends_with(")")) throw LookupError("unknown structure family '" + std::string(name) + "'");
    const auto open = name.find('(');
    if (!parse_orders(name.substr(open + 1, name.size() - open - 2), f.p, f.q, f.r)) {
      throw LookupError("cannot read the orders in '" + std::string(name) + "'");
    }
    for (int o : {f.p, f.q, f.r}) {
      if (o < 2 || o > 24) throw DomainError("triangle orders must lie in 2..24");
    }
    const long lhs = static_cast<long>(f.p) * f.q + static_cast<long>(f.q) * f.r + static_cast<long>(f.r) * f.p;
    const long rhs = static_cast<long>(f.p) * f.q * f.r;
    if (euc && lhs != rhs) throw DomainError("1/p + 1/q + 1/r must equal 1 for a Euclidean triangle");
    if (hyp && lhs >= rhs) throw DomainError("1/p + 1/q + 1/r must be less than 1 for a hyperbolic triangle");
    f.kind = euc ? FamilyKind::euclidean_triangle : FamilyKind::hyperbolic_triangle;
    f.name = triangle_name(euc ? "euclidean_triangle" : "hyperbolic_triangle", f.p, f.q, f.r);
    f.parameter_dim = euc ? 1 : 0;
    f.geometry = euc ? Geometry::euclidean2 : Geometry::hyperbolic2;
    f.atlas = builtin_atlas(triangle_name("triangle", f.p, f.q, f.r));
  }
  f.presentation = presentation_from_atlas(f.atlas);
  return f;
}

std::vector<std::string> family_names() {
  return {"flat_torus", "euclidean_pillowcase", "euclidean_triangle(p,q,r)", "hyperbolic_triangle(p,q,r)"};
}

GeometricStructure base_structure(const StructureFamily& f) {
  switch (f.kind) {
    case FamilyKind::flat_torus:
      return {f, {1, 0, 0, 1}};
    case FamilyKind::euclidean_pillowcase:
      return {f, {0, 0, 1, 0, 1, 1, 0, 1}};
    case FamilyKind::euclidean_triangle:
      return {f, {1}};
    case FamilyKind::hyperbolic_triangle:
      return {f, {}};
  }
  return {f, {}};
}

double constraint_residual(const GeometricStructure& s) {
  const auto& x = s.params;
  switch (s.family.kind) {
    case FamilyKind::flat_torus:
      return std::abs(x[0] * x[3] - x[1] * x[2]) > 1e-10 ? 0.0 : 1.0;
    case FamilyKind::euclidean_pillowcase:
      return std::hypot(x[0] - x[2] + x[4] - x[6], x[1] - x[3] + x[5] - x[7]);
    case FamilyKind::euclidean_triangle:
    case FamilyKind::hyperbolic_triangle:
      return 0.0;
  }
  return 0.0;
}

std::vector<Point> triangle_vertices(const StructureFamily& f, double first_edge) {
  if (!is_triangle(f.kind)) throw DomainError("not a triangle family");
  const double a = pi / f.p, b = pi / f.q, c = pi / f.r;
  if (f.kind == FamilyKind::euclidean_triangle) {
    const double side13 = first_edge * std::sin(b) / std::sin(c);
    return {Point::euclidean(0, 0), Point::euclidean(first_edge, 0),
            Point::euclidean(side13 * std::cos(a), side13 * std::sin(a))};
  }
  // hyperbolic law of cosines for the angles
  const double side12 = std::acosh((std::cos(a) * std::cos(b) + std::cos(c)) / (std::sin(a) * std::sin(b)));
  const double side13 = std::acosh((std::cos(a) * std::cos(c) + std::cos(b)) / (std::sin(a) * std::sin(c)));
  const Geometry h = Geometry::hyperbolic2;
  return {Point::origin(h), Point::from_internal(h, Vector3(std::sinh(side12), 0, std::cosh(side12))),
          Point::from_internal(h, Vector3(std::sinh(side13) * std::cos(a), std::sinh(side13) * std::sin(a),
                                          std::cosh(side13)))};
}

Representation preholonomy(const GeometricStructure& s) {
  const StructureFamily& f = s.family;
  if (s.params.size() != f.parameter_dim) {
    throw PreconditionError(f.name + " takes " + std::to_string(f.parameter_dim) + " parameters, got " +
                            std::to_string(s.params.size()));
  }
  const double defect = constraint_residual(s);
  if (defect > 1e-10) {
    throw PreconditionError(f.name + " constraint violated by " + std::to_string(defect));
  }
  Representation r{f.presentation, f.geometry, {}, 1e-9};
  const auto& x = s.params;
  switch (f.kind) {
    case FamilyKind::flat_torus:
      r.images = {translation(x[0], x[1]), translation(x[2], x[3])};
      break;
    case FamilyKind::euclidean_pillowcase:
      for (int k = 0; k < 4; ++k) r.images.push_back(rotation_about(Point::euclidean(x[2 * k], x[2 * k + 1]), pi));
      break;
    case FamilyKind::euclidean_triangle:
    case FamilyKind::hyperbolic_triangle: {
      const double edge = f.kind == FamilyKind::euclidean_triangle ? x[0] : 1.0;
      if (!(edge > 0)) throw PreconditionError("triangle edge must be positive");
      auto v = triangle_vertices(f, edge);
      const int orders[] = {f.p, f.q, f.r};
      for (int k = 0; k < 3; ++k) r.images.push_back(rotation_about(v[k], 2 * pi / orders[k]));
      break;
    }
  }
  return r;
}

Representation canonical_position(const StructureFamily& f, const Representation& r) {
  if (!is_triangle(f.kind)) return r;
  auto v1 = fixed_point(r.images.at(0));
  auto v2 = fixed_point(r.images.at(1));
  if (!v1 || !v2) throw DomainError("triangle generators a and b must be rotations");
  Isometry back = inverse(transvection_to(*v1));
  Vector3 w = xy(back.apply(*v2));
  Isometry g = compose(rotation_about(Point::origin(f.geometry), -std::atan2(w(1), w(0))), back);
  return conjugate(r, g);
}

GeometricStructure section(const StructureFamily& f, const Representation& r) {
  if (r.geometry != f.geometry) throw DomainError("representation in the wrong geometry for " + f.name);
  const double res = relation_residual(r);
  if (res > 1e-9) throw PreconditionError("relation residual " + std::to_string(res) + " exceeds 1e-9");
  const auto& names = f.presentation.generators;
  GeometricStructure s{f, {}};
  switch (f.kind) {
    case FamilyKind::flat_torus:
      for (std::size_t k = 0; k < 2; ++k) {
        const Matrix3& m = r.images[k].matrix();
        if (r.images[k].orientation() < 0 || (m.topLeftCorner<2, 2>() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() > 1e-6) {
          throw DomainError("generator " + names[k] + " is not a translation");
        }
        s.params.push_back(m(0, 2));
        s.params.push_back(m(1, 2));
      }
      break;
    case FamilyKind::euclidean_pillowcase:
      for (std::size_t k = 0; k < 4; ++k) {
        auto c = r.images[k].orientation() > 0 ? fixed_point(r.images[k]) : std::nullopt;
        if (!c || std::abs(std::abs(rotation_angle(r.images[k], *c)) - pi) > 0.2) {
          throw DomainError("generator " + names[k] + " is not a half-turn");
        }
        s.params.push_back(c->internal()(0));
        s.params.push_back(c->internal()(1));
      }
      break;
    case FamilyKind::euclidean_triangle:
    case FamilyKind::hyperbolic_triangle: {
      const int orders[] = {f.p, f.q, f.r};
      std::vector<Point> v;
      for (std::size_t k = 0; k < 3; ++k) {
        auto c = r.images[k].orientation() > 0 ? fixed_point(r.images[k]) : std::nullopt;
        if (!c || std::abs(std::remainder(rotation_angle(r.images[k], *c) - 2 * pi / orders[k], 2 * pi)) > 0.2) {
          throw DomainError("generator " + names[k] + " is not a rotation by 2pi/" + std::to_string(orders[k]));
        }
        v.push_back(*c);
      }
      if (f.kind == FamilyKind::euclidean_triangle) s.params.push_back(distance(v[0], v[1]));
      break;
    }
  }
  return s;
}

double roundtrip_distance(const StructureFamily& f, const Representation& a, const Representation& b) {
  return distance(canonical_position(f, a), canonical_position(f, b));
}

std::vector<double> shape_invariants(const StructureFamily& f, const Representation& r) {
  std::vector<double> out;
  if (f.kind == FamilyKind::flat_torus) {
    const Matrix3& a = r.images[0].matrix();
    const Matrix3& b = r.images[1].matrix();
    Eigen::Vector2d v(a(0, 2), a(1, 2)), w(b(0, 2), b(1, 2));
    return {v.dot(v), v.dot(w), w.dot(w), v(0) * w(1) - v(1) * w(0)};
  }
  std::vector<Point> centers;
  for (const auto& im : r.images) {
    auto c = fixed_point(im);
    if (!c) throw DomainError("generator without a fixed point");
    centers.push_back(*c);
  }
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (std::size_t j = i + 1; j < centers.size(); ++j) out.push_back(distance(centers[i], centers[j]));
  }
  if (f.kind == FamilyKind::euclidean_pillowcase) {
    // signed area of the first three centers separates mirror images
    Vector3 p = centers[0].internal(), q = centers[1].internal(), s = centers[2].internal();
    out.push_back((q(0) - p(0)) * (s(1) - p(1)) - (q(1) - p(1)) * (s(0) - p(0)));
  }
  return out;
}

RoundtripReport roundtrip_experiment(const GeometricStructure& base, const RoundtripOptions& opt) {
  const StructureFamily& f = base.family;
  const Representation r0 = preholonomy(base);
  const Representation canon0 = canonical_position(f, r0);
  TangentOptions topt;
  topt.fd_step = opt.fd_step;
  const Eigen::MatrixXd basis = cocycle_basis(r0, topt);

  RoundtripReport rep;
  rep.family = f.name;
  rep.n_trials = opt.trials;
  rep.seed = opt.seed;
  rep.scale = opt.scale;
  rep.cocycle_dim = static_cast<std::size_t>(basis.cols());
  rep.min_injectivity_ratio = std::numeric_limits<double>::infinity();

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::optional<std::pair<Representation, GeometricStructure>> previous;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    Eigen::VectorXd coeff(basis.cols());
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) = normal(rng);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.rows());
    if (coeff.size() > 0 && coeff.norm() > 0) v = opt.scale * basis * coeff.normalized();

    TrialRecord rec;
    rec.index = t;
    ProjectionResult proj = project_to_variety(perturb(r0, v), 50, 1e-12, opt.fd_step);
    rec.converged = proj.converged;
    rec.iterations = proj.iterations;
    rec.projected_residual = proj.residual;
    if (!proj.converged) {
      rep.flagged_trials.push_back(t);
      rep.trials.push_back(rec);
      previous.reset();
      continue;
    }
    GeometricStructure s;
    try {
      s = section(f, proj.rep);
    } catch (const Error&) {
      rep.flagged_trials.push_back(t);
      rep.trials.push_back(rec);
      previous.reset();
      continue;
    }
    Representation out = preholonomy(s);
    rec.roundtrip_error = roundtrip_distance(f, proj.rep, out);
    rec.parameter_distance = param_distance(s.params, base.params);
    if (is_triangle(f.kind)) rec.conjugacy_distance = distance(canonical_position(f, proj.rep), canon0);
    rep.max_roundtrip_error = std::max(rep.max_roundtrip_error, rec.roundtrip_error);
    rep.max_conjugacy_distance = std::max(rep.max_conjugacy_distance, rec.conjugacy_distance);

    if (previous) {
      const double d = distance(proj.rep, previous->first);
      auto s1 = shape_invariants(f, proj.rep), s2 = shape_invariants(f, previous->first);
      double shape = 0;
      for (std::size_t k = 0; k < s1.size(); ++k) shape = std::max(shape, std::abs(s1[k] - s2[k]));
      if (d >= 10 * opt.tolerance && shape >= 10 * opt.tolerance) {
        const double pd = param_distance(s.params, previous->second.params);
        ++rep.injectivity_pairs;
        if (pd < opt.tolerance) ++rep.injectivity_violations;
        rep.min_injectivity_ratio = std::min(rep.min_injectivity_ratio, pd / d);
      }
    }
    previous = std::make_pair(proj.rep, s);
    rep.trials.push_back(rec);
  }
  return rep;
}

}  // namespace orbicover
