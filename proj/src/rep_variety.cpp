#include "orbicover/rep_variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbicover/errors.hpp"

namespace orbicover {

namespace {

void check_shape(const Representation& r) {
  if (r.images.size() != r.presentation.rank()) {
    throw DomainError("representation has " + std::to_string(r.images.size()) + " images for " +
                      std::to_string(r.presentation.rank()) + " generators");
  }
  for (const auto& im : r.images) {
    if (im.geometry() != r.geometry) throw DomainError("image in the wrong geometry");
  }
}

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

std::size_t numerical_rank(const std::vector<double>& s, double rel) {
  if (s.empty() || s.front() == 0.0) return 0;
  const double cut = rel * s.front();
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [cut](double x) { return x >= cut; }));
}

}  // namespace

double relation_residual(const Representation& r) {
  check_shape(r);
  double worst = 0;
  for (const auto& rel : r.presentation.relations) {
    worst = std::max(worst, distance_to_identity(evaluate_word(r.geometry, rel, r.images).matrix()));
  }
  return worst;
}

bool on_variety(const Representation& r) { return relation_residual(r) <= r.tolerance; }

Representation conjugate(const Representation& r, const Isometry& g) {
  if (g.geometry() != r.geometry) throw DomainError("conjugating element in the wrong geometry");
  Representation out = r;
  for (auto& im : out.images) im = conjugate(g, im);
  return out;
}

double distance(const Representation& a, const Representation& b) {
  if (a.images.size() != b.images.size()) throw DomainError("representations of different rank");
  double d = 0;
  for (std::size_t i = 0; i < a.images.size(); ++i) d = std::max(d, distance(a.images[i], b.images[i]));
  return d;
}

Representation perturb(const Representation& r, const Eigen::VectorXd& v) {
  check_shape(r);
  if (static_cast<std::size_t>(v.size()) != kGroupDim * r.images.size()) {
    throw DomainError("perturbation has the wrong length");
  }
  Representation out = r;
  for (std::size_t i = 0; i < r.images.size(); ++i) {
    Vector3 vi = v.segment<kGroupDim>(static_cast<Eigen::Index>(kGroupDim * i));
    out.images[i] = compose(exp(LieVector{r.geometry, vi}), r.images[i]);
  }
  return out;
}

Eigen::VectorXd relation_defect(const Representation& r) {
  check_shape(r);
  const auto& rels = r.presentation.relations;
  Eigen::VectorXd out(static_cast<Eigen::Index>(kGroupDim * rels.size()));
  for (std::size_t j = 0; j < rels.size(); ++j) {
    out.segment<kGroupDim>(static_cast<Eigen::Index>(kGroupDim * j)) =
        log(evaluate_word(r.geometry, rels[j], r.images)).coords;
  }
  return out;
}

Eigen::MatrixXd relation_jacobian(const Representation& r, double fd_step) {
  check_shape(r);
  const auto n = static_cast<Eigen::Index>(kGroupDim * r.images.size());
  const auto m = static_cast<Eigen::Index>(kGroupDim * r.presentation.relations.size());
  Eigen::MatrixXd jac(m, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e(k) = fd_step;
    jac.col(k) = (relation_defect(perturb(r, e)) - relation_defect(perturb(r, -e))) / (2 * fd_step);
  }
  return jac;
}

Eigen::MatrixXd coboundary_matrix(const Representation& r) {
  check_shape(r);
  const auto n = static_cast<Eigen::Index>(kGroupDim * r.images.size());
  Eigen::MatrixXd c(n, kGroupDim);
  for (std::size_t i = 0; i < r.images.size(); ++i) {
    c.block<kGroupDim, kGroupDim>(static_cast<Eigen::Index>(kGroupDim * i), 0) =
        Matrix3::Identity() - adjoint(r.images[i]);
  }
  return c;
}

TangentReport tangent_report(const Representation& r, const TangentOptions& opt) {
  TangentReport rep;
  rep.residual = relation_residual(r);
  if (rep.residual > opt.max_residual) {
    throw PreconditionError("relation residual " + std::to_string(rep.residual) + " exceeds " +
                            std::to_string(opt.max_residual));
  }
  Eigen::MatrixXd jac = relation_jacobian(r, opt.fd_step);
  Eigen::MatrixXd cob = coboundary_matrix(r);
  rep.parameters = static_cast<std::size_t>(jac.cols());
  rep.equations = static_cast<std::size_t>(jac.rows());
  rep.singular_values = singular_values(jac);
  rep.coboundary_singular_values = singular_values(cob);

  const std::size_t rank = numerical_rank(rep.singular_values, opt.rank_tolerance);
  rep.dim_z1 = rep.parameters - rank;
  rep.dim_b1 = numerical_rank(rep.coboundary_singular_values, opt.rank_tolerance);
  if (rep.dim_b1 > rep.dim_z1) {
    throw NumericError("coboundary rank exceeds cocycle dimension; decrease the finite difference step");
  }
  rep.dim_h1 = rep.dim_z1 - rep.dim_b1;

  const auto& s = rep.singular_values;
  rep.gap = std::numeric_limits<double>::infinity();
  if (rank > 0 && rank < s.size()) rep.gap = s[rank] > 0 ? s[rank - 1] / s[rank] : rep.gap;
  if (!s.empty()) {
    const double cut = opt.rank_tolerance * s.front();
    for (double x : s) {
      if (x > cut / 10 && x < cut * 10) rep.rank_ambiguous = true;
    }
  }
  for (Eigen::Index k = 0; k < cob.cols() && jac.rows() > 0; ++k) {
    const double norm = cob.col(k).norm();
    if (norm > 0) rep.cocycle_defect = std::max(rep.cocycle_defect, (jac * cob.col(k)).norm() / norm);
  }
  return rep;
}

Eigen::MatrixXd cocycle_basis(const Representation& r, const TangentOptions& opt) {
  Eigen::MatrixXd jac = relation_jacobian(r, opt.fd_step);
  const auto n = jac.cols();
  if (jac.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<double> sv(s.data(), s.data() + s.size());
  const auto rank = static_cast<Eigen::Index>(numerical_rank(sv, opt.rank_tolerance));
  return svd.matrixV().rightCols(n - rank);
}

ProjectionResult project_to_variety(const Representation& r, std::size_t max_iterations, double tolerance,
                                    double fd_step) {
  ProjectionResult out{r, 0, relation_residual(r), false};
  if (r.presentation.relations.empty()) {
    out.converged = true;
    return out;
  }
  while (out.residual > tolerance && out.iterations < max_iterations) {
    Eigen::MatrixXd jac = relation_jacobian(out.rep, fd_step);
    Eigen::VectorXd defect = relation_defect(out.rep);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    Eigen::VectorXd step = -svd.solve(defect);
    out.rep = perturb(out.rep, step);
    out.residual = relation_residual(out.rep);
    ++out.iterations;
  }
  out.converged = out.residual <= tolerance;
  return out;
}

}  // namespace orbicover
