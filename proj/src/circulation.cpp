#include "genus/circulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genus/error.hpp"

namespace genus {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_regularised(const Eigen::MatrixXd& incidence, const char* what) {
  const Eigen::Index k = incidence.cols();
  Eigen::MatrixXd system = incidence.transpose() * incidence;
  system.array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> solver(system);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::SingularSystem, std::string(what) + " Laplacian + J is not positive definite (size " +
                                               std::to_string(k) + ")");
  }
  return solver;
}

HarmonicPotential potential_from(const Eigen::MatrixXd& incidence, const Eigen::LLT<Eigen::MatrixXd>& solver,
                                 int a, int b) {
  const Eigen::Index k = incidence.cols();
  if (a < 0 || b < 0 || a >= k || b >= k) throw Error(ErrorKind::MalformedInput, "pole out of range");
  if (a == b) throw Error(ErrorKind::MalformedInput, "poles must differ");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs[b] += 1.0;
  rhs[a] -= 1.0;
  HarmonicPotential pi{solver.solve(rhs), a, b};

  const Eigen::MatrixXd laplacian = incidence.transpose() * incidence;
  const double residual = (laplacian * pi.values - rhs).lpNorm<Eigen::Infinity>();
  if (!(residual <= 1e-10 * static_cast<double>(k)) || !(std::abs(pi.values.sum()) <= 1e-12)) {
    throw Error(ErrorKind::SingularSystem, "harmonic residual " + std::to_string(residual));
  }
  return pi;
}

}  // namespace

CirculationSpace::CirculationSpace(const CombinatorialMap& map) : map_(map) {
  const int m = map.edge_count();
  node_incidence_ = Eigen::MatrixXd::Zero(m, map.node_count());
  for (NodeId v = 0; v < map.node_count(); ++v) {
    for (const auto& [e, s] : map.node_incidence(v)) node_incidence_(e, v) = s;
  }
  face_incidence_ = Eigen::MatrixXd::Zero(m, map.face_count());
  for (FaceId f = 0; f < map.face_count(); ++f) {
    for (const auto& [e, s] : map.face_incidence(f)) face_incidence_(e, f) = s;
  }
  node_solver_ = factor_regularised(node_incidence_, "node");
  face_solver_ = factor_regularised(face_incidence_, "face");
}

Eigen::MatrixXd CirculationSpace::node_laplacian() const { return node_incidence_.transpose() * node_incidence_; }
Eigen::MatrixXd CirculationSpace::face_laplacian() const { return face_incidence_.transpose() * face_incidence_; }

Eigen::VectorXd CirculationSpace::solve_nodes(const Eigen::VectorXd& rhs) const { return node_solver_.solve(rhs); }
Eigen::VectorXd CirculationSpace::solve_faces(const Eigen::VectorXd& rhs) const { return face_solver_.solve(rhs); }

SubspaceDecomposition CirculationSpace::decompose(const EdgeVector& x) const {
  if (x.size() != edge_count()) throw Error(ErrorKind::DimensionMismatch, "edge vector has wrong length");
  SubspaceDecomposition parts;
  parts.x1 = node_incidence_ * solve_nodes(node_incidence_.transpose() * x);
  parts.x2 = face_incidence_ * solve_faces(face_incidence_.transpose() * x);
  parts.x3 = x - parts.x1 - parts.x2;
  return parts;
}

EdgeVector CirculationSpace::project_smooth(const EdgeVector& x) const { return decompose(x).x3; }

EdgeVector CirculationSpace::smooth_projection_of_edge(EdgeId e) const {
  // M^T chi_e and N^T chi_e are the rows of the incidence matrices.
  EdgeVector eta = -(node_incidence_ * solve_nodes(node_incidence_.row(e).transpose()));
  eta -= face_incidence_ * solve_faces(face_incidence_.row(e).transpose());
  eta[e] += 1.0;
  return eta;
}

Eigen::MatrixXd SmoothBasis::restrict_to(const ProbeSet& probe) const {
  Eigen::MatrixXd rows(probe.m0(), dimension);
  for (int i = 0; i < probe.m0(); ++i) rows.row(i) = vectors.row(probe.edges[i]);
  return rows;
}

HarmonicPotential harmonic_potential(const CombinatorialMap& map, NodeId a, NodeId b) {
  const CirculationSpace space(map);
  return potential_from(space.node_incidence(), Eigen::LLT<Eigen::MatrixXd>(
                                                    space.node_laplacian() +
                                                    Eigen::MatrixXd::Ones(map.node_count(), map.node_count())),
                        a, b);
}

HarmonicPotential dual_harmonic_potential(const CombinatorialMap& map, FaceId a, FaceId b) {
  const CirculationSpace space(map);
  return potential_from(space.face_incidence(), Eigen::LLT<Eigen::MatrixXd>(
                                                    space.face_laplacian() +
                                                    Eigen::MatrixXd::Ones(map.face_count(), map.face_count())),
                        a, b);
}

SubspaceDecomposition decompose(const CombinatorialMap& map, const EdgeVector& x) {
  return CirculationSpace(map).decompose(x);
}

EdgeVector project_smooth(const CombinatorialMap& map, const EdgeVector& x) {
  return CirculationSpace(map).project_smooth(x);
}

EdgeVector smooth_projection_closed_form(const CombinatorialMap& map, EdgeId b) {
  const int m = map.edge_count();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(map.node_count());
  if (map.tail(b) != map.head(b)) y = harmonic_potential(map, map.tail(b), map.head(b)).values;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(map.face_count());
  if (map.left_shore(b) != map.right_shore(b)) z = dual_harmonic_potential(map, map.left_shore(b), map.right_shore(b)).values;

  EdgeVector eta(m);
  for (EdgeId a = 0; a < m; ++a) {
    eta[a] = (a == b ? 1.0 : 0.0) - (y[map.head(a)] - y[map.tail(a)]) - (z[map.right_shore(a)] - z[map.left_shore(a)]);
  }
  return eta;
}

SmoothBasis smooth_basis_from_projections(const CombinatorialMap& map, const Eigen::MatrixXd& eta,
                                          const Tolerances& tol) {
  const int m = map.edge_count();
  Eigen::MatrixXd work = eta;
  std::vector<char> used(m, 0);
  std::vector<Eigen::VectorXd> basis;
  while (static_cast<int>(basis.size()) < m) {
    int pivot = -1;
    double best = tol.rank;
    for (int j = 0; j < m; ++j) {
      if (used[j]) continue;
      const double norm = work.col(j).norm();
      if (norm > best) {
        best = norm;
        pivot = j;
      }
    }
    if (pivot < 0) break;
    used[pivot] = 1;
    Eigen::VectorXd q = work.col(pivot) / best;
    // Second pass keeps the basis orthonormal to working precision.
    for (const auto& b : basis) q -= b.dot(q) * b;
    q.normalize();
    for (int j = 0; j < m; ++j) {
      if (!used[j]) work.col(j) -= q.dot(work.col(j)) * q;
    }
    basis.push_back(std::move(q));
  }

  SmoothBasis out;
  out.dimension = static_cast<int>(basis.size());
  out.vectors.resize(m, out.dimension);
  for (int i = 0; i < out.dimension; ++i) out.vectors.col(i) = basis[i];
  if (out.dimension != 2 * map.genus()) {
    throw Error(ErrorKind::RankMismatch, "numerical rank " + std::to_string(out.dimension) + " but 2g = " +
                                             std::to_string(2 * map.genus()));
  }
  return out;
}

SmoothBasis smooth_basis(const CirculationSpace& space, const Tolerances& tol) {
  const int m = space.edge_count();
  Eigen::MatrixXd eta(m, m);
  for (EdgeId e = 0; e < m; ++e) eta.col(e) = space.smooth_projection_of_edge(e);
  return smooth_basis_from_projections(space.map(), eta, tol);
}

SmoothBasis smooth_basis(const CombinatorialMap& map, const Tolerances& tol) {
  return smooth_basis(CirculationSpace(map), tol);
}

namespace {

// Smallest positive eigenvalue of (1/count) sum a_i a_i^T / |a_i|^2, read
// off the Gram matrix of the normalised nonzero columns.
double smallest_positive_eigenvalue(const Eigen::MatrixXd& incidence, int count, double rel_tol) {
  std::vector<int> nonzero;
  for (Eigen::Index j = 0; j < incidence.cols(); ++j) {
    if (incidence.col(j).squaredNorm() > 0) nonzero.push_back(static_cast<int>(j));
  }
  if (nonzero.empty()) return 1.0;
  Eigen::MatrixXd normalised(incidence.rows(), static_cast<Eigen::Index>(nonzero.size()));
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    normalised.col(static_cast<Eigen::Index>(i)) = incidence.col(nonzero[i]).normalized();
  }
  const Eigen::MatrixXd gram = normalised.transpose() * normalised / static_cast<double>(count);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  const auto& values = solver.eigenvalues();
  const double cut = rel_tol * values.maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > cut) return values[i];
  }
  return 1.0;
}

}  // namespace

EigenGap eigengap(const CombinatorialMap& map, const Tolerances& tol) {
  const CirculationSpace space(map);
  EigenGap gap;
  gap.lambda_node = smallest_positive_eigenvalue(space.node_incidence(), map.node_count(), tol.eigen);
  gap.lambda_face = smallest_positive_eigenvalue(space.face_incidence(), map.face_count(), tol.eigen);
  gap.mu = std::min(gap.lambda_node, gap.lambda_face);
  return gap;
}

EdgeVector smooth_representative(const CombinatorialMap& map, const EdgeVector& phi) {
  const CirculationSpace space(map);
  if (phi.size() != map.edge_count()) throw Error(ErrorKind::DimensionMismatch, "edge vector has wrong length");
  const double violation = (space.node_incidence().transpose() * phi).norm();
  if (violation > 1e-9 * std::max(1.0, phi.norm())) {
    throw Error(ErrorKind::NotACirculation, "|M^T phi| = " + std::to_string(violation));
  }
  return phi - space.decompose(phi).x2;
}

int numerical_rank(const Eigen::MatrixXd& a, double tol) {
  if (a.size() == 0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double cut = tol * std::max(1.0, s.size() ? s[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > cut ? 1 : 0;
  return rank;
}

}  // namespace genus
