#pragma once

#include <Eigen/Dense>

#include "genus/map.hpp"

namespace genus {

/// Node potential solving (L + J) pi = chi_b - chi_a, normalised to sum 0.
/// The same type holds face potentials of the dual (poles are then faces).
struct HarmonicPotential {
  Eigen::VectorXd values;
  int pole_a = 0;
  int pole_b = 0;
};

/// x = x1 + x2 + x3 with x1 in span{delta v}, x2 in span{boundary F} and
/// x3 smooth.
struct SubspaceDecomposition {
  EdgeVector x1;
  EdgeVector x2;
  EdgeVector x3;
};

struct SmoothBasis {
  Eigen::MatrixXd vectors;  // m x dimension, orthonormal columns
  int dimension = 0;

  /// Rows of the basis belonging to the probe edges.
  Eigen::MatrixXd restrict_to(const ProbeSet& probe) const;
};

/// Smallest positive eigenvalues of the averaged node and face projector
/// matrices; mu = min(lambda_node, lambda_face).
struct EigenGap {
  double lambda_node = 1.0;
  double lambda_face = 1.0;
  double mu = 1.0;
};

struct Tolerances {
  /// Rank cut for the smooth basis (absolute, on the unit scale of chi_e).
  double rank = 1e-9;
  /// Eigenvalues below this fraction of the largest one count as zero.
  double eigen = 1e-9;
};

/// Incidence operators of a map with factorised regularised Laplacians.
/// Building it costs two dense Cholesky factorisations; every projection
/// afterwards is two triangular solves.
class CirculationSpace {
 public:
  explicit CirculationSpace(const CombinatorialMap& map);

  const CombinatorialMap& map() const { return map_; }
  int edge_count() const { return static_cast<int>(node_incidence_.rows()); }

  /// M: m x n, columns delta v.  N: m x f, columns boundary F.
  const Eigen::MatrixXd& node_incidence() const { return node_incidence_; }
  const Eigen::MatrixXd& face_incidence() const { return face_incidence_; }
  /// L = M^T M and L* = N^T N.
  Eigen::MatrixXd node_laplacian() const;
  Eigen::MatrixXd face_laplacian() const;

  /// Solves (L + J) y = rhs, respectively (L* + J) z = rhs.
  Eigen::VectorXd solve_nodes(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_faces(const Eigen::VectorXd& rhs) const;

  SubspaceDecomposition decompose(const EdgeVector& x) const;
  EdgeVector project_smooth(const EdgeVector& x) const;
  /// eta_e: projection of chi_e onto the smooth circulations.
  EdgeVector smooth_projection_of_edge(EdgeId e) const;

 private:
  CombinatorialMap map_;
  Eigen::MatrixXd node_incidence_;
  Eigen::MatrixXd face_incidence_;
  Eigen::LLT<Eigen::MatrixXd> node_solver_;
  Eigen::LLT<Eigen::MatrixXd> face_solver_;
};

HarmonicPotential harmonic_potential(const CombinatorialMap& map, NodeId a, NodeId b);
/// Harmonic potential on the dual map, poles are faces.
HarmonicPotential dual_harmonic_potential(const CombinatorialMap& map, FaceId a, FaceId b);

SubspaceDecomposition decompose(const CombinatorialMap& map, const EdgeVector& x);
EdgeVector project_smooth(const CombinatorialMap& map, const EdgeVector& x);

/// eta_b built entrywise from the node and face harmonic potentials with
/// poles at the ends and shores of b:
///   (eta_b)_a = [a = b] - (y_h(a) - y_t(a)) - (z_r(a) - z_l(a)),
/// y = pi_{t(b), h(b)}, z = pi*_{l(b), r(b)}.
EdgeVector smooth_projection_closed_form(const CombinatorialMap& map, EdgeId b);

/// Orthonormal basis of the smooth circulations from {eta_e} by modified
/// Gram-Schmidt with column pivoting. Throws Error{RankMismatch} if the
/// numerical rank differs from 2g.
SmoothBasis smooth_basis(const CombinatorialMap& map, const Tolerances& tol = {});
SmoothBasis smooth_basis(const CirculationSpace& space, const Tolerances& tol = {});
/// Same, from an already computed m x m matrix whose columns are eta_e.
SmoothBasis smooth_basis_from_projections(const CombinatorialMap& map, const Eigen::MatrixXd& eta,
                                          const Tolerances& tol = {});

EigenGap eigengap(const CombinatorialMap& map, const Tolerances& tol = {});

/// Smooth circulation homologous to phi (phi minus its boundary component).
/// Throws Error{NotACirculation} if |M^T phi| exceeds 1e-9 max(1, |phi|).
EdgeVector smooth_representative(const CombinatorialMap& map, const EdgeVector& phi);

/// Numerical rank with singular values above `tol` times the largest (and
/// above `tol` absolutely).
int numerical_rank(const Eigen::MatrixXd& a, double tol);

}  // namespace genus
