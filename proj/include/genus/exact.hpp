#pragma once

#include <vector>

#include <gmpxx.h>

#include "genus/map.hpp"

namespace genus {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}

  static RationalMatrix identity(int size);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  RationalMatrix operator*(const RationalMatrix& rhs) const;
  RationalVector operator*(const RationalVector& x) const;
  RationalMatrix transpose() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

/// Gauss-Jordan inverse over the rationals. Throws Error{SingularSystem}.
RationalMatrix exact_inverse(RationalMatrix a);

/// Default cap on edges for the exact oracle.
inline constexpr int kExactEdgeCap = 40;

/// The orthogonal projector onto the smooth circulations, in exact
/// rational arithmetic:
///   P = I - M (L + J)^-1 M^T - N (L* + J)^-1 N^T.
/// Throws Error{CapExceeded} when the map has more than `edge_cap` edges.
class ExactProjector {
 public:
  explicit ExactProjector(const CombinatorialMap& map, int edge_cap = kExactEdgeCap);

  const RationalMatrix& matrix() const { return projector_; }
  /// Exact eta_e (column e of the projector).
  RationalVector eta(EdgeId e) const;
  RationalVector project(const RationalVector& x) const;

 private:
  RationalMatrix projector_;
};

RationalVector exact_project_smooth(const CombinatorialMap& map, const RationalVector& x,
                                    int edge_cap = kExactEdgeCap);

/// Lower bound 1 / (n^n f^f) on every nonzero entry of a projected unit vector.
Rational smoothness_lower_bound(const CombinatorialMap& map);

RationalVector to_rational(const Eigen::VectorXd& x);
Eigen::VectorXd to_double(const RationalVector& x);

}  // namespace genus
