#include "genus/exact.hpp"

#include <string>

#include "genus/error.hpp"

namespace genus {

RationalMatrix RationalMatrix::identity(int size) {
  RationalMatrix id(size, size);
  for (int i = 0; i < size; ++i) id(i, i) = 1;
  return id;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
  RationalMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

RationalVector RationalMatrix::operator*(const RationalVector& x) const {
  RationalVector out(rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * x[j];
    }
  }
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

RationalMatrix exact_inverse(RationalMatrix a) {
  const int n = a.rows();
  if (n != a.cols()) throw Error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
  RationalMatrix inv = RationalMatrix::identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && a(pivot, col) == 0) ++pivot;
    if (pivot == n) throw Error(ErrorKind::SingularSystem, "rational matrix is singular");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        swap(a(pivot, j), a(col, j));
        swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational scale = 1 / a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational factor = a(i, col);
      for (int j = 0; j < n; ++j) {
        a(i, j) -= factor * a(col, j);
        inv(i, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

namespace {

// Returns K (L + J)^-1 K^T for an incidence matrix K with columns given by
// `incidence(i)`.
template <typename IncidenceOf>
RationalMatrix range_projector(int m, int count, IncidenceOf incidence) {
  RationalMatrix k(m, count);
  for (int i = 0; i < count; ++i) {
    for (const auto& [e, s] : incidence(i)) k(e, i) = s;
  }
  const RationalMatrix kt = k.transpose();
  RationalMatrix system = kt * k;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) system(i, j) += 1;
  }
  return k * (exact_inverse(std::move(system)) * kt);
}

}  // namespace

ExactProjector::ExactProjector(const CombinatorialMap& map, int edge_cap) {
  const int m = map.edge_count();
  if (m > edge_cap) {
    throw Error(ErrorKind::CapExceeded,
                "exact oracle limited to " + std::to_string(edge_cap) + " edges, map has " + std::to_string(m));
  }
  const RationalMatrix pa = range_projector(m, map.node_count(), [&](int v) { return map.node_incidence(v); });
  const RationalMatrix pb = range_projector(m, map.face_count(), [&](int f) { return map.face_incidence(f); });
  projector_ = RationalMatrix::identity(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) projector_(i, j) -= pa(i, j) + pb(i, j);
  }
}

RationalVector ExactProjector::eta(EdgeId e) const {
  RationalVector col(projector_.rows());
  for (int i = 0; i < projector_.rows(); ++i) col[i] = projector_(i, e);
  return col;
}

RationalVector ExactProjector::project(const RationalVector& x) const {
  if (static_cast<int>(x.size()) != projector_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "edge vector has wrong length");
  }
  return projector_ * x;
}

RationalVector exact_project_smooth(const CombinatorialMap& map, const RationalVector& x, int edge_cap) {
  return ExactProjector(map, edge_cap).project(x);
}

Rational smoothness_lower_bound(const CombinatorialMap& map) {
  mpz_class denominator = 1;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), map.node_count(), map.node_count());
  denominator *= power;
  mpz_ui_pow_ui(power.get_mpz_t(), map.face_count(), map.face_count());
  denominator *= power;
  return Rational(mpz_class(1), denominator);
}

RationalVector to_rational(const Eigen::VectorXd& x) {
  RationalVector out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = x[i];  // exact binary value
  return out;
}

Eigen::VectorXd to_double(const RationalVector& x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[i].get_d();
  return out;
}

}  // namespace genus
