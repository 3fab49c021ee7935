#pragma once

// Dense Hermitian/unitary layer: eigendecomposition, functional calculus,
// spectral projections, norms and compressions. Everything is templated on
// the scalar type so that real and complex models share one code path.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "loclab/errors.hpp"

namespace loclab {

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IndexList = std::vector<Index>;

inline constexpr Index kDenseLimit = 20000;
inline constexpr double kGapTol = 1e-9;

template <typename Scalar>
struct EigenSystem {
  Eigen::VectorXd values;  // ascending
  Matrix<Scalar> vectors;  // columns
};

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 0.0) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline void require_dense_size(Index dim, Index dense_limit) {
  if (dim > dense_limit) {
    std::ostringstream os;
    os << "dense path requested for dimension " << dim << " above dense_limit " << dense_limit;
    throw Error(ErrorCode::DimensionTooLarge, os.str());
  }
}

template <typename Derived>
EigenSystem<typename Derived::Scalar> eig(const Eigen::MatrixBase<Derived>& h,
                                          Index dense_limit = kDenseLimit) {
  using Scalar = typename Derived::Scalar;
  if (h.rows() != h.cols()) throw Error(ErrorCode::DimensionMismatch, "eig: matrix not square");
  require_dense_size(h.rows(), dense_limit);
  EigenSystem<Scalar> out;
  if (h.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(h.derived());
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eig: solver failed");
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  return out;
}

/// V diag(f(lambda)) V* for a dense Hermitian input.
template <typename Derived, typename F>
Matrix<typename Derived::Scalar> apply_function(const Eigen::MatrixBase<Derived>& h, F&& f,
                                                Index dense_limit = kDenseLimit) {
  auto es = eig(h, dense_limit);
  Eigen::VectorXd fv = es.values.unaryExpr([&](double x) { return static_cast<double>(f(x)); });
  return es.vectors * fv.asDiagonal() * es.vectors.adjoint();
}

/// Diagonal fast path: entries f(h_ii), no eigendecomposition.
template <typename F>
Eigen::DiagonalMatrix<double, Eigen::Dynamic> apply_function(
    const Eigen::DiagonalMatrix<double, Eigen::Dynamic>& h, F&& f) {
  Eigen::VectorXd out = h.diagonal().unaryExpr([&](double x) { return static_cast<double>(f(x)); });
  return out.asDiagonal();
}

namespace detail {

inline void check_boundary(double value, double a, double b, double gap_tol) {
  for (double cut : {a, b}) {
    if (!std::isfinite(cut)) continue;
    double dist = std::abs(value - cut);
    if (dist < gap_tol) {
      std::ostringstream os;
      os << "eigenvalue " << value << " lies within " << dist << " of interval boundary " << cut;
      throw BoundaryEigenvalueError(value, dist, os.str());
    }
  }
}

}  // namespace detail

/// Orthogonal projection onto the eigenspaces with eigenvalue in [a, b].
template <typename Derived>
Matrix<typename Derived::Scalar> spectral_projection(const Eigen::MatrixBase<Derived>& h, double a,
                                                     double b, double gap_tol = kGapTol,
                                                     Index dense_limit = kDenseLimit) {
  using Scalar = typename Derived::Scalar;
  auto es = eig(h, dense_limit);
  IndexList keep;
  for (Index i = 0; i < es.values.size(); ++i) {
    detail::check_boundary(es.values[i], a, b, gap_tol);
    if (es.values[i] >= a && es.values[i] <= b) keep.push_back(i);
  }
  Matrix<Scalar> basis = es.vectors(Eigen::all, keep);
  return basis * basis.adjoint();
}

inline Eigen::DiagonalMatrix<double, Eigen::Dynamic> spectral_projection(
    const Eigen::DiagonalMatrix<double, Eigen::Dynamic>& h, double a, double b,
    double gap_tol = kGapTol) {
  Eigen::VectorXd out(h.diagonal().size());
  for (Index i = 0; i < out.size(); ++i) {
    double x = h.diagonal()[i];
    detail::check_boundary(x, a, b, gap_tol);
    out[i] = (x >= a && x <= b) ? 1.0 : 0.0;
  }
  return out.asDiagonal();
}

/// Largest singular value.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> dense = m;
  Eigen::BDCSVD<Matrix<Scalar>> svd(dense);
  return svd.singularValues()(0);
}

template <typename Derived>
Matrix<typename Derived::Scalar> compress(const Eigen::MatrixBase<Derived>& m, const IndexList& rows,
                                          const IndexList& cols) {
  auto check = [](const IndexList& idx, Index bound, const char* which) {
    for (Index i : idx) {
      if (i < 0 || i >= bound) {
        std::ostringstream os;
        os << "compress: " << which << " index " << i << " outside [0, " << bound << ")";
        throw Error(ErrorCode::IndexOutOfRange, os.str());
      }
    }
  };
  check(rows, m.rows(), "row");
  check(cols, m.cols(), "column");
  return m.derived()(rows, cols);
}

inline IndexList all_indices(Index n) {
  IndexList out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace loclab
