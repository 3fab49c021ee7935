#pragma once

// Square band matrices in LAPACK-style diagonal storage. Used for every
// operator whose dimension rules out the dense path: the circle-model
// localiser, the pair representatives e_t, and their products.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "loclab/errors.hpp"
#include "loclab/operators.hpp"

namespace loclab {

template <typename Scalar>
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(Index dim, Index lower, Index upper)
      : dim_(dim), lower_(lower), upper_(upper), data_(Matrix<Scalar>::Zero(lower + upper + 1, dim)) {
    if (dim < 0 || lower < 0 || upper < 0) throw Error(ErrorCode::InvalidArgument, "BandMatrix: negative size");
  }

  static BandMatrix identity(Index dim) {
    BandMatrix out(dim, 0, 0);
    out.data_.setOnes();
    return out;
  }

  static BandMatrix diagonal(const Eigen::Ref<const Vector<Scalar>>& d) {
    BandMatrix out(d.size(), 0, 0);
    out.data_.row(0) = d.transpose();
    return out;
  }

  /// Entries outside the requested band must be exactly zero.
  template <typename Derived>
  static BandMatrix from_dense(const Eigen::MatrixBase<Derived>& m, Index lower, Index upper) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "from_dense: not square");
    BandMatrix out(m.rows(), lower, upper);
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (out.in_band(i, j)) {
          out.ref(i, j) = m(i, j);
        } else if (m(i, j) != Scalar(0)) {
          throw Error(ErrorCode::InvalidArgument, "from_dense: nonzero entry outside band");
        }
      }
    }
    return out;
  }

  template <typename Derived>
  static BandMatrix from_dense(const Eigen::MatrixBase<Derived>& m) {
    Index lo = 0, up = 0;
    for (Index j = 0; j < m.cols(); ++j)
      for (Index i = 0; i < m.rows(); ++i)
        if (m(i, j) != Scalar(0)) {
          lo = std::max(lo, i - j);
          up = std::max(up, j - i);
        }
    return from_dense(m, lo, up);
  }

  Index dim() const noexcept { return dim_; }
  Index rows() const noexcept { return dim_; }
  Index cols() const noexcept { return dim_; }
  Index lower() const noexcept { return lower_; }
  Index upper() const noexcept { return upper_; }
  Index bandwidth() const noexcept { return std::max(lower_, upper_); }

  bool in_band(Index i, Index j) const noexcept {
    return i >= 0 && j >= 0 && i < dim_ && j < dim_ && i - j <= lower_ && j - i <= upper_;
  }

  Scalar coeff(Index i, Index j) const noexcept {
    return in_band(i, j) ? data_(upper_ + i - j, j) : Scalar(0);
  }
  Scalar operator()(Index i, Index j) const noexcept { return coeff(i, j); }

  Scalar& ref(Index i, Index j) {
    if (!in_band(i, j)) {
      std::ostringstream os;
      os << "entry (" << i << "," << j << ") outside band [" << lower_ << "," << upper_ << "]";
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    return data_(upper_ + i - j, j);
  }
  void set(Index i, Index j, Scalar v) { ref(i, j) = v; }
  void add(Index i, Index j, Scalar v) { ref(i, j) += v; }

  /// Raw diagonal storage: row (upper + i - j) holds entry (i, j) in column j.
  const Matrix<Scalar>& storage() const noexcept { return data_; }

  Matrix<Scalar> to_dense(Index dense_limit = kDenseLimit) const {
    require_dense_size(dim_, dense_limit);
    Matrix<Scalar> out = Matrix<Scalar>::Zero(dim_, dim_);
    for (Index j = 0; j < dim_; ++j)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i)
        out(i, j) = coeff(i, j);
    return out;
  }

  BandMatrix adjoint() const {
    BandMatrix out(dim_, upper_, lower_);
    for (Index j = 0; j < dim_; ++j)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i)
        out.ref(j, i) = conj_(coeff(i, j));
    return out;
  }

  /// Bandwidths actually carrying nonzero entries.
  std::pair<Index, Index> effective_bandwidths() const {
    Index lo = 0, up = 0;
    for (Index d = -upper_; d <= lower_; ++d) {
      bool nonzero = data_.row(upper_ + d).cwiseAbs().maxCoeff() > 0.0;
      if (!nonzero) continue;
      if (d > 0) lo = std::max(lo, d);
      if (d < 0) up = std::max(up, -d);
    }
    return {lo, up};
  }

  BandMatrix trimmed() const {
    auto [lo, up] = effective_bandwidths();
    BandMatrix out(dim_, lo, up);
    for (Index d = -up; d <= lo; ++d) out.data_.row(up + d) = data_.row(upper_ + d);
    return out;
  }

  bool is_hermitian(double tol = 0.0) const {
    Index bw = bandwidth();
    for (Index j = 0; j < dim_; ++j)
      for (Index i = j; i <= std::min(dim_ - 1, j + bw); ++i)
        if (std::abs(coeff(i, j) - conj_(coeff(j, i))) > tol) return false;
    return true;
  }

  /// max_i sum_j |a_ij|; an upper bound for the operator norm of a Hermitian matrix.
  double max_row_sum() const {
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(dim_);
    for (Index j = 0; j < dim_; ++j)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i)
        sums[i] += std::abs(coeff(i, j));
    return dim_ == 0 ? 0.0 : sums.maxCoeff();
  }

  double max_abs() const { return data_.size() == 0 ? 0.0 : data_.cwiseAbs().maxCoeff(); }

  Vector<Scalar> operator*(const Vector<Scalar>& x) const {
    Vector<Scalar> y = Vector<Scalar>::Zero(dim_);
    for (Index j = 0; j < dim_; ++j)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i)
        y[i] += coeff(i, j) * x[j];
    return y;
  }

  BandMatrix operator*(const BandMatrix& b) const {
    if (dim_ != b.dim_) throw Error(ErrorCode::DimensionMismatch, "band product: dimension mismatch");
    BandMatrix out(dim_, lower_ + b.lower_, upper_ + b.upper_);
    for (Index j = 0; j < dim_; ++j) {
      for (Index k = std::max<Index>(0, j - b.upper_); k <= std::min(dim_ - 1, j + b.lower_); ++k) {
        Scalar bkj = b.coeff(k, j);
        if (bkj == Scalar(0)) continue;
        for (Index i = std::max<Index>(0, k - upper_); i <= std::min(dim_ - 1, k + lower_); ++i)
          out.data_(out.upper_ + i - j, j) += coeff(i, k) * bkj;
      }
    }
    return out;
  }

  BandMatrix operator+(const BandMatrix& b) const { return combine(b, Scalar(1)); }
  BandMatrix operator-(const BandMatrix& b) const { return combine(b, Scalar(-1)); }
  BandMatrix& operator*=(Scalar s) {
    data_ *= s;
    return *this;
  }
  friend BandMatrix operator*(Scalar s, BandMatrix m) { return m *= s; }

  /// diag(left) * this * diag(right).
  BandMatrix scaled(const Eigen::Ref<const Eigen::VectorXd>& left,
                    const Eigen::Ref<const Eigen::VectorXd>& right) const {
    BandMatrix out = *this;
    for (Index j = 0; j < dim_; ++j)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i)
        out.data_(upper_ + i - j, j) *= left[i] * right[j];
    return out;
  }

  void add_to_diagonal(Scalar s) { data_.row(upper_).array() += s; }

  /// Entrywise restriction to a sorted index set (rows = cols).
  BandMatrix compress(const IndexList& idx) const {
    std::vector<Index> where(static_cast<std::size_t>(dim_), -1);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      Index i = idx[p];
      if (i < 0 || i >= dim_) throw Error(ErrorCode::IndexOutOfRange, "band compress: index out of range");
      if (p > 0 && idx[p - 1] >= i) throw Error(ErrorCode::InvalidArgument, "band compress: indices not sorted");
      where[static_cast<std::size_t>(i)] = static_cast<Index>(p);
    }
    Index lo = 0, up = 0;
    for (Index j : idx)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i) {
        Index pi = where[static_cast<std::size_t>(i)];
        if (pi < 0 || coeff(i, j) == Scalar(0)) continue;
        Index pj = where[static_cast<std::size_t>(j)];
        lo = std::max(lo, pi - pj);
        up = std::max(up, pj - pi);
      }
    BandMatrix out(static_cast<Index>(idx.size()), lo, up);
    for (Index j : idx)
      for (Index i = std::max<Index>(0, j - upper_); i <= std::min(dim_ - 1, j + lower_); ++i) {
        Index pi = where[static_cast<std::size_t>(i)];
        if (pi < 0) continue;
        Scalar v = coeff(i, j);
        if (v != Scalar(0)) out.ref(pi, where[static_cast<std::size_t>(j)]) = v;
      }
    return out;
  }

 private:
  static Scalar conj_(Scalar x) {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
      return std::conj(x);
    } else {
      return x;
    }
  }

  BandMatrix combine(const BandMatrix& b, Scalar sign) const {
    if (dim_ != b.dim_) throw Error(ErrorCode::DimensionMismatch, "band sum: dimension mismatch");
    BandMatrix out(dim_, std::max(lower_, b.lower_), std::max(upper_, b.upper_));
    for (Index d = -upper_; d <= lower_; ++d) out.data_.row(out.upper_ + d) += data_.row(upper_ + d);
    for (Index d = -b.upper_; d <= b.lower_; ++d) out.data_.row(out.upper_ + d) += sign * b.data_.row(b.upper_ + d);
    return out;
  }

  Index dim_ = 0;
  Index lower_ = 0;
  Index upper_ = 0;
  Matrix<Scalar> data_;
};

/// Hermitian dilation [[0, X], [X*, 0]] with rows interleaved so the band survives.
template <typename Scalar>
BandMatrix<Scalar> hermitian_dilation(const BandMatrix<Scalar>& x) {
  Index n = x.dim();
  Index bw = 2 * x.bandwidth() + 1;
  BandMatrix<Scalar> out(2 * n, bw, bw);
  for (Index j = 0; j < n; ++j)
    for (Index i = std::max<Index>(0, j - x.upper()); i <= std::min(n - 1, j + x.lower()); ++i) {
      Scalar v = x.coeff(i, j);
      if (v == Scalar(0)) continue;
      out.set(2 * i, 2 * j + 1, v);
      if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
        out.set(2 * j + 1, 2 * i, std::conj(v));
      } else {
        out.set(2 * j + 1, 2 * i, v);
      }
    }
  return out;
}

/// Lower band (upper = 0) of A^2 - A for Hermitian A; the result is read as
/// Hermitian by the inertia routines.
template <typename Scalar>
BandMatrix<Scalar> hermitian_square_minus_self(const BandMatrix<Scalar>& a) {
  const Index n = a.dim();
  const Index bw = a.bandwidth();
  BandMatrix<Scalar> out(n, 2 * bw, 0);
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i <= std::min(n - 1, j + 2 * bw); ++i) {
      Scalar acc(0);
      for (Index l = std::max<Index>(0, i - bw); l <= std::min(n - 1, j + bw); ++l) acc += a.coeff(i, l) * a.coeff(l, j);
      if (i - j <= bw) acc -= a.coeff(i, j);
      out.ref(i, j) = acc;
    }
  }
  return out;
}

}  // namespace loclab
