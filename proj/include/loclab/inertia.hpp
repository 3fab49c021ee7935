#pragma once

// Inertia of Hermitian band matrices via a band-preserving LDL* factorization
// with 1x1 / adjacent 2x2 pivots, plus operator norms by inertia bisection.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "loclab/band_matrix.hpp"

namespace loclab {

struct Inertia {
  Index n_pos = 0;
  Index n_neg = 0;
  Index n_zero = 0;
  /// Smallest |eigenvalue| among the pivot blocks of D.
  double min_pivot = std::numeric_limits<double>::infinity();
  Index two_by_two_pivots = 0;
  bool breakdown = false;
  Index breakdown_at = -1;

  Index signature() const noexcept { return n_pos - n_neg; }
};

namespace detail {

template <typename Scalar>
double real_part(Scalar x) {
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    return x.real();
  } else {
    return x;
  }
}

template <typename Scalar>
Scalar conj_of(Scalar x) {
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    return std::conj(x);
  } else {
    return x;
  }
}

}  // namespace detail

/// Inertia of A - shift*I, reading only the lower band of A (A is taken Hermitian).
/// breakdown_tol is relative to the largest entry of A.
template <typename Scalar>
Inertia ldl_inertia(const BandMatrix<Scalar>& a, double shift = 0.0, double breakdown_tol = 1e-14) {
  using detail::conj_of;
  using detail::real_part;
  const Index n = a.dim();
  const Index bw = a.bandwidth();
  const Index ld = bw + 1;
  std::vector<Scalar> w(static_cast<std::size_t>(ld * n), Scalar(0));
  auto at = [&](Index r, Index j) -> Scalar& { return w[static_cast<std::size_t>(j * ld + r)]; };
  for (Index j = 0; j < n; ++j)
    for (Index r = 0; r <= bw && j + r < n; ++r) at(r, j) = a.coeff(j + r, j);
  for (Index j = 0; j < n; ++j) at(0, j) = Scalar(real_part(at(0, j)) - shift);

  double scale = std::max(a.max_abs(), std::abs(shift));
  if (scale == 0.0) scale = 1.0;
  const double tiny = breakdown_tol * scale;
  constexpr double kAlpha = 0.6403882032022076;  // (1 + sqrt 17) / 8

  Inertia out;
  Index j = 0;
  while (j < n) {
    const Index rmax = std::min(bw, n - 1 - j);
    const double d = real_part(at(0, j));
    double colmax1 = 0.0;
    for (Index r = 1; r <= rmax; ++r) colmax1 = std::max(colmax1, std::abs(at(r, j)));

    bool use_two = false;
    double growth1 = colmax1 == 0.0 ? 0.0 : (d == 0.0 ? std::numeric_limits<double>::infinity() : colmax1 / std::abs(d));
    Scalar b(0);
    double e = 0.0, det = 0.0;
    if (growth1 > 1.0 / kAlpha && j + 1 < n) {
      b = at(1, j);
      e = real_part(at(0, j + 1));
      det = d * e - std::norm(b);
      double colmax2 = 0.0;
      for (Index r = 2; r <= rmax; ++r) colmax2 = std::max(colmax2, std::abs(at(r, j)));
      for (Index r = 1; r <= std::min(bw, n - 2 - j); ++r) colmax2 = std::max(colmax2, std::abs(at(r, j + 1)));
      double big = std::max({std::abs(d), std::abs(e), std::abs(b)});
      double growth2 = det == 0.0 ? std::numeric_limits<double>::infinity() : colmax2 * big / std::abs(det);
      use_two = growth2 < growth1;
    }

    if (!use_two) {
      if (std::abs(d) <= tiny) {
        if (colmax1 == 0.0) {
          ++out.n_zero;
          out.min_pivot = 0.0;
          ++j;
          continue;
        }
        out.breakdown = true;
        out.breakdown_at = j;
        return out;
      }
      (d > 0 ? out.n_pos : out.n_neg) += 1;
      out.min_pivot = std::min(out.min_pivot, std::abs(d));
      for (Index c = 1; c <= rmax; ++c) {
        Scalar lc = conj_of(at(c, j)) / d;
        if (lc == Scalar(0)) continue;
        for (Index r = c; r <= rmax; ++r) at(r - c, j + c) -= at(r, j) * lc;
      }
      ++j;
      continue;
    }

    double big = std::max({std::abs(d), std::abs(e), std::abs(b)});
    if (std::abs(det) <= tiny * big) {
      out.breakdown = true;
      out.breakdown_at = j;
      return out;
    }
    double half_sum = 0.5 * (d + e);
    double radius = std::sqrt(0.25 * (d - e) * (d - e) + std::norm(b));
    double ev_hi = half_sum + radius, ev_lo = half_sum - radius;
    (ev_hi > 0 ? out.n_pos : out.n_neg) += 1;
    (ev_lo > 0 ? out.n_pos : out.n_neg) += 1;
    out.min_pivot = std::min({out.min_pivot, std::abs(ev_hi), std::abs(ev_lo)});
    ++out.two_by_two_pivots;

    const Index last = std::min(n - 1, j + 1 + bw);
    const Index span = last - (j + 2) + 1;
    if (span > 0) {
      std::vector<Scalar> x0(static_cast<std::size_t>(span)), x1(static_cast<std::size_t>(span));
      std::vector<Scalar> y0(static_cast<std::size_t>(span)), y1(static_cast<std::size_t>(span));
      for (Index p = 0; p < span; ++p) {
        Index i = j + 2 + p;
        x0[p] = (i - j <= bw) ? at(i - j, j) : Scalar(0);
        x1[p] = at(i - j - 1, j + 1);
        y0[p] = (x0[p] * e - x1[p] * b) / det;
        y1[p] = (-x0[p] * conj_of(b) + x1[p] * d) / det;
      }
      for (Index q = 0; q < span; ++q) {
        Scalar cx0 = conj_of(x0[q]), cx1 = conj_of(x1[q]);
        if (cx0 == Scalar(0) && cx1 == Scalar(0)) continue;
        for (Index p = q; p < span; ++p) at(p - q, j + 2 + q) -= y0[p] * cx0 + y1[p] * cx1;
      }
    }
    j += 2;
  }
  return out;
}

namespace detail {

/// Inertia of A - x I, nudging x off exact breakdowns.
template <typename Scalar>
Inertia robust_inertia(const BandMatrix<Scalar>& a, double x, double scale) {
  double nudge = std::max(std::abs(x), scale) * 1e-13;
  for (int attempt = 0; attempt < 6; ++attempt) {
    Inertia in = ldl_inertia(a, x);
    if (!in.breakdown && in.n_zero == 0) return in;
    x += (attempt % 2 == 0 ? 1.0 : -2.0) * nudge;
    nudge *= 4.0;
  }
  throw Error(ErrorCode::SingularMatrix, "inertia: repeated pivot breakdown near shift");
}

template <typename Scalar>
double hermitian_row_sum_bound(const BandMatrix<Scalar>& a) {
  const Index n = a.dim();
  const Index bw = a.lower();
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
  for (Index j = 0; j < n; ++j) {
    sums[j] += std::abs(a.coeff(j, j));
    for (Index i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
      double v = std::abs(a.coeff(i, j));
      sums[i] += v;
      sums[j] += v;
    }
  }
  return n == 0 ? 0.0 : sums.maxCoeff();
}

}  // namespace detail

/// Number of eigenvalues of the Hermitian band matrix A strictly above x.
template <typename Scalar>
Index count_above(const BandMatrix<Scalar>& a, double x) {
  return detail::robust_inertia(a, x, a.max_abs()).n_pos;
}

/// Spectral norm of a Hermitian band matrix (lower band is read), returned as the
/// upper end of a bisection bracket of width <= max(abs_tol, rel_tol * bound).
template <typename Scalar>
double hermitian_band_norm(const BandMatrix<Scalar>& a, double rel_tol = 1e-13, double abs_tol = 0.0) {
  if (a.dim() == 0) return 0.0;
  double hi = detail::hermitian_row_sum_bound(a);
  if (hi == 0.0) return 0.0;
  double lo = 0.0;
  const double scale = a.max_abs();
  const double width = std::max(abs_tol, rel_tol * hi);
  while (hi - lo > width) {
    double mid = 0.5 * (lo + hi);
    bool inside = detail::robust_inertia(a, mid, scale).n_pos == 0 &&
                  detail::robust_inertia(a, -mid, scale).n_neg == 0;
    (inside ? hi : lo) = mid;
  }
  return hi;
}

/// Largest singular value of a square band matrix.
template <typename Scalar>
double band_operator_norm(const BandMatrix<Scalar>& x, double rel_tol = 1e-13, double abs_tol = 0.0) {
  if (x.is_hermitian(0.0)) return hermitian_band_norm(x, rel_tol, abs_tol);
  return hermitian_band_norm(hermitian_dilation(x), rel_tol, abs_tol);
}

}  // namespace loclab
