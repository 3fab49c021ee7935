#pragma once

// Quasi-idempotents and quasi-projections: defects, the kappa0 projection,
// straight-line homotopy criteria and K0 bookkeeping.

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

#include "loclab/operators.hpp"

namespace loclab {

inline constexpr double kQuarter = 0.25;
inline constexpr double kTraceTol = 1e-6;
inline constexpr double kSignTol = 1e-12;
inline constexpr int kHomotopyGrid = 65;

template <typename Derived>
double idempotent_defect(const Eigen::MatrixBase<Derived>& e) {
  if (e.rows() != e.cols()) throw Error(ErrorCode::DimensionMismatch, "idempotent_defect: not square");
  return operator_norm((e * e - e).eval());
}

template <typename Scalar>
struct QuasiIdempotent {
  Matrix<Scalar> matrix;
  double defect = 0.0;

  QuasiIdempotent() = default;
  explicit QuasiIdempotent(Matrix<Scalar> m) : matrix(std::move(m)), defect(idempotent_defect(matrix)) {}
  bool certified(double eps) const { return defect < eps && eps <= kQuarter; }
};

template <typename Scalar>
struct QuasiProjection {
  Matrix<Scalar> matrix;
  double defect = 0.0;

  QuasiProjection() = default;
  /// Symmetrizes away rounding-level asymmetry; larger asymmetry is rejected.
  explicit QuasiProjection(Matrix<Scalar> m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "QuasiProjection: not square");
    double scale = m.size() == 0 ? 0.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
    if (!is_hermitian(m, 1e-12 * scale)) throw Error(ErrorCode::InvalidArgument, "QuasiProjection: not Hermitian");
    matrix = (m + m.adjoint()) / 2.0;
    defect = idempotent_defect(matrix);
  }
  bool certified(double eps) const { return defect < eps && eps <= kQuarter; }
  /// Half-width of the eigenvalue-free interval around 1/2.
  double spectral_gap() const { return defect < kQuarter ? std::sqrt(kQuarter - defect) : 0.0; }
};

struct K0Class {
  std::vector<long long> value;

  static K0Class scalar(long long v) { return K0Class{{v}}; }
  long long scalar_value() const {
    if (value.size() != 1) throw Error(ErrorCode::DimensionMismatch, "K0Class: not a scalar class");
    return value.front();
  }
  K0Class operator+(const K0Class& o) const {
    if (o.value.size() != value.size()) throw Error(ErrorCode::DimensionMismatch, "K0Class: component counts differ");
    K0Class out = *this;
    for (std::size_t i = 0; i < value.size(); ++i) out.value[i] += o.value[i];
    return out;
  }
  bool operator==(const K0Class&) const = default;
};

namespace detail {

inline void require_small_defect(double defect) {
  if (!(defect < kQuarter)) {
    std::ostringstream os;
    os << "defect " << defect << " is not below 1/4";
    throw Error(ErrorCode::DefectTooLarge, os.str());
  }
}

}  // namespace detail

/// Spectral projection onto eigenvalues above 1/2.
template <typename Scalar>
Matrix<Scalar> kappa0(const QuasiProjection<Scalar>& e) {
  detail::require_small_defect(e.defect);
  auto es = eig(e.matrix);
  IndexList keep;
  for (Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > 0.5) keep.push_back(i);
  Matrix<Scalar> basis = es.vectors(Eigen::all, keep);
  return basis * basis.adjoint();
}

/// (sign(2e - 1) + 1) / 2 via the Newton iteration Z <- (Z + Z^-1) / 2.
template <typename Scalar>
Matrix<Scalar> kappa0(const QuasiIdempotent<Scalar>& e, int max_iter = 100) {
  detail::require_small_defect(e.defect);
  const Index n = e.matrix.rows();
  const Matrix<Scalar> id = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> z = 2.0 * e.matrix - id;
  std::vector<double> residuals;
  for (int it = 0; it < max_iter; ++it) {
    double res = operator_norm((z * z - id).eval());
    residuals.push_back(res);
    if (res <= kSignTol) return (z + id) / 2.0;
    if (!std::isfinite(res) || (it >= 8 && res > residuals[static_cast<std::size_t>(it) - 8])) break;
    Eigen::PartialPivLU<Matrix<Scalar>> lu(z);
    z = (z + lu.inverse()) / 2.0;
  }
  throw SignIterationDivergedError(residuals, "kappa0: sign iteration did not reach ||Z^2 - I|| <= 1e-12");
}

/// Rank of a projection by rounding its trace.
template <typename Derived>
long long trace_rank(const Eigen::MatrixBase<Derived>& p) {
  double tr = std::real(p.trace());
  double r = std::round(tr);
  if (std::abs(tr - r) > kTraceTol) {
    std::ostringstream os;
    os << "trace " << tr << " is not within " << kTraceTol << " of an integer";
    throw Error(ErrorCode::NonIntegralTrace, os.str());
  }
  return static_cast<long long>(r);
}

inline double perturbation_defect_bound(double norm_e, double eps, double delta) {
  return (2.0 * norm_e + delta + 1.0) * delta + eps;
}

struct HomotopyResult {
  bool valid = false;
  double criterion = 0.0;
  double worst_defect = 0.0;
};

template <typename Derived1, typename Derived2>
HomotopyResult straightline_homotopy_valid(const Eigen::MatrixBase<Derived1>& e,
                                           const Eigen::MatrixBase<Derived2>& f, double eps_e, double eps_f) {
  if (e.rows() != f.rows() || e.cols() != f.cols())
    throw Error(ErrorCode::DimensionMismatch, "straightline_homotopy_valid: shapes differ");
  using Scalar = typename Derived1::Scalar;
  HomotopyResult out;
  double dist = operator_norm((e - f).eval());
  out.criterion = std::max(eps_e, eps_f) + 0.25 * dist * dist;
  out.valid = out.criterion < kQuarter;
  for (int i = 0; i < kHomotopyGrid; ++i) {
    double s = static_cast<double>(i) / (kHomotopyGrid - 1);
    Matrix<Scalar> g = (1.0 - s) * e + s * f;
    out.worst_defect = std::max(out.worst_defect, idempotent_defect(g));
  }
  return out;
}

template <typename Scalar>
HomotopyResult straightline_homotopy_valid(const QuasiIdempotent<Scalar>& e, const QuasiIdempotent<Scalar>& f) {
  return straightline_homotopy_valid(e.matrix, f.matrix, e.defect, f.defect);
}

struct PerturbationResult {
  bool is_quasi = false;
  double eps_f = 0.0;
  bool homotopic = false;
  double delta = 0.0;
  /// Left-hand side of the general criterion; below 1/4 means homotopic.
  double criterion = 0.0;
};

/// e an exact projection, f Hermitian.
template <typename Derived1, typename Derived2>
PerturbationResult projection_perturbation_check(const Eigen::MatrixBase<Derived1>& e,
                                                 const Eigen::MatrixBase<Derived2>& f) {
  PerturbationResult out;
  out.delta = operator_norm((e - f).eval());
  out.eps_f = idempotent_defect(f);
  out.is_quasi = out.eps_f < kQuarter;
  double norm_e = operator_norm(e);
  double eps_e = idempotent_defect(e);
  out.criterion = (2.0 * norm_e + 1.25 * out.delta + 1.0) * out.delta + eps_e;
  out.homotopic = out.delta < 1.0 / 17.0 ? out.is_quasi : out.criterion < kQuarter;
  return out;
}

template <typename Scalar>
K0Class k0_from_pair(const QuasiProjection<Scalar>& p, const QuasiProjection<Scalar>& q) {
  return K0Class::scalar(trace_rank(kappa0(p)) - trace_rank(kappa0(q)));
}

}  // namespace loclab
