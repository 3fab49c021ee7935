#pragma once

// Spectral truncation to H_lambda, the localiser L_{kappa,lambda}, signatures
// (dense eigen-count and banded LDL inertia) and the threshold certificates.

#include <Eigen/Dense>

#include <optional>
#include <string>

#include "loclab/band_matrix.hpp"
#include "loclab/doubled.hpp"
#include "loclab/inertia.hpp"
#include "loclab/models.hpp"
#include "loclab/pairing.hpp"

namespace loclab {

/// Low band |eigenvalue of D (+) D| <= lambda and its complement, as doubled indices.
struct SpectralDecomposition {
  double lambda = 0.0;
  IndexList low;
  IndexList high;
  Index doubled_dim = 0;
};

SpectralDecomposition spectral_decompose(const SpectralTriple& model, double lambda, double gap_tol = kGapTol);

/// T = [[p, m*], [m, q]] after permuting low indices first.
template <typename Scalar>
struct BlockDecomposition {
  Matrix<Scalar> p;
  Matrix<Scalar> q;
  Matrix<Scalar> m;
};

template <typename Derived>
BlockDecomposition<typename Derived::Scalar> block_decompose(const Eigen::MatrixBase<Derived>& t,
                                                             const SpectralDecomposition& sd) {
  if (t.rows() != sd.doubled_dim || t.cols() != sd.doubled_dim)
    throw Error(ErrorCode::DimensionMismatch, "block_decompose: matrix does not live on the doubled space");
  BlockDecomposition<typename Derived::Scalar> out;
  out.p = t.derived()(sd.low, sd.low);
  out.q = t.derived()(sd.high, sd.high);
  out.m = t.derived()(sd.high, sd.low);
  return out;
}

/// Inverse of block_decompose; the upper-right block is taken from `n` (m* when omitted).
template <typename Scalar>
Matrix<Scalar> reassemble(const BlockDecomposition<Scalar>& b, const SpectralDecomposition& sd,
                          const Matrix<Scalar>* n = nullptr) {
  Matrix<Scalar> out(sd.doubled_dim, sd.doubled_dim);
  out(sd.low, sd.low) = b.p;
  out(sd.high, sd.high) = b.q;
  out(sd.high, sd.low) = b.m;
  out(sd.low, sd.high) = n ? *n : Matrix<Scalar>(b.m.adjoint());
  return out;
}

enum class Layout { Dense, Banded };

struct Localiser {
  double kappa = 0.0;
  double lambda = 0.0;
  BandMatrix<double> matrix;
  Layout layout = Layout::Banded;
  /// Filled by signature(): certified lower bound on the smallest |eigenvalue|.
  double gap = 0.0;

  Index dim() const noexcept { return matrix.dim(); }
};

/// Compression of [[kappa D, v], [v*, -kappa D]] to H_lambda.
Localiser build_localiser(const SpectralTriple& model, double kappa, double lambda);

struct SignatureResult {
  Index sig = 0;
  Index n_pos = 0;
  Index n_neg = 0;
  /// Smallest |eigenvalue| (dense) or a certified lower bound for it (banded).
  double gap = 0.0;
  double zero_tol = 0.0;
  bool banded = false;
  bool regularized = false;
};

/// Dense path: eigenvalue count; every |eigenvalue| must exceed zero_tol (default 1e-8 ||H||).
SignatureResult signature(const Eigen::MatrixXd& h, std::optional<double> zero_tol = std::nullopt);
/// Banded path: LDL inertia, zero_tol window check and a bisected gap certificate.
SignatureResult signature(const BandMatrix<double>& h, std::optional<double> zero_tol = std::nullopt,
                          double gap_rel_tol = 1e-3);
SignatureResult signature(Localiser& loc, std::optional<double> zero_tol = std::nullopt);

struct OffdiagonalCertificate {
  double lhs = 0.0;
  /// (1/2)(1 + t^-2 lambda^2)^(-1/2).
  double bound = 0.0;
  bool pass = false;
  /// (1 + t^-2 lambda^2)^(-1/2), the bound without the factor 1/2.
  double unhalved_bound = 0.0;
  bool pass_unhalved = false;
};

/// lhs = || q^e - q^Theta q^f (q^Theta)* || on the high modes of the truncation.
OffdiagonalCertificate offdiagonal_certificate(const SpectralTriple& model, const AsymptoticFrame& frame,
                                               const SpectralDecomposition& sd);

struct DiagonalReduction {
  bool pass = false;
  double eps = 0.0;
  double eps_q = 0.0;
  double e_defect = 0.0;
  double p_defect = 0.0;
  double q_defect = 0.0;
  double m_norm = 0.0;
  /// Upper bound for the defect of [[p, s m*], [s m, q]] over the s-grid.
  double path_worst = 0.0;
  double p_bound = 0.0;
  double m_bound = 0.0;
};

/// e = e_t of the frame. eps_q defaults to the measured q-defect. Norms of
/// large band matrices are bisected to relative accuracy rel_tol.
DiagonalReduction diagonal_reduction_check(const SpectralTriple& model, const AsymptoticFrame& frame,
                                           const SpectralDecomposition& sd, double eps,
                                           std::optional<double> eps_q = std::nullopt, double rel_tol = 1e-10);

struct CongruenceResult {
  Index sig_2p_minus_1 = 0;
  Index sig_L = 0;
  bool equal = false;
  double residual = 0.0;
  double norm_L = 0.0;
  bool residual_ok = false;
};

/// 2 p^e - 1 against S L S with S = (1 + t^-2 D^2)^(-1/4) on H_lambda; kappa must be 1/t.
CongruenceResult congruence_check(const SpectralTriple& model, const AsymptoticFrame& frame,
                                  const SpectralDecomposition& sd, const Localiser& loc);

struct ThresholdReport {
  double eps = 0.0;
  double delta = 0.0;
  double comm_norm = 0.0;
  double R = kDefaultR;
  double t_min = 0.0;
  double lambda_min = 0.0;
  bool window_ok = false;
};

/// t_min = 2 R comm / eps; lambda_min = t / delta at the given t (t_min when t is absent).
ThresholdReport thresholds(double eps, double delta, double comm_norm, double R = kDefaultR,
                           std::optional<double> t = std::nullopt);

/// Nearest half-integer at or above x minus 1/2, i.e. floor(x) + 1/2.
double snap_half_integer(double x);

struct HalfSignatureOptions {
  std::optional<double> t;
  std::optional<double> lambda;
  /// Require eps + delta < 1/400 and attach the threshold certificates.
  bool certify = false;
  /// Run diagonal_reduction_check (expensive at theorem scale).
  bool reduction = false;
  double norm_rel_tol = 1e-10;
};

struct HalfSignatureResult {
  double t = 0.0;
  double lambda = 0.0;
  double lambda_requested = 0.0;
  bool snapped = false;
  Index index = 0;
  Index dim = 0;
  Index bandwidth = 0;
  SignatureResult sig;
  ThresholdReport thresholds;
  std::optional<OffdiagonalCertificate> offdiagonal;
  std::optional<DiagonalReduction> reduction;
};

HalfSignatureResult half_signature_index(const SpectralTriple& model, double eps, double delta,
                                         const HalfSignatureOptions& opts = {});

}  // namespace loclab
