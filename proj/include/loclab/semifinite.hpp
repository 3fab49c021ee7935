#pragma once

// Weighted-trace index pairing over B = C^m: every operator is block diagonal
// over the m components and tau(b) = sum_j w_j b_j.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "loclab/ktheory.hpp"
#include "loclab/localiser.hpp"
#include "loclab/models.hpp"

namespace loclab {

struct WeightedTrace {
  std::vector<double> weights;

  explicit WeightedTrace(std::vector<double> w);
  Index size() const noexcept { return static_cast<Index>(weights.size()); }
  /// tau(b) for b in C^m.
  double operator()(const std::vector<double>& b) const;
  std::complex<double> operator()(const std::vector<std::complex<double>>& b) const;
};

WeightedTrace trace_of(const BlockModel& bm);

/// tau-hat of a block-diagonal operator: sum_j w_j Tr(T_j).
std::complex<double> tau_hat(const std::vector<Eigen::MatrixXcd>& blocks, const WeightedTrace& tau);

/// sum_j w_j rank(kappa0(p_j)).
double tau_rank(const std::vector<QuasiProjection<double>>& blocks, const WeightedTrace& tau);

/// sum_j w_j sig(L_j).
double tau_signature(const std::vector<Eigen::MatrixXd>& blocks, const WeightedTrace& tau,
                     std::optional<double> zero_tol = std::nullopt);
double tau_signature(const std::vector<BandMatrix<double>>& blocks, const WeightedTrace& tau,
                     std::optional<double> zero_tol = std::nullopt);

struct SemifiniteResult {
  double tau_index = 0.0;
  std::vector<Index> per_block;
  /// tau-hat(P_lambda) = sum_j w_j dim H_lambda,j.
  double tau_P_lambda = 0.0;
  std::vector<HalfSignatureResult> details;
};

SemifiniteResult semifinite_half_signature(const BlockModel& bm, double eps, double delta, double t, double lambda);

struct TransferSample {
  double direct = 0.0;
  double via_inner = 0.0;
  double residual = 0.0;
};

struct TransferReport {
  /// |xi1><xi2|: tau-hat of the block matrix against tau(<xi2, xi1>).
  std::vector<TransferSample> rank_one;
  /// Block projections: sum_j w_j Tr(P_j) against tau of the integer K0 class.
  std::vector<TransferSample> projections;
  double max_residual = 0.0;
  bool pass = false;
};

/// One vector of C^(n_j) per component: an element of the module over C^m.
using ModuleVector = std::vector<Eigen::VectorXcd>;

/// Deterministic samples on the doubled spaces of the components.
std::vector<std::pair<ModuleVector, ModuleVector>> transfer_samples(const BlockModel& bm, int count,
                                                                    std::uint64_t seed);

/// Projections are the positive spectral projections of each component's
/// localiser at (t, lambda).
TransferReport trace_transfer_check(const BlockModel& bm,
                                    const std::vector<std::pair<ModuleVector, ModuleVector>>& samples,
                                    double t, double lambda, double tol = 1e-12);

}  // namespace loclab
