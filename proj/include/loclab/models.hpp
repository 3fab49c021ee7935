#pragma once

// Finite spectral-triple models with D diagonal in the stored basis and v a
// band operator, plus the brute-force Fredholm index of PvP + (1 - P).

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "loclab/band_matrix.hpp"

namespace loclab {

/// (A, H, D) truncated: D = diag(d), v a band operator on the same basis.
/// exact_col[j] marks columns where v acts as on the untruncated space
/// (v* v = 1 there); exact_row[i] likewise for v v*.
struct SpectralTriple {
  Eigen::VectorXd d;
  BandMatrix<double> v;
  double comm_norm = 0.0;
  std::vector<char> exact_col;
  std::vector<char> exact_row;
  bool certified = false;
  /// Circle parameters; N < 0 for models that are not a single circle.
  Index N = -1;
  Index k = 0;

  Index dim() const noexcept { return d.size(); }
};

/// Fourier modes n in [-N, N], D e_n = n e_n, v e_n = e_{n+k}.
SpectralTriple circle_model(Index N, Index k);

/// D = 0 on dim modes with v = identity.
SpectralTriple trivial_model(Index dim);

/// v1 (+) v2 on d1 (+) d2; comm_norm = max of the parts.
SpectralTriple direct_sum(const SpectralTriple& a, const SpectralTriple& b);

struct FredholmWitness {
  Index dim_ker = 0;
  Index dim_coker = 0;
  Index index = 0;
  /// Largest singular value counted as zero and smallest counted as nonzero.
  double zero_sv = 0.0;
  double gap_sv = 0.0;
  /// Index with the zero mode moved into P.
  Index alternate_index = 0;
};

inline constexpr double kRankZeroTol = 1e-8;
inline constexpr double kRankGapTol = 1e-4;

FredholmWitness fredholm_index_oracle(const SpectralTriple& model);

/// N >= lambda + |k| + 1.
bool edge_guard(Index N, double lambda, Index k);

struct BlockComponent {
  double weight = 1.0;
  Index winding = 0;
  SpectralTriple model;
};

struct BlockModel {
  std::vector<BlockComponent> components;
  Index size() const noexcept { return static_cast<Index>(components.size()); }
};

BlockModel block_model(const std::vector<double>& weights, const std::vector<Index>& windings, Index N);

}  // namespace loclab
