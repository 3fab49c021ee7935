#pragma once

// Operators on the doubled space H (+) H, stored with the two copies of each
// mode interleaved: doubled index 2i is (i, top), 2i + 1 is (i, bottom).
// With modes in ascending order of D a shift-by-k v yields bandwidth 2|k| + 1.

#include <Eigen/Dense>

#include "loclab/band_matrix.hpp"
#include "loclab/models.hpp"

namespace loclab {

/// [[diag(top),                        diag(cross) + diag(ul) v diag(ur)],
///  [diag(cross) + diag(ll) v* diag(lr), diag(bottom)                    ]]
/// Empty cross means zero; empty multipliers mean v is absent from that block.
struct InterleavedSpec {
  Eigen::VectorXd top, bottom, cross;
  Eigen::VectorXd ul, ur, ll, lr;
};

/// Compression of the spec'd operator to the sorted doubled indices in `keep`.
BandMatrix<double> assemble_interleaved(const SpectralTriple& model, const InterleavedSpec& spec,
                                        const IndexList& keep);

/// Doubled indices 2i, 2i + 1 for every mode i.
IndexList doubled_all(const SpectralTriple& model);

/// Doubled indices of modes where v and v* both act exactly.
IndexList doubled_exact(const SpectralTriple& model);

/// Modes i with |d_i| <= radius, doubled.
IndexList doubled_window(const SpectralTriple& model, double radius);

IndexList intersect_sorted(const IndexList& a, const IndexList& b);

/// Doubles a per-mode vector into interleaved (x_i, x_i) pairs.
Eigen::VectorXd doubled_diagonal(const Eigen::VectorXd& x);

}  // namespace loclab
