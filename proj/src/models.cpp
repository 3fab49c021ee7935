#include "loclab/models.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace loclab {

SpectralTriple circle_model(Index N, Index k) {
  if (N < std::abs(k) + 1) {
    std::ostringstream os;
    os << "circle_model: N = " << N << " needs N >= |k| + 1 = " << std::abs(k) + 1;
    throw Error(ErrorCode::TruncationTooSmall, os.str());
  }
  const Index n = 2 * N + 1;
  SpectralTriple m;
  m.N = N;
  m.k = k;
  m.d = Eigen::VectorXd::LinSpaced(n, static_cast<double>(-N), static_cast<double>(N));
  m.v = BandMatrix<double>(n, std::max<Index>(k, 0), std::max<Index>(-k, 0));
  for (Index j = 0; j < n; ++j)
    if (j + k >= 0 && j + k < n) m.v.set(j + k, j, 1.0);
  m.comm_norm = static_cast<double>(std::abs(k));
  m.exact_col.assign(static_cast<std::size_t>(n), 0);
  m.exact_row.assign(static_cast<std::size_t>(n), 0);
  for (Index j = 0; j < n; ++j) {
    bool inner = std::abs(j - N) <= N - std::abs(k);
    m.exact_col[static_cast<std::size_t>(j)] = inner;
    m.exact_row[static_cast<std::size_t>(j)] = inner;
  }
  m.certified = true;
  return m;
}

SpectralTriple trivial_model(Index dim) {
  SpectralTriple m;
  m.d = Eigen::VectorXd::Zero(dim);
  m.v = BandMatrix<double>::identity(dim);
  m.exact_col.assign(static_cast<std::size_t>(dim), 1);
  m.exact_row.assign(static_cast<std::size_t>(dim), 1);
  m.certified = true;
  return m;
}

SpectralTriple direct_sum(const SpectralTriple& a, const SpectralTriple& b) {
  const Index na = a.dim(), nb = b.dim();
  SpectralTriple m;
  m.d.resize(na + nb);
  m.d << a.d, b.d;
  m.v = BandMatrix<double>(na + nb, std::max(a.v.lower(), b.v.lower()), std::max(a.v.upper(), b.v.upper()));
  for (const auto& [part, off] : {std::pair{&a, Index{0}}, std::pair{&b, na}}) {
    const auto& v = part->v;
    for (Index j = 0; j < v.dim(); ++j)
      for (Index i = std::max<Index>(0, j - v.upper()); i <= std::min(v.dim() - 1, j + v.lower()); ++i)
        if (v(i, j) != 0.0) m.v.set(off + i, off + j, v(i, j));
  }
  m.comm_norm = std::max(a.comm_norm, b.comm_norm);
  m.exact_col = a.exact_col;
  m.exact_col.insert(m.exact_col.end(), b.exact_col.begin(), b.exact_col.end());
  m.exact_row = a.exact_row;
  m.exact_row.insert(m.exact_row.end(), b.exact_row.begin(), b.exact_row.end());
  m.certified = a.certified && b.certified;
  return m;
}

namespace {

struct RankCount {
  Index nullity = 0;
  double zero_sv = 0.0;
  double gap_sv = std::numeric_limits<double>::infinity();
};

RankCount nullity_of(const Eigen::MatrixXd& m, Index dim) {
  RankCount out;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankZeroTol) {
      ++rank;
      out.gap_sv = std::min(out.gap_sv, sv[i]);
    } else {
      out.zero_sv = std::max(out.zero_sv, sv[i]);
    }
  }
  if (out.gap_sv < kRankGapTol) {
    std::ostringstream os;
    os << "fredholm oracle: smallest nonzero singular value " << out.gap_sv << " below gap " << kRankGapTol;
    throw Error(ErrorCode::RankDecisionAmbiguous, os.str());
  }
  out.nullity = dim - rank;
  return out;
}

FredholmWitness oracle_with(const SpectralTriple& model, bool zero_in_p) {
  const Index n = model.dim();
  require_dense_size(n, kDenseLimit);
  Eigen::MatrixXd v = model.v.to_dense();
  Eigen::VectorXd p(n);
  for (Index i = 0; i < n; ++i) p[i] = (model.d[i] > 0.0 || (zero_in_p && model.d[i] == 0.0)) ? 1.0 : 0.0;
  Eigen::MatrixXd t = p.asDiagonal() * v * p.asDiagonal();
  t.diagonal() += (Eigen::VectorXd::Ones(n) - p);

  IndexList cols, rows;
  for (Index i = 0; i < n; ++i) {
    if (model.exact_col[static_cast<std::size_t>(i)]) cols.push_back(i);
    if (model.exact_row[static_cast<std::size_t>(i)]) rows.push_back(i);
  }
  if (cols.empty() || rows.empty()) throw Error(ErrorCode::TruncationTooSmall, "fredholm oracle: empty interior window");
  RankCount ker = nullity_of(t(Eigen::all, cols), static_cast<Index>(cols.size()));
  RankCount coker = nullity_of(t(rows, Eigen::all), static_cast<Index>(rows.size()));
  FredholmWitness w;
  w.dim_ker = ker.nullity;
  w.dim_coker = coker.nullity;
  w.index = w.dim_ker - w.dim_coker;
  w.zero_sv = std::max(ker.zero_sv, coker.zero_sv);
  w.gap_sv = std::min(ker.gap_sv, coker.gap_sv);
  return w;
}

}  // namespace

FredholmWitness fredholm_index_oracle(const SpectralTriple& model) {
  if (model.N >= 0 && model.N < 2 * std::abs(model.k) + 8) {
    std::ostringstream os;
    os << "fredholm oracle: N = " << model.N << " below guard 2|k| + 8 = " << 2 * std::abs(model.k) + 8;
    throw Error(ErrorCode::TruncationTooSmall, os.str());
  }
  FredholmWitness w = oracle_with(model, false);
  FredholmWitness alt = oracle_with(model, true);
  w.alternate_index = alt.index;
  if (alt.index != w.index) {
    std::ostringstream os;
    os << "fredholm oracle: index " << w.index << " changes to " << alt.index << " when the zero mode joins P";
    throw Error(ErrorCode::RankDecisionAmbiguous, os.str());
  }
  return w;
}

bool edge_guard(Index N, double lambda, Index k) {
  return static_cast<double>(N) >= lambda + static_cast<double>(std::abs(k)) + 1.0;
}

BlockModel block_model(const std::vector<double>& weights, const std::vector<Index>& windings, Index N) {
  if (weights.size() != windings.size() || weights.empty())
    throw Error(ErrorCode::InvalidWeights, "block_model: weights and windings must be non-empty and of equal length");
  BlockModel bm;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
      std::ostringstream os;
      os << "block_model: weight " << weights[j] << " at component " << j << " is not finite and positive";
      throw Error(ErrorCode::InvalidWeights, os.str());
    }
    bm.components.push_back({weights[j], windings[j], circle_model(N, windings[j])});
  }
  return bm;
}

}  // namespace loclab
