#include "loclab/doubled.hpp"

#include <algorithm>
#include <iterator>

namespace loclab {

namespace {

template <typename Visit>
void for_each_entry(const SpectralTriple& model, const InterleavedSpec& spec, Index a, Visit&& visit) {
  const auto& v = model.v;
  const Index n = model.dim();
  const Index i = a / 2;
  const bool with_v = spec.ul.size() > 0;
  if (a % 2 == 0) {
    if (spec.top.size() > 0) visit(a, spec.top[i]);
    if (spec.cross.size() > 0) visit(2 * i + 1, spec.cross[i]);
    if (with_v)
      for (Index j = std::max<Index>(0, i - v.lower()); j <= std::min(n - 1, i + v.upper()); ++j) {
        double x = v(i, j);
        if (x != 0.0) visit(2 * j + 1, spec.ul[i] * x * spec.ur[j]);
      }
  } else {
    if (spec.bottom.size() > 0) visit(a, spec.bottom[i]);
    if (spec.cross.size() > 0) visit(2 * i, spec.cross[i]);
    if (with_v)
      for (Index j = std::max<Index>(0, i - v.upper()); j <= std::min(n - 1, i + v.lower()); ++j) {
        double x = v(j, i);
        if (x != 0.0) visit(2 * j, spec.ll[i] * x * spec.lr[j]);
      }
  }
}

}  // namespace

BandMatrix<double> assemble_interleaved(const SpectralTriple& model, const InterleavedSpec& spec,
                                        const IndexList& keep) {
  const Index dd = 2 * model.dim();
  const bool contiguous = keep.empty() || keep.back() - keep.front() + 1 == static_cast<Index>(keep.size());
  std::vector<Index> where;
  if (!contiguous) {
    where.assign(static_cast<std::size_t>(dd), -1);
    for (std::size_t p = 0; p < keep.size(); ++p) where[static_cast<std::size_t>(keep[p])] = static_cast<Index>(p);
  }
  const Index base = keep.empty() ? 0 : keep.front();
  const Index m = static_cast<Index>(keep.size());
  auto pos = [&](Index b) -> Index {
    if (b < 0 || b >= dd) return -1;
    if (contiguous) return (b >= base && b - base < m) ? b - base : -1;
    return where[static_cast<std::size_t>(b)];
  };
  for (std::size_t p = 1; p < keep.size(); ++p)
    if (keep[p - 1] >= keep[p]) throw Error(ErrorCode::InvalidArgument, "assemble_interleaved: indices not sorted");

  Index lo = 0, up = 0;
  for (Index p = 0; p < m; ++p)
    for_each_entry(model, spec, keep[static_cast<std::size_t>(p)], [&](Index b, double x) {
      Index q = pos(b);
      if (q < 0 || x == 0.0) return;
      lo = std::max(lo, p - q);
      up = std::max(up, q - p);
    });
  BandMatrix<double> out(m, lo, up);
  for (Index p = 0; p < m; ++p)
    for_each_entry(model, spec, keep[static_cast<std::size_t>(p)], [&](Index b, double x) {
      Index q = pos(b);
      if (q < 0 || x == 0.0) return;
      out.ref(p, q) += x;
    });
  return out;
}

IndexList doubled_all(const SpectralTriple& model) { return all_indices(2 * model.dim()); }

IndexList doubled_exact(const SpectralTriple& model) {
  IndexList out;
  for (Index i = 0; i < model.dim(); ++i)
    if (model.exact_col[static_cast<std::size_t>(i)] && model.exact_row[static_cast<std::size_t>(i)]) {
      out.push_back(2 * i);
      out.push_back(2 * i + 1);
    }
  return out;
}

IndexList doubled_window(const SpectralTriple& model, double radius) {
  IndexList out;
  for (Index i = 0; i < model.dim(); ++i)
    if (std::abs(model.d[i]) <= radius) {
      out.push_back(2 * i);
      out.push_back(2 * i + 1);
    }
  return out;
}

IndexList intersect_sorted(const IndexList& a, const IndexList& b) {
  IndexList out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Eigen::VectorXd doubled_diagonal(const Eigen::VectorXd& x) {
  Eigen::VectorXd out(2 * x.size());
  for (Index i = 0; i < x.size(); ++i) out[2 * i] = out[2 * i + 1] = x[i];
  return out;
}

}  // namespace loclab
