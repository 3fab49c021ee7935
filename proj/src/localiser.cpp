#include "loclab/localiser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loclab/ktheory.hpp"

namespace loclab {

SpectralDecomposition spectral_decompose(const SpectralTriple& model, double lambda, double gap_tol) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "spectral_decompose: lambda must be positive");
  SpectralDecomposition sd;
  sd.lambda = lambda;
  sd.doubled_dim = 2 * model.dim();
  for (Index i = 0; i < model.dim(); ++i) {
    double a = std::abs(model.d[i]);
    double dist = std::abs(a - lambda);
    if (dist < gap_tol) {
      std::ostringstream os;
      os << "spectral_decompose: eigenvalue " << model.d[i] << " of D lies within " << dist << " of lambda = " << lambda;
      throw BoundaryEigenvalueError(model.d[i], dist, os.str());
    }
    IndexList& side = a <= lambda ? sd.low : sd.high;
    side.push_back(2 * i);
    side.push_back(2 * i + 1);
  }
  return sd;
}

Localiser build_localiser(const SpectralTriple& model, double kappa, double lambda) {
  SpectralDecomposition sd = spectral_decompose(model, lambda);
  InterleavedSpec sp;
  sp.top = kappa * model.d;
  sp.bottom = -kappa * model.d;
  sp.ul = sp.ur = sp.ll = sp.lr = Eigen::VectorXd::Ones(model.dim());
  Localiser loc;
  loc.kappa = kappa;
  loc.lambda = lambda;
  loc.matrix = assemble_interleaved(model, sp, sd.low);
  loc.layout = Layout::Banded;
  return loc;
}

SignatureResult signature(const Eigen::MatrixXd& h, std::optional<double> zero_tol) {
  auto es = eig(h);
  SignatureResult out;
  double norm = es.values.size() ? es.values.cwiseAbs().maxCoeff() : 0.0;
  out.zero_tol = zero_tol.value_or(1e-8 * norm);
  out.gap = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < es.values.size(); ++i) {
    double x = es.values[i];
    if (std::abs(x) <= out.zero_tol) {
      std::ostringstream os;
      os << "signature: eigenvalue " << x << " inside zero_tol window " << out.zero_tol;
      throw Error(ErrorCode::SingularMatrix, os.str());
    }
    (x > 0 ? out.n_pos : out.n_neg) += 1;
    out.gap = std::min(out.gap, std::abs(x));
  }
  out.sig = out.n_pos - out.n_neg;
  return out;
}

namespace {

/// Eigenvalues of h in [-x, x], from inertia at the two shifts.
Index count_inside(const BandMatrix<double>& h, double x, double scale) {
  Inertia up = detail::robust_inertia(h, x, scale);
  Inertia dn = detail::robust_inertia(h, -x, scale);
  return h.dim() - up.n_pos - dn.n_neg;
}

}  // namespace

SignatureResult signature(const BandMatrix<double>& h, std::optional<double> zero_tol, double gap_rel_tol) {
  SignatureResult out;
  out.banded = true;
  const Index n = h.dim();
  if (n == 0) return out;
  const double bound = detail::hermitian_row_sum_bound(h);
  const double scale = h.max_abs();
  out.zero_tol = zero_tol.value_or(1e-8 * bound);
  if (bound == 0.0) throw Error(ErrorCode::SingularMatrix, "signature: zero matrix");

  Inertia up = detail::robust_inertia(h, out.zero_tol, scale);
  Inertia dn = detail::robust_inertia(h, -out.zero_tol, scale);
  if (up.n_pos + dn.n_neg != n) {
    std::ostringstream os;
    os << "signature: " << n - up.n_pos - dn.n_neg << " eigenvalue(s) inside zero_tol window " << out.zero_tol;
    throw Error(ErrorCode::SingularMatrix, os.str());
  }

  double lo = out.zero_tol, hi = bound * (1.0 + 1e-12);
  if (lo <= 0.0) lo = std::numeric_limits<double>::min();
  while (hi / lo > 1.0 + gap_rel_tol) {
    double mid = std::sqrt(lo * hi);
    (count_inside(h, mid, scale) == 0 ? lo : hi) = mid;
  }
  out.gap = lo;

  Inertia base = ldl_inertia(h, 0.0);
  if (base.breakdown || base.n_zero > 0) {
    double rho = 1e-3 * out.gap;
    Inertia a = ldl_inertia(h, rho), b = ldl_inertia(h, -rho);
    if (a.breakdown || b.breakdown || a.n_pos != b.n_pos || a.n_neg != b.n_neg || a.n_zero || b.n_zero)
      throw Error(ErrorCode::SingularMatrix, "signature: regularized factorizations at +/- rho disagree");
    base = a;
    out.regularized = true;
  }
  if (base.n_pos != up.n_pos || base.n_neg != dn.n_neg)
    throw Error(ErrorCode::SingularMatrix, "signature: inertia at 0 disagrees with inertia at +/- zero_tol");
  out.n_pos = base.n_pos;
  out.n_neg = base.n_neg;
  out.sig = out.n_pos - out.n_neg;
  return out;
}

SignatureResult signature(Localiser& loc, std::optional<double> zero_tol) {
  SignatureResult r = signature(loc.matrix, zero_tol);
  loc.gap = r.gap;
  return r;
}

OffdiagonalCertificate offdiagonal_certificate(const SpectralTriple& model, const AsymptoticFrame& frame,
                                               const SpectralDecomposition& sd) {
  InterleavedSpec sp;
  sp.cross = -frame.cs;
  sp.ul = sp.ur = sp.ll = sp.lr = frame.sqrt_cs;
  OffdiagonalCertificate out;
  if (!sd.high.empty()) out.lhs = hermitian_band_norm(assemble_interleaved(model, sp, sd.high));
  double x = sd.lambda / frame.t;
  out.unhalved_bound = 1.0 / std::sqrt(1.0 + x * x);
  out.bound = 0.5 * out.unhalved_bound;
  out.pass = out.lhs <= out.bound + 1e-10;
  out.pass_unhalved = out.lhs <= out.unhalved_bound + 1e-10;
  return out;
}

namespace {

/// Modes within `radius` v-hops of a mode whose v-neighbour lies on the other side of lambda.
std::vector<IndexList> boundary_balls(const SpectralTriple& model, double lambda, int radius) {
  const Index n = model.dim();
  const auto& v = model.v;
  auto low = [&](Index i) { return std::abs(model.d[i]) <= lambda; };
  auto neighbours = [&](Index i, auto&& visit) {
    for (Index j = std::max<Index>(0, i - v.bandwidth()); j <= std::min(n - 1, i + v.bandwidth()); ++j)
      if (j != i && (v(i, j) != 0.0 || v(j, i) != 0.0)) visit(j);
  };
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  IndexList frontier;
  for (Index i = 0; i < n; ++i) {
    bool edge = false;
    neighbours(i, [&](Index j) { edge = edge || low(i) != low(j); });
    if (edge) {
      dist[static_cast<std::size_t>(i)] = 0;
      frontier.push_back(i);
    }
  }
  for (int r = 1; r <= radius; ++r) {
    IndexList next;
    for (Index i : frontier)
      neighbours(i, [&](Index j) {
        if (dist[static_cast<std::size_t>(j)] < 0) {
          dist[static_cast<std::size_t>(j)] = r;
          next.push_back(j);
        }
      });
    frontier = std::move(next);
  }
  std::vector<IndexList> balls(static_cast<std::size_t>(radius) + 1);
  for (Index i = 0; i < n; ++i) {
    int d = dist[static_cast<std::size_t>(i)];
    if (d < 0) continue;
    for (int r = d; r <= radius; ++r) {
      balls[static_cast<std::size_t>(r)].push_back(2 * i);
      balls[static_cast<std::size_t>(r)].push_back(2 * i + 1);
    }
  }
  return balls;
}

}  // namespace

DiagonalReduction diagonal_reduction_check(const SpectralTriple& model, const AsymptoticFrame& frame,
                                           const SpectralDecomposition& sd, double eps,
                                           std::optional<double> eps_q, double rel_tol) {
  DiagonalReduction out;
  out.eps = eps;
  auto window_check = [&](double eq) {
    if (!(eq < 0.0025 - eps)) {
      std::ostringstream os;
      os << "diagonal_reduction_check: eps_q = " << eq << " is not below 1/400 - eps = " << 0.0025 - eps;
      throw Error(ErrorCode::HypothesisViolated, os.str());
    }
  };
  if (eps_q) window_check(*eps_q);

  const InterleavedSpec sp = e_spec(frame);
  const IndexList exact = doubled_exact(model);

  if (!sd.high.empty()) {
    BandMatrix<double> sq = hermitian_square_minus_self(assemble_interleaved(model, sp, sd.high));
    IndexList keep;
    std::vector<char> is_exact(static_cast<std::size_t>(sd.doubled_dim), 0);
    for (Index a : exact) is_exact[static_cast<std::size_t>(a)] = 1;
    for (std::size_t p = 0; p < sd.high.size(); ++p)
      if (is_exact[static_cast<std::size_t>(sd.high[p])]) keep.push_back(static_cast<Index>(p));
    if (!keep.empty()) out.q_defect = hermitian_band_norm(sq.compress(keep), rel_tol);
  }
  out.eps_q = eps_q.value_or(out.q_defect);
  if (!eps_q) window_check(out.eps_q);

  {
    BandMatrix<double> sq = hermitian_square_minus_self(assemble_interleaved(model, sp, doubled_all(model)));
    BandMatrix<double> inner = sq.compress(exact);
    sq = BandMatrix<double>();
    out.e_defect = hermitian_band_norm(inner, rel_tol);
  }
  if (!sd.low.empty()) {
    BandMatrix<double> sq = hermitian_square_minus_self(assemble_interleaved(model, sp, sd.low));
    out.p_defect = hermitian_band_norm(sq, rel_tol);
  }

  std::vector<IndexList> balls = boundary_balls(model, sd.lambda, 3);
  double delta_worst = 0.0;
  if (!balls[3].empty()) {
    const IndexList& w = balls[3];
    const IndexList inner_set = balls[2];
    Eigen::MatrixXd e = assemble_interleaved(model, sp, w).to_dense();
    const Index nw = static_cast<Index>(w.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nw, nw);
    auto is_low = [&](Index a) { return std::abs(model.d[a / 2]) <= sd.lambda; };
    for (Index a = 0; a < nw; ++a)
      for (Index b = 0; b < nw; ++b)
        if (is_low(w[static_cast<std::size_t>(a)]) != is_low(w[static_cast<std::size_t>(b)])) m(a, b) = e(a, b);
    out.m_norm = operator_norm(m);
    IndexList pos;
    for (std::size_t a = 0, b = 0; a < w.size() && b < inner_set.size(); ++a)
      if (w[a] == inner_set[b]) {
        pos.push_back(static_cast<Index>(a));
        ++b;
      }
    Eigen::MatrixXd lin = e * m + m * e - m;
    Eigen::MatrixXd quad = m * m;
    for (int i = 0; i < kHomotopyGrid; ++i) {
      double s = static_cast<double>(i) / (kHomotopyGrid - 1);
      Eigen::MatrixXd delta = (s - 1.0) * lin + (s - 1.0) * (s - 1.0) * quad;
      delta_worst = std::max(delta_worst, operator_norm(delta(pos, pos).eval()));
    }
  }
  out.path_worst = out.e_defect + delta_worst;

  out.p_bound = 2.0 * eps + out.eps_q;
  out.m_bound = eps + out.eps_q;
  out.pass = out.e_defect < eps && out.q_defect <= out.eps_q && out.p_defect <= out.p_bound + 1e-10 &&
             out.m_norm * out.m_norm <= out.m_bound + 1e-10 && out.path_worst < kQuarter;
  return out;
}

CongruenceResult congruence_check(const SpectralTriple& model, const AsymptoticFrame& frame,
                                  const SpectralDecomposition& sd, const Localiser& loc) {
  if (std::abs(loc.kappa * frame.t - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "congruence_check: localiser kappa must equal 1/t");
  CongruenceResult out;
  BandMatrix<double> m = assemble_interleaved(model, two_e_minus_one_spec(frame), sd.low);
  Eigen::VectorXd s(static_cast<Index>(sd.low.size()));
  for (std::size_t p = 0; p < sd.low.size(); ++p) {
    double x = model.d[sd.low[p] / 2] / frame.t;
    s[static_cast<Index>(p)] = std::pow(1.0 + x * x, -0.25);
  }
  BandMatrix<double> sls = loc.matrix.scaled(s, s);
  out.residual = hermitian_band_norm(m - sls);
  out.norm_L = hermitian_band_norm(loc.matrix);
  out.residual_ok = out.residual <= 1e-9 * out.norm_L;
  out.sig_2p_minus_1 = signature(m).sig;
  out.sig_L = signature(loc.matrix).sig;
  out.equal = out.sig_2p_minus_1 == out.sig_L;
  return out;
}

ThresholdReport thresholds(double eps, double delta, double comm_norm, double R, std::optional<double> t) {
  if (!(eps > 0.0 && delta > 0.0)) throw Error(ErrorCode::InvalidArgument, "thresholds: eps and delta must be positive");
  ThresholdReport r;
  r.eps = eps;
  r.delta = delta;
  r.comm_norm = comm_norm;
  r.R = R;
  r.t_min = 2.0 * R * comm_norm / eps;
  r.lambda_min = t.value_or(r.t_min) / delta;
  r.window_ok = eps + delta < 0.0025;
  return r;
}

double snap_half_integer(double x) { return std::floor(x) + 0.5; }

HalfSignatureResult half_signature_index(const SpectralTriple& model, double eps, double delta,
                                         const HalfSignatureOptions& opts) {
  HalfSignatureResult out;
  ThresholdReport thr = thresholds(eps, delta, model.comm_norm);
  if (opts.certify && !thr.window_ok) {
    std::ostringstream os;
    os << "half_signature_index: eps + delta = " << eps + delta << " is not below 1/400";
    throw Error(ErrorCode::WindowViolated, os.str());
  }
  out.t = opts.t.value_or(std::max(1.0, 1.01 * thr.t_min));
  out.thresholds = thresholds(eps, delta, model.comm_norm, kDefaultR, out.t);
  out.lambda_requested = opts.lambda.value_or(1.01 * out.t / delta);
  out.lambda = out.lambda_requested;
  if (model.N >= 0 && out.lambda - std::floor(out.lambda) != 0.5) {
    out.lambda = snap_half_integer(out.lambda);
    out.snapped = true;
  }
  if (model.N >= 0 && !edge_guard(model.N, out.lambda, model.k)) {
    std::ostringstream os;
    os << "half_signature_index: N = " << model.N << " violates the edge guard N >= lambda + |k| + 1 at lambda = "
       << out.lambda;
    throw Error(ErrorCode::TruncationTooSmall, os.str());
  }
  SpectralDecomposition sd = spectral_decompose(model, out.lambda);
  {
    Localiser loc = build_localiser(model, 1.0 / out.t, out.lambda);
    out.dim = loc.dim();
    out.bandwidth = loc.matrix.bandwidth();
    out.sig = signature(loc);
  }
  if (out.sig.sig % 2 != 0) {
    std::ostringstream os;
    os << "half_signature_index: signature " << out.sig.sig << " is odd";
    throw Error(ErrorCode::OddSignature, os.str());
  }
  out.index = out.sig.sig / 2;
  if (opts.certify) {
    AsymptoticFrame frame = build_frame(model, out.t);
    out.offdiagonal = offdiagonal_certificate(model, frame, sd);
    if (opts.reduction) out.reduction = diagonal_reduction_check(model, frame, sd, eps, std::nullopt, opts.norm_rel_tol);
  }
  return out;
}

}  // namespace loclab
