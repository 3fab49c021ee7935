#include "loclab/pairing.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "loclab/inertia.hpp"

namespace loclab {

namespace {

double c_squared(double x) {
  double h = std::hypot(1.0, x);
  if (x >= 0.0) return 1.0 / (2.0 * h * (h + x));
  return 0.5 - x / (2.0 * h);
}

double default_c(double x) { return std::sqrt(c_squared(x)); }
double default_s(double x) { return std::sqrt(c_squared(-x)); }
double default_cs(double x) { return 0.5 / std::hypot(1.0, x); }

double unit_F(double x) { return x / std::hypot(1.0, x); }

double commutator_radius(double t, Index k) {
  return std::max(64.0 * t, 256.0) + static_cast<double>(std::abs(k));
}

/// || diag(w) [g(D/t), v] || on the model; exact supremum for circle models.
double diag_commutator_norm(const SpectralTriple& model, double t, const std::function<double(double)>& g,
                            const std::function<double(double)>& w) {
  if (model.comm_norm == 0.0) return 0.0;
  if (model.N >= 0) {
    const double k = static_cast<double>(model.k);
    return integer_sup([&](double n) { return w(n + k) * (g((n + k) / t) - g(n / t)); },
                       commutator_radius(t, model.k));
  }
  const Index n = model.dim();
  Eigen::VectorXd gd(n), wd(n), ones = Eigen::VectorXd::Ones(n);
  for (Index i = 0; i < n; ++i) {
    gd[i] = g(model.d[i] / t);
    wd[i] = w(model.d[i]);
  }
  BandMatrix<double> x = model.v.scaled(gd, ones) - model.v.scaled(ones, gd);
  x = x.scaled(wd, ones);
  IndexList exact;
  for (Index i = 0; i < n; ++i)
    if (model.exact_col[static_cast<std::size_t>(i)] && model.exact_row[static_cast<std::size_t>(i)]) exact.push_back(i);
  return band_operator_norm(x.compress(exact));
}

double unit_weight(double) { return 1.0; }

}  // namespace

LocaliserFunctions default_functions() {
  return {default_c, default_s, default_cs, "c(x) s(x) = 1 / (2 sqrt(1 + x^2))"};
}

AsymptoticFrame build_frame(const SpectralTriple& model, double t, const LocaliserFunctions& funcs) {
  if (!(t >= 1.0)) throw Error(ErrorCode::InvalidArgument, "build_frame: t must be >= 1");
  AsymptoticFrame fr;
  fr.t = t;
  const Index n = model.dim();
  fr.c.resize(n);
  fr.s.resize(n);
  fr.cs.resize(n);
  fr.sqrt_cs.resize(n);
  for (Index i = 0; i < n; ++i) {
    double x = model.d[i] / t;
    fr.c[i] = funcs.c(x);
    fr.s[i] = funcs.s(x);
    fr.cs[i] = funcs.cs ? funcs.cs(x) : fr.c[i] * fr.s[i];
    fr.sqrt_cs[i] = std::sqrt(fr.cs[i]);
  }
  return fr;
}

InterleavedSpec e_spec(const AsymptoticFrame& fr) {
  InterleavedSpec sp;
  sp.top = fr.s.array().square();
  sp.bottom = fr.c.array().square();
  sp.ul = sp.ur = sp.ll = sp.lr = fr.sqrt_cs;
  return sp;
}

InterleavedSpec e_check_spec(const AsymptoticFrame& fr) {
  InterleavedSpec sp;
  sp.top = fr.s.array().square();
  sp.bottom = fr.c.array().square();
  sp.ul = sp.ll = fr.cs;
  sp.ur = sp.lr = Eigen::VectorXd::Ones(fr.cs.size());
  return sp;
}

InterleavedSpec theta_f_theta_spec(const AsymptoticFrame& fr) {
  InterleavedSpec sp;
  sp.top = fr.s.array().square();
  sp.bottom = fr.c.array().square();
  sp.cross = fr.cs;
  return sp;
}

InterleavedSpec two_e_minus_one_spec(const AsymptoticFrame& fr) {
  InterleavedSpec sp;
  sp.top = 2.0 * fr.s.array().square() - 1.0;
  sp.bottom = 2.0 * fr.c.array().square() - 1.0;
  sp.ul = sp.ll = std::sqrt(2.0) * fr.sqrt_cs;
  sp.ur = sp.lr = std::sqrt(2.0) * fr.sqrt_cs;
  return sp;
}

PairRepresentative build_pair(const AsymptoticFrame& frame, const SpectralTriple& model) {
  const Index n = model.dim();
  if (frame.c.size() != n) throw Error(ErrorCode::DimensionMismatch, "build_pair: frame built for another model");
  BandMatrix<double> vtv = model.v.adjoint() * model.v;
  BandMatrix<double> vvt = model.v * model.v.adjoint();
  for (Index j = 0; j < n; ++j)
    for (Index i = std::max<Index>(0, j - vtv.upper()); i <= std::min(n - 1, j + vtv.lower()); ++i) {
      double want = i == j ? 1.0 : 0.0;
      bool cols = model.exact_col[static_cast<std::size_t>(i)] && model.exact_col[static_cast<std::size_t>(j)];
      bool rows = model.exact_row[static_cast<std::size_t>(i)] && model.exact_row[static_cast<std::size_t>(j)];
      if ((cols && std::abs(vtv(i, j) - want) > 1e-10) || (rows && std::abs(vvt(i, j) - want) > 1e-10)) {
        std::ostringstream os;
        os << "build_pair: v is not unitary on the interior at (" << i << "," << j << ")";
        throw Error(ErrorCode::NotUnitary, os.str());
      }
    }

  PairRepresentative pr;
  pr.t = frame.t;
  const IndexList all = doubled_all(model);
  pr.e = assemble_interleaved(model, e_spec(frame), all);
  pr.e_check = assemble_interleaved(model, e_check_spec(frame), all);
  pr.f = Eigen::VectorXd::Zero(2 * n);
  pr.theta = BandMatrix<double>(2 * n, 1, 1);
  for (Index i = 0; i < n; ++i) {
    pr.f[2 * i + 1] = 1.0;
    pr.theta.set(2 * i, 2 * i, frame.c[i]);
    pr.theta.set(2 * i, 2 * i + 1, frame.s[i]);
    pr.theta.set(2 * i + 1, 2 * i, -frame.s[i]);
    pr.theta.set(2 * i + 1, 2 * i + 1, frame.c[i]);
  }
  return pr;
}

Index pairing_truncation(double t, Index k) {
  return static_cast<Index>(std::ceil(16.0 * t)) + 2 * std::abs(k) + 16;
}

LawCheck defect_law(const PairRepresentative& pair, const SpectralTriple& model, double R) {
  LawCheck out;
  BandMatrix<double> sq = hermitian_square_minus_self(pair.e);
  out.lhs = hermitian_band_norm(sq.compress(doubled_exact(model)));
  out.bound = 2.0 * R * model.comm_norm / pair.t;
  out.pass = out.lhs <= out.bound + 1e-10;
  return out;
}

LawCheck distance_law(const PairRepresentative& pair, const SpectralTriple& model, double R) {
  LawCheck out;
  BandMatrix<double> diff = pair.e - pair.e_check;
  out.lhs = band_operator_norm(diff.compress(doubled_exact(model)));
  out.bound = std::sqrt(0.5) * R * model.comm_norm / pair.t;
  out.pass = out.lhs <= out.bound + 1e-10;
  return out;
}

namespace {

/// ||x^2 - x|| restricted to the exact doubled indices, for a general band x.
double band_idempotent_defect(const BandMatrix<double>& x, const IndexList& exact, double rel_tol) {
  BandMatrix<double> sq = x * x - x;
  return band_operator_norm(sq.compress(exact), rel_tol);
}

}  // namespace

PairHomotopy pair_homotopy(const PairRepresentative& pair, const SpectralTriple& model, double rel_tol,
                           Index grid_dim_limit) {
  const IndexList exact = doubled_exact(model);
  PairHomotopy out;
  out.eps_e = hermitian_band_norm(hermitian_square_minus_self(pair.e).compress(exact), rel_tol);
  out.eps_e_check = band_idempotent_defect(pair.e_check, exact, rel_tol);
  out.distance = band_operator_norm((pair.e - pair.e_check).compress(exact), rel_tol);
  out.criterion = std::max(out.eps_e, out.eps_e_check) + 0.25 * out.distance * out.distance;
  out.valid = out.criterion < 0.25;
  if (pair.e.dim() <= grid_dim_limit) {
    out.worst_defect = 0.0;
    for (int i = 0; i < 65; ++i) {
      double s = i / 64.0;
      BandMatrix<double> x = (1.0 - s) * pair.e_check + s * pair.e;
      out.worst_defect = std::max(out.worst_defect, band_idempotent_defect(x, exact, rel_tol));
    }
  }
  return out;
}

CsCommutatorBound commutator_bound_cs(const SpectralTriple& model, double t) {
  CsCommutatorBound out;
  out.lhs_c = diag_commutator_norm(model, t, default_c, unit_weight);
  out.lhs_s = diag_commutator_norm(model, t, default_s, unit_weight);
  out.bound = 0.5 * model.comm_norm / t;
  out.pass = out.lhs_c <= out.bound + 1e-12 && out.lhs_s <= out.bound + 1e-12;
  return out;
}

LawCheck commutator_bound_resolvent(const SpectralTriple& model, double t, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorCode::InvalidArgument, "commutator_bound_resolvent: s must lie in (0, 1]");
  LawCheck out;
  out.lhs = diag_commutator_norm(model, t, [s](double x) { return std::pow(1.0 + x * x, -s); }, unit_weight);
  out.bound = 2.0 * model.comm_norm / t;
  out.pass = out.lhs <= out.bound + 1e-12;
  return out;
}

LawCheck commutator_bound_sqrt_cs(const SpectralTriple& model, double t, double R) {
  LawCheck out;
  out.lhs = diag_commutator_norm(model, t, [](double x) { return std::sqrt(default_cs(x)); }, unit_weight);
  out.bound = R * model.comm_norm / t;
  out.pass = out.lhs <= out.bound + 1e-12;
  return out;
}

double C_s_constant(double s) {
  if (!(s >= 0.0 && s < 1.0)) throw Error(ErrorCode::InvalidArgument, "C_s_constant: s must lie in [0, 1)");
  return 1.0 + 2.0 * std::sqrt(std::numbers::pi) * std::tgamma((1.0 - s) / 2.0) / std::tgamma((2.0 - s) / 2.0);
}

LawCheck weighted_F_commutator_bound(const SpectralTriple& model, double t, double s) {
  LawCheck out;
  out.lhs = diag_commutator_norm(model, t, unit_F, [s](double d) { return std::pow(std::abs(d), s); });
  out.bound = C_s_constant(s) * std::pow(t, s - 1.0) * model.comm_norm;
  out.pass = out.lhs <= out.bound + 1e-10;
  return out;
}

AsymptoticReport asymptotic_equivalence_report(const SpectralTriple& model, const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw Error(ErrorCode::InvalidArgument, "asymptotic_equivalence_report: need >= 2 grid points");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw Error(ErrorCode::InvalidArgument, "asymptotic_equivalence_report: grid not ascending");
  auto f = [](double x) { return x * (1.0 - x); };
  auto p1 = [](double m) { return 0.5 * (1.0 + unit_F(m)); };
  AsymptoticReport rep;
  for (double t : t_grid) {
    auto w = [t](double m) { return 1.0 / (1.0 + (m / t) * (m / t)); };
    auto a1 = [&](double m) { return f(w(m)) * p1(m); };
    auto a2 = [&](double m) { return f(w(m) * p1(m)) - f(p1(m)); };
    auto a3 = [&](double m) { return f(0.5 * (1.0 + unit_F(m / t))); };
    auto dist = [&](auto&& x, auto&& y) {
      std::function<double(double)> h = [&](double m) { return x(m) - y(m); };
      if (model.N >= 0) return integer_sup(h, commutator_radius(t, model.k));
      const Index n = model.dim();
      Eigen::VectorXd hd(n), ones = Eigen::VectorXd::Ones(n);
      for (Index i = 0; i < n; ++i) hd[i] = h(model.d[i]);
      return band_operator_norm(model.v.scaled(hd, ones));
    };
    rep.rows.push_back({t, dist(a1, a2), dist(a1, a3), dist(a2, a3)});
  }
  const auto& a = rep.rows.front();
  const auto& b = rep.rows.back();
  rep.decrease12 = b.d12 < a.d12;
  rep.decrease13 = b.d13 < a.d13;
  rep.decrease23 = b.d23 < a.d23;
  return rep;
}

double epsilon_window_constant() { return 8.0 / 237.0 * (std::sqrt(1393.0) - 34.0); }

double integer_sup(const std::function<double(double)>& h, double radius) {
  const long long r = static_cast<long long>(std::floor(radius));
  double out = 0.0;
  for (long long n = -r; n <= r; ++n) out = std::max(out, std::abs(h(static_cast<double>(n))));
  return out;
}

}  // namespace loclab
