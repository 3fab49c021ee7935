#pragma once

// The pair (e_t, f_t) representing the index pairing, its companions e-check
// and Theta_t, and the commutator estimates behind the defect bounds.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "loclab/doubled.hpp"
#include "loclab/models.hpp"

namespace loclab {

/// Constant R in the commutator estimates for the default functions.
inline constexpr double kDefaultR = 2.0;

struct LocaliserFunctions {
  std::function<double(double)> c;
  std::function<double(double)> s;
  /// c(x) s(x); kept separate so the product never loses digits to cancellation.
  std::function<double(double)> cs;
  std::string product_identity;
};

/// c(x) = sqrt(1/2 - x / (2 sqrt(1 + x^2))), s(x) = c(-x).
LocaliserFunctions default_functions();

struct AsymptoticFrame {
  double t = 1.0;
  Eigen::VectorXd c, s, cs, sqrt_cs;
};

AsymptoticFrame build_frame(const SpectralTriple& model, double t,
                            const LocaliserFunctions& funcs = default_functions());

/// e_t = [[s^2, r v r], [r v* r, c^2]] with r = sqrt(c s).
InterleavedSpec e_spec(const AsymptoticFrame& frame);
/// e-check = [[s^2, cs v], [cs v*, c^2]].
InterleavedSpec e_check_spec(const AsymptoticFrame& frame);
/// Theta f Theta* = [[s^2, cs], [cs, c^2]].
InterleavedSpec theta_f_theta_spec(const AsymptoticFrame& frame);
/// 2 e_t - 1.
InterleavedSpec two_e_minus_one_spec(const AsymptoticFrame& frame);

struct PairRepresentative {
  double t = 1.0;
  BandMatrix<double> e;
  BandMatrix<double> e_check;
  /// f_t = diag(0, 1) per mode, interleaved.
  Eigen::VectorXd f;
  /// [[c, s], [-s, c]].
  BandMatrix<double> theta;
};

PairRepresentative build_pair(const AsymptoticFrame& frame, const SpectralTriple& model);

/// Truncation radius used when a pairing quantity is evaluated on a circle model.
Index pairing_truncation(double t, Index k);

struct LawCheck {
  double lhs = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||e_t^2 - e_t|| on the modes where v acts exactly, against 2 R t^-1 ||[D, v]||.
LawCheck defect_law(const PairRepresentative& pair, const SpectralTriple& model, double R = kDefaultR);
/// ||e_t - e-check_t|| against (sqrt 2 / 2) R t^-1 ||[D, v]||.
LawCheck distance_law(const PairRepresentative& pair, const SpectralTriple& model, double R = kDefaultR);

struct PairHomotopy {
  double eps_e = 0.0;
  double eps_e_check = 0.0;
  double distance = 0.0;
  /// max(eps_e, eps_e_check) + ||e - e-check||^2 / 4; valid below 1/4.
  double criterion = 0.0;
  bool valid = false;
  /// Worst defect of (1 - s) e-check + s e over the s-grid; negative when not sampled.
  double worst_defect = -1.0;
};

/// Straight line from e-check_t to e_t, measured on the modes where v acts exactly.
/// The s-grid witness is sampled only when the doubled dimension is at most grid_dim_limit.
PairHomotopy pair_homotopy(const PairRepresentative& pair, const SpectralTriple& model, double rel_tol = 1e-8,
                           Index grid_dim_limit = 20000);

struct CsCommutatorBound {
  double lhs_c = 0.0;
  double lhs_s = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||[c_t, v]||, ||[s_t, v]|| <= (1/2) t^-1 ||[D, v]||.
CsCommutatorBound commutator_bound_cs(const SpectralTriple& model, double t);
/// ||[(1 + t^-2 D^2)^-s, v]|| <= 2 t^-1 ||[D, v]||.
LawCheck commutator_bound_resolvent(const SpectralTriple& model, double t, double s);
/// ||[sqrt(c_t s_t), v]||; recorded against R t^-1 ||[D, v]||.
LawCheck commutator_bound_sqrt_cs(const SpectralTriple& model, double t, double R = kDefaultR);

/// 1 + 2 sqrt(pi) Gamma((1 - s)/2) / Gamma((2 - s)/2).
double C_s_constant(double s);

/// || |D|^s [F_t, v] || <= C_s t^(s-1) ||[D, v]||, F_t = t^-1 D (1 + t^-2 D^2)^-1/2.
LawCheck weighted_F_commutator_bound(const SpectralTriple& model, double t, double s);

struct AsymptoticRow {
  double t = 0.0;
  double d12 = 0.0;
  double d13 = 0.0;
  double d23 = 0.0;
};

struct AsymptoticReport {
  std::vector<AsymptoticRow> rows;
  /// d(t_last) < d(t_first) per pair.
  bool decrease12 = false;
  bool decrease13 = false;
  bool decrease23 = false;
};

AsymptoticReport asymptotic_equivalence_report(const SpectralTriple& model, const std::vector<double>& t_grid);

/// (8/237)(sqrt(1393) - 34).
double epsilon_window_constant();

/// sup_n |h(n)| over the integers n with |n| <= radius.
double integer_sup(const std::function<double(double)>& h, double radius);

}  // namespace loclab
