#pragma once

// Randomized property suites shared by the unit tests and the acceptance runner.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <string>

#include "loclab/band_matrix.hpp"
#include "loclab/inertia.hpp"
#include "loclab/ktheory.hpp"
#include "loclab/localiser.hpp"
#include "loclab/models.hpp"

namespace loclab::props {

struct Outcome {
  bool pass = true;
  std::string detail;
  int checked = 0;

  void fail(const std::string& what) {
    if (pass) detail = what;
    pass = false;
  }
};

inline Eigen::MatrixXd random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return g(rng); });
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

/// Hermitian matrix with eigenvalues in {x : x(x - 1) has modulus <= defect}, exact defect at one eigenvalue.
inline Eigen::MatrixXd random_quasi_projection(Index n, double defect, std::mt19937_64& rng, Index* rank = nullptr) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Roots of x^2 - x = +-defect closest to 0 and 1.
  double shift = (1.0 - std::sqrt(1.0 - 4.0 * defect)) / 2.0;
  double over = (std::sqrt(1.0 + 4.0 * defect) - 1.0) / 2.0;
  Eigen::VectorXd ev(n);
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    bool high = u(rng) < 0.5;
    double dev = (u(rng) < 0.5 ? shift : -over) * u(rng);
    if (i == 0) dev = shift;
    ev[i] = high ? 1.0 - dev : dev;
    r += high;
  }
  if (rank) *rank = r;
  Eigen::MatrixXd q = random_orthogonal(n, rng);
  return q * ev.asDiagonal() * q.transpose();
}

inline Outcome kappa0_properties(int samples, std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Index n = 4 + static_cast<Index>(u(rng) * 20);
    double defect = 0.24 * u(rng);
    Index rank = 0;
    Eigen::MatrixXd e = random_quasi_projection(n, defect, rng, &rank);
    QuasiProjection<double> qp(e);
    Eigen::MatrixXd k = kappa0(qp);
    double idem = idempotent_defect(k);
    double comm = operator_norm((k * qp.matrix - qp.matrix * k).eval());
    long long r = trace_rank(k);
    ++out.checked;
    if (idem > 1e-10 || comm > 1e-9 || r != rank) {
      std::ostringstream os;
      os << "sample " << s << ": idempotency " << idem << ", commutator " << comm << ", rank " << r << " vs " << rank;
      out.fail(os.str());
    }
    // Non-Hermitian: similar to a projection, rank via sign iteration against eigen-count.
    Eigen::MatrixXd p = random_quasi_projection(n, 0.0, rng);
    Eigen::MatrixXd sim = Eigen::MatrixXd::Identity(n, n) + 0.1 * random_orthogonal(n, rng);
    Eigen::MatrixXd f = sim * p * sim.inverse() +
                        0.02 / std::sqrt(static_cast<double>(n)) *
                            Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng) - 0.5; });
    QuasiIdempotent<double> qi(f);
    if (qi.defect >= kQuarter) continue;
    Eigen::MatrixXd kf = kappa0(qi);
    Eigen::EigenSolver<Eigen::MatrixXd> es(f);
    long long count = 0;
    for (Index i = 0; i < n; ++i) count += es.eigenvalues()[i].real() > 0.5;
    ++out.checked;
    if (trace_rank(kf) != count || idempotent_defect(kf) > 1e-10) {
      std::ostringstream os;
      os << "non-Hermitian sample " << s << ": sign-path rank " << trace_rank(kf) << " vs eigen count " << count;
      out.fail(os.str());
    }
  }
  return out;
}

inline Outcome sylvester_properties(int samples, std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Index n = 3 + static_cast<Index>(u(rng) * 40);
    Eigen::VectorXd ev(n);
    Index expect = 0;
    for (Index i = 0; i < n; ++i) {
      double mag = 0.5 + 1.5 * u(rng);
      bool pos = u(rng) < 0.5;
      ev[i] = pos ? mag : -mag;
      expect += pos ? 1 : -1;
    }
    Eigen::MatrixXd q = random_orthogonal(n, rng);
    Eigen::MatrixXd h = q * ev.asDiagonal() * q.transpose();
    h = (h + h.transpose()) / 2.0;
    Eigen::MatrixXd sm = Eigen::MatrixXd::Identity(n, n) + 0.5 * random_orthogonal(n, rng) +
                         0.2 * Eigen::MatrixXd::NullaryExpr(n, n, [&] { return u(rng) - 0.5; });
    Eigen::MatrixXd c = sm.transpose() * h * sm;
    c = (c + c.transpose()) / 2.0;
    Index a = signature(h).sig, b = signature(c).sig;
    ++out.checked;
    if (a != expect || b != expect) {
      std::ostringstream os;
      os << "sample " << s << ": sig(H) " << a << ", sig(S*HS) " << b << ", expected " << expect;
      out.fail(os.str());
    }
  }
  return out;
}

template <typename Scalar>
Eigen::VectorXd eigenvalues_only(const Matrix<Scalar>& h) {
  return Eigen::SelfAdjointEigenSolver<Matrix<Scalar>>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

/// Banded LDL inertia against dense eigen counts, real and complex, dims up to 2000.
inline Outcome inertia_path_properties(std::uint64_t seed) {
  Outcome out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Index dims[] = {5, 17, 64, 200, 501, 1000, 2000};
  for (Index n : dims) {
    for (Index bw : {Index{1}, Index{3}, Index{4}}) {
      BandMatrix<double> a(n, bw, bw);
      BandMatrix<std::complex<double>> c(n, bw, bw);
      for (Index j = 0; j < n; ++j)
        for (Index i = j; i <= std::min(n - 1, j + bw); ++i) {
          double x = u(rng), y = i == j ? 0.0 : u(rng);
          a.set(i, j, x);
          a.set(j, i, x);
          c.set(i, j, {x, y});
          c.set(j, i, {x, -y});
        }
      auto count = [](const Eigen::VectorXd& ev, Index& pos, Index& neg) {
        pos = neg = 0;
        for (Index i = 0; i < ev.size(); ++i) (ev[i] > 0 ? pos : neg)++;
      };
      Index p0, n0, p1, n1;
      count(eigenvalues_only(a.to_dense()), p0, n0);
      count(eigenvalues_only(c.to_dense()), p1, n1);
      Inertia ia = ldl_inertia(a), ic = ldl_inertia(c);
      out.checked += 2;
      if (ia.breakdown || ic.breakdown) continue;
      if (ia.n_pos != p0 || ia.n_neg != n0 || ic.n_pos != p1 || ic.n_neg != n1) {
        std::ostringstream os;
        os << "dim " << n << " bandwidth " << bw << ": banded (" << ia.n_pos << "," << ia.n_neg << ")/(" << ic.n_pos
           << "," << ic.n_neg << ") vs dense (" << p0 << "," << n0 << ")/(" << p1 << "," << n1 << ")";
        out.fail(os.str());
      }
    }
  }
  // Localisers: banded signature against the dense path.
  for (Index k : {-2, 1, 3}) {
    SpectralTriple m = circle_model(120, k);
    for (double kappa : {0.02, 0.05, 0.3}) {
      Localiser loc = build_localiser(m, kappa, 100.5);
      SignatureResult banded = signature(loc.matrix);
      SignatureResult dense = signature(Eigen::MatrixXd(loc.matrix.to_dense()));
      ++out.checked;
      if (banded.sig != dense.sig) {
        std::ostringstream os;
        os << "localiser k=" << k << " kappa=" << kappa << ": banded " << banded.sig << " vs dense " << dense.sig;
        out.fail(os.str());
      }
    }
  }
  return out;
}

inline Outcome oracle_properties() {
  Outcome out;
  for (Index N : {Index{64}, Index{128}})
    for (Index k = -3; k <= 3; ++k) {
      Index a = fredholm_index_oracle(circle_model(N, k)).index;
      Index b = fredholm_index_oracle(circle_model(N + 16, k)).index;
      Index neg = fredholm_index_oracle(circle_model(N, -k)).index;
      ++out.checked;
      if (a != b || a != -neg || (k == 0 && a != 0) || std::abs(a) != std::abs(k)) {
        std::ostringstream os;
        os << "N=" << N << " k=" << k << ": index " << a << ", at N+16 " << b << ", at -k " << neg;
        out.fail(os.str());
      }
    }
  for (auto [k1, k2] : {std::pair<Index, Index>{1, 2}, {-1, 3}, {2, -2}, {0, -3}}) {
    SpectralTriple s = direct_sum(circle_model(64, k1), circle_model(64, k2));
    Index sum = fredholm_index_oracle(s).index;
    Index parts = fredholm_index_oracle(circle_model(64, k1)).index + fredholm_index_oracle(circle_model(64, k2)).index;
    ++out.checked;
    if (sum != parts) {
      std::ostringstream os;
      os << "direct sum of k=" << k1 << " and k=" << k2 << ": " << sum << " vs " << parts;
      out.fail(os.str());
    }
  }
  return out;
}

}  // namespace loclab::props
