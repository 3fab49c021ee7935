#include "doctest.h"

#include "loclab/localiser.hpp"
#include "properties.hpp"

using namespace loclab;

TEST_CASE("spectral decomposition") {
  SpectralTriple m = circle_model(50, 1);
  SpectralDecomposition sd = spectral_decompose(m, 10.5);
  CHECK(sd.low.size() == 42);
  CHECK(sd.low.size() + sd.high.size() == 202);
  CHECK(spectral_decompose(m, 60.5).high.empty());
  CHECK_THROWS_AS(spectral_decompose(m, 20.0), BoundaryEigenvalueError);

  Eigen::MatrixXd d = Eigen::VectorXd(doubled_diagonal(m.d)).asDiagonal();
  CHECK(trace_rank(spectral_projection(Eigen::MatrixXd(m.d.asDiagonal()), -10.5, 10.5)) == 21);
  CHECK(d.rows() == 202);
}

TEST_CASE("block decomposition") {
  SpectralTriple m = circle_model(12, 1);
  SpectralDecomposition sd = spectral_decompose(m, 4.5);
  PairRepresentative pair = build_pair(build_frame(m, 10.0), m);
  Eigen::MatrixXd f = pair.f.asDiagonal();
  auto bf = block_decompose(f, sd);
  CHECK(bf.m.isZero());
  CHECK((reassemble(bf, sd) - f).norm() == 0.0);

  Eigen::MatrixXd e = pair.e.to_dense();
  auto be = block_decompose(e, sd);
  CHECK((reassemble(be, sd) - e).norm() == 0.0);
  CHECK(be.p.rows() == 18);
  CHECK_THROWS_AS(block_decompose(Eigen::MatrixXd(3, 3), sd), Error);
}

TEST_CASE("m-block estimate on the circle") {
  SpectralTriple m = circle_model(140, 1);
  SpectralDecomposition sd = spectral_decompose(m, 100.5);
  PairRepresentative pair = build_pair(build_frame(m, 10.0), m);
  IndexList exact = doubled_exact(m);
  Eigen::MatrixXd e = pair.e.to_dense();
  auto b = block_decompose(e, sd);
  IndexList hi = intersect_sorted(sd.high, exact);
  Eigen::MatrixXd eq = e(hi, hi);
  double m_norm = operator_norm(Eigen::MatrixXd(e(hi, sd.low)));
  double eps = idempotent_defect(Eigen::MatrixXd(e(exact, exact)));
  CHECK(m_norm * m_norm <= eps + idempotent_defect(eq) + 1e-10);
  CHECK(b.m.rows() == static_cast<Index>(sd.high.size()));
}

TEST_CASE("localiser layout") {
  SpectralTriple m = circle_model(120, 1);
  Localiser loc = build_localiser(m, 0.05, 100.5);
  CHECK(loc.dim() == 402);
  CHECK(loc.matrix.bandwidth() <= 4);
  CHECK(is_hermitian(loc.matrix.to_dense()));
  for (Index k : {-2, 2}) CHECK(build_localiser(circle_model(120, k), 0.05, 100.5).matrix.bandwidth() <= 5);

  SpectralTriple id = trivial_model(3);
  id.d = Eigen::Vector3d(-1, 0, 2);
  Localiser l = build_localiser(id, 0.5, 10.0);
  CHECK(signature(l).sig == 0);
  Eigen::VectorXd ev = eig(l.matrix.to_dense()).values;
  CHECK(ev[ev.size() - 1] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("signature examples") {
  SignatureResult r = signature(Eigen::MatrixXd(Eigen::Vector3d(3, -1, 2).asDiagonal()));
  CHECK(r.sig == 1);
  CHECK(r.gap == doctest::Approx(1.0));
  CHECK(signature(Eigen::MatrixXd(Eigen::MatrixXd::Identity(5, 5))).sig == 5);
  CHECK_THROWS_AS(signature(Eigen::MatrixXd(Eigen::Vector2d(1, 0).asDiagonal())), Error);

  BandMatrix<double> b = BandMatrix<double>::diagonal(Eigen::Vector3d(3, -1, 2));
  SignatureResult rb = signature(b);
  CHECK(rb.sig == 1);
  CHECK(rb.banded);
  CHECK(rb.gap <= 1.0);
  CHECK(rb.gap >= 0.99);
}

TEST_CASE("random 500-dimensional Hermitian: banded equals dense") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a = Eigen::MatrixXd::NullaryExpr(500, 500, [&] { return g(rng); });
  Eigen::MatrixXd h = (a + a.transpose()) / 2.0;
  SignatureResult dense = signature(h);
  SignatureResult banded = signature(BandMatrix<double>::from_dense(h));
  CHECK(dense.sig == banded.sig);
  CHECK(dense.n_pos == banded.n_pos);
}

TEST_CASE("Sylvester and inertia-path suites") {
  props::Outcome s = props::sylvester_properties(100, 11);
  INFO(s.detail);
  CHECK(s.pass);
  props::Outcome i = props::inertia_path_properties(13);
  INFO(i.detail);
  CHECK(i.pass);
}

TEST_CASE("congruence") {
  SpectralTriple id = trivial_model(4);
  CongruenceResult c0 = congruence_check(id, build_frame(id, 5.0), spectral_decompose(id, 1.0),
                                         build_localiser(id, 0.2, 1.0));
  CHECK(c0.sig_L == 0);
  CHECK(c0.sig_2p_minus_1 == 0);
  CHECK(c0.residual <= 1e-14);

  SpectralTriple m = circle_model(256, 1);
  CongruenceResult c = congruence_check(m, build_frame(m, 20.0), spectral_decompose(m, 200.5),
                                        build_localiser(m, 1.0 / 20.0, 200.5));
  CHECK(c.equal);
  CHECK(c.residual_ok);
  CHECK(c.residual <= 1e-9 * c.norm_L);
  CHECK_THROWS_AS(congruence_check(m, build_frame(m, 20.0), spectral_decompose(m, 200.5),
                                   build_localiser(m, 0.1, 200.5)),
                  Error);
}

TEST_CASE("off-diagonal certificate") {
  SpectralTriple id = trivial_model(6);
  id.d = Eigen::VectorXd::LinSpaced(6, -30, 20);
  CHECK(offdiagonal_certificate(id, build_frame(id, 10.0), spectral_decompose(id, 10.5)).lhs <= 1e-14);

  SpectralTriple m = circle_model(200, 1);
  OffdiagonalCertificate c = offdiagonal_certificate(m, build_frame(m, 10.0), spectral_decompose(m, 100.5));
  CHECK(c.bound == doctest::Approx(0.5 / std::sqrt(1 + 100.5 * 100.5 / 100)));
  CHECK(c.unhalved_bound == doctest::Approx(2 * c.bound));
  CHECK(c.pass_unhalved);
  SpectralTriple m2 = circle_model(80, 1);
  CHECK(offdiagonal_certificate(m2, build_frame(m2, 10.0), spectral_decompose(m2, 10.5)).bound ==
        doctest::Approx(0.344).epsilon(1e-3));
}

TEST_CASE("diagonal reduction") {
  SpectralTriple m = circle_model(50260, 1);
  AsymptoticFrame f = build_frame(m, 250.0);
  SpectralDecomposition sd = spectral_decompose(m, 50000.5);
  CHECK_THROWS_AS(diagonal_reduction_check(m, f, sd, 0.002, 0.001), Error);
  DiagonalReduction r = diagonal_reduction_check(m, f, sd, 0.0012, std::nullopt, 1e-6);
  CHECK(r.pass);
  CHECK(r.e_defect < 0.0012);
  CHECK(r.eps_q == r.q_defect);
  CHECK(r.p_defect <= r.p_bound + 1e-10);
  CHECK(r.m_norm * r.m_norm <= r.m_bound + 1e-10);
  CHECK(r.path_worst < 0.25);

  SpectralTriple id = trivial_model(4);
  id.d = Eigen::Vector4d(-3, -1, 1, 3);
  DiagonalReduction z = diagonal_reduction_check(id, build_frame(id, 2.0), spectral_decompose(id, 2.0), 0.001);
  CHECK(z.m_norm <= 1e-15);
  CHECK(z.pass);
}

TEST_CASE("thresholds and snapping") {
  ThresholdReport t = thresholds(0.00124, 0.00124, 1.0);
  CHECK(t.t_min == doctest::Approx(3225.8).epsilon(1e-4));
  CHECK(t.lambda_min == doctest::Approx(2.60e6).epsilon(1e-2));
  CHECK(t.window_ok);
  CHECK_FALSE(thresholds(0.002, 0.001, 1.0).window_ok);
  CHECK(thresholds(0.112, 0.1, 1.0).t_min == doctest::Approx(35.714).epsilon(1e-4));
  CHECK(thresholds(0.1, 0.1, 1.0, 2.0, 50.0).lambda_min == doctest::Approx(500.0));
  CHECK(snap_half_integer(200.0) == 200.5);
  CHECK(snap_half_integer(200.7) == 200.5);
  CHECK(snap_half_integer(200.5) == 200.5);
}

TEST_CASE("half-signature index") {
  HalfSignatureOptions o;
  o.t = 20.0;
  o.lambda = 200.5;
  CHECK(half_signature_index(trivial_model(5), 0.1, 0.1, o).index == 0);
  for (Index k = -3; k <= 3; ++k) {
    HalfSignatureResult r = half_signature_index(circle_model(256, k), 0.1, 0.1, o);
    CHECK(r.index == fredholm_index_oracle(circle_model(256, k)).index);
    CHECK(r.index == -half_signature_index(circle_model(256, -k), 0.1, 0.1, o).index);
  }
  HalfSignatureOptions snap = o;
  snap.lambda = 200.0;
  HalfSignatureResult s = half_signature_index(circle_model(256, 1), 0.1, 0.1, snap);
  CHECK(s.snapped);
  CHECK(s.lambda == 200.5);
  CHECK(s.lambda_requested == 200.0);

  HalfSignatureOptions cert = o;
  cert.certify = true;
  CHECK_THROWS_AS(half_signature_index(circle_model(256, 1), 0.1, 0.1, cert), Error);
  CHECK_THROWS_AS(half_signature_index(circle_model(200, 1), 0.1, 0.1, o), Error);
}

TEST_CASE("truncation exactness") {
  for (Index k : {-1, 2}) {
    Localiser a = build_localiser(circle_model(120, k), 0.05, 100.5);
    Localiser b = build_localiser(circle_model(136, k), 0.05, 100.5);
    CHECK(a.dim() == b.dim());
    CHECK((a.matrix.to_dense() - b.matrix.to_dense()).norm() == 0.0);
  }
}
