#include "doctest.h"

#include <random>

#include "loclab/inertia.hpp"
#include "loclab/operators.hpp"

using namespace loclab;

namespace {

Eigen::MatrixXd random_hermitian(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  return (a + a.transpose()) / 2.0;
}

}  // namespace

TEST_CASE("eig sorts eigenvalues and reconstructs") {
  Eigen::MatrixXd d = Eigen::Vector2d(2, 1).asDiagonal();
  auto es = eig(d);
  CHECK(es.values[0] == doctest::Approx(1.0));
  CHECK(es.values[1] == doctest::Approx(2.0));

  Eigen::Matrix2d x;
  x << 0, 1, 1, 0;
  auto ex = eig(x);
  CHECK(ex.values[0] == doctest::Approx(-1.0));
  CHECK(ex.values[1] == doctest::Approx(1.0));

  std::mt19937 rng(7);
  Eigen::MatrixXd h = random_hermitian(50, rng);
  auto eh = eig(h);
  double norm = operator_norm(h);
  Eigen::MatrixXd back = eh.vectors * eh.values.asDiagonal() * eh.vectors.transpose();
  CHECK(operator_norm((back - h).eval()) <= 1e-10 * 50 * norm);
  CHECK(operator_norm((eh.vectors.transpose() * eh.vectors - Eigen::MatrixXd::Identity(50, 50)).eval()) <= 1e-12 * 50);
}

TEST_CASE("eig refuses dense work above the limit") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(5, 5);
  CHECK_THROWS_AS(eig(h, 4), Error);
  try {
    eig(h, 4);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooLarge);
  }
}

TEST_CASE("functional calculus") {
  std::mt19937 rng(11);
  Eigen::MatrixXd h = random_hermitian(50, rng);
  CHECK((apply_function(h, [](double x) { return x; }) - h).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((apply_function(h, [](double) { return 1.0; }) - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);

  auto f = [](double x) { return std::sin(x); };
  auto g = [](double x) { return std::cos(x); };
  Eigen::MatrixXd fg = apply_function(h, [&](double x) { return f(x) * g(x); });
  Eigen::MatrixXd prod = apply_function(h, f) * apply_function(h, g);
  CHECK(operator_norm((fg - prod).eval()) <= 1e-9 * 50);

  Eigen::DiagonalMatrix<double, Eigen::Dynamic> zero(Eigen::VectorXd::Zero(3));
  auto c0 = apply_function(zero, [](double x) { return std::sqrt(0.5 - 0.5 * x / std::sqrt(1 + x * x)); });
  CHECK(c0.diagonal()[1] == doctest::Approx(0.70710678118654752));
}

TEST_CASE("spectral projections") {
  Eigen::MatrixXd h = Eigen::Vector3d(-2, 0, 3).asDiagonal();
  Eigen::MatrixXd p = spectral_projection(h, -1, 1);
  CHECK((p - Eigen::Vector3d(0, 1, 0).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((spectral_projection(h, -3, 4) - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::DiagonalMatrix<double, Eigen::Dynamic> d(Eigen::VectorXd::LinSpaced(101, -50, 50));
  CHECK(spectral_projection(d, -10.5, 10.5).diagonal().sum() == doctest::Approx(21));
  CHECK_THROWS_AS(spectral_projection(d, -10, 10.5), BoundaryEigenvalueError);
  try {
    spectral_projection(d, -10.5, 10.0);
  } catch (const BoundaryEigenvalueError& e) {
    CHECK(e.eigenvalue == doctest::Approx(10.0));
    CHECK(e.distance == doctest::Approx(0.0));
  }

  std::mt19937 rng(3);
  Eigen::MatrixXd r = random_hermitian(40, rng);
  auto es = eig(r);
  double a = 0.5 * (es.values[9] + es.values[10]), b = 0.5 * (es.values[29] + es.values[30]);
  double c = 0.5 * (es.values[19] + es.values[20]);
  Eigen::MatrixXd pi = spectral_projection(r, a, b), pj = spectral_projection(r, c, 1e3);
  Eigen::MatrixXd pij = spectral_projection(r, c, b);
  CHECK((pi * pj - pij).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((pi * pi - pi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pi.trace() == doctest::Approx(20));
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));
  CHECK(operator_norm(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
  Eigen::Vector3d u(1, 1, std::sqrt(2.0));
  CHECK(operator_norm((u * u.transpose()).eval()) == doctest::Approx(4.0).epsilon(1e-12));

  std::mt19937 rng(5);
  for (int i = 0; i < 20; ++i) {
    Eigen::MatrixXd a = random_hermitian(20, rng), b = random_hermitian(20, rng);
    CHECK(operator_norm((a * b).eval()) <= operator_norm(a) * operator_norm(b) + 1e-10);
  }
}

TEST_CASE("compressions") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(4, 4);
  CHECK((compress(m, all_indices(4), all_indices(4)) - m).norm() == 0.0);
  CHECK((compress(m, {0, 1}, {0, 1}) - m.topLeftCorner(2, 2)).norm() == 0.0);
  Eigen::MatrixXd twice = compress(compress(m, {0, 1, 3}, {1, 2, 3}), {1, 2}, {0, 2});
  CHECK((twice - compress(m, {1, 3}, {1, 3})).norm() == 0.0);
  CHECK_THROWS_AS(compress(m, {4}, {0}), Error);
}

TEST_CASE("band matrices") {
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  const Index n = 30, bw = 3;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = std::max<Index>(0, j - bw); i <= std::min(n - 1, j + bw); ++i) a(i, j) = g(rng);
  auto b = BandMatrix<double>::from_dense(a);
  CHECK(b.lower() == bw);
  CHECK((b.to_dense() - a).norm() == 0.0);
  CHECK(((b * b).to_dense() - a * a).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((b.adjoint().to_dense() - a.transpose()).norm() == 0.0);
  Eigen::MatrixXd h = a + a.transpose();
  auto bh = BandMatrix<double>::from_dense(h);
  CHECK(bh.is_hermitian());
  auto sq = hermitian_square_minus_self(bh);
  Eigen::MatrixXd want = h * h - h;
  for (Index j = 0; j < n; ++j)
    for (Index i = j; i <= std::min(n - 1, j + 2 * bw); ++i) CHECK(sq(i, j) == doctest::Approx(want(i, j)));
  IndexList keep{1, 2, 5, 6, 7};
  CHECK((bh.compress(keep).to_dense() - h(keep, keep)).norm() == 0.0);
  auto dil = hermitian_dilation(b);
  CHECK(dil.is_hermitian());
  CHECK(band_operator_norm(b) == doctest::Approx(operator_norm(a)).epsilon(1e-10));
  CHECK(hermitian_band_norm(bh) == doctest::Approx(operator_norm(h)).epsilon(1e-10));
}

TEST_CASE("banded inertia matches eigenvalue counts") {
  std::mt19937 rng(13);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = 20 + trial * 5, bw = 1 + trial % 5;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = j; i <= std::min(n - 1, j + bw); ++i) a(i, j) = a(j, i) = g(rng);
    if (trial % 4 == 0) a.diagonal().setZero();
    auto es = eig(a);
    Index pos = (es.values.array() > 0).count(), neg = (es.values.array() < 0).count();
    Inertia in = ldl_inertia(BandMatrix<double>::from_dense(a, bw, bw));
    REQUIRE_FALSE(in.breakdown);
    CHECK(in.n_pos == pos);
    CHECK(in.n_neg == neg);
  }
}

TEST_CASE("complex band inertia") {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  using C = std::complex<double>;
  const Index n = 60, bw = 2;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = g(rng);
    for (Index i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
      a(i, j) = C(g(rng), g(rng));
      a(j, i) = std::conj(a(i, j));
    }
  }
  auto es = eig(a);
  Inertia in = ldl_inertia(BandMatrix<C>::from_dense(a, bw, bw));
  CHECK(in.n_pos == (es.values.array() > 0).count());
  CHECK(hermitian_band_norm(BandMatrix<C>::from_dense(a, bw, bw)) == doctest::Approx(es.values.cwiseAbs().maxCoeff()).epsilon(1e-10));
}
