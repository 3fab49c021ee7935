#include "doctest.h"

#include "loclab/models.hpp"
#include "properties.hpp"

using namespace loclab;

TEST_CASE("circle model construction") {
  SpectralTriple m0 = circle_model(4, 0);
  CHECK(m0.dim() == 9);
  CHECK(m0.comm_norm == 0.0);
  CHECK((m0.v.to_dense() - Eigen::MatrixXd::Identity(9, 9)).norm() == 0.0);

  SpectralTriple m1 = circle_model(4, 1);
  Eigen::MatrixXd shift = Eigen::MatrixXd::Zero(9, 9);
  for (Index j = 0; j + 1 < 9; ++j) shift(j + 1, j) = 1.0;
  CHECK((m1.v.to_dense() - shift).norm() == 0.0);
  CHECK(m1.comm_norm == 1.0);
  CHECK(m1.d[0] == -4.0);
  CHECK(m1.d[8] == 4.0);

  CHECK(circle_model(256, 3).comm_norm == 3.0);
  CHECK_THROWS_AS(circle_model(1, 2), Error);
}

TEST_CASE("interior unitarity and the exact commutator norm") {
  for (Index k : {-2, 1, 3}) {
    SpectralTriple m = circle_model(20, k);
    Eigen::MatrixXd v = m.v.to_dense();
    Eigen::MatrixXd vtv = v.transpose() * v, vvt = v * v.transpose();
    for (Index i = 0; i < m.dim(); ++i) {
      if (m.exact_col[i]) CHECK(vtv(i, i) == 1.0);
      if (m.exact_row[i]) CHECK(vvt(i, i) == 1.0);
      CHECK(static_cast<bool>(m.exact_col[i]) == (std::abs(m.d[i]) <= 20 - std::abs(k)));
    }
    Eigen::MatrixXd comm = m.d.asDiagonal() * v - v * m.d.asDiagonal();
    CHECK(operator_norm(comm) == doctest::Approx(std::abs(k)).epsilon(1e-12));
  }
}

TEST_CASE("fredholm oracle examples") {
  CHECK(fredholm_index_oracle(circle_model(64, 0)).index == 0);
  FredholmWitness w = fredholm_index_oracle(circle_model(64, 1));
  CHECK(std::abs(w.index) == 1);
  CHECK(w.index == w.dim_ker - w.dim_coker);
  CHECK(w.index == w.alternate_index);
  CHECK(w.zero_sv <= kRankZeroTol);
  CHECK(w.gap_sv >= kRankGapTol);
  CHECK(fredholm_index_oracle(circle_model(64, -1)).index == -w.index);
  CHECK_THROWS_AS(fredholm_index_oracle(circle_model(9, 1)), Error);
}

TEST_CASE("oracle property suite") {
  props::Outcome o = props::oracle_properties();
  INFO(o.detail);
  CHECK(o.pass);
}

TEST_CASE("edge guard") {
  CHECK(edge_guard(256, 200.5, 1));
  CHECK_FALSE(edge_guard(200, 200.5, 1));
  CHECK_FALSE(edge_guard(2, 0.5, 2));
}

TEST_CASE("block models") {
  BlockModel one = block_model({1.0}, {1}, 64);
  CHECK(one.size() == 1);
  CHECK(one.components[0].model.dim() == 129);
  BlockModel two = block_model({0.5, 0.25}, {1, -2}, 128);
  CHECK(two.size() == 2);
  CHECK(two.components[1].winding == -2);
  CHECK(two.components[1].model.comm_norm == 2.0);
  CHECK_THROWS_AS(block_model({0.5}, {1, 2}, 64), Error);
  CHECK_THROWS_AS(block_model({-1.0}, {1}, 64), Error);
  CHECK_THROWS_AS(block_model({}, {}, 64), Error);
}

TEST_CASE("trivial model and direct sums") {
  SpectralTriple t = trivial_model(3);
  CHECK(t.d.isZero());
  CHECK(t.comm_norm == 0.0);
  SpectralTriple s = direct_sum(circle_model(10, 1), circle_model(10, -2));
  CHECK(s.dim() == 42);
  CHECK(s.comm_norm == 2.0);
}
