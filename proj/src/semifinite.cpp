#include "loclab/semifinite.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace loclab {

WeightedTrace::WeightedTrace(std::vector<double> w) : weights(std::move(w)) {
  if (weights.empty()) throw Error(ErrorCode::InvalidWeights, "WeightedTrace: no weights");
  for (double x : weights)
    if (!(x > 0.0) || !std::isfinite(x)) {
      std::ostringstream os;
      os << "WeightedTrace: weight " << x << " is not finite and positive";
      throw Error(ErrorCode::InvalidWeights, os.str());
    }
}

double WeightedTrace::operator()(const std::vector<double>& b) const {
  if (b.size() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "WeightedTrace: component count");
  double out = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) out += weights[j] * b[j];
  return out;
}

std::complex<double> WeightedTrace::operator()(const std::vector<std::complex<double>>& b) const {
  if (b.size() != weights.size()) throw Error(ErrorCode::DimensionMismatch, "WeightedTrace: component count");
  std::complex<double> out = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) out += weights[j] * b[j];
  return out;
}

WeightedTrace trace_of(const BlockModel& bm) {
  std::vector<double> w;
  for (const auto& c : bm.components) w.push_back(c.weight);
  return WeightedTrace(w);
}

std::complex<double> tau_hat(const std::vector<Eigen::MatrixXcd>& blocks, const WeightedTrace& tau) {
  std::vector<std::complex<double>> tr;
  for (const auto& b : blocks) tr.push_back(b.trace());
  return tau(tr);
}

double tau_rank(const std::vector<QuasiProjection<double>>& blocks, const WeightedTrace& tau) {
  std::vector<double> ranks;
  for (const auto& p : blocks) ranks.push_back(static_cast<double>(trace_rank(kappa0(p))));
  return tau(ranks);
}

double tau_signature(const std::vector<Eigen::MatrixXd>& blocks, const WeightedTrace& tau,
                     std::optional<double> zero_tol) {
  std::vector<double> sig;
  for (const auto& b : blocks) sig.push_back(static_cast<double>(signature(b, zero_tol).sig));
  return tau(sig);
}

double tau_signature(const std::vector<BandMatrix<double>>& blocks, const WeightedTrace& tau,
                     std::optional<double> zero_tol) {
  std::vector<double> sig;
  for (const auto& b : blocks) sig.push_back(static_cast<double>(signature(b, zero_tol).sig));
  return tau(sig);
}

SemifiniteResult semifinite_half_signature(const BlockModel& bm, double eps, double delta, double t, double lambda) {
  WeightedTrace tau = trace_of(bm);
  SemifiniteResult out;
  std::vector<BandMatrix<double>> blocks;
  std::vector<double> dims;
  HalfSignatureOptions opts;
  opts.t = t;
  opts.lambda = lambda;
  for (const auto& c : bm.components) {
    HalfSignatureResult r = half_signature_index(c.model, eps, delta, opts);
    out.per_block.push_back(r.index);
    dims.push_back(static_cast<double>(r.dim));
    blocks.push_back(build_localiser(c.model, 1.0 / r.t, r.lambda).matrix);
    out.details.push_back(std::move(r));
  }
  out.tau_index = 0.5 * tau_signature(blocks, tau);
  out.tau_P_lambda = tau(dims);
  return out;
}

std::vector<std::pair<ModuleVector, ModuleVector>> transfer_samples(const BlockModel& bm, int count,
                                                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<std::pair<ModuleVector, ModuleVector>> out;
  auto draw = [&](Index n) {
    Eigen::VectorXcd x(n);
    for (Index i = 0; i < n; ++i) x[i] = {g(rng), g(rng)};
    return x;
  };
  for (int s = 0; s < count; ++s) {
    ModuleVector a, b;
    for (const auto& c : bm.components) {
      a.push_back(draw(2 * c.model.dim()));
      b.push_back(draw(2 * c.model.dim()));
    }
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

TransferReport trace_transfer_check(const BlockModel& bm,
                                    const std::vector<std::pair<ModuleVector, ModuleVector>>& samples,
                                    double t, double lambda, double tol) {
  WeightedTrace tau = trace_of(bm);
  TransferReport rep;
  for (const auto& [x1, x2] : samples) {
    if (static_cast<Index>(x1.size()) != tau.size() || static_cast<Index>(x2.size()) != tau.size())
      throw Error(ErrorCode::DimensionMismatch, "trace_transfer_check: sample has wrong component count");
    std::vector<Eigen::MatrixXcd> blocks;
    std::vector<std::complex<double>> inner;
    for (std::size_t j = 0; j < x1.size(); ++j) {
      blocks.push_back(x1[j] * x2[j].adjoint());
      inner.push_back(x2[j].dot(x1[j]));
    }
    std::complex<double> direct = tau_hat(blocks, tau);
    std::complex<double> via = tau(inner);
    double scale = 0.0;
    for (std::size_t j = 0; j < x1.size(); ++j) scale += tau.weights[j] * x1[j].norm() * x2[j].norm();
    TransferSample s{direct.real(), via.real(), std::abs(direct - via) / std::max(1.0, scale)};
    rep.rank_one.push_back(s);
  }
  {
    std::vector<Eigen::MatrixXcd> blocks;
    K0Class cls;
    for (const auto& c : bm.components) {
      Localiser loc = build_localiser(c.model, 1.0 / t, lambda);
      Eigen::MatrixXd l = loc.matrix.to_dense();
      auto es = eig(l);
      IndexList pos;
      for (Index i = 0; i < es.values.size(); ++i)
        if (es.values[i] > 0.0) pos.push_back(i);
      Eigen::MatrixXd basis = es.vectors(Eigen::all, pos);
      Eigen::MatrixXd p = basis * basis.transpose();
      cls.value.push_back(trace_rank(p));
      blocks.push_back(p.cast<std::complex<double>>());
    }
    std::vector<double> ranks(cls.value.begin(), cls.value.end());
    double direct = tau_hat(blocks, tau).real();
    double via = tau(ranks);
    rep.projections.push_back({direct, via, std::abs(direct - via) / std::max(1.0, std::abs(via))});
  }
  for (const auto& s : rep.rank_one) rep.max_residual = std::max(rep.max_residual, s.residual);
  for (const auto& s : rep.projections) rep.max_residual = std::max(rep.max_residual, s.residual);
  rep.pass = rep.max_residual <= tol;
  return rep;
}

}  // namespace loclab
