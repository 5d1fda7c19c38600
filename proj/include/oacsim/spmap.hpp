#pragma once

// SP-MAP: Gaussian sum-product message passing over the chain factor graph
// of the asynchronous matched-filter bank, in the 2M-dimensional real domain.
//
// Node n = i * M + k (0-based filter k, time i) owns the variable w_n with
// coordinates (b_1^r..b_M^r, b_1^i..b_M^i), where b_m is s_m[i] for m <= k
// and s_m[i-1] for m > k. Consecutive nodes share every symbol but one:
// leaving node (k, i) retires b_{(k+1) mod M}, which is replaced by the next
// symbol of that device. Inactive coordinates (symbols outside [0, L)) stay
// in the vector as flat directions, so every message is 2M-dimensional.

#include "oacsim/channel.hpp"
#include "oacsim/estimators.hpp"
#include "oacsim/numerics.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace oacsim {

struct FactorNode {
  Index k = 0;  // filter, 0-based
  Index i = 0;  // time, 0-based, in [0, L]
  std::vector<Index> active;  // devices whose coordinate holds a real symbol
  GaussianCanonical fb;       // evidence from y_k[i]
  std::optional<GaussianCanonical> ft;  // prior, present iff k = M-1 and i < L
  GaussianCanonical fl;       // forward message into the node
  GaussianCanonical fr_back;  // backward message into the node
};

namespace detail {

/// Devices whose coordinate is live at node (k, i).
inline std::vector<Index> active_devices(Index M, Index L, Index k, Index i) {
  std::vector<Index> out;
  for (Index m = 0; m < M; ++m) {
    const bool live = i == 0 ? m <= k : (i == L ? m > k : true);
    if (live) out.push_back(m);
  }
  return out;
}

/// Canonical likelihood of one sample y = h^T b + z, z ~ CN(0, noise_var),
/// restricted to the active coordinates.
inline GaussianCanonical evidence_message(const Eigen::VectorXcd& h, Complex y, double noise_var,
                                          const std::vector<Index>& active) {
  const Index M = h.size();
  const double kappa = 2.0 / noise_var;  // precision of each real component
  Eigen::VectorXd hr = Eigen::VectorXd::Zero(M);
  Eigen::VectorXd hi = Eigen::VectorXd::Zero(M);
  for (Index m : active) {
    hr(m) = h(m).real();
    hi(m) = h(m).imag();
  }
  // Real and imaginary parts of h^T b as rows over (b^r, b^i).
  Eigen::VectorXd a_re(2 * M);
  Eigen::VectorXd a_im(2 * M);
  a_re << hr, -hi;
  a_im << hi, hr;
  GaussianCanonical g;
  g.eta = kappa * (a_re * y.real() + a_im * y.imag());
  g.lambda = kappa * (a_re * a_re.transpose() + a_im * a_im.transpose());
  return g;
}

/// Prior over w: mean (E^r, E^i), covariance diag(D, D) / 2.
inline GaussianCanonical prior_message(const PriorMoments& p) {
  const Index M = p.devices();
  GaussianMoment g;
  g.mu.resize(2 * M);
  g.mu << p.e.real(), p.e.imag();
  Eigen::VectorXd var(2 * M);
  var << 0.5 * p.d, 0.5 * p.d;
  g.sigma = var.asDiagonal();
  return to_canonical(g);
}

/// The message sent across the link that retires device `slot`: integrate the
/// slot's pair out and put a flat pair in its place.
inline GaussianCanonical replace_slot(const GaussianCanonical& g, Index slot, Index M) {
  std::vector<Index> keep;
  keep.reserve(static_cast<size_t>(2 * M - 2));
  for (Index c = 0; c < 2 * M; ++c)
    if (c != slot && c != M + slot) keep.push_back(c);
  // A single device: retiring its slot leaves nothing, so the message is flat.
  if (keep.empty()) return GaussianCanonical::flat(2 * M);
  return embed(marginalize(g, keep), keep, 2 * M);
}

inline GaussianCanonical local_factor(const FactorNode& node) {
  if (!node.ft) return node.fb;
  return product(node.fb, *node.ft);
}

}  // namespace detail

/// Builds the factor nodes (evidence and prior) without running any sweep.
inline std::vector<FactorNode> build_factor_graph(const SampleSet& ss, const ChannelConfig& cfg,
                                                  const PriorMoments& p) {
  cfg.validate();
  detail::require(cfg.timing == Timing::asynchronous, "spmap: configuration is synchronous");
  const Index M = cfg.devices();
  const Index L = ss.L;
  detail::require(ss.M == M && p.devices() == M, "spmap: device counts differ");
  detail::require(ss.size() == M * (L + 1) - 1, "spmap: sample set has the wrong size");
  detail::require(cfg.N0 > 0.0, "spmap: N0 must be positive");
  detail::require((p.d.array() > 0.0).all(), "spmap: prior variances must be positive");

  const Eigen::VectorXd d = cfg.filter_lengths();
  const GaussianCanonical prior = detail::prior_message(p);
  const Index n_nodes = ss.size();
  std::vector<FactorNode> nodes(static_cast<size_t>(n_nodes));
  for (Index n = 0; n < n_nodes; ++n) {
    FactorNode& node = nodes[static_cast<size_t>(n)];
    node.k = n % M;
    node.i = n / M;
    node.active = detail::active_devices(M, L, node.k, node.i);
    node.fb = detail::evidence_message(cfg.h, ss.y(n), cfg.N0 * cfg.T / d(node.k), node.active);
    if (node.k == M - 1 && node.i < L) node.ft = prior;
    node.fl = GaussianCanonical::flat(2 * M);
    node.fr_back = GaussianCanonical::flat(2 * M);
  }
  return nodes;
}

/// Runs one forward and one backward sweep, filling fl and fr_back.
inline void run_sweeps(std::vector<FactorNode>& nodes, Index M) {
  const auto n_nodes = static_cast<Index>(nodes.size());
  for (Index n = 0; n + 1 < n_nodes; ++n) {
    const FactorNode& cur = nodes[static_cast<size_t>(n)];
    const GaussianCanonical fr = product(detail::local_factor(cur), cur.fl);
    nodes[static_cast<size_t>(n + 1)].fl = detail::replace_slot(fr, (cur.k + 1) % M, M);
  }
  for (Index n = n_nodes - 1; n > 0; --n) {
    const FactorNode& cur = nodes[static_cast<size_t>(n)];
    const GaussianCanonical fl_back = product(detail::local_factor(cur), cur.fr_back);
    const FactorNode& prev = nodes[static_cast<size_t>(n - 1)];
    nodes[static_cast<size_t>(n - 1)].fr_back = detail::replace_slot(fl_back, (prev.k + 1) % M, M);
  }
}

/// SP-MAP estimate of s_+. Also returns the per-index marginals of s[i] and
/// of s_+[i] in the real domain.
inline Estimate spmap_async(const SampleSet& ss, const ChannelConfig& cfg, const PriorMoments& p) {
  std::vector<FactorNode> nodes = build_factor_graph(ss, cfg, p);
  const Index M = cfg.devices();
  const Index L = ss.L;
  run_sweeps(nodes, M);

  Estimate e;
  e.method = Method::spmap;
  e.s_plus_hat.resize(L);
  std::vector<GaussianMoment> marginals;
  std::vector<GaussianMoment> sums;
  marginals.reserve(static_cast<size_t>(L));
  sums.reserve(static_cast<size_t>(L));

  Eigen::MatrixXd contract = Eigen::MatrixXd::Zero(2, 2 * M);
  contract.row(0).head(M).setOnes();
  contract.row(1).tail(M).setOnes();

  for (Index i = 0; i < L; ++i) {
    const FactorNode& node = nodes[static_cast<size_t>(i * M + M - 1)];
    const GaussianCanonical post = product(detail::local_factor(node), node.fl, node.fr_back);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(post.lambda, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (!(ev.minCoeff() > kPinvRtol * ev.maxCoeff()))
      throw NumericalFailure("spmap: marginal precision is singular");
    GaussianMoment g = to_moment(post);
    GaussianMoment sum{contract * g.mu, contract * g.sigma * contract.transpose()};
    e.s_plus_hat(i) = Complex(sum.mu(0), sum.mu(1));
    marginals.push_back(std::move(g));
    sums.push_back(std::move(sum));
  }
  e.per_index_posterior = std::move(marginals);
  e.sum_posterior = std::move(sums);
  return e;
}

}  // namespace oacsim
