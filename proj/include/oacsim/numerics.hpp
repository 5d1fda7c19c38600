#pragma once

// Gaussian-message algebra in the 2M-dimensional real domain.
//
// Messages are kept in canonical form (eta, Lambda) and may be rank
// deficient: a zero row/column of Lambda is a flat, information-free
// direction. Every inversion goes through an SVD pseudo-inverse; nothing is
// ridge-regularized. Normalization constants are never tracked.

#include "oacsim/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace oacsim {

inline constexpr double kPinvRtol = 1e-10;

/// Moore-Penrose pseudo-inverse by SVD. Singular values below
/// `rtol * sigma_max` are treated as zero.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pseudo_inverse(const Eigen::MatrixBase<Derived>& m, double rtol = kPinvRtol) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  detail::require(rtol > 0.0, "pseudo_inverse: rtol must be positive");
  detail::require(m.allFinite(), "pseudo_inverse: non-finite entry");
  if (m.size() == 0) return Mat::Zero(m.cols(), m.rows());

  Eigen::JacobiSVD<Mat> svd(m.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = rtol * sv(0);
  Eigen::VectorXd inv(sv.size());
  for (Index i = 0; i < sv.size(); ++i) inv(i) = (sv(i) > cutoff && sv(i) > 0.0) ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.cast<Scalar>().asDiagonal() * svd.matrixU().adjoint();
}

/// Gaussian in moment form: mean `mu`, covariance `sigma` (PSD).
struct GaussianMoment {
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;

  [[nodiscard]] Index dim() const { return mu.size(); }

  /// Throws InvalidInput when the covariance is not symmetric (1e-10,
  /// relative to the max entry) or has an eigenvalue below -1e-9 * lambda_max.
  void validate() const;
};

/// Gaussian in canonical form: potential `eta`, precision `lambda` (PSD,
/// possibly singular). Defined up to a multiplicative constant.
struct GaussianCanonical {
  Eigen::VectorXd eta;
  Eigen::MatrixXd lambda;

  [[nodiscard]] Index dim() const { return eta.size(); }

  /// The flat (information-free) message of dimension `d`.
  static GaussianCanonical flat(Index d) {
    return {Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d)};
  }

  /// Throws InvalidInput when lambda is not symmetric or eta leaves the
  /// range of lambda (relative least-squares residual above 1e-8).
  void validate() const;
};

namespace detail {

inline void check_shape(const Eigen::VectorXd& v, const Eigen::MatrixXd& m, const char* who) {
  require(m.rows() == m.cols() && m.rows() == v.size(),
          std::string(who) + ": vector/matrix dimension mismatch");
  require(v.allFinite() && m.allFinite(), std::string(who) + ": non-finite entry");
}

inline void check_symmetric(const Eigen::MatrixXd& m, const char* who) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-10 * scale, std::string(who) + ": matrix is not symmetric");
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace detail

inline void GaussianMoment::validate() const {
  detail::check_shape(mu, sigma, "GaussianMoment");
  detail::check_symmetric(sigma, "GaussianMoment");
  if (sigma.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::symmetrized(sigma), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  detail::require(ev.minCoeff() >= -1e-9 * top, "GaussianMoment: covariance is not positive semidefinite");
}

inline void GaussianCanonical::validate() const {
  detail::check_shape(eta, lambda, "GaussianCanonical");
  detail::check_symmetric(lambda, "GaussianCanonical");
  const double norm = eta.norm();
  if (norm == 0.0) return;
  const Eigen::VectorXd projected = lambda * (pseudo_inverse(lambda) * eta);
  detail::require((projected - eta).norm() <= 1e-8 * norm,
                  "GaussianCanonical: eta is outside the range of lambda");
}

/// eta = pinv(sigma) mu, lambda = pinv(sigma).
inline GaussianCanonical to_canonical(const GaussianMoment& g, double rtol = kPinvRtol) {
  g.validate();
  Eigen::MatrixXd precision = detail::symmetrized(pseudo_inverse(g.sigma, rtol));
  Eigen::VectorXd eta = precision * g.mu;
  return {std::move(eta), std::move(precision)};
}

/// sigma = pinv(lambda), mu = sigma eta.
inline GaussianMoment to_moment(const GaussianCanonical& g, double rtol = kPinvRtol) {
  g.validate();
  Eigen::MatrixXd cov = detail::symmetrized(pseudo_inverse(g.lambda, rtol));
  Eigen::VectorXd mu = cov * g.eta;
  return {std::move(mu), std::move(cov)};
}

/// Product of densities: canonical parameters add.
inline GaussianCanonical product(std::span<const GaussianCanonical> msgs) {
  detail::require(!msgs.empty(), "product: no messages");
  GaussianCanonical out = msgs.front();
  for (const auto& m : msgs.subspan(1)) {
    detail::require(m.dim() == out.dim() && m.lambda.rows() == out.dim() && m.lambda.cols() == out.dim(),
                    "product: dimension mismatch");
    out.eta += m.eta;
    out.lambda += m.lambda;
  }
  return out;
}

template <typename... Rest>
GaussianCanonical product(const GaussianCanonical& first, const Rest&... rest) {
  static_assert((std::is_same_v<Rest, GaussianCanonical> && ...));
  const std::vector<GaussianCanonical> all{first, rest...};
  return product(std::span<const GaussianCanonical>(all));
}

/// Integrates out every coordinate not listed in `keep`; the result's
/// coordinates follow the order of `keep`. Uses the Schur complement of the
/// precision with a pseudo-inverse on the dropped block, so flat (improper)
/// directions are handled: dropping a flat coordinate leaves the rest as is.
inline GaussianCanonical marginalize(const GaussianCanonical& g, std::span<const Index> keep,
                                     double rtol = kPinvRtol) {
  const Index d = g.dim();
  detail::require(!keep.empty(), "marginalize: empty keep set");
  detail::require(static_cast<Index>(keep.size()) <= d, "marginalize: keep set larger than dimension");
  std::vector<char> kept(static_cast<size_t>(d), 0);
  for (Index k : keep) {
    detail::require(k >= 0 && k < d, "marginalize: index out of range");
    detail::require(!kept[static_cast<size_t>(k)], "marginalize: duplicate index");
    kept[static_cast<size_t>(k)] = 1;
  }
  std::vector<Index> keep_idx(keep.begin(), keep.end());
  std::vector<Index> drop_idx;
  for (Index i = 0; i < d; ++i)
    if (!kept[static_cast<size_t>(i)]) drop_idx.push_back(i);

  Eigen::VectorXd eta1 = g.eta(keep_idx);
  Eigen::MatrixXd l11 = g.lambda(keep_idx, keep_idx);
  if (drop_idx.empty()) return {std::move(eta1), std::move(l11)};

  const Eigen::MatrixXd l12 = g.lambda(keep_idx, drop_idx);
  const Eigen::MatrixXd l22 = g.lambda(drop_idx, drop_idx);
  const Eigen::VectorXd eta2 = g.eta(drop_idx);
  const Eigen::MatrixXd gain = l12 * pseudo_inverse(l22, rtol);
  eta1 -= gain * eta2;
  l11 -= gain * l12.transpose();
  return {std::move(eta1), detail::symmetrized(l11)};
}

inline GaussianCanonical marginalize(const GaussianCanonical& g, std::initializer_list<Index> keep,
                                     double rtol = kPinvRtol) {
  return marginalize(g, std::span<const Index>(keep.begin(), keep.size()), rtol);
}

/// Scatters `g` into a `target_dim` space at `positions`; every other
/// coordinate is flat (zero potential, zero precision).
inline GaussianCanonical embed(const GaussianCanonical& g, std::span<const Index> positions, Index target_dim) {
  detail::require(static_cast<Index>(positions.size()) == g.dim(), "embed: one position per coordinate required");
  std::vector<char> used(static_cast<size_t>(std::max<Index>(target_dim, 0)), 0);
  for (Index p : positions) {
    detail::require(p >= 0 && p < target_dim, "embed: position out of range");
    detail::require(!used[static_cast<size_t>(p)], "embed: position collision");
    used[static_cast<size_t>(p)] = 1;
  }
  GaussianCanonical out = GaussianCanonical::flat(target_dim);
  const std::vector<Index> pos(positions.begin(), positions.end());
  out.eta(pos) = g.eta;
  out.lambda(pos, pos) = g.lambda;
  return out;
}

inline GaussianCanonical embed(const GaussianCanonical& g, std::initializer_list<Index> positions, Index target_dim) {
  return embed(g, std::span<const Index>(positions.begin(), positions.size()), target_dim);
}

}  // namespace oacsim
