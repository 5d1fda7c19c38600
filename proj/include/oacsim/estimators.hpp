#pragma once

// Estimators of the sum sequence s_+ for aligned, synchronous and
// asynchronous over-the-air computation. SP-MAP lives in spmap.hpp.

#include "oacsim/channel.hpp"
#include "oacsim/numerics.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oacsim {

enum class Method { ml, lmmse, pml, plmmse, ml_async, lmmse_async, spmap };

inline constexpr std::array<Method, 7> kAllMethods{Method::ml,       Method::lmmse,       Method::pml,  Method::plmmse,
                                                   Method::ml_async, Method::lmmse_async, Method::spmap};

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::ml: return "ml";
    case Method::lmmse: return "lmmse";
    case Method::pml: return "pml";
    case Method::plmmse: return "plmmse";
    case Method::ml_async: return "ml_async";
    case Method::lmmse_async: return "lmmse_async";
    case Method::spmap: return "spmap";
  }
  return "?";
}

inline Method parse_method(std::string_view name) {
  for (Method m : kAllMethods)
    if (to_string(m) == name) return m;
  throw InvalidInput("unknown estimator '" + std::string(name) + "'");
}

struct Estimate {
  ComplexSequence s_plus_hat;
  /// SP-MAP only: marginal posterior of (Re s[i], Im s[i]), dimension 2M.
  std::optional<std::vector<GaussianMoment>> per_index_posterior;
  /// SP-MAP only: posterior of (Re s_+[i], Im s_+[i]).
  std::optional<std::vector<GaussianMoment>> sum_posterior;
  Method method = Method::ml;
  /// Numerical fallbacks taken while computing this estimate.
  std::vector<std::string> flags;
};

/// Aligned/synchronous ML: s_+[i] = r[i].
inline Estimate ml_aligned(const ComplexSequence& r) { return {r, std::nullopt, std::nullopt, Method::ml, {}}; }

/// Scalar gain and offset of the synchronous LMMSE estimator.
struct LmmseCoefficients {
  Complex lambda;
  Complex c;
};

inline LmmseCoefficients lmmse_coefficients(const Eigen::VectorXcd& h, const PriorMoments& p, double noise_var) {
  detail::require(h.size() == p.devices(), "lmmse: h and prior sizes differ");
  detail::require(noise_var >= 0.0, "lmmse: noise variance must be non-negative");
  const Complex hD1 = (h.conjugate().array() * p.d.array()).sum();
  const double hDh = (h.cwiseAbs2().array() * p.d.array()).sum();
  const double denom = hDh + noise_var;
  if (!(denom > 0.0)) throw NumericalFailure("lmmse: h^H D h + noise variance is zero");
  const Complex lambda = hD1 / denom;
  const Complex c = ((Eigen::VectorXcd::Ones(h.size()) - lambda * h).array() * p.mu_hat.array()).sum();
  return {lambda, c};
}

/// s_+[i] = lambda r[i] + c with lambda = h^H D 1 / (h^H D h + noise_var) and
/// c = (1 - lambda h)^T mu_hat.
inline Estimate lmmse_synchronous(const ComplexSequence& r, const Eigen::VectorXcd& h, const PriorMoments& p,
                                  double noise_var) {
  const auto [lambda, c] = lmmse_coefficients(h, p, noise_var);
  ComplexSequence out = (lambda * r).array() + c;
  return {std::move(out), std::nullopt, std::nullopt, Method::lmmse, {}};
}

/// Partial-sample ML: the last filter's outputs y_M[1..L] verbatim.
inline Estimate pml_async(const SampleSet& ss) {
  return {ss.last_filter(), std::nullopt, std::nullopt, Method::pml, {}};
}

/// Partial-sample LMMSE: synchronous LMMSE on y_M with noise N0 T / d_M.
inline Estimate plmmse_async(const SampleSet& ss, const Eigen::VectorXcd& h, const PriorMoments& p, double N0,
                             double T) {
  Estimate e = lmmse_synchronous(ss.last_filter(), h, p, N0 * T / ss.d(ss.M - 1));
  e.method = Method::plmmse;
  return e;
}

namespace detail {

inline void check_model(const SampleSet& ss, const LinearModel& lm) {
  require(ss.M == lm.M && ss.L == lm.L && ss.size() == lm.g.rows(), "sample set and linear model do not conform");
  require((lm.sigma_z.array() > 0.0).all(), "linear model: noise covariance must be positive");
}

/// G^H Sigma_z^{-1} G, Hermitian, banded.
inline Eigen::SparseMatrix<Complex> ml_normal_matrix(const LinearModel& lm) {
  const Eigen::VectorXcd w = lm.sigma_z.cwiseInverse().cast<Complex>();
  Eigen::SparseMatrix<Complex> weighted = w.asDiagonal() * lm.g;
  return Eigen::SparseMatrix<Complex>(lm.g.adjoint() * weighted);
}

/// Sparse LDL^T of the ML normal matrix; empty when the factorization fails
/// or the pivots spread beyond 1/rtol.
struct NormalSolver {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<Complex>> ldlt;
  bool ok = false;

  explicit NormalSolver(const Eigen::SparseMatrix<Complex>& n) {
    ldlt.compute(n);
    if (ldlt.info() != Eigen::Success) return;
    const Eigen::VectorXd piv = ldlt.vectorD().real();
    ok = piv.minCoeff() > kPinvRtol * piv.maxCoeff();
  }
};

}  // namespace detail

/// Asynchronous ML: F (G^H Sigma_z^{-1} G)^{-1} G^H Sigma_z^{-1} y, solved
/// by a sparse LDL^T; dense pseudo-inverse fallback is flagged.
inline Estimate ml_async(const SampleSet& ss, const LinearModel& lm) {
  detail::check_model(ss, lm);
  const Eigen::SparseMatrix<Complex> normal = detail::ml_normal_matrix(lm);
  const Eigen::VectorXcd rhs = lm.g.adjoint() * (lm.sigma_z.cwiseInverse().cast<Complex>().asDiagonal() * ss.y);

  Estimate e;
  e.method = Method::ml_async;
  Eigen::VectorXcd s_hat;
  detail::NormalSolver solver(normal);
  if (solver.ok) {
    s_hat = solver.ldlt.solve(rhs);
  } else {
    s_hat = pseudo_inverse(Eigen::MatrixXcd(normal)) * rhs;
    e.flags.emplace_back("ml_async:pinv_fallback");
  }
  e.s_plus_hat = lm.f.cast<Complex>() * s_hat;
  return e;
}

namespace detail {

/// C = G D~ G^H + Sigma_z (dense Hermitian).
inline Eigen::MatrixXcd lmmse_inner_matrix(const LinearModel& lm, const AsyncPrior& prior) {
  const Eigen::SparseMatrix<Complex> gd = lm.g * prior.d_tilde.cast<Complex>().asDiagonal();
  Eigen::MatrixXcd c = Eigen::MatrixXcd(gd * lm.g.adjoint());
  c.diagonal() += lm.sigma_z.cast<Complex>();
  return c;
}

inline void check_prior(const LinearModel& lm, const AsyncPrior& prior) {
  require(prior.mu_tilde.size() == lm.g.cols() && prior.d_tilde.size() == lm.g.cols(),
          "async prior does not conform to the linear model");
}

}  // namespace detail

/// The LMMSE gain A = F D~ G^H (G D~ G^H + Sigma_z)^{-1} (dense L x rows).
/// `flags` receives a note when the pseudo-inverse fallback is used.
inline Eigen::MatrixXcd lmmse_async_gain(const LinearModel& lm, const AsyncPrior& prior,
                                         std::vector<std::string>* flags = nullptr) {
  detail::check_prior(lm, prior);
  const Eigen::MatrixXcd c = detail::lmmse_inner_matrix(lm, prior);
  // A^H = C^{-1} G D~ F^T
  const Eigen::MatrixXcd gdf =
      Eigen::MatrixXcd(lm.g * prior.d_tilde.cast<Complex>().asDiagonal() * lm.f.transpose().cast<Complex>());
  Eigen::LLT<Eigen::MatrixXcd> llt(c);
  if (llt.info() == Eigen::Success) return llt.solve(gdf).adjoint();
  if (flags) flags->emplace_back("lmmse_async:pinv_fallback");
  return (pseudo_inverse(c) * gdf).adjoint();
}

/// Asynchronous LMMSE: A y + (F - A G) mu~, evaluated as
/// F mu~ + F D~ G^H C^{-1} (y - G mu~) with a dense Cholesky solve of C.
inline Estimate lmmse_async(const SampleSet& ss, const LinearModel& lm, const AsyncPrior& prior) {
  detail::check_model(ss, lm);
  detail::check_prior(lm, prior);
  Estimate e;
  e.method = Method::lmmse_async;
  const Eigen::MatrixXcd c = detail::lmmse_inner_matrix(lm, prior);
  const Eigen::VectorXcd innovation = ss.y - lm.g * prior.mu_tilde;
  Eigen::VectorXcd weights;
  Eigen::LLT<Eigen::MatrixXcd> llt(c);
  if (llt.info() == Eigen::Success) {
    weights = llt.solve(innovation);
  } else {
    weights = pseudo_inverse(c) * innovation;
    e.flags.emplace_back("lmmse_async:pinv_fallback");
  }
  const Eigen::VectorXcd s_hat =
      prior.mu_tilde + prior.d_tilde.cast<Complex>().asDiagonal() * (lm.g.adjoint() * weights);
  e.s_plus_hat = lm.f.cast<Complex>() * s_hat;
  return e;
}

}  // namespace oacsim
