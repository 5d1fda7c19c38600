#pragma once

// Closed-form MSE of the ML and LMMSE estimators, evaluated with the same
// sample moments the estimators use.

#include "oacsim/channel.hpp"
#include "oacsim/estimators.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace oacsim {

namespace detail {

/// Real part of a quantity that is real in exact arithmetic. The imaginary
/// residue must stay below 1e-12 relative to the magnitude.
inline double real_checked(Complex v, const char* who) {
  const double scale = std::max(1.0, std::abs(v));
  if (std::abs(v.imag()) > 1e-12 * scale)
    throw NumericalFailure(std::string(who) + ": imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

}  // namespace detail

/// (h - 1)^H V (h - 1) + noise_var.
inline double mse_ml_sync(const Eigen::VectorXcd& h, const Eigen::MatrixXcd& v_mat, double noise_var) {
  detail::require(v_mat.rows() == h.size() && v_mat.cols() == h.size(), "mse_ml_sync: dimension mismatch");
  detail::require(noise_var >= 0.0, "mse_ml_sync: noise variance must be non-negative");
  const Eigen::VectorXcd g = h - Eigen::VectorXcd::Ones(h.size());
  return detail::real_checked(g.dot(v_mat * g), "mse_ml_sync") + noise_var;
}

/// 1^T D 1 - |h^H D 1|^2 / (h^H D h + noise_var).
inline double mse_lmmse_sync(const Eigen::VectorXcd& h, const PriorMoments& p, double noise_var) {
  detail::require(h.size() == p.devices(), "mse_lmmse_sync: dimension mismatch");
  detail::require(noise_var >= 0.0, "mse_lmmse_sync: noise variance must be non-negative");
  const double total = p.d.sum();
  const Complex hD1 = (h.conjugate().array() * p.d.array()).sum();
  const double hDh = (h.cwiseAbs2().array() * p.d.array()).sum();
  const double denom = hDh + noise_var;
  if (!(denom > 0.0)) throw NumericalFailure("mse_lmmse_sync: h^H D h + noise variance is zero");
  return total - std::norm(hD1) / denom;
}

struct PartialMse {
  double pml = 0.0;
  double plmmse = 0.0;
};

/// Partial-sample estimators: the synchronous formulas with noise N0 T / d_M.
inline PartialMse mse_p_estimators(const Eigen::VectorXcd& h, const PriorMoments& p, double N0, double T,
                                   double d_M) {
  detail::require(N0 >= 0.0 && T > 0.0 && d_M > 0.0, "mse_p_estimators: need N0 >= 0, T > 0, d_M > 0");
  const double nv = N0 * T / d_M;
  return {mse_ml_sync(h, p.v_mat, nv), mse_lmmse_sync(h, p, nv)};
}

/// (1/L) tr(F (G^H Sigma_z^{-1} G)^{-1} F^T), solved in column blocks of the
/// banded normal matrix.
inline double mse_ml_async(const LinearModel& lm) {
  detail::require(lm.g.rows() == lm.sigma_z.size() && lm.g.cols() == lm.M * lm.L, "mse_ml_async: bad model");
  detail::require((lm.sigma_z.array() > 0.0).all(), "mse_ml_async: noise covariance must be positive");
  const Index M = lm.M;
  const Index L = lm.L;
  const Eigen::SparseMatrix<Complex> normal = detail::ml_normal_matrix(lm);
  detail::NormalSolver solver(normal);
  Complex trace{};
  if (solver.ok) {
    constexpr Index kBlock = 64;
    for (Index start = 0; start < L; start += kBlock) {
      const Index cols = std::min(kBlock, L - start);
      Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(M * L, cols);
      for (Index c = 0; c < cols; ++c) rhs.col(c).segment((start + c) * M, M).setOnes();
      const Eigen::MatrixXcd x = solver.ldlt.solve(rhs);
      for (Index c = 0; c < cols; ++c) trace += x.col(c).segment((start + c) * M, M).sum();
    }
  } else {
    const Eigen::MatrixXcd inv = pseudo_inverse(Eigen::MatrixXcd(normal));
    const Eigen::MatrixXcd f = lm.f.cast<Complex>();
    trace = (f * inv * f.transpose()).trace();
  }
  return detail::real_checked(trace, "mse_ml_async") / static_cast<double>(L);
}

/// (1/L) tr[(A G - F) D~ (A G - F)^H + A Sigma_z A^H] with the LMMSE gain A.
inline double mse_lmmse_async(const LinearModel& lm, const AsyncPrior& prior) {
  const Eigen::MatrixXcd a = lmmse_async_gain(lm, prior);
  Eigen::MatrixXcd err = a * lm.g;
  err -= lm.f.cast<Complex>();
  const double bias_part = (err.cwiseAbs2() * prior.d_tilde).sum();
  const double noise_part = (a.cwiseAbs2() * lm.sigma_z).sum();
  return (bias_part + noise_part) / static_cast<double>(lm.L);
}

}  // namespace oacsim
