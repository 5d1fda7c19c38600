#pragma once

// Device data, nomographic pre/post-processing, per-packet sample moments,
// prior construction, misalignment draws and EsN0.

#include "oacsim/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace oacsim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Raw message theta_m and the pre-processed symbols s_m = phi_m(theta_m).
struct DeviceData {
  ComplexSequence theta;
  ComplexSequence s;
};

enum class SymbolKind { complex, real };

/// Nomographic function families: F = psi(sum_m phi_m(theta_m)).
enum class Nomographic { arithmetic_mean, geometric_mean };

/// Draws L symbols per device, real and imaginary parts i.i.d. uniform on the
/// device's interval (imaginary part zero for SymbolKind::real). Uses the
/// identity pre-processing, so theta == s.
inline std::vector<DeviceData> generate_symbols(std::span<const Interval> ranges, Index L, Rng& rng,
                                                SymbolKind kind = SymbolKind::complex) {
  detail::require(!ranges.empty(), "generate_symbols: need at least one device");
  detail::require(L >= 2, "generate_symbols: L must be at least 2");
  for (const auto& r : ranges)
    detail::require(std::isfinite(r.lo) && std::isfinite(r.hi) && r.hi > r.lo,
                    "generate_symbols: degenerate interval");

  std::vector<DeviceData> devices;
  devices.reserve(ranges.size());
  for (const auto& r : ranges) {
    std::uniform_real_distribution<double> u(r.lo, r.hi);
    ComplexSequence s(L);
    for (Index i = 0; i < L; ++i) {
      const double re = u(rng);
      const double im = kind == SymbolKind::complex ? u(rng) : 0.0;
      s(i) = {re, im};
    }
    devices.push_back({s, s});
  }
  return devices;
}

/// phi: identity (arithmetic mean) or ln (geometric mean; positive real input only).
inline ComplexSequence pre_process(const ComplexSequence& theta, Nomographic kind) {
  if (kind == Nomographic::arithmetic_mean) return theta;
  ComplexSequence out(theta.size());
  for (Index i = 0; i < theta.size(); ++i) {
    if (!(theta(i).imag() == 0.0 && theta(i).real() > 0.0))
      throw std::domain_error("pre_process: geometric mean needs strictly positive real input");
    out(i) = std::log(theta(i).real());
  }
  return out;
}

/// psi: x / M (arithmetic mean) or exp(x / M) (geometric mean).
inline ComplexSequence post_process(const ComplexSequence& s_plus, Nomographic kind, Index M) {
  detail::require(M >= 1, "post_process: M must be positive");
  const double inv = 1.0 / static_cast<double>(M);
  if (kind == Nomographic::arithmetic_mean) return s_plus * inv;
  return (s_plus * inv).array().exp().matrix();
}

/// Per-device packet statistics.
struct SampleMoments {
  Complex e;       // first sample moment
  double v = 0.0;  // second sample moment
  double d = 0.0;  // sample variance, v - |e|^2
};

inline SampleMoments sample_moments(const ComplexSequence& s) {
  detail::require(s.size() >= 2, "sample_moments: need at least two symbols");
  detail::require(s.allFinite(), "sample_moments: non-finite symbol");
  const double L = static_cast<double>(s.size());
  const Complex e = s.sum() / L;
  const double v = s.cwiseAbs2().sum() / L;
  const double d = v - std::norm(e);
  // A constant sequence can leave a few ulps of cancellation residue.
  if (!(d > 64.0 * std::numeric_limits<double>::epsilon() * v))
    throw DegeneratePrior("sample_moments: zero sample variance (constant sequence)");
  return {e, v, d};
}

/// The two pieces of statistical information per device and the matrices
/// the Bayesian estimators are built from.
struct PriorMoments {
  Eigen::VectorXcd e;       // E_m
  Eigen::VectorXd v;        // V_m
  Eigen::VectorXd d;        // D_m = V_m - |E_m|^2
  Eigen::VectorXcd mu_hat;  // (E_1, ..., E_M)
  Eigen::MatrixXd d_mat;    // diag(D_1, ..., D_M)
  Eigen::MatrixXcd v_mat;   // V_mm = V_m, V_mn = conj(E_m) E_n

  [[nodiscard]] Index devices() const { return e.size(); }
};

inline PriorMoments build_prior(std::span<const SampleMoments> moments) {
  detail::require(!moments.empty(), "build_prior: no devices");
  const auto M = static_cast<Index>(moments.size());
  PriorMoments p;
  p.e.resize(M);
  p.v.resize(M);
  p.d.resize(M);
  for (Index m = 0; m < M; ++m) {
    const auto& mm = moments[static_cast<size_t>(m)];
    if (!(mm.d > 0.0)) throw DegeneratePrior("build_prior: non-positive sample variance");
    p.e(m) = mm.e;
    p.v(m) = mm.v;
    p.d(m) = mm.d;
  }
  p.mu_hat = p.e;
  p.d_mat = p.d.asDiagonal();
  p.v_mat = p.e.conjugate() * p.e.transpose();
  for (Index m = 0; m < M; ++m) p.v_mat(m, m) = p.v(m);
  return p;
}

/// Convenience: moments of every device, then build_prior.
inline PriorMoments build_prior(std::span<const DeviceData> devices) {
  std::vector<SampleMoments> moments;
  moments.reserve(devices.size());
  for (const auto& dev : devices) moments.push_back(sample_moments(dev.s));
  return build_prior(std::span<const SampleMoments>(moments));
}

/// Prior over the stacked symbol vector s (i-major, device-minor):
/// E_1..E_M and D_1..D_M tiled L times. The covariance is diagonal and is
/// stored as its diagonal.
struct AsyncPrior {
  Eigen::VectorXcd mu_tilde;
  Eigen::VectorXd d_tilde;
};

inline AsyncPrior build_async_prior(const PriorMoments& p, Index L) {
  detail::require(L >= 1, "build_async_prior: L must be positive");
  const Index M = p.devices();
  AsyncPrior out{Eigen::VectorXcd(M * L), Eigen::VectorXd(M * L)};
  for (Index i = 0; i < L; ++i) {
    out.mu_tilde.segment(i * M, M) = p.e;
    out.d_tilde.segment(i * M, M) = p.d;
  }
  return out;
}

enum class Timing { synchronous, asynchronous };

/// Misalignment state of one transmission.
struct ChannelConfig {
  Eigen::VectorXcd h;   // residual gains
  Eigen::VectorXd tau;  // offsets, tau_1 = 0, ascending (all zero when synchronous)
  double T = 1.0;       // symbol period
  double N0 = 0.0;      // noise spectral density
  Timing timing = Timing::synchronous;

  [[nodiscard]] Index devices() const { return h.size(); }

  /// Matched-filter lengths d_k = tau_{k+1} - tau_k with tau_{M+1} = T.
  [[nodiscard]] Eigen::VectorXd filter_lengths() const {
    const Index M = devices();
    Eigen::VectorXd d(M);
    for (Index k = 0; k < M; ++k) d(k) = (k + 1 < M ? tau(k + 1) : T) - tau(k);
    return d;
  }

  void validate() const {
    const Index M = devices();
    detail::require(M >= 1, "ChannelConfig: no devices");
    detail::require(tau.size() == M, "ChannelConfig: tau/h size mismatch");
    detail::require(h.allFinite() && tau.allFinite(), "ChannelConfig: non-finite entry");
    detail::require(T > 0.0 && std::isfinite(T), "ChannelConfig: T must be positive");
    detail::require(N0 >= 0.0 && std::isfinite(N0), "ChannelConfig: N0 must be non-negative");
    if (timing == Timing::synchronous) {
      detail::require(tau.isZero(0.0), "ChannelConfig: synchronous configuration needs zero offsets");
      return;
    }
    detail::require(tau(0) == 0.0, "ChannelConfig: tau_1 must be 0");
    const double min_gap = 1e-9 * T;
    const Eigen::VectorXd d = filter_lengths();
    for (Index k = 0; k < M; ++k)
      detail::require(d(k) >= min_gap, "ChannelConfig: offsets must increase with gap >= 1e-9 T and stay below T");
  }
};

inline constexpr double kOffsetMinGap = 1e-6;  // fraction of T, enforced on draws
inline constexpr int kOffsetMaxAttempts = 1000;

/// Random misalignment per the simulation setup: |h_m| = 1, phases
/// U(0, phi_max), tau_M = (1 - d_M_target) T, remaining offsets uniform in
/// (0, tau_M) then sorted. d_M_target == 1 yields the synchronous mode.
inline ChannelConfig draw_channel(Index M, double phi_max, double d_M_target, double T, double N0, Rng& rng) {
  detail::require(M >= 1, "draw_channel: M must be positive");
  detail::require(phi_max >= 0.0 && phi_max <= 2.0 * std::numbers::pi, "draw_channel: phi_max must be in [0, 2pi]");
  detail::require(d_M_target > 0.0 && d_M_target <= 1.0, "draw_channel: d_M must be in (0, 1]");
  detail::require(T > 0.0, "draw_channel: T must be positive");
  detail::require(N0 >= 0.0, "draw_channel: N0 must be non-negative");

  ChannelConfig cfg;
  cfg.T = T;
  cfg.N0 = N0;
  cfg.h.resize(M);
  std::uniform_real_distribution<double> phase(0.0, phi_max);
  for (Index m = 0; m < M; ++m) cfg.h(m) = phi_max == 0.0 ? Complex(1.0, 0.0) : std::polar(1.0, phase(rng));

  cfg.tau = Eigen::VectorXd::Zero(M);
  if (d_M_target == 1.0) {
    cfg.timing = Timing::synchronous;
    return cfg;
  }
  detail::require(M >= 2, "draw_channel: a single device cannot be time-misaligned");
  cfg.timing = Timing::asynchronous;
  const double tau_M = (1.0 - d_M_target) * T;
  const double gap = kOffsetMinGap * T;
  std::uniform_real_distribution<double> offset(0.0, tau_M);
  for (int attempt = 0; attempt < kOffsetMaxAttempts; ++attempt) {
    for (Index m = 1; m + 1 < M; ++m) cfg.tau(m) = offset(rng);
    cfg.tau(M - 1) = tau_M;
    std::sort(cfg.tau.data() + 1, cfg.tau.data() + M - 1);
    bool ok = true;
    const Eigen::VectorXd d = cfg.filter_lengths();
    for (Index k = 0; k < M; ++k) ok = ok && d(k) >= gap;
    if (ok) return cfg;
  }
  throw InvalidInput("draw_channel: could not draw offsets with the minimum gap; d_M too close to 1?");
}

/// (1/L) sum_i |sum_m e^{j phi_m} s_m[i]|^2, the received symbol energy.
inline double received_symbol_energy(std::span<const DeviceData> devices, const Eigen::VectorXd& phi) {
  detail::require(!devices.empty(), "received_symbol_energy: no devices");
  detail::require(phi.size() == static_cast<Index>(devices.size()), "received_symbol_energy: one phase per device");
  const Index L = devices.front().s.size();
  ComplexSequence acc = ComplexSequence::Zero(L);
  for (size_t m = 0; m < devices.size(); ++m) {
    detail::require(devices[m].s.size() == L, "received_symbol_energy: unequal sequence lengths");
    acc += std::polar(1.0, phi(static_cast<Index>(m))) * devices[m].s;
  }
  return acc.cwiseAbs2().sum() / static_cast<double>(L);
}

/// EsN0 in dB.
inline double compute_esn0(std::span<const DeviceData> devices, const Eigen::VectorXd& phi, double N0) {
  detail::require(N0 > 0.0 && std::isfinite(N0), "compute_esn0: N0 must be positive");
  return 10.0 * std::log10(received_symbol_energy(devices, phi) / N0);
}

/// Phases arg(h_m) of a configuration.
inline Eigen::VectorXd phases(const ChannelConfig& cfg) { return cfg.h.array().arg().matrix(); }

/// Sum sequence s_+ = sum_m s_m.
inline ComplexSequence sum_sequence(std::span<const DeviceData> devices) {
  detail::require(!devices.empty(), "sum_sequence: no devices");
  ComplexSequence acc = devices.front().s;
  for (size_t m = 1; m < devices.size(); ++m) acc += devices[m].s;
  return acc;
}

}  // namespace oacsim
