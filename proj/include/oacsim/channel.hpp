#pragma once

// Received samples for the aligned, synchronous and asynchronous models and
// the stacked linear model y = G s + z of the matched-filter bank.
//
// Indices are 0-based here. Filter k in [0, M), sample time i in [0, L]; the
// entry (k = M-1, i = L) does not exist. Flattening is i-major, k-minor:
// flat(k, i) = i * M + k. The symbol vector s is stacked the same way:
// flat(m, i) = i * M + m.

#include "oacsim/rng.hpp"
#include "oacsim/scenario.hpp"
#include "oacsim/types.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <ostream>
#include <span>
#include <vector>

namespace oacsim {

/// r[i] = s_+[i] + z[i], z ~ CN(0, N0 / T).
inline ComplexSequence sample_aligned(const ComplexSequence& s_plus, double N0, double T, Rng& rng) {
  detail::require(N0 >= 0.0 && T > 0.0, "sample_aligned: need N0 >= 0 and T > 0");
  ComplexSequence r = s_plus;
  if (N0 == 0.0) return r;
  const double var = N0 / T;
  for (Index i = 0; i < r.size(); ++i) r(i) += draw_circular_gaussian(rng, var);
  return r;
}

/// r[i] = sum_m h_m s_m[i] + z[i], z ~ CN(0, N0 / T).
inline ComplexSequence sample_synchronous(std::span<const DeviceData> devices, const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  detail::require(cfg.timing == Timing::synchronous, "sample_synchronous: configuration is asynchronous");
  detail::require(static_cast<Index>(devices.size()) == cfg.devices(), "sample_synchronous: device count mismatch");
  const Index L = devices.front().s.size();
  ComplexSequence r = ComplexSequence::Zero(L);
  for (Index m = 0; m < cfg.devices(); ++m) {
    detail::require(devices[static_cast<size_t>(m)].s.size() == L, "sample_synchronous: unequal sequence lengths");
    r += cfg.h(m) * devices[static_cast<size_t>(m)].s;
  }
  return sample_aligned(r, cfg.N0, cfg.T, rng);
}

/// Output of the whitened matched-filter bank.
struct SampleSet {
  Eigen::VectorXcd y;  // M (L + 1) - 1 entries, i-major
  Eigen::VectorXd d;   // filter lengths d_k
  Index M = 0;
  Index L = 0;

  [[nodiscard]] Index size() const { return y.size(); }
  [[nodiscard]] static Index flat(Index M, Index k, Index i) { return i * M + k; }
  [[nodiscard]] Complex at(Index k, Index i) const {
    detail::require(k >= 0 && k < M && i >= 0 && i <= L && !(k == M - 1 && i == L), "SampleSet: index out of range");
    return y(flat(M, k, i));
  }
  /// Outputs of the last filter, y_M[1..L]: a synchronous observation.
  [[nodiscard]] ComplexSequence last_filter() const {
    ComplexSequence out(L);
    for (Index i = 0; i < L; ++i) out(i) = y(flat(M, M - 1, i));
    return out;
  }
};

/// y_k[i] = sum_m h_m s_m[i - 1{m > k}] + z_k[i] with s_m[0] = s_m[L+1] = 0
/// (1-based), z_k[i] ~ CN(0, N0 T / d_k), independent across (k, i).
inline SampleSet sample_asynchronous(std::span<const DeviceData> devices, const ChannelConfig& cfg, Rng& rng) {
  cfg.validate();
  detail::require(cfg.timing == Timing::asynchronous, "sample_asynchronous: configuration is synchronous");
  const Index M = cfg.devices();
  detail::require(static_cast<Index>(devices.size()) == M, "sample_asynchronous: device count mismatch");
  const Index L = devices.front().s.size();
  for (const auto& dev : devices) detail::require(dev.s.size() == L, "sample_asynchronous: unequal sequence lengths");

  SampleSet out;
  out.M = M;
  out.L = L;
  out.d = cfg.filter_lengths();
  out.y.resize(M * (L + 1) - 1);

  // Symbol of device m at 0-based time t, zero outside [0, L).
  auto symbol = [&](Index m, Index t) -> Complex {
    return (t >= 0 && t < L) ? devices[static_cast<size_t>(m)].s(t) : Complex{};
  };
  for (Index i = 0; i <= L; ++i) {
    for (Index k = 0; k < M; ++k) {
      if (i == L && k == M - 1) break;
      Complex acc{};
      for (Index m = 0; m < M; ++m) acc += cfg.h(m) * symbol(m, m > k ? i - 1 : i);
      if (cfg.N0 > 0.0) acc += draw_circular_gaussian(rng, cfg.N0 * cfg.T / out.d(k));
      out.y(SampleSet::flat(M, k, i)) = acc;
    }
  }
  return out;
}

/// CSV dump of a sample set: header `k,i,re,im`, 1-based k and i, i-major.
inline void write_csv(std::ostream& os, const SampleSet& ss) {
  os << "k,i,re,im\n";
  const auto old_precision = os.precision(17);
  for (Index i = 0; i <= ss.L; ++i)
    for (Index k = 0; k < ss.M; ++k) {
      if (i == ss.L && k == ss.M - 1) break;
      const Complex v = ss.y(SampleSet::flat(ss.M, k, i));
      os << (k + 1) << ',' << (i + 1) << ',' << v.real() << ',' << v.imag() << '\n';
    }
  os.precision(old_precision);
}

/// y = G s + z and s_+ = F s in stacked form.
struct LinearModel {
  Eigen::SparseMatrix<Complex> g;  // (M (L + 1) - 1) x ML, banded
  Eigen::SparseMatrix<double> f;   // L x ML, row i sums block i
  Eigen::VectorXd sigma_z;         // diagonal of Sigma_z, N0 T / d_k per row
  Index M = 0;
  Index L = 0;
};

inline Eigen::SparseMatrix<double> sum_selector(Index M, Index L) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<size_t>(M * L));
  for (Index i = 0; i < L; ++i)
    for (Index m = 0; m < M; ++m) t.emplace_back(i, i * M + m, 1.0);
  Eigen::SparseMatrix<double> f(L, M * L);
  f.setFromTriplets(t.begin(), t.end());
  return f;
}

inline LinearModel build_linear_model(const ChannelConfig& cfg, Index L) {
  cfg.validate();
  detail::require(cfg.timing == Timing::asynchronous, "build_linear_model: configuration is synchronous");
  detail::require(L >= 1, "build_linear_model: L must be positive");
  const Index M = cfg.devices();
  const Index rows = M * (L + 1) - 1;
  const Eigen::VectorXd d = cfg.filter_lengths();

  LinearModel lm;
  lm.M = M;
  lm.L = L;
  lm.sigma_z.resize(rows);
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<size_t>(rows * M));
  for (Index i = 0; i <= L; ++i) {
    for (Index k = 0; k < M; ++k) {
      const Index r = SampleSet::flat(M, k, i);
      if (r >= rows) break;
      lm.sigma_z(r) = cfg.N0 * cfg.T / d(k);
      // Devices 0..k contribute their symbol i; devices k+1..M-1 their symbol i-1.
      if (i < L)
        for (Index m = 0; m <= k; ++m) t.emplace_back(r, i * M + m, cfg.h(m));
      if (i >= 1)
        for (Index m = k + 1; m < M; ++m) t.emplace_back(r, (i - 1) * M + m, cfg.h(m));
    }
  }
  lm.g.resize(rows, M * L);
  lm.g.setFromTriplets(t.begin(), t.end());
  lm.f = sum_selector(M, L);
  return lm;
}

/// Stacked symbol vector s (i-major, device-minor).
inline Eigen::VectorXcd stack_symbols(std::span<const DeviceData> devices) {
  detail::require(!devices.empty(), "stack_symbols: no devices");
  const auto M = static_cast<Index>(devices.size());
  const Index L = devices.front().s.size();
  Eigen::VectorXcd s(M * L);
  for (Index i = 0; i < L; ++i)
    for (Index m = 0; m < M; ++m) s(i * M + m) = devices[static_cast<size_t>(m)].s(i);
  return s;
}

}  // namespace oacsim
