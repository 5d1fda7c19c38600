#include "acceptance/oracles.hpp"
#include "oacsim/analytic.hpp"
#include "oacsim/harness.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace oacsim;

namespace {

const std::vector<Interval> kRanges{{-6, 0}, {-4, 2}, {-2, 4}, {0, 6}};

PriorMoments prior_of(const std::vector<DeviceData>& d) { return build_prior(std::span<const DeviceData>(d)); }

}  // namespace

TEST(MseMlSync, UnitGainIsNoiseVariance) {
  Rng rng(1);
  const auto devices = generate_symbols(kRanges, 64, rng);
  const PriorMoments p = prior_of(devices);
  EXPECT_NEAR(mse_ml_sync(Eigen::VectorXcd::Ones(4), p.v_mat, 0.37), 0.37, 1e-14);
  EXPECT_EQ(mse_ml_sync(Eigen::VectorXcd::Ones(4), p.v_mat, 0.0), 0.0);
}

TEST(MseMlSync, MatchesDirectSum) {
  Rng rng(2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto devices = generate_symbols(kRanges, 9, rng);
    const ChannelConfig cfg = draw_channel(4, 2 * std::numbers::pi, 1.0, 1.0, 0.0, rng);
    const double direct = oracle::ml_sync_mse_direct(devices, cfg.h, 0.2);
    EXPECT_NEAR(mse_ml_sync(cfg.h, prior_of(devices).v_mat, 0.2), direct, 1e-10 * direct);
  }
}

TEST(MseLmmseSync, UnitGainClosedForm) {
  Rng rng(3);
  const PriorMoments p = prior_of(generate_symbols(kRanges, 64, rng));
  const double tot = p.d.sum(), nv = 2.3;
  EXPECT_NEAR(mse_lmmse_sync(Eigen::VectorXcd::Ones(4), p, nv), nv * tot / (tot + nv), 1e-12);
  EXPECT_NEAR(mse_lmmse_sync(Eigen::VectorXcd::Ones(4), p, 0.0), 0.0, 1e-12);
}

TEST(MseLmmseSync, NeverAboveMl) {
  Rng rng(4);
  std::uniform_real_distribution<double> lognv(-6, 3);
  for (int rep = 0; rep < 200; ++rep) {
    const auto devices = generate_symbols(kRanges, 32, rng);
    const PriorMoments p = prior_of(devices);
    const ChannelConfig cfg = draw_channel(4, 2 * std::numbers::pi, 1.0, 1.0, 0.0, rng);
    const double nv = std::pow(10.0, lognv(rng));
    EXPECT_LE(mse_lmmse_sync(cfg.h, p, nv), mse_ml_sync(cfg.h, p.v_mat, nv) + 1e-12);
  }
}

TEST(MsePEstimators, Reductions) {
  Rng rng(5);
  const PriorMoments p = prior_of(generate_symbols(kRanges, 64, rng));
  const ChannelConfig cfg = draw_channel(4, 1.5, 1.0, 1.0, 0.0, rng);
  const double N0 = 0.8;
  const PartialMse full = mse_p_estimators(cfg.h, p, N0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(full.pml, mse_ml_sync(cfg.h, p.v_mat, N0));
  EXPECT_DOUBLE_EQ(full.plmmse, mse_lmmse_sync(cfg.h, p, N0));
  EXPECT_NEAR(mse_p_estimators(cfg.h, p, N0, 1.0, 1e-12).plmmse, p.d.sum(), 1e-9 * p.d.sum());
  const PartialMse tenth = mse_p_estimators(cfg.h, p, N0, 1.0, 0.1);
  EXPECT_NEAR(tenth.plmmse, mse_lmmse_sync(cfg.h, p, 10.0 * N0), 1e-12);
}

TEST(MseMlAsync, SingleDeviceIsNoiseVariance) {
  ChannelConfig cfg;
  cfg.h = Eigen::VectorXcd::Ones(1);
  cfg.tau = Eigen::VectorXd::Zero(1);
  cfg.N0 = 0.45;
  cfg.timing = Timing::asynchronous;
  EXPECT_NEAR(mse_ml_async(build_linear_model(cfg, 16)), 0.45, 1e-13);
}

TEST(MseMlAsync, LinearInNoiseScale) {
  Rng rng(6);
  ChannelConfig cfg = draw_channel(4, 2.0, 0.3, 1.0, 0.2, rng);
  const double base = mse_ml_async(build_linear_model(cfg, 64));
  cfg.N0 *= 7.0;
  EXPECT_NEAR(mse_ml_async(build_linear_model(cfg, 64)) / base, 7.0, 1e-9);
}

TEST(MseMlAsync, BlockedTraceMatchesDenseInverse) {
  Rng rng(7);
  const ChannelConfig cfg = draw_channel(3, 2.0, 0.4, 1.0, 0.1, rng);
  const LinearModel lm = build_linear_model(cfg, 70);  // crosses a block boundary
  const Eigen::MatrixXcd g(lm.g);
  const Eigen::MatrixXcd n = g.adjoint() * lm.sigma_z.cwiseInverse().cast<Complex>().asDiagonal() * g;
  const Eigen::MatrixXcd f = Eigen::MatrixXd(lm.f).cast<Complex>();
  const double dense = (f * n.inverse() * f.transpose()).trace().real() / 70.0;
  EXPECT_NEAR(mse_ml_async(lm), dense, 1e-10 * dense);
}

TEST(MseLmmseAsync, PriorOnlyLimit) {
  Rng rng(8);
  const PriorMoments p = prior_of(generate_symbols(kRanges, 32, rng));
  ChannelConfig cfg = draw_channel(4, 2.0, 0.3, 1.0, 1e14, rng);
  const double v = mse_lmmse_async(build_linear_model(cfg, 32), build_async_prior(p, 32));
  EXPECT_NEAR(v / p.d.sum(), 1.0, 1e-6);
}

TEST(MseLmmseAsync, NeverAboveMlAsync) {
  Rng rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const PriorMoments p = prior_of(generate_symbols(kRanges, 16, rng));
    ChannelConfig cfg = draw_channel(4, 2 * std::numbers::pi, 0.02 + 0.0097 * rep, 1.0, 0.0, rng);
    cfg.N0 = std::pow(10.0, -3.0 + 0.05 * rep);
    const LinearModel lm = build_linear_model(cfg, 16);
    EXPECT_LE(mse_lmmse_async(lm, build_async_prior(p, 16)), mse_ml_async(lm) * (1 + 1e-12)) << rep;
  }
}

TEST(MseAnalytic, ValuesAreNonNegative) {
  Rng rng(10);
  const PriorMoments p = prior_of(generate_symbols(kRanges, 16, rng));
  ChannelConfig cfg = draw_channel(4, 3.0, 0.5, 1.0, 0.05, rng);
  const LinearModel lm = build_linear_model(cfg, 16);
  EXPECT_GE(mse_ml_async(lm), 0.0);
  EXPECT_GE(mse_lmmse_async(lm, build_async_prior(p, 16)), 0.0);
  EXPECT_GE(mse_lmmse_sync(cfg.h, p, 0.0), -1e-12);
}
