#include "acceptance/oracles.hpp"
#include "oacsim/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace oacsim;

namespace {

Eigen::MatrixXd random_matrix(Index r, Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

GaussianMoment random_pd(Index d, std::mt19937_64& rng) {
  const Eigen::MatrixXd a = random_matrix(d, d, rng);
  Eigen::MatrixXd sigma = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
  return {random_matrix(d, 1, rng), sigma};
}

GaussianCanonical random_canonical(Index d, std::mt19937_64& rng) { return to_canonical(random_pd(d, rng)); }

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST(PseudoInverse, IdentityIsItsOwnInverse) {
  EXPECT_LE(max_abs(pseudo_inverse(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3)), 1e-15);
}

TEST(PseudoInverse, RankDeficientDiagonal) {
  Eigen::MatrixXd m = Eigen::Vector2d(2.0, 0.0).asDiagonal();
  Eigen::MatrixXd expect = Eigen::Vector2d(0.5, 0.0).asDiagonal();
  EXPECT_LE(max_abs(pseudo_inverse(m) - expect), 1e-15);
}

TEST(PseudoInverse, PenroseConditionsOnRectangularInput) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd a = random_matrix(5, 3, rng);
  const Eigen::MatrixXd p = pseudo_inverse(a);
  EXPECT_LE(max_abs(a * p * a - a), 1e-8);
  EXPECT_LE(max_abs(p * a * p - p), 1e-8);
}

TEST(PseudoInverse, AllFourPenroseConditionsUpToDim32) {
  std::mt19937_64 rng(4);
  for (Index d : {1, 2, 7, 16, 32}) {
    // rank-deficient square and rectangular inputs
    const Eigen::MatrixXd a = random_matrix(d, d / 2 + 1, rng) * random_matrix(d / 2 + 1, d + 3, rng);
    const Eigen::MatrixXd p = pseudo_inverse(a);
    const double s = std::max(1.0, max_abs(a));
    EXPECT_LE(max_abs(a * p * a - a), 1e-8 * s) << d;
    EXPECT_LE(max_abs(p * a * p - p), 1e-8 * std::max(1.0, max_abs(p))) << d;
    EXPECT_LE(max_abs((a * p).transpose() - a * p), 1e-8) << d;
    EXPECT_LE(max_abs((p * a).transpose() - p * a), 1e-8) << d;
  }
}

TEST(PseudoInverse, ComplexInput) {
  Eigen::MatrixXcd a(2, 2);
  a << Complex(1, 1), Complex(0, 2), Complex(3, 0), Complex(1, -1);
  const Eigen::MatrixXcd p = pseudo_inverse(a);
  EXPECT_LE((a * p - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PseudoInverse, RejectsNonFiniteAndBadTolerance) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
  m(0, 1) = std::nan("");
  EXPECT_THROW(pseudo_inverse(m), InvalidInput);
  EXPECT_THROW(pseudo_inverse(Eigen::MatrixXd::Identity(2, 2), 0.0), InvalidInput);
}

TEST(ToCanonical, StandardNormal) {
  const GaussianCanonical g = to_canonical({Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()});
  EXPECT_LE(max_abs(g.eta), 0.0);
  EXPECT_LE(max_abs(g.lambda - Eigen::MatrixXd::Identity(2, 2)), 1e-15);
}

TEST(ToCanonical, Scalar) {
  const GaussianCanonical g = to_canonical({Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Constant(1, 1, 4.0)});
  EXPECT_NEAR(g.eta(0), 0.5, 1e-15);
  EXPECT_NEAR(g.lambda(0, 0), 0.25, 1e-15);
}

TEST(ToMoment, StandardNormalAndScalar) {
  const GaussianMoment a = to_moment({Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity()});
  EXPECT_LE(max_abs(a.sigma - Eigen::MatrixXd::Identity(2, 2)), 1e-15);
  const GaussianMoment b = to_moment({Eigen::VectorXd::Constant(1, 0.5), Eigen::MatrixXd::Constant(1, 1, 0.25)});
  EXPECT_NEAR(b.mu(0), 2.0, 1e-14);
  EXPECT_NEAR(b.sigma(0, 0), 4.0, 1e-14);
}

TEST(ToMoment, RoundTripOnRandomPositiveDefinite) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const GaussianMoment g = random_pd(4, rng);
    const GaussianMoment back = to_moment(to_canonical(g));
    EXPECT_LE(max_abs(back.mu - g.mu), 1e-9 * std::max(1.0, max_abs(g.mu)));
    EXPECT_LE(max_abs(back.sigma - g.sigma), 1e-9 * max_abs(g.sigma));
  }
}

TEST(GaussianMoment, ValidationRejectsAsymmetricAndIndefinite) {
  Eigen::Matrix2d asym;
  asym << 1.0, 0.5, 0.4, 1.0;
  EXPECT_THROW((GaussianMoment{Eigen::Vector2d::Zero(), asym}.validate()), InvalidInput);
  Eigen::Matrix2d indef;
  indef << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW((GaussianMoment{Eigen::Vector2d::Zero(), indef}.validate()), InvalidInput);
  EXPECT_THROW((GaussianMoment{Eigen::Vector3d::Zero(), Eigen::Matrix2d::Identity()}.validate()), InvalidInput);
}

TEST(GaussianCanonical, ValidationRejectsPotentialOutsideRange) {
  Eigen::Matrix2d lambda = Eigen::Vector2d(1.0, 0.0).asDiagonal();
  EXPECT_NO_THROW((GaussianCanonical{Eigen::Vector2d(3.0, 0.0), lambda}.validate()));
  EXPECT_THROW((GaussianCanonical{Eigen::Vector2d(3.0, 1.0), lambda}.validate()), InvalidInput);
}

TEST(Product, SingleMessageIsUnchanged) {
  std::mt19937_64 rng(6);
  const GaussianCanonical g = random_canonical(3, rng);
  const std::vector<GaussianCanonical> one{g};
  const GaussianCanonical p = product(std::span<const GaussianCanonical>(one));
  EXPECT_EQ(p.eta, g.eta);
  EXPECT_EQ(p.lambda, g.lambda);
}

TEST(Product, ScalarPrecisionWeightedAverage) {
  const GaussianCanonical a{Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
  const GaussianCanonical b{Eigen::VectorXd::Constant(1, 3.0), Eigen::MatrixXd::Constant(1, 1, 1.0)};
  const GaussianCanonical p = product(a, b);
  EXPECT_DOUBLE_EQ(p.eta(0), 4.0);
  EXPECT_DOUBLE_EQ(p.lambda(0, 0), 2.0);
  const GaussianMoment m = to_moment(p);
  EXPECT_NEAR(m.mu(0), 2.0, 1e-15);
  EXPECT_NEAR(m.sigma(0, 0), 0.5, 1e-15);
}

TEST(Product, MatchesPointwiseDensityProduct) {
  std::mt19937_64 rng(7);
  const GaussianMoment a = random_pd(4, rng), b = random_pd(4, rng), c = random_pd(4, rng);
  const GaussianMoment p = to_moment(product(to_canonical(a), to_canonical(b), to_canonical(c)));
  std::vector<Eigen::VectorXd> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(random_matrix(4, 1, rng));
  // log densities, normalized at the first grid point
  const auto joint = [&](const Eigen::VectorXd& x) {
    return oracle::log_density(a, x) + oracle::log_density(b, x) + oracle::log_density(c, x);
  };
  for (const auto& x : grid) {
    const double lhs = oracle::log_density(p, x) - oracle::log_density(p, grid[0]);
    const double rhs = joint(x) - joint(grid[0]);
    EXPECT_NEAR(std::exp(lhs - rhs), 1.0, 1e-8);
  }
}

TEST(Product, CommutativeAndAssociative) {
  std::mt19937_64 rng(8);
  const auto a = random_canonical(3, rng), b = random_canonical(3, rng), c = random_canonical(3, rng);
  const auto ab_c = product(product(a, b), c);
  const auto a_bc = product(a, product(b, c));
  const auto cba = product(c, b, a);
  EXPECT_LE(max_abs(ab_c.eta - a_bc.eta), 1e-12 * max_abs(ab_c.eta));
  EXPECT_LE(max_abs(ab_c.lambda - cba.lambda), 1e-12 * max_abs(ab_c.lambda));
}

TEST(Product, DimensionMismatchThrows) {
  EXPECT_THROW(product(GaussianCanonical::flat(2), GaussianCanonical::flat(3)), InvalidInput);
  EXPECT_THROW(product(std::span<const GaussianCanonical>()), InvalidInput);
}

TEST(Marginalize, IndependentCoordinates) {
  const GaussianCanonical g{Eigen::Vector2d(1.5, -2.0), Eigen::Vector2d(3.0, 5.0).asDiagonal()};
  const GaussianCanonical m = marginalize(g, {0});
  EXPECT_DOUBLE_EQ(m.eta(0), 1.5);
  EXPECT_DOUBLE_EQ(m.lambda(0, 0), 3.0);
}

TEST(Marginalize, MatchesMomentFormSubBlock) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const GaussianMoment g = random_pd(3, rng);
    const GaussianCanonical m = marginalize(to_canonical(g), {0, 1});
    GaussianMoment sub{g.mu.head(2), g.sigma.topLeftCorner(2, 2)};
    const GaussianCanonical expect = to_canonical(sub);
    EXPECT_LE(max_abs(m.eta - expect.eta), 1e-9 * std::max(1.0, max_abs(expect.eta)));
    EXPECT_LE(max_abs(m.lambda - expect.lambda), 1e-9 * max_abs(expect.lambda));
  }
}

TEST(Marginalize, KeepOrderIsRespected) {
  std::mt19937_64 rng(10);
  const GaussianMoment g = random_pd(3, rng);
  const GaussianMoment m = to_moment(marginalize(to_canonical(g), {2, 0}));
  EXPECT_NEAR(m.mu(0), g.mu(2), 1e-9);
  EXPECT_NEAR(m.mu(1), g.mu(0), 1e-9);
  EXPECT_NEAR(m.sigma(0, 1), g.sigma(2, 0), 1e-9);
}

TEST(Marginalize, FlatDroppedDirectionLeavesRestUnchanged) {
  Eigen::Matrix2d lambda;
  lambda << 2.0, 0.0, 0.0, 0.0;
  const GaussianCanonical g{Eigen::Vector2d(1.0, 0.0), lambda};
  const GaussianCanonical m = marginalize(g, {0});
  EXPECT_DOUBLE_EQ(m.lambda(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(m.eta(0), 1.0);
}

TEST(Marginalize, NearFlatLimitApproachesTopBlock) {
  Eigen::Matrix2d lambda;
  const double eps = 1e-14;
  lambda << 2.0, 0.0, 0.0, eps;
  const GaussianCanonical m = marginalize({Eigen::Vector2d(1.0, 0.0), lambda}, {0});
  EXPECT_NEAR(m.lambda(0, 0), 2.0, 1e-12);
}

TEST(Marginalize, BadKeepSetsThrow) {
  const auto g = GaussianCanonical::flat(3);
  EXPECT_THROW(marginalize(g, std::span<const Index>()), InvalidInput);
  EXPECT_THROW(marginalize(g, {0, 0}), InvalidInput);
  EXPECT_THROW(marginalize(g, {3}), InvalidInput);
}

TEST(Embed, ScalarIntoThreeDimensions) {
  const GaussianCanonical g{Eigen::VectorXd::Constant(1, 1.0), Eigen::MatrixXd::Constant(1, 1, 2.0)};
  const GaussianCanonical e = embed(g, {1}, 3);
  EXPECT_EQ(e.eta, Eigen::Vector3d(0.0, 1.0, 0.0));
  Eigen::Matrix3d expect = Eigen::Matrix3d::Zero();
  expect(1, 1) = 2.0;
  EXPECT_EQ(e.lambda, Eigen::MatrixXd(expect));
}

TEST(Embed, RoundTripThroughMarginalize) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const GaussianCanonical g = random_canonical(3, rng);
    const std::vector<Index> pos{4, 0, 2};
    const GaussianCanonical back = marginalize(embed(g, pos, 6), pos);
    EXPECT_LE(max_abs(back.eta - g.eta), 1e-9 * std::max(1.0, max_abs(g.eta)));
    EXPECT_LE(max_abs(back.lambda - g.lambda), 1e-9 * max_abs(g.lambda));
  }
}

TEST(Embed, FlatCoordinatesTakeThePriorInAProduct) {
  std::mt19937_64 rng(12);
  const GaussianCanonical data = random_canonical(2, rng);
  const GaussianMoment prior = random_pd(4, rng);
  // Prior independent across the two halves.
  GaussianMoment block = prior;
  block.sigma.topRightCorner(2, 2).setZero();
  block.sigma.bottomLeftCorner(2, 2).setZero();
  const GaussianMoment post = to_moment(product(embed(data, {0, 1}, 4), to_canonical(block)));
  EXPECT_LE(max_abs(post.mu.tail(2) - block.mu.tail(2)), 1e-9);
  EXPECT_LE(max_abs(post.sigma.bottomRightCorner(2, 2) - block.sigma.bottomRightCorner(2, 2)), 1e-9);
}

TEST(Embed, CollisionAndRangeErrors) {
  const auto g = GaussianCanonical::flat(2);
  EXPECT_THROW(embed(g, {1, 1}, 3), InvalidInput);
  EXPECT_THROW(embed(g, {0, 3}, 3), InvalidInput);
  EXPECT_THROW(embed(g, {0}, 3), InvalidInput);
}
