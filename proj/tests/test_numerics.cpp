#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ricci/numerics.hpp"

using namespace ricci;
constexpr double kPi = std::numbers::pi;

TEST(Numerics, FornbergCentralWeights) {
  Eigen::ArrayXd x(3);
  x << -1, 0, 1;
  const Eigen::MatrixXd w = fd_weights(0.0, x, 2);
  EXPECT_NEAR(w(0, 1), -0.5, 1e-15);
  EXPECT_NEAR(w(2, 1), 0.5, 1e-15);
  EXPECT_NEAR(w(0, 2), 1.0, 1e-15);
  EXPECT_NEAR(w(1, 2), -2.0, 1e-15);
}

TEST(Numerics, DerivativeSecondOrder) {
  double prev1 = 0, prev2 = 0;
  for (int n : {101, 201, 401}) {
    const Eigen::ArrayXd x = uniform_grid(0, 2, n);
    const Eigen::ArrayXd f = x.sin();
    const double e1 = (derivative(x, f, 1) - x.cos()).abs().maxCoeff();
    const double e2 = (derivative(x, f, 2) + x.sin()).abs().maxCoeff();
    if (prev1 > 0) {
      EXPECT_GT(prev1 / e1, 3.5);
      EXPECT_GT(prev2 / e2, 1.8);  // one-sided second derivative at the ends is first order
    }
    prev1 = e1;
    prev2 = e2;
  }
  EXPECT_LT(prev1, 1e-4);
}

TEST(Numerics, DerivativeNeedsFourNodes) {
  Eigen::ArrayXd x(3), f(3);
  x << 0, 1, 2;
  f << 0, 1, 4;
  EXPECT_THROW(derivative(x, f, 1), Error);
}

TEST(Numerics, Trapezoid) {
  const Eigen::ArrayXd x = uniform_grid(0, kPi, 2001);
  EXPECT_NEAR(trapezoid(x, x.sin()), 2.0, 1e-6);
  const Eigen::ArrayXd c = cumulative_trapezoid(x, x.sin());
  EXPECT_EQ(c(0), 0.0);
  EXPECT_NEAR((c - (1 - x.cos())).abs().maxCoeff(), 0.0, 1e-6);
  // linear integrands are exact
  EXPECT_NEAR(trapezoid(x, (3 * x + 1).eval()), 1.5 * kPi * kPi + kPi, 1e-12);
}

TEST(Numerics, OddSlopeFitExactOnQuintics) {
  auto h = [](double d) { return 0.37 * d - 1.2 * d * d * d + 0.4 * std::pow(d, 5); };
  const double d[3] = {0.01, 0.02, 0.03};
  const double v[3] = {h(d[0]), h(d[1]), h(d[2])};
  EXPECT_NEAR(odd_slope_fit(d, v), 0.37, 1e-10);
}

TEST(Numerics, EvenExtrapolate) {
  auto q = [](double d) { return 2.5 - 3 * d * d; };
  EXPECT_NEAR(even_extrapolate(0.1, q(0.1), 0.2, q(0.2)), 2.5, 1e-13);
}

TEST(Numerics, Bisect) {
  const double r = bisect([](double x) { return x * x - 2; }, 0, 2, 0.0);
  EXPECT_NEAR(r, std::sqrt(2.0), 1e-15);
  EXPECT_THROW(bisect([](double x) { return x * x + 1; }, -1, 1, 1e-10), Error);
  EXPECT_EQ(bisect([](double x) { return x; }, 0, 1, 1e-10), 0.0);
}

TEST(Numerics, HermiteResample) {
  const Eigen::ArrayXd x = uniform_grid(0, 1, 101);
  const Eigen::ArrayXd f = x.exp();
  const Eigen::ArrayXd q = uniform_grid(0, 1, 37);
  EXPECT_LT((hermite_resample(x, f, q) - q.exp()).abs().maxCoeff(), 1e-5);
  // nodes are reproduced
  EXPECT_LT((hermite_resample(x, f, x) - f).abs().maxCoeff(), 1e-14);
}
