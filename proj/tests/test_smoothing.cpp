#include <gtest/gtest.h>

#include <cmath>

#include "ricci/smoothing.hpp"
#include "oracles.hpp"

using namespace ricci;

TEST(Smoothing, TruncationPsiConstraints) {
  EXPECT_EQ(truncation_psi(-3.0), -3.0);
  EXPECT_EQ(truncation_psi(2.0), 0.0);
  // C^2 matching at s = +-1
  EXPECT_NEAR(truncation_psi(-1.0 + 1e-12), -1.0, 1e-11);
  EXPECT_NEAR(truncation_psi(1.0 - 1e-12), 0.0, 1e-11);
  EXPECT_NEAR(truncation_psi_d1(-1.0 + 1e-12), 1.0, 1e-11);
  EXPECT_NEAR(truncation_psi_d1(1.0 - 1e-12), 0.0, 1e-11);
  EXPECT_NEAR(truncation_psi_d2(-1.0 + 1e-9), 0.0, 1e-8);
  EXPECT_NEAR(truncation_psi_d2(1.0 - 1e-9), 0.0, 1e-8);
  for (double s = -1.5; s <= 1.5; s += 0.01) {
    EXPECT_GE(truncation_psi_d1(s), 0.0);
    EXPECT_LE(truncation_psi_d2(s), 0.0);
    // psi(s) <= min(s, 0)
    EXPECT_LE(truncation_psi(s), std::min(s, 0.0) + 1e-15);
    // derivative consistency
    const double e = 1e-6;
    EXPECT_NEAR((truncation_psi(s + e) - truncation_psi(s - e)) / (2 * e), truncation_psi_d1(s), 1e-7);
  }
}

TEST(Smoothing, TruncateCone) {
  const ConformalProfile c = canonical_cone_metric(MetricKind::Euclidean, -0.5);
  const Eigen::ArrayXd r = log_grid(1e-8, 1, 400);
  const SmoothFlowState u0 = sample_conformal(c, r);
  const SmoothFlowState u2 = truncate_cone(c, 2, r);
  const SmoothFlowState u3 = truncate_cone(c, 3, r);
  ASSERT_TRUE(u2.k_level.has_value());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (u0.u(i) <= 1) EXPECT_NEAR(u2.u(i), u0.u(i), 1e-14);
    if (u0.u(i) >= 3) EXPECT_EQ(u2.u(i), 2.0);
    EXPECT_LE(u2.u(i), u3.u(i) + 1e-15);
    EXPECT_LE(u2.u(i), std::min(u0.u(i), 2.0) + 1e-15);
  }
}

TEST(Smoothing, LogGrid) {
  const Eigen::ArrayXd r = log_grid(1e-3, 10, 5);
  EXPECT_NEAR(r(0), 1e-3, 1e-18);
  EXPECT_NEAR(r(4), 10, 1e-12);
  EXPECT_NEAR(r(1) / r(0), r(3) / r(2), 1e-12);
  EXPECT_THROW(log_grid(0, 1, 10), Error);
}

TEST(Smoothing, FlatPlaneIsStationary) {
  SmoothFlowState s;
  s.r = log_grid(1e-3, 1, 200);
  s.u = Eigen::ArrayXd::Constant(200, 0.3);
  ConformalFlowOptions o;
  o.sample_times = {0.1};
  const ConformalHistory h = run_conformal_flow(s, 0.1, o);
  EXPECT_LT((h.samples.back().u - 0.3).abs().maxCoeff(), 1e-13);
}

TEST(Smoothing, HyperbolicDiscExpandsHomothetically) {
  // K = -1 metric e^{2u0}|dz|^2, u0 = ln(2/(1-r^2)); under dg/dt = -2Kg it becomes (1+2t) g, u = u0 + ln(1+2t)/2
  const Eigen::ArrayXd r = log_grid(1e-3, 0.9, 1200);
  SmoothFlowState s;
  s.r = r;
  s.u = (2 / (1 - r * r)).log();
  ConformalFlowOptions o;
  o.sample_times = {0.05, 0.2};
  o.outer_value = [](double t) { return std::log(2 / (1 - 0.81)) + 0.5 * std::log1p(2 * t); };
  const ConformalHistory h = run_conformal_flow(s, 0.2, o);
  ASSERT_EQ(h.samples.size(), 2u);
  for (const auto& smp : h.samples) {
    const Eigen::ArrayXd exact = s.u + 0.5 * std::log1p(2 * smp.t);
    EXPECT_LT((smp.u - exact).abs().maxCoeff(), 2e-4) << "t=" << smp.t;
    // curvature relaxes like -1/(1+2t)
    const Eigen::ArrayXd K = conformal_curvature(smp);
    EXPECT_NEAR(K(r.size() / 2), -1 / (1 + 2 * smp.t), 2e-3);
  }
}

TEST(Smoothing, BackwardEulerAndTrBdf2Agree) {
  const ConformalProfile c = canonical_cone_metric(MetricKind::Euclidean, -0.5);
  const Eigen::ArrayXd r = log_grid(1e-6, 10, 300);
  ConformalFlowOptions a, b;
  a.sample_times = b.sample_times = {0.01};
  b.scheme = ConformalScheme::BackwardEuler;
  b.theta = 2e-4;
  const SmoothFlowState u = truncate_cone(c, 2, r);
  const double d = (run_conformal_flow(u, 0.01, a).samples.back().u - run_conformal_flow(u, 0.01, b).samples.back().u)
                       .abs()
                       .maxCoeff();
  EXPECT_LT(d, 1e-4);
}

TEST(Smoothing, BarrierRateAndLambda) {
  EXPECT_DOUBLE_EQ(barrier_rate(-0.5), -0.5);
  EXPECT_THROW(barrier_lambda(0.1, 0.0, 0.0), Error);
  EXPECT_THROW(barrier_lambda(0.1, -1.0, 0.0), Error);
  // lambda^{2(beta+1)} = -t e^{-2C} / (4 beta (beta+1))
  const double beta = -0.25, C = 0.3, t = 0.7;
  EXPECT_NEAR(std::pow(barrier_lambda(t, beta, C), 2 * (beta + 1)), -t * std::exp(-2 * C) / (4 * beta * (beta + 1)),
              1e-14);
  EXPECT_EQ(barrier_lambda(0, beta, C), 0.0);
}

TEST(Smoothing, BarrierConstantMatchesOracle) {
  for (double beta : {-0.75, -0.5, -0.25}) EXPECT_NEAR(cone_barrier_constant(beta), oracle::cone_barrier(beta), 1e-7);
  // beta = 0 is the plane, u = 0 for all t
  EXPECT_NEAR(cone_barrier_constant(0.0), 0.0, 1e-7);
}

TEST(Smoothing, SmallFamilyOrderedAndBelowBarrier) {
  FamilyOptions fo;
  fo.nodes = 500;
  fo.samples = 6;
  fo.jobs = 3;
  const FamilyResult r = run_truncation_family(-0.5, {0.5, 1, 1.5}, 0.05, fo);
  ASSERT_EQ(r.sup_u.size(), 3u);
  ASSERT_EQ(r.times.size(), 6u);
  EXPECT_LE(r.monotone_violation, 1e-8);
  EXPECT_GT(r.barrier_margin, 0.0);
  // sup u_k is decreasing in t (the cap spreads out)
  for (const auto& s : r.sup_u)
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i], s[i - 1]);
}

TEST(Smoothing, FamilyArgumentChecks) {
  EXPECT_THROW(run_truncation_family(0.0, {1}, 0.1), Error);
  EXPECT_THROW(run_truncation_family(-0.5, {}, 0.1), Error);
  FamilyOptions fo;
  fo.t_first = 0.2;
  EXPECT_THROW(run_truncation_family(-0.5, {1}, 0.1, fo), Error);
}
