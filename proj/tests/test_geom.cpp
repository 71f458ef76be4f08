#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ricci/geom.hpp"
#include "oracles.hpp"

using namespace ricci;
constexpr double kPi = std::numbers::pi;

namespace {
Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;  // sentinel: nothing thrown
}

RadialProfile sampled(const RadialProfile& p) {
  RadialProfile q = p;
  q.closed_form.reset();
  return q;
}
}  // namespace

TEST(Geom, SphereCurvatureIsOne) {
  const RadialProfile p = RadialProfile::sample(ClosedForm::sphere(), 0, kPi, 400);
  EXPECT_LT((curvature(p) - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT((curvature(sampled(p)) - 1.0).abs().maxCoeff(), 1e-3);
}

TEST(Geom, FlatConeIsFlat) {
  const RadialProfile p = RadialProfile::sample(ClosedForm::flat_cone(0.5), 0, 2, 100);
  EXPECT_LT(curvature(p).abs().maxCoeff(), 1e-14);
  EXPECT_LT(curvature(sampled(p)).abs().maxCoeff(), 1e-9);
}

TEST(Geom, CigarTipCurvature) {
  // oracle: K(0) = -h'''(0)/h'(0) of the tanh closed form, by forward-mode differentiation
  const oracle::Dual2 x = oracle::Dual2::var(0.0);
  const double k = std::sqrt(0.5), c = std::sqrt(2.0);
  const oracle::Dual2 hp = oracle::Dual2(c * k) * (oracle::Dual2(1.0) - oracle::tanh(oracle::Dual2(k) * x) *
                                                                          oracle::tanh(oracle::Dual2(k) * x));
  const double K0 = -hp.dd / hp.v;
  EXPECT_NEAR(K0, 1.0, 1e-14);
  const RadialProfile p = RadialProfile::sample(ClosedForm::cigar(1.0), 0, 8, 800);
  EXPECT_NEAR(curvature(p)(0), K0, 1e-6);
  EXPECT_NEAR(curvature(sampled(p))(0), K0, 1e-3);
}

TEST(Geom, CurvatureErrors) {
  RadialProfile p = RadialProfile::sample(ClosedForm::sphere(), 0, kPi, 50);
  p.h(10) = -0.1;
  EXPECT_EQ(code_of([&] { curvature(p); }), Errc::NonPositiveProfile);
  RadialProfile q;
  q.rho = Eigen::ArrayXd::LinSpaced(2, 0, 1);
  q.h = q.rho;
  EXPECT_EQ(code_of([&] { curvature(q); }), Errc::GridTooCoarse);
}

TEST(Geom, ConeAngles) {
  const RadialProfile cone = RadialProfile::sample(ClosedForm::flat_cone(0.5), 0, 1, 50);
  EXPECT_NEAR(*cone_angles(cone).alpha0, kPi, 1e-12);
  EXPECT_NEAR(*cone_angles(sampled(cone)).alpha0, kPi, 1e-12);
  EXPECT_FALSE(cone_angles(cone).alphaA.has_value());
  const RadialProfile sph = RadialProfile::sample(ClosedForm::sphere(), 0, kPi, 200);
  EXPECT_NEAR(*cone_angles(sampled(sph)).alpha0, 2 * kPi, 1e-7);
  EXPECT_NEAR(*cone_angles(sampled(sph)).alphaA, 2 * kPi, 1e-7);
  RadialProfile notip = RadialProfile::sample(ClosedForm::sphere(), 0.5, 2.5, 50);
  EXPECT_EQ(code_of([&] { cone_angles(notip); }), Errc::NoTip);
}

TEST(Geom, GaussBonnetSphereSecondOrder) {
  double prev = 0;
  for (std::size_t n : {2500u, 5000u, 10000u}) {
    const double err = std::abs(gauss_bonnet(sampled(RadialProfile::sample(ClosedForm::sphere(), 0, kPi, n))) - 4 * kPi);
    if (prev > 0) EXPECT_GE(prev / err, 3.0);
    prev = err;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Geom, GaussBonnetCigarAndCone) {
  const double R = 20;
  const RadialProfile cig = RadialProfile::sample(ClosedForm::cigar(1.0), 0, R, 4000);
  const double expected = 2 * kPi * (1 - ClosedForm::cigar(1.0).d1(R));
  EXPECT_NEAR(gauss_bonnet(cig), expected, 1e-4);
  EXPECT_NEAR(gauss_bonnet(RadialProfile::sample(ClosedForm::flat_cone(0.3), 0, 1, 100)), 0.0, 1e-14);
}

TEST(Geom, ConicEuler) {
  EXPECT_EQ(conic_euler({2, {}}), 2.0);
  EXPECT_EQ(conic_euler({2, {-0.5}}), 1.5);
  EXPECT_EQ(conic_euler({0, {}}), 0.0);
  EXPECT_EQ(code_of([] { conic_euler({2, {-1.0}}); }), Errc::BetaOutOfRange);
  EXPECT_EQ(code_of([] { conic_euler({2, {0.2}}); }), Errc::BetaOutOfRange);
}

TEST(Geom, Troyanov) {
  EXPECT_EQ(troyanov_admissible({0, {}}), Admissibility::Admissible);
  EXPECT_EQ(troyanov_admissible({2, {-0.5}}), Admissibility::NotAdmissible);
  EXPECT_EQ(troyanov_admissible({2, {-0.75, -0.5}}), Admissibility::NotAdmissible);
  EXPECT_EQ(troyanov_admissible({2, {-0.4, -0.4}}), Admissibility::BoundaryCase);
  EXPECT_EQ(troyanov_admissible({2, {-0.1, -0.1, -0.1}}), Admissibility::Admissible);
  // chi_hat <= 0 is always admissible
  EXPECT_EQ(troyanov_admissible({2, {-0.9, -0.9, -0.9}}), Admissibility::Admissible);
  // permutation invariance
  std::vector<double> b{-0.2, -0.05, -0.3, -0.1};
  const Admissibility ref = troyanov_admissible({2, b});
  std::sort(b.begin(), b.end());
  do {
    EXPECT_EQ(troyanov_admissible({2, b}), ref);
  } while (std::next_permutation(b.begin(), b.end()));
}

TEST(Geom, CanonicalConeMetrics) {
  const ConformalProfile hemi = canonical_cone_metric(MetricKind::Spherical, 0.0);
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR(hemi.u(r), std::log(2 / (1 + r * r)), 1e-14);
  const ConformalProfile euc = canonical_cone_metric(MetricKind::Euclidean, -0.5);
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR(euc.u(r), std::log(0.5) - 0.5 * std::log(r), 1e-14);
  const ConformalProfile cusp = canonical_cone_metric(MetricKind::Cusp, 0.0);
  for (double r : {0.1, 0.5, 0.9}) EXPECT_NEAR(cusp.u(r), -std::log(r * std::abs(std::log(r))), 1e-14);
  const ConformalProfile hyp = canonical_cone_metric(MetricKind::Hyperbolic, 0.0);
  for (double r : {0.1, 0.5}) EXPECT_NEAR(hyp.u(r), std::log(2 / (1 - r * r)), 1e-14);
  EXPECT_EQ(code_of([] { canonical_cone_metric(MetricKind::Euclidean, -1.0); }), Errc::BetaOutOfRange);
}

TEST(Geom, ConformalToPolar) {
  ConformalProfile plane;
  plane.beta = 0;
  plane.a = [](double) { return 0.0; };
  const RadialProfile p = conformal_to_polar(plane, 2.0, 100);
  EXPECT_LT((p.h - p.rho).abs().maxCoeff(), 1e-14);

  for (double beta : {-0.75, -0.5, -0.1}) {
    const RadialProfile c = conformal_to_polar(canonical_cone_metric(MetricKind::Euclidean, beta), 1.0, 1000);
    EXPECT_LT((c.h - (beta + 1) * c.rho).abs().maxCoeff(), 1e-12);
  }
  const RadialProfile s = conformal_to_polar(canonical_cone_metric(MetricKind::Spherical, 0.0), 1.0, 10000);
  EXPECT_LT((s.h - s.rho.sin()).abs().maxCoeff(), 1e-7);

  ConformalProfile bad;
  bad.beta = -1.0;
  bad.a = [](double) { return 0.0; };
  EXPECT_EQ(code_of([&] { conformal_to_polar(bad, 1.0, 100); }), Errc::NonIntegrableFactor);
}

TEST(Geom, ConformalToPolarRecoversConeAngle) {
  for (MetricKind k : {MetricKind::Euclidean, MetricKind::Spherical, MetricKind::Hyperbolic}) {
    for (double beta : {-0.8, -0.5, -0.2, 0.0}) {
      const RadialProfile p = conformal_to_polar(canonical_cone_metric(k, beta), 0.5, 10000);
      RadialProfile q = p;
      q.angle0.reset();
      const double alpha = *cone_angles(q).alpha0;
      EXPECT_NEAR(alpha / (2 * kPi * (beta + 1)), 1.0, 1e-6) << to_string(k) << " beta=" << beta;
    }
  }
}

TEST(Geom, EmbedSphereAndCone) {
  const RadialProfile sph = RadialProfile::sample(ClosedForm::sphere(), 0, kPi, 2001);
  const Embedding e = embed_profile(sph);
  EXPECT_LT((e.z - (1 - sph.rho.cos())).abs().maxCoeff(), 1e-5);
  const RadialProfile cone = RadialProfile::sample(ClosedForm::flat_cone(0.5), 0, 1, 101);
  EXPECT_LT((embed_profile(cone).z - std::sqrt(0.75) * cone.rho).abs().maxCoeff(), 1e-14);
  // per-cell isometry
  for (Eigen::Index i = 1; i < e.z.size(); ++i) {
    const double dz = e.z(i) - e.z(i - 1), dh = e.h(i) - e.h(i - 1), dr = e.rho(i) - e.rho(i - 1);
    EXPECT_NEAR((dz * dz + dh * dh) / (dr * dr), 1.0, 1e-8);
  }
}

TEST(Geom, EmbedRejectsWideCones) {
  const RadialProfile wide = RadialProfile::sample(ClosedForm::flat_cone(1.5), 0, 1, 50);
  try {
    embed_profile(wide);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEmbeddable);
    ASSERT_TRUE(e.index().has_value());
    EXPECT_EQ(*e.index(), 0u);
  }
}
