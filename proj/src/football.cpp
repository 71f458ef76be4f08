#include "ricci/football.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
constexpr double kPi = std::numbers::pi;

double tangency_gap(double k, double y) { return y - k * std::exp(y - 1.0); }

Trajectory close_orbit(double a, double b, const FootballOptions& opt, double tighten) {
  IntegrateOptions io = opt.integrate;
  io.ode.rtol /= tighten;
  io.ode.atol /= tighten;
  io.stop_at_tip = 1;
  io.stop_at_asymptote = false;
  return integrate_soliton({-1, a, b}, Eigen::Vector2d(0.0, b), 0.0, opt.r_max, io);
}
}  // namespace

std::pair<double, double> positive_roots(double k) {
  if (!(k > 0)) throw Error(Errc::InvalidArgument, "k must be positive");
  if (k >= 1.0) throw Error(Errc::DegenerateTangency, "no pair of positive roots for k >= 1");
  auto g = [k](double y) { return tangency_gap(k, y); };
  const double y1 = bisect(g, 0.0, 1.0, 0.0);
  double hi = 2.0;
  while (g(hi) > 0) hi *= 2.0;
  const double y2 = bisect(g, 1.0, hi, 0.0);
  return {y1, y2};
}

double psi(double k) {
  const auto [y1, y2] = positive_roots(k);
  return (1.0 - y1) / (y2 - 1.0);
}

double psi_inverse(double ratio) {
  if (!(ratio > 0 && ratio < 1)) throw Error(Errc::InvalidArgument, "ratio must lie in (0, 1)");
  // bisection in ln k, psi is increasing in k
  auto f = [ratio](double t) { return psi(std::exp(t)) - ratio; };
  const double lo = std::log(std::numeric_limits<double>::min());
  const double hi = std::log1p(-std::numeric_limits<double>::epsilon());
  if (f(lo) > 0) throw Error(Errc::InvalidArgument, "angle ratio too small");
  return std::exp(bisect(f, lo, hi, 0.0, 4000));
}

FootballSolution solve_angles(double alpha1, double alpha2, const FootballOptions& opt) {
  if (!(alpha1 > 0 && alpha2 > 0)) throw Error(Errc::InvalidArgument, "cone angles must be positive");
  FootballSolution s;
  s.alpha1 = alpha1;
  s.alpha2 = alpha2;
  const double lo = std::min(alpha1, alpha2), hi = std::max(alpha1, alpha2);

  if (hi - lo <= 1e-12 * hi) {
    // equal angles: constant curvature 1/2, h = c sin(r / sqrt 2)
    s.spherical = true;
    s.a = 0.0;
    s.orbit = close_orbit(0.0, alpha1 / (2 * kPi), opt, 1.0);
  } else {
    const double k = psi_inverse(lo / hi);
    const auto [y1, y2] = positive_roots(k);
    s.k = k;
    s.p = 1.0 - y1;
    s.q = y2 - 1.0;
    s.a = kPi * *s.p / lo;  // alpha_min = (pi / a) p
    // the smaller angle always sits on the positive-slope crossing
    const double b = alpha1 <= alpha2 ? alpha1 / (2 * kPi) : -alpha1 / (2 * kPi);
    s.orbit = close_orbit(s.a, b, opt, 1.0);
  }
  if (s.orbit.status != Termination::SecondTip)
    throw Error(Errc::ClosureResidualTooLarge, "orbit did not return to h = 0");
  s.A = std::abs(s.orbit.r_end() - s.orbit.r.front());
  s.closure_residual = std::abs(std::abs(s.orbit.y.back()(1)) - alpha2 / (2 * kPi));
  if (s.closure_residual > opt.closure_tol)
    throw Error(Errc::ClosureResidualTooLarge, "closing slope misses the target angle");
  return s;
}

double verify_orbit(const FootballSolution& s, const FootballOptions& opt) {
  const double b = s.orbit.spec.b;
  const Trajectory t = close_orbit(s.a, b, opt, 10.0);
  if (t.status != Termination::SecondTip) return std::numeric_limits<double>::infinity();
  return std::abs(std::abs(t.y.back()(1)) - s.alpha2 / (2 * kPi));
}

}  // namespace ricci
