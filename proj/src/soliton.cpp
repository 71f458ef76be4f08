#include "ricci/soliton.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
constexpr double kPi = std::numbers::pi;

enum Tag { kTip = 1, kIso = 2, kBlow = 3, kAsym = 4 };

double iso_value(int eps, double a, double u) { return eps == 0 ? u : a * u + 0.5 * eps; }

std::string deg(double rad) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6gdeg", rad * 180.0 / kPi);
  return buf;
}
}  // namespace

Trajectory integrate_soliton(const SolitonSpec& spec, const Eigen::Vector2d& init, double r0, double r1,
                             const IntegrateOptions& opt) {
  if (spec.epsilon < -1 || spec.epsilon > 1) throw Error(Errc::InvalidArgument, "epsilon must be -1, 0 or 1");
  if (spec.a < 0) throw Error(Errc::InvalidArgument, "a must be non-negative");
  const int eps = spec.epsilon;
  const double a = spec.a;

  std::vector<ode::EventSpec<2>> ev;
  ev.push_back({kTip, [](double, const ode::State<2>& y) { return y(0); }, 0, opt.stop_at_tip});
  ev.push_back({kIso, [eps, a](double, const ode::State<2>& y) { return iso_value(eps, a, y(1)); }, 0, 0});
  ev.push_back({kBlow, [c = opt.blowup](double, const ode::State<2>& y) { return std::abs(y(1)) - c; }, 1, 1});
  if (opt.stop_at_asymptote)
    ev.push_back({kAsym,
                  [eps, a, tol = opt.asymptote_tol](double, const ode::State<2>& y) {
                    return std::abs(iso_value(eps, a, y(1))) - tol;
                  },
                  -1, 1});

  auto rhs = [eps, a](double, const ode::State<2>& y) { return soliton_rhs<double>(eps, a, y); };
  auto sol = ode::integrate<2>(rhs, init, r0, r1, opt.ode, std::span<const ode::EventSpec<2>>(ev));

  Trajectory t;
  t.spec = spec;
  t.spec.b = init(1);
  t.r = std::move(sol.t);
  t.y.assign(sol.y.begin(), sol.y.end());
  t.dense = std::move(sol.dense);
  for (const auto& e : sol.events) {
    EventKind k = e.tag == kTip    ? EventKind::TipCrossing
                  : e.tag == kIso  ? EventKind::IsoclineTouch
                  : e.tag == kBlow ? EventKind::BlowUp
                                   : EventKind::AsymptoteReached;
    t.events.push_back({k, e.t, e.y(0), e.y(1)});
  }
  if (sol.status == ode::Status::EventTerminated && !t.events.empty()) {
    switch (t.events.back().kind) {
      case EventKind::TipCrossing:
        t.status = Termination::SecondTip;
        t.y.back()(0) = 0.0;
        break;
      case EventKind::BlowUp: t.status = Termination::BlowUp; break;
      case EventKind::AsymptoteReached: t.status = Termination::Asymptote; break;
      case EventKind::IsoclineTouch: break;
    }
  }
  return t;
}

const char* to_string(Family f) {
  switch (f) {
    case Family::Cigar: return "Cigar";
    case Family::ConeCigar: return "ConeCigar";
    case Family::AlphaBetaCone: return "AlphaBetaCone";
    case Family::BluntCone: return "BluntCone";
    case Family::ExpandGaussianCone: return "ExpandGaussianCone";
    case Family::CuspedCone: return "CuspedCone";
    case Family::Football: return "Football";
    case Family::Teardrop: return "Teardrop";
    case Family::ShrinkGaussianCone: return "ShrinkGaussianCone";
    case Family::UnboundedCurvature: return "UnboundedCurvature";
  }
  return "?";
}

std::string describe(const Classification& c) {
  std::string s = to_string(c.family);
  switch (c.family) {
    case Family::AlphaBetaCone: s += " alpha=" + deg(c.angles[0]) + " beta=" + deg(c.angles[1]); break;
    case Family::Football: s += " alpha1=" + deg(c.angles[0]) + " alpha2=" + deg(c.angles[1]); break;
    case Family::Cigar:
    case Family::UnboundedCurvature: break;
    default:
      if (!c.angles.empty()) s += " alpha=" + deg(c.angles[0]);
  }
  return s;
}

Classification classify(int eps, double a, double b, const ClassifyOptions& opt) {
  if (eps < -1 || eps > 1) throw Error(Errc::InvalidArgument, "epsilon must be -1, 0 or 1");
  if (!(a >= 0)) throw Error(Errc::InvalidArgument, "a must be non-negative");
  const double tol = opt.slope_tol;
  const SolitonSpec spec{eps, a, b};
  auto fail = [&](const std::string& why, const Trajectory* t) {
    std::vector<std::string> diag{why};
    if (t)
      for (const auto& e : t->events) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "event kind=%d r=%.6g h=%.6g u=%.6g", int(e.kind), e.r, e.h, e.u);
        diag.push_back(buf);
      }
    throw Error(Errc::Unclassifiable, why, std::nullopt, diag);
  };
  if (std::abs(b) <= tol && !(eps == 1 && a > 0)) fail("start point is a critical point", nullptr);

  IntegrateOptions io = opt.integrate;
  Classification c{Family::Cigar, {}, {}};
  auto run = [&](int stop_tip, bool stop_asym) {
    io.stop_at_tip = stop_tip;
    io.stop_at_asymptote = stop_asym;
    return integrate_soliton(spec, Eigen::Vector2d(0.0, b), 0.0, opt.r_max, io);
  };
  const double two_pi = 2.0 * kPi;

  if (a == 0.0) {
    // constant curvature: only the shrinking case closes (spherical football with equal angles)
    if (eps != -1) fail("constant-curvature degenerate case outside the soliton families", nullptr);
    c.trajectory = run(1, false);
    if (c.trajectory.status != Termination::SecondTip) fail("spherical orbit did not close", &c.trajectory);
    c.family = Family::Football;
    c.angles = {two_pi * std::abs(b), two_pi * std::abs(c.trajectory.y.back()(1))};
    return c;
  }

  if (eps == 0) {
    if (b > 0) {
      c.trajectory = run(0, false);
      if (c.trajectory.status != Termination::BlowUp) fail("expected blow-up", &c.trajectory);
      c.family = Family::UnboundedCurvature;
      return c;
    }
    c.trajectory = run(0, true);
    if (c.trajectory.status != Termination::Asymptote) fail("steady orbit did not settle", &c.trajectory);
    if (std::abs(b + 1.0) <= tol) {
      c.family = Family::Cigar;
    } else {
      c.family = Family::ConeCigar;
      c.angles = {two_pi * std::abs(b)};
    }
    return c;
  }

  if (eps == 1) {
    const double alpha = kPi / a;
    if (std::abs(b) <= tol) {
      // separatrix limit: the orbit from the saddle itself is the cusped cone
      c.family = Family::CuspedCone;
      c.angles = {alpha};
      io.stop_at_tip = 0;
      io.stop_at_asymptote = true;
      const Eigen::Vector2d y0 = -1e-6 * Eigen::Vector2d(std::sqrt(2.0), 1.0).normalized();
      c.trajectory = integrate_soliton(spec, y0, 0.0, opt.r_max, io);
      return c;
    }
    if (b > 0) {
      c.trajectory = run(0, false);
      if (c.trajectory.status != Termination::BlowUp) fail("expected blow-up", &c.trajectory);
      c.family = Family::UnboundedCurvature;
      return c;
    }
    if (std::abs(b + 0.5 / a) <= tol) {
      c.trajectory = run(0, false);
      c.family = Family::ExpandGaussianCone;
      c.angles = {alpha};
      return c;
    }
    c.trajectory = run(0, true);
    if (c.trajectory.status != Termination::Asymptote) fail("expanding orbit did not reach its asymptote", &c.trajectory);
    const double measured = two_pi * std::abs(c.trajectory.y.back()(1));
    if (std::abs(measured - alpha) > 1e-6 * alpha) fail("asymptotic angle mismatch", &c.trajectory);
    if (std::abs(b + 1.0) <= tol) {
      c.family = Family::BluntCone;
      c.angles = {alpha};
    } else {
      c.family = Family::AlphaBetaCone;
      c.angles = {alpha, two_pi * std::abs(b)};
    }
    return c;
  }

  // shrinking
  const double sep = 0.5 / a;
  if (std::abs(b - sep) <= tol) {
    c.trajectory = run(0, false);
    c.family = Family::ShrinkGaussianCone;
    c.angles = {kPi / a};
    return c;
  }
  if (b > sep) {
    c.trajectory = run(0, false);
    if (c.trajectory.status != Termination::BlowUp) fail("expected blow-up", &c.trajectory);
    c.family = Family::UnboundedCurvature;
    return c;
  }
  c.trajectory = run(1, false);
  if (c.trajectory.status != Termination::SecondTip) fail("closed orbit did not return to h = 0", &c.trajectory);
  const double uA = std::abs(c.trajectory.y.back()(1));
  const double a1 = two_pi * std::abs(b), a2 = two_pi * uA;
  if (std::abs(std::abs(b) - 1.0) <= tol) {
    c.family = Family::Teardrop;
    c.angles = {a2};
  } else if (std::abs(uA - 1.0) <= tol) {
    c.family = Family::Teardrop;
    c.angles = {a1};
  } else {
    c.family = Family::Football;
    c.angles = {a1, a2};
  }
  return c;
}

Eigen::ArrayXd potential_along(const Trajectory& t) {
  const std::size_t n = t.r.size();
  Eigen::ArrayXd f = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i < n; ++i) {
    const double r0 = t.r[i - 1], r1 = t.r[i];
    const double hm = t.at(0.5 * (r0 + r1))(0);
    f(i) = f(i - 1) + t.spec.a * (r1 - r0) / 6.0 * (t.y[i - 1](0) + 4.0 * hm + t.y[i](0));
  }
  return f;
}

Eigen::ArrayXd curvature_along(const Trajectory& t) {
  Eigen::ArrayXd K(static_cast<Eigen::Index>(t.y.size()));
  for (std::size_t i = 0; i < t.y.size(); ++i) K(i) = -(t.spec.a * t.y[i](1) + 0.5 * t.spec.epsilon);
  return K;
}

double first_integral(int eps, double a, double h, double u) {
  if (eps == 0) return 0.5 * a * h * h - u;
  const double v = a * h, w = a * u;
  const double arg = 2.0 * w + eps;  // 2w - 1 (shrinking) or 2w + 1 (expanding)
  if (std::abs(arg) <= 1e-14) throw Error(Errc::OnSeparatrix, "first integral undefined on the separatrix");
  return v * v - 2.0 * w + eps * std::log(std::abs(arg));
}

RadialProfile to_radial_profile(const Trajectory& t, std::size_t n) {
  if (n < 4) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  const double r0 = t.r.front(), r1 = t.r.back();
  RadialProfile p;
  p.rho = uniform_grid(0.0, std::abs(r1 - r0), n);
  p.h.resize(p.rho.size());
  for (Eigen::Index i = 0; i < p.rho.size(); ++i) {
    const double r = r0 + (r1 > r0 ? 1.0 : -1.0) * p.rho(i);
    p.h(i) = std::abs(t.at(r)(0));
  }
  p.h(0) = std::abs(t.y.front()(0));
  p.h(p.h.size() - 1) = std::abs(t.y.back()(0));
  if (p.h(0) == 0.0) p.angle0 = 2.0 * kPi * std::abs(t.y.front()(1));
  if (t.status == Termination::SecondTip) {
    p.h(p.h.size() - 1) = 0.0;
    p.angleA = 2.0 * kPi * std::abs(t.y.back()(1));
  }
  return p;
}

PhasePortrait phase_portrait(int eps, double a, const std::vector<Eigen::Vector2d>& seeds,
                             const PortraitOptions& opt) {
  if (eps < -1 || eps > 1) throw Error(Errc::InvalidArgument, "epsilon must be -1, 0 or 1");
  if (!(a > 0)) throw Error(Errc::InvalidArgument, "a must be positive");
  PhasePortrait pp;
  pp.epsilon = eps;
  pp.a = a;

  char buf[160];
  if (eps == 0) {
    CriticalPoint cp;
    cp.point = Eigen::Vector2d::Zero();
    cp.jacobian << 0, 1, 0, 0;
    cp.eigenvalues = {0.0, 0.0};
    cp.eigenvectors = {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 0)};
    cp.type = "line";
    pp.critical_points.push_back(cp);
    pp.isoclines.push_back({"fixed_point_line", "u = 0"});
    pp.isoclines.push_back({"vertical", "u = 0"});
    pp.isoclines.push_back({"horizontal", "h = 0 or u = 0"});
    std::snprintf(buf, sizeof buf, "u = %.12g h^2 + C", 0.5 * a);
    pp.isoclines.push_back({"level_sets", buf});
  } else {
    CriticalPoint cp;
    cp.point = Eigen::Vector2d::Zero();
    cp.jacobian << 0, 1, 0.5 * eps, 0;
    Eigen::EigenSolver<Eigen::Matrix2d> es(cp.jacobian);
    for (int i = 0; i < 2; ++i) {
      cp.eigenvalues.push_back(es.eigenvalues()(i));
      cp.eigenvectors.push_back(es.eigenvectors().col(i));
    }
    cp.type = eps == 1 ? "saddle" : "center";
    pp.critical_points.push_back(cp);
    std::snprintf(buf, sizeof buf, "u = %.12g", -0.5 * eps / a);
    pp.isoclines.push_back({"horizontal", std::string("h = 0 or ") + buf});
    pp.isoclines.push_back({"vertical", "u = 0"});
    pp.isoclines.push_back({"invariant_line", buf});
  }

  IntegrateOptions io = opt.integrate;
  io.stop_at_tip = 0;
  auto launch = [&](const SolitonSpec& s, Eigen::Vector2d y0, double r1) {
    return std::async(opt.jobs > 1 ? std::launch::async : std::launch::deferred,
                      [s, y0, r1, io] { return integrate_soliton(s, y0, 0.0, r1, io); });
  };

  // seeds are integrated independently and assembled by index
  std::vector<std::future<Trajectory>> fut;
  for (const auto& s : seeds) fut.push_back(launch({eps, a, s(1)}, s, opt.r_span));
  std::vector<std::future<Trajectory>> sep;
  if (eps == 1) {
    const Eigen::Vector2d vu = Eigen::Vector2d(std::sqrt(2.0), 1.0).normalized();
    const Eigen::Vector2d vs = Eigen::Vector2d(-std::sqrt(2.0), 1.0).normalized();
    for (double sg : {1.0, -1.0}) sep.push_back(launch({eps, a, 0.0}, sg * opt.delta * vu, opt.r_span));
    for (double sg : {1.0, -1.0}) sep.push_back(launch({eps, a, 0.0}, sg * opt.delta * vs, -opt.r_span));
  } else if (eps == -1) {
    const Eigen::Vector2d y0(0.0, 0.5 / a);
    sep.push_back(launch({eps, a, y0(1)}, y0, opt.r_span));
    sep.push_back(launch({eps, a, y0(1)}, y0, -opt.r_span));
  }
  for (auto& f : fut) pp.trajectories.push_back(f.get());
  for (auto& f : sep) pp.separatrices.push_back(f.get());
  return pp;
}

}  // namespace ricci
