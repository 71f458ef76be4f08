#include "ricci/cusp3d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "ricci/error.hpp"
#include "ricci/ode.hpp"
#include "stiff_tail.hpp"

namespace ricci {

namespace {
// (H, G) form: H' = -G - H^2, G' = -G (G + 1/2) / H - H^3
Eigen::Vector2d hg_rhs(double H, double G) { return {-G - H * H, -G * (G + 0.5) / H - H * H * H}; }

double F_of(double H, double G) { return (H * H - G - 0.5) / H; }
double G_of(double H, double F) { return H * H - H * F - 0.5; }

void check_region(double r, double H, double G) {
  if (!(H > 0.0 && H < 0.5 && G < 0.0 && G > -0.25))
    throw Error(Errc::LeftAdmissibleRegion,
                "separatrix left 0<H<1/2, -1/4<sec<0 at r=" + std::to_string(r) + " H=" + std::to_string(H));
}

struct Isocline {
  const char* name;
  std::function<double(double, double)> g;  // of (H, F)
};

const std::vector<Isocline>& isoclines() {
  static const std::vector<Isocline> v{
      {"vertical", [](double H, double F) { return F - (2.0 * H - 0.5 / H); }},
      {"horizontal", [](double H, double F) { return F - (H - 0.25 / H); }},
      {"oblique", [](double H, double F) { return F - (4.0 * H - 1.0 / H); }},
  };
  return v;
}
}  // namespace

Linearization linearize(const Eigen::Vector2d& p) {
  const Eigen::Vector2d f = cusp_rhs<double>(p);
  if (f.norm() > 1e-12) throw Error(Errc::NotCritical, "point is not a critical point");
  const double H = p(0), F = p(1);
  Linearization L;
  L.point = p;
  L.jacobian << F - 4.0 * H, H, 2.0 * F - 4.0 * H, 2.0 * H;
  const double tr = L.jacobian.trace(), det = L.jacobian.determinant();
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  L.eigenvalues << 0.5 * (tr - disc), 0.5 * (tr + disc);
  for (int i = 0; i < 2; ++i) {
    // first row: (J00 - lambda) v0 + J01 v1 = 0
    L.eigenvectors(0, i) = 1.0;
    L.eigenvectors(1, i) = -(L.jacobian(0, 0) - L.eigenvalues(i)) / L.jacobian(0, 1);
  }
  return L;
}

CuspTrajectory shoot_separatrix(const ShootOptions& opt) {
  if (!(opt.delta > 0 && opt.delta < 1e-2)) throw Error(Errc::InvalidArgument, "delta must lie in (0, 1e-2)");
  const Linearization lin = linearize(Eigen::Vector2d(0.5, 0.0));
  const Eigen::Vector2d v = lin.eigenvectors.col(1).normalized();  // unstable, (1, 3 + sqrt 5)
  const Eigen::Vector2d start = lin.point - opt.delta * v;
  const double G0 = G_of(start(0), start(1));

  CuspTrajectory out;
  out.delta = opt.delta;

  // backward leg toward the saddle (non-stiff there)
  {
    using S2 = ode::State<2>;
    ode::Options o;
    o.rtol = 1e-12;
    o.atol = 1e-16;
    std::vector<ode::EventSpec<2>> ev{{0,
                                       [&](double, const S2& y) {
                                         const double F = F_of(y(0), y(1));
                                         return std::hypot(y(0) - 0.5, F) - opt.back_factor * opt.delta;
                                       },
                                       -1, 1}};
    const auto sol = ode::integrate<2>([](double, const S2& y) -> S2 { return hg_rhs(y(0), y(1)); },
                                       S2(start(0), G0), 0.0, -200.0, o, std::span<const ode::EventSpec<2>>(ev));
    for (std::size_t i = sol.t.size(); i-- > 1;) {
      out.r.push_back(sol.t[i]);
      out.H.push_back(sol.y[i](0));
      out.G.push_back(sol.y[i](1));
      const double rm = 0.5 * (sol.t[i] + sol.t[i - 1]);
      const S2 ym = sol.dense(rm);
      out.r_mid.push_back(rm);
      out.H_mid.push_back(ym(0));
      out.F_mid.push_back(F_of(ym(0), ym(1)));
    }
  }

  out.r.push_back(0.0);
  out.H.push_back(start(0));
  out.G.push_back(G0);

  // forward leg: stiff tail, Rosenbrock with dense output
  detail::HgRosenbrock stepper(opt.atol, opt.rtol, 0.0, start(0), G0, 1e-3);
  auto state_at = [&](double r) {
    const auto y = stepper.at(r);
    return Eigen::Vector2d(y[0], y[1]);
  };
  std::vector<double> iso_prev;
  for (const auto& iso : isoclines()) iso_prev.push_back(iso.g(start(0), start(1)));
  bool done = false;
  while (!done) {
    const auto [t0, t1] = stepper.step();
    const auto yc = stepper.current();
    Eigen::Vector2d y1(yc[0], yc[1]);
    double r1 = t1;
    if (y1(0) <= opt.H_stop) {
      double a = t0, b = t1;
      while (b - a > 1e-12 * std::max(1.0, std::abs(b))) {
        const double m = 0.5 * (a + b);
        if (state_at(m)(0) > opt.H_stop) a = m;
        else b = m;
      }
      r1 = b;
      y1 = state_at(b);
      done = true;
    }
    check_region(r1, y1(0), y1(1));
    const double F1 = F_of(y1(0), y1(1));
    for (std::size_t k = 0; k < isoclines().size(); ++k) {
      const double g = isoclines()[k].g(y1(0), F1);
      if ((g > 0) != (iso_prev[k] > 0)) out.events.push_back({isoclines()[k].name, r1, y1(0), F1});
      iso_prev[k] = g;
    }
    const double rm = 0.5 * (t0 + r1);
    const Eigen::Vector2d ym = state_at(rm);
    out.r_mid.push_back(rm);
    out.H_mid.push_back(ym(0));
    out.F_mid.push_back(F_of(ym(0), ym(1)));
    out.r.push_back(r1);
    out.H.push_back(y1(0));
    out.G.push_back(y1(1));
    if (!done && r1 > opt.r_max) throw Error(Errc::TailTooShort, "H did not reach the stopping level");
  }

  for (std::size_t i = 0; i < out.r.size(); ++i) out.F.push_back(F_of(out.H[i], out.G[i]));
  // gauge: r + 2F -> 0 at the wide end
  out.r_shift = out.r.back() + 2.0 * out.F.back();
  for (double& r : out.r) r -= out.r_shift;
  for (double& r : out.r_mid) r -= out.r_shift;
  for (auto& e : out.events) e.r -= out.r_shift;
  return out;
}

CuspMetric build_metric(const CuspTrajectory& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.r.size());
  if (n < 8 || t.r_mid.size() + 1 != t.r.size()) throw Error(Errc::TailTooShort, "trajectory too short");
  CuspMetric m;
  m.r = Eigen::Map<const Eigen::ArrayXd>(t.r.data(), n);
  m.H = Eigen::Map<const Eigen::ArrayXd>(t.H.data(), n);
  m.F = Eigen::Map<const Eigen::ArrayXd>(t.F.data(), n);
  m.h.resize(n);
  m.f.resize(n);
  // h - r/2 -> 0 as r -> -inf: along the linear leg H - 1/2 ~ e^{lambda r}
  const double lam = 0.5 * (std::sqrt(5.0) - 1.0);
  m.h(0) = 0.5 * m.r(0) + (m.H(0) - 0.5) / lam;
  m.f(0) = 0.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double dr = m.r(i) - m.r(i - 1);
    m.h(i) = m.h(i - 1) + dr / 6.0 * (m.H(i - 1) + 4.0 * t.H_mid[i - 1] + m.H(i));
    m.f(i) = m.f(i - 1) + dr / 6.0 * (m.F(i - 1) + 4.0 * t.F_mid[i - 1] + m.F(i));
  }
  m.sec_xy = -m.H.square();
  m.sec_rx = Eigen::Map<const Eigen::ArrayXd>(t.G.data(), n);
  m.sec_rx_alt.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector2d d = cusp_rhs<double>(Eigen::Vector2d(m.H(i), m.F(i)));
    const double a = -(m.H(i) * m.H(i) + d(0));
    const double b = -0.5 * (d(1) + 0.5);
    m.sec_rx_alt(i) = std::abs(a - b) > 1e-6 ? std::numeric_limits<double>::quiet_NaN() : a;
  }
  return m;
}

CuspAsymptotics cusp_asymptotics(const CuspMetric& m) {
  const Eigen::Index n = m.r.size();
  CuspAsymptotics a;
  a.cusp_ratio = m.h(0) / (0.5 * m.r(0));
  a.wide_f_ratio = m.f(n - 1) / (-0.25 * m.r(n - 1) * m.r(n - 1));
  a.wide_Hr_max = a.wide_HF_max = a.wide_Fp_max = 0.0;
  const double r_end = m.r(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (m.r(i) < 0.1 * r_end) continue;
    a.wide_Hr_max = std::max(a.wide_Hr_max, std::abs(m.H(i) * m.r(i) - 1.0));
    a.wide_HF_max = std::max(a.wide_HF_max, std::abs(m.H(i) * m.F(i) + 0.5));
    a.wide_Fp_max = std::max(a.wide_Fp_max, std::abs(-2.0 * m.sec_rx(i)));
  }
  a.sec_min = std::min(m.sec_xy.minCoeff(), m.sec_rx.minCoeff());
  a.sec_max = std::max(m.sec_xy.maxCoeff(), m.sec_rx.maxCoeff());
  return a;
}

}  // namespace ricci
