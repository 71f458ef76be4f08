#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

double tip_slope(const Eigen::ArrayXd& h, double dx, bool left) {
  const Eigen::Index n = h.size();
  double d[3], v[3];
  for (int i = 0; i < 3; ++i) {
    d[i] = (i + 1) * dx;
    v[i] = left ? h(i + 1) : h(n - 2 - i);
  }
  return odd_slope_fit(d, v);
}

bool is_uniform(const Eigen::ArrayXd& x) {
  const Eigen::Index n = x.size();
  const double dx = (x(n - 1) - x(0)) / double(n - 1);
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(x(i) - x(i - 1) - dx) > 1e-9 * dx) return false;
  return true;
}
}  // namespace

void validate_flow_state(const FlowState& s) {
  const Eigen::Index n = s.h.size();
  if (n < 8 || s.rho.size() != n) throw Error(Errc::GridTooCoarse, "flow grid needs at least 8 nodes");
  if (s.h(0) != 0.0) throw Error(Errc::NoTip, "flow profile must start at a tip");
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    if (!(s.h(i) > 0)) throw Error(Errc::ProfileCollapsed, "profile lost positivity", static_cast<std::size_t>(i));
  if (!std::isfinite(s.h.sum())) throw Error(Errc::StabilityViolation, "non-finite profile");
}

FlowState make_flow_state(const RadialProfile& p, std::size_t n) {
  p.validate();
  if (n < 8) throw Error(Errc::GridTooCoarse, "flow grid needs at least 8 nodes");
  if (p.h(0) != 0.0) throw Error(Errc::NoTip, "flow profile must start at a tip");
  FlowState s;
  const double r0 = p.rho(0);
  const double L = p.rho(p.rho.size() - 1) - r0;
  s.rho = uniform_grid(0.0, L, n);
  if (p.closed_form) {
    s.h = (s.rho + r0).unaryExpr([&](double r) { return p.closed_form->value(r); });
  } else if (p.rho.size() == Eigen::Index(n) && is_uniform(p.rho)) {
    s.h = p.h;
  } else {
    s.h = hermite_resample(p.rho - r0, p.h, s.rho);
  }
  s.h(0) = 0.0;
  s.closed = p.h(p.h.size() - 1) == 0.0;
  if (s.closed) s.h(n - 1) = 0.0;
  const ConeAngles ang = cone_angles(p);
  s.alpha = p.angle0 ? *p.angle0 : *ang.alpha0;
  if (s.closed) s.alpha_right = p.angleA ? *p.angleA : *ang.alphaA;
  validate_flow_state(s);
  s.diag = diagnose(s);
  return s;
}

FlowFields flow_fields(const FlowState& s) {
  const Eigen::Index n = s.h.size();
  const double dx = s.rho(1) - s.rho(0);
  const Eigen::ArrayXd& h = s.h;
  FlowFields f;
  f.h_r.resize(n);
  f.h_rr.resize(n);
  f.K.resize(n);
  f.h_r.segment(1, n - 2) = (h.tail(n - 2) - h.head(n - 2)) / (2 * dx);
  f.h_rr.segment(1, n - 2) = (h.tail(n - 2) - 2 * h.segment(1, n - 2) + h.head(n - 2)) / (dx * dx);
  f.K.segment(1, n - 2) = -f.h_rr.segment(1, n - 2) / h.segment(1, n - 2);
  f.h_r(0) = tip_slope(h, dx, true);
  f.h_rr(0) = 0.0;
  f.K(0) = (4 * f.K(1) - f.K(2)) / 3;
  if (s.closed) {
    f.h_r(n - 1) = -tip_slope(h, dx, false);
    f.h_rr(n - 1) = 0.0;
    f.K(n - 1) = (4 * f.K(n - 2) - f.K(n - 3)) / 3;
  } else {
    f.h_r(n - 1) = (3 * h(n - 1) - 4 * h(n - 2) + h(n - 3)) / (2 * dx);
    f.h_rr(n - 1) = (2 * h(n - 1) - 5 * h(n - 2) + 4 * h(n - 3) - h(n - 4)) / (dx * dx);
    f.K(n - 1) = -f.h_rr(n - 1) / h(n - 1);
  }
  f.intK = cumulative_trapezoid(s.rho, f.K);
  return f;
}

Eigen::ArrayXd polar_flow_rhs(const FlowState& s) {
  validate_flow_state(s);
  const FlowFields f = flow_fields(s);
  Eigen::ArrayXd r = f.h_rr + f.h_r * f.intK;
  r(0) = 0.0;
  if (s.closed) r(r.size() - 1) = f.h_r(r.size() - 1) * f.intK(r.size() - 1);
  return r;
}

MappedRates mapped_flow_rates(const FlowState& s) {
  if (!s.closed) throw Error(Errc::NotClosed, "mapped rates need two tips");
  validate_flow_state(s);
  const FlowFields f = flow_fields(s);
  const Eigen::Index n = s.h.size();
  const double L = s.length();
  const double IL = f.intK(n - 1);
  MappedRates m;
  m.dh = f.h_rr + f.h_r * (f.intK - (s.rho / L) * IL);
  m.dh(0) = 0.0;
  m.dh(n - 1) = 0.0;
  m.dlength = -IL;
  return m;
}

Eigen::ArrayXd soliton_residual(const FlowState& s) {
  if (!s.closed) return polar_flow_rhs(s);
  const MappedRates m = mapped_flow_rates(s);
  return m.dh - (m.dlength / s.length()) * s.h;
}

FlowDiagnostics diagnose(const FlowState& s) {
  const FlowFields f = flow_fields(s);
  const double dx = s.rho(1) - s.rho(0);
  FlowDiagnostics d;
  d.area = 2 * kPi * trapezoid(s.rho, s.h);
  d.avg_curvature = 2.0 * 2 * kPi * trapezoid(s.rho, (f.K * s.h).eval()) / d.area;
  d.max_abs_K = f.K.abs().maxCoeff();
  d.tip_slope = tip_slope(s.h, dx, true);
  if (s.closed) d.tip_slope_right = tip_slope(s.h, dx, false);
  d.length = s.length();
  return d;
}

SolitonDefect soliton_defect(const FlowState& s, double chi_hat) {
  if (!s.closed) throw Error(Errc::NotClosed, "soliton defect needs a closed profile");
  if (!(chi_hat > 0)) throw Error(Errc::InvalidArgument, "chi_hat must be positive");
  validate_flow_state(s);
  const FlowFields fl = flow_fields(s);
  const Eigen::Index n = s.h.size();
  const double dx = s.rho(1) - s.rho(0);
  const Eigen::ArrayXd R = 2.0 * fl.K;
  const double area_w = trapezoid(s.rho, s.h);
  const double rbar = trapezoid(s.rho, (R * s.h).eval()) / area_w;
  const Eigen::ArrayXd acc = cumulative_trapezoid(s.rho, ((R - rbar) * s.h).eval());
  Eigen::ArrayXd fp = Eigen::ArrayXd::Zero(n);
  fp.segment(1, n - 2) = acc.segment(1, n - 2) / s.h.segment(1, n - 2);
  SolitonDefect d;
  d.f = cumulative_trapezoid(s.rho, fp);
  d.lambda = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    const double fpp = (fp(i + 1) - fp(i - 1)) / (2 * dx);
    d.lambda(i) = 0.5 * (fpp - fl.h_r(i) / s.h(i) * fp(i));
  }
  d.max_M2 = 2.0 * d.lambda.square().maxCoeff();
  d.time_to_extinction = 2 * kPi * area_w / (4 * kPi * chi_hat);
  return d;
}

FlowHistory run_polar_flow(const RadialProfile& init, double T, const FlowOptions& opt) {
  return run_polar_flow(make_flow_state(init), T, opt);
}

FlowHistory run_polar_flow(FlowState s, double T, const FlowOptions& opt) {
  validate_flow_state(s);
  if (!(T >= 0)) throw Error(Errc::InvalidArgument, "T must be non-negative");
  if (!(opt.cfl > 0 && opt.cfl <= 0.5)) throw Error(Errc::StabilityViolation, "cfl must lie in (0, 1/2]");
  const Eigen::Index n = s.h.size();
  const Eigen::ArrayXd xi = uniform_grid(0.0, 1.0, n);
  FlowHistory hist;
  s.diag = diagnose(s);
  const double A0 = s.diag.area;

  std::vector<double> stops = opt.sample_times;
  if (stops.empty())
    for (std::size_t k = 1; k <= opt.slices; ++k) stops.push_back(T * double(k) / double(opt.slices));
  std::sort(stops.begin(), stops.end());
  std::size_t next_stop = 0;

  auto record = [&](const FlowState& st) {
    DiagnosticsRow row{st.time, st.diag.area, st.diag.avg_curvature, st.diag.max_abs_K, st.diag.tip_slope,
                       st.diag.tip_slope_right.value_or(nan), st.diag.length, nan, nan};
    if (opt.defect_chi_hat && st.closed) {
      const SolitonDefect d = soliton_defect(st, *opt.defect_chi_hat);
      row.defect = d.max_M2;
      row.scaled_defect = d.scaled();
    }
    hist.series.push_back(row);
    if (opt.observer) opt.observer(st);
  };
  record(s);
  hist.slices.push_back(s);

  while (s.time < T) {
    const double dx = s.rho(1) - s.rho(0);
    double dt = opt.cfl * dx * dx;
    if (opt.fixed_dt) {
      dt = *opt.fixed_dt;
      if (dt > 0.5 * dx * dx) throw Error(Errc::StabilityViolation, "time step above the explicit limit");
    }
    while (next_stop < stops.size() && stops[next_stop] <= s.time) ++next_stop;
    bool at_stop = false;
    const double target = next_stop < stops.size() ? std::min(stops[next_stop], T) : T;
    if (s.time + dt >= target) {
      dt = target - s.time;
      at_stop = true;
    }
    if (s.closed) {
      const MappedRates m = mapped_flow_rates(s);
      const double L = s.length() + dt * m.dlength;
      s.h += dt * m.dh;
      s.rho = L * xi;
    } else {
      s.h += dt * polar_flow_rhs(s);
    }
    s.time = at_stop ? target : s.time + dt;
    ++hist.steps;
    if (!std::isfinite(s.h.sum()) || !(s.length() > 0))
      throw Error(Errc::StabilityViolation, "non-finite state at tau=" + std::to_string(s.time));
    validate_flow_state(s);
    s.diag = diagnose(s);
    record(s);
    if (at_stop) hist.slices.push_back(s);
    if (s.diag.max_abs_K > opt.curvature_ceiling || s.diag.area < opt.area_floor * A0) {
      hist.status = FlowStatus::SingularityDetected;
      hist.reason = s.diag.max_abs_K > opt.curvature_ceiling ? "curvature ceiling" : "area floor";
      if (!at_stop) hist.slices.push_back(s);
      break;
    }
  }
  hist.final_time = s.time;
  return hist;
}

double angle_drift(const FlowHistory& h) {
  if (h.slices.empty()) return 0.0;
  const FlowState& s0 = h.slices.front();
  const double t0 = s0.alpha / (2 * kPi);
  double m = 0.0;
  for (const auto& r : h.series) {
    m = std::max(m, std::abs(r.tip_slope - t0));
    if (s0.alpha_right) m = std::max(m, std::abs(r.tip_slope_right - *s0.alpha_right / (2 * kPi)));
  }
  return m;
}

}  // namespace ricci
