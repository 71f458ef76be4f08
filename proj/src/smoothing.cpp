#include "ricci/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "ricci/numerics.hpp"
#include "ricci/soliton.hpp"

namespace ricci {

double truncation_psi(double s) {
  if (s <= -1.0) return s;
  if (s >= 1.0) return 0.0;
  const double s2 = s * s;
  return s2 * s2 / 16.0 - 3.0 * s2 / 8.0 + 0.5 * s - 3.0 / 16.0;
}

double truncation_psi_d1(double s) {
  if (s <= -1.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 0.25 * (s - 1.0) * (s - 1.0) * (s + 2.0);
}

double truncation_psi_d2(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return -0.75 * (1.0 - s * s);
}

Eigen::ArrayXd log_grid(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0 && r_max > r_min)) throw Error(Errc::InvalidArgument, "need 0 < r_min < r_max");
  if (n < 4) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  return uniform_grid(std::log(r_min), std::log(r_max), n).exp();
}

SmoothFlowState sample_conformal(const ConformalProfile& c, const Eigen::ArrayXd& r) {
  SmoothFlowState s;
  s.r = r;
  s.u = r.unaryExpr([&](double x) { return c.u(x); });
  s.beta = c.beta;
  return s;
}

SmoothFlowState truncate_cone(const ConformalProfile& c, double k, const Eigen::ArrayXd& r) {
  SmoothFlowState s = sample_conformal(c, r);
  s.u = s.u.unaryExpr([k](double u0) { return truncation_psi(u0 - k) + k; });
  s.k_level = k;
  return s;
}

namespace {
// Thomas algorithm, sub/diag/sup of equal length, sub(0) and sup(n-1) unused
Eigen::ArrayXd solve_tridiagonal(Eigen::ArrayXd sub, Eigen::ArrayXd diag, Eigen::ArrayXd sup, Eigen::ArrayXd rhs) {
  const Eigen::Index n = diag.size();
  for (Eigen::Index i = 1; i < n; ++i) {
    const double m = sub(i) / diag(i - 1);
    diag(i) -= m * sup(i - 1);
    rhs(i) -= m * rhs(i - 1);
  }
  Eigen::ArrayXd x(n);
  x(n - 1) = rhs(n - 1) / diag(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = (rhs(i) - sup(i) * x(i + 1)) / diag(i);
  return x;
}

// solves (1/2) e^{2s} e^{2u} - c u_ss = rhs for the interior unknowns, c = weight dt / ds^2,
// starting from u; returns false if Newton stalls
bool implicit_solve(const Eigen::ArrayXd& s, const Eigen::ArrayXd& rhs, double ub, double c,
                    const ConformalFlowOptions& opt, Eigen::ArrayXd& u) {
  const Eigen::Index n = s.size();
  const Eigen::Index m = n - 1;  // unknowns 0..m-1, node m is Dirichlet
  const Eigen::ArrayXd w = 0.5 * (2.0 * s.head(m)).exp();
  u(m) = ub;
  for (int it = 0; it < opt.newton_max; ++it) {
    const Eigen::ArrayXd e2u = (2.0 * u.head(m)).exp();
    Eigen::ArrayXd F(m), sub(m), diag(m), sup(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double left = i == 0 ? u(1) : u(i - 1);
      F(i) = w(i) * e2u(i) - rhs(i) - c * (u(i + 1) - 2.0 * u(i) + left);
      diag(i) = 2.0 * w(i) * e2u(i) + 2.0 * c;
      sub(i) = -c;
      sup(i) = i == 0 ? -2.0 * c : -c;
    }
    sup(m - 1) = 0.0;  // coupling to the Dirichlet node is already in F
    const Eigen::ArrayXd du = solve_tridiagonal(sub, diag, sup, -F);
    u.head(m) += du;
    if (!std::isfinite(du.sum())) return false;
    if (du.abs().maxCoeff() <= opt.newton_tol * std::max(1.0, u.head(m).abs().maxCoeff())) return true;
  }
  return false;
}

// u_ss with the Neumann ghost at node 0, interior nodes only
Eigen::ArrayXd second_difference(const Eigen::ArrayXd& u, double ds) {
  const Eigen::Index m = u.size() - 1;
  Eigen::ArrayXd d(m);
  for (Eigen::Index i = 0; i < m; ++i) d(i) = (u(i + 1) - 2.0 * u(i) + (i == 0 ? u(1) : u(i - 1))) / (ds * ds);
  return d;
}

// one step of (1/2) e^{2s} (e^{2u})_t = u_ss from t to t + dt
bool implicit_step(const Eigen::ArrayXd& s, const Eigen::ArrayXd& u_old, double ub_mid, double ub, double dt,
                   double ds, const ConformalFlowOptions& opt, Eigen::ArrayXd& u) {
  const Eigen::Index m = s.size() - 1;
  const Eigen::ArrayXd mass_old = 0.5 * (2.0 * (s.head(m) + u_old.head(m))).exp();
  u = u_old;
  if (opt.scheme == ConformalScheme::BackwardEuler) return implicit_solve(s, mass_old, ub, dt / (ds * ds), opt, u);
  // TR-BDF2: trapezoid to t + g dt, then BDF2 through the three levels
  const double g = 2.0 - std::sqrt(2.0);
  const Eigen::ArrayXd rhs1 = mass_old + 0.5 * g * dt * second_difference(u_old, ds);
  if (!implicit_solve(s, rhs1, ub_mid, 0.5 * g * dt / (ds * ds), opt, u)) return false;
  const Eigen::ArrayXd mass_mid = 0.5 * (2.0 * (s.head(m) + u.head(m))).exp();
  const Eigen::ArrayXd rhs2 = (mass_mid - (1.0 - g) * (1.0 - g) * mass_old) / (g * (2.0 - g));
  return implicit_solve(s, rhs2, ub, (1.0 - g) / (2.0 - g) * dt / (ds * ds), opt, u);
}
}  // namespace

ConformalHistory run_conformal_flow(const SmoothFlowState& init, double T, const ConformalFlowOptions& opt) {
  const Eigen::Index n = init.r.size();
  if (n < 4 || init.u.size() != n) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  if (!(T >= 0)) throw Error(Errc::InvalidArgument, "T must be non-negative");
  const Eigen::ArrayXd s = init.r.log();
  const double ds = (s(n - 1) - s(0)) / double(n - 1);
  for (Eigen::Index i = 1; i < n; ++i)
    if (std::abs(s(i) - s(i - 1) - ds) > 1e-8 * ds) throw Error(Errc::InvalidArgument, "grid must be logarithmic");

  std::vector<double> stops = opt.sample_times;
  std::sort(stops.begin(), stops.end());
  if (stops.empty() || stops.back() < T) stops.push_back(T);

  ConformalHistory hist;
  SmoothFlowState cur = init;
  const double u_outer0 = init.u(n - 1);
  std::size_t next = 0;
  while (next < stops.size() && stops[next] <= cur.t) {
    if (stops[next] == cur.t) hist.samples.push_back(cur);
    ++next;
  }
  Eigen::ArrayXd u_new;
  while (next < stops.size()) {
    double dt = std::clamp(opt.theta * cur.t, opt.dt_initial, opt.dt_max);
    const double target = stops[next];
    bool hit = false;
    if (cur.t + dt >= target * (1.0 - 1e-14)) {
      dt = target - cur.t;
      hit = true;
    }
    const double t_new = hit ? target : cur.t + dt;
    auto outer = [&](double t) { return opt.outer_value ? opt.outer_value(t) : u_outer0; };
    const double g = 2.0 - std::sqrt(2.0);
    if (!implicit_step(s, cur.u, outer(cur.t + g * dt), outer(t_new), dt, ds, opt, u_new)) {
      // retry with a split step
      const double half = 0.5 * dt;
      Eigen::ArrayXd mid;
      if (half < 1e-18 || !implicit_step(s, cur.u, outer(cur.t + g * half), outer(cur.t + half), half, ds, opt, mid) ||
          !implicit_step(s, mid, outer(cur.t + half + g * half), outer(t_new), half, ds, opt, u_new))
        throw Error(Errc::StabilityViolation, "Newton iteration failed at t=" + std::to_string(cur.t));
    }
    cur.u = u_new;
    cur.t = t_new;
    ++hist.steps;
    if (hit) {
      hist.samples.push_back(cur);
      ++next;
    }
  }
  return hist;
}

double barrier_rate(double beta) { return beta / (2.0 * (beta + 1.0)); }

double barrier_lambda(double t, double beta, double C) {
  if (!(beta > -1.0 && beta < 0.0)) throw Error(Errc::BetaOutOfRange, "beta must lie in (-1, 0)");
  if (!(t >= 0)) throw Error(Errc::InvalidArgument, "t must be non-negative");
  const double base = -t * std::exp(-2.0 * C) / (4.0 * beta * (beta + 1.0));
  return std::pow(base, 1.0 / (2.0 * (beta + 1.0)));
}

double cone_barrier_constant(double beta) {
  if (!(beta > -1.0 && beta <= 0.0)) throw Error(Errc::BetaOutOfRange, "beta must lie in (-1, 0]");
  const double b1 = beta + 1.0;
  const double a = 1.0 / (2.0 * b1);
  // far field h ~ b1 (rho - offset) with a Gaussian-fast approach, P = 16 is well past it
  const double P = 16.0;
  IntegrateOptions io;
  io.ode.rtol = 1e-12;
  io.ode.atol = 1e-14;
  const Trajectory t = integrate_soliton({1, a, -1.0}, Eigen::Vector2d(0.0, -1.0), 0.0, P, io);
  // int_0^P (1/|h| - 1/sigma) by 4-point Gauss-Legendre on a fine uniform partition
  static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  const int cells = 4000;
  const double hcell = P / cells;
  double integral = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double mid = (c + 0.5) * hcell;
    for (int q = 0; q < 4; ++q) {
      const double sg = mid + 0.5 * hcell * gx[q];
      integral += 0.5 * hcell * gw[q] * (1.0 / std::abs(t.at(sg)(0)) - 1.0 / sg);
    }
  }
  const double hP = std::abs(t.y.back()(0));
  return std::log(P) + integral - std::log(hP / b1) / b1;
}

FamilyResult run_truncation_family(double beta, std::vector<double> k, double T, const FamilyOptions& opt) {
  if (!(beta > -1.0 && beta < 0.0)) throw Error(Errc::BetaOutOfRange, "beta must lie in (-1, 0)");
  if (k.empty()) throw Error(Errc::InvalidArgument, "no truncation levels");
  if (!(T > opt.t_first && opt.t_first > 0)) throw Error(Errc::InvalidArgument, "need 0 < t_first < T");
  std::sort(k.begin(), k.end());
  const ConformalProfile cone = canonical_cone_metric(MetricKind::Euclidean, beta);
  double r_min = opt.r_min;
  if (r_min <= 0) {
    // u0(r_k) = k  <=>  r_k = exp((k - ln(beta+1)) / beta)
    r_min = 1e-3 * std::exp((k.back() - std::log(beta + 1.0)) / beta);
  }
  FamilyResult res;
  res.beta = beta;
  res.k = k;
  res.r = log_grid(r_min, opt.r_max, opt.nodes);
  const std::size_t ns = std::max<std::size_t>(opt.samples, 2);
  for (std::size_t i = 0; i < ns; ++i)
    res.times.push_back(opt.t_first * std::pow(T / opt.t_first, double(i) / double(ns - 1)));
  res.times.back() = T;

  ConformalFlowOptions fo = opt.flow;
  fo.sample_times = res.times;
  std::vector<std::future<ConformalHistory>> fut;
  for (double kk : k) {
    SmoothFlowState s0 = truncate_cone(cone, kk, res.r);
    fut.push_back(std::async(opt.jobs > 1 ? std::launch::async : std::launch::deferred,
                             [s0, T, fo] { return run_conformal_flow(s0, T, fo); }));
  }
  for (auto& f : fut) res.runs.push_back(f.get());

  res.barrier_constant = cone_barrier_constant(beta);
  res.rate = barrier_rate(beta);
  res.barrier_margin = std::numeric_limits<double>::infinity();
  res.monotone_violation = -std::numeric_limits<double>::infinity();
  res.fitted_B = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k.size(); ++j) {
    std::vector<double> sup;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
      const double m = res.runs[j].samples[i].u.maxCoeff();
      sup.push_back(m);
      res.barrier_margin =
          std::min(res.barrier_margin, res.barrier_constant + res.rate * std::log(res.times[i]) - m);
      if (j + 1 < k.size())
        res.monotone_violation = std::max(
            res.monotone_violation, (res.runs[j].samples[i].u - res.runs[j + 1].samples[i].u).maxCoeff());
    }
    res.fitted_B = std::max(res.fitted_B, sup.front() - res.rate * std::log(res.times.front()));
    res.sup_u.push_back(std::move(sup));
  }
  return res;
}

Eigen::ArrayXd conformal_curvature(const SmoothFlowState& st) {
  const Eigen::Index n = st.r.size();
  const Eigen::ArrayXd s = st.r.log();
  const double ds = s(1) - s(0);
  Eigen::ArrayXd K = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double left = i == 0 ? st.u(1) : st.u(i - 1);
    const double uss = (st.u(i + 1) - 2.0 * st.u(i) + left) / (ds * ds);
    K(i) = -std::exp(-2.0 * (st.u(i) + s(i))) * uss;
  }
  K(n - 1) = K(n - 2);
  return K;
}

}  // namespace ricci
