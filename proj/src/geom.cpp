#include "ricci/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ricci/numerics.hpp"

namespace ricci {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_tip(const Eigen::ArrayXd& h, Eigen::Index i) {
  const double scale = h.abs().maxCoeff();
  return std::abs(h(i)) <= 1e-12 * std::max(scale, 1e-300);
}
}  // namespace

ClosedForm ClosedForm::cigar(double a) { return {Kind::Tanh, {std::sqrt(2.0 / a), std::sqrt(a / 2.0)}}; }

double ClosedForm::value(double rho) const {
  switch (kind) {
    case Kind::Sine: return params[0] * std::sin(params[1] * rho);
    case Kind::FlatCone: return params[0] * rho;
    case Kind::Sinh: return params[0] * std::sinh(params[1] * rho);
    case Kind::Tanh: return params[0] * std::tanh(params[1] * rho);
    case Kind::SineSeries: {
      double s = 0;
      for (std::size_t j = 0; j < params.size(); ++j) s += params[j] * std::sin((j + 1.0) * rho);
      return s;
    }
  }
  return 0;
}

double ClosedForm::d1(double rho) const {
  switch (kind) {
    case Kind::Sine: return params[0] * params[1] * std::cos(params[1] * rho);
    case Kind::FlatCone: return params[0];
    case Kind::Sinh: return params[0] * params[1] * std::cosh(params[1] * rho);
    case Kind::Tanh: {
      const double c = std::cosh(params[1] * rho);
      return params[0] * params[1] / (c * c);
    }
    case Kind::SineSeries: {
      double s = 0;
      for (std::size_t j = 0; j < params.size(); ++j) s += (j + 1.0) * params[j] * std::cos((j + 1.0) * rho);
      return s;
    }
  }
  return 0;
}

double ClosedForm::d2(double rho) const {
  switch (kind) {
    case Kind::Sine: return -params[0] * params[1] * params[1] * std::sin(params[1] * rho);
    case Kind::FlatCone: return 0.0;
    case Kind::Sinh: return params[0] * params[1] * params[1] * std::sinh(params[1] * rho);
    case Kind::Tanh: {
      const double x = params[1] * rho;
      const double c = std::cosh(x);
      return -2.0 * params[0] * params[1] * params[1] * std::tanh(x) / (c * c);
    }
    case Kind::SineSeries: {
      double s = 0;
      for (std::size_t j = 0; j < params.size(); ++j) {
        const double k = j + 1.0;
        s -= k * k * params[j] * std::sin(k * rho);
      }
      return s;
    }
  }
  return 0;
}

RadialProfile RadialProfile::sample(const ClosedForm& cf, double rho0, double rho1, std::size_t n) {
  if (n < 4) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  RadialProfile p;
  p.rho = uniform_grid(rho0, rho1, n);
  p.h = p.rho.unaryExpr([&](double r) { return cf.value(r); });
  // exact zeros at the ends where the closed form vanishes analytically
  for (Eigen::Index i : {Eigen::Index(0), p.rho.size() - 1})
    if (std::abs(p.h(i)) < 1e-14) p.h(i) = 0.0;
  p.closed_form = cf;
  return p;
}

void RadialProfile::validate() const {
  if (rho.size() < 4 || rho.size() != h.size()) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  for (Eigen::Index i = 1; i < rho.size(); ++i)
    if (!(rho(i) > rho(i - 1))) throw Error(Errc::InvalidArgument, "grid not increasing", i);
  for (Eigen::Index i = 1; i + 1 < h.size(); ++i)
    if (!(h(i) > 0)) throw Error(Errc::NonPositiveProfile, "interior h must be positive", i);
  if (h(0) < 0 || h(h.size() - 1) < 0) throw Error(Errc::NonPositiveProfile, "negative endpoint");
}

Eigen::ArrayXd profile_derivative(const RadialProfile& p, int order) {
  if (p.closed_form) {
    const ClosedForm& cf = *p.closed_form;
    return p.rho.unaryExpr([&](double r) { return order == 1 ? cf.d1(r) : cf.d2(r); });
  }
  return derivative(p.rho, p.h, order);
}

Eigen::ArrayXd curvature(const RadialProfile& p) {
  p.validate();
  const Eigen::Index n = p.rho.size();
  const Eigen::ArrayXd h2 = profile_derivative(p, 2);
  Eigen::ArrayXd K(n);
  for (Eigen::Index i = 0; i < n; ++i) K(i) = is_tip(p.h, i) ? 0.0 : -h2(i) / p.h(i);
  if (is_tip(p.h, 0)) K(0) = even_extrapolate(p.rho(1) - p.rho(0), K(1), p.rho(2) - p.rho(0), K(2));
  if (is_tip(p.h, n - 1))
    K(n - 1) = even_extrapolate(p.rho(n - 1) - p.rho(n - 2), K(n - 2), p.rho(n - 1) - p.rho(n - 3), K(n - 3));
  return K;
}

ConeAngles cone_angles(const RadialProfile& p) {
  p.validate();
  const Eigen::Index n = p.rho.size();
  ConeAngles out;
  auto fit = [&](bool left) {
    double d[3], v[3];
    for (int i = 0; i < 3; ++i) {
      const Eigen::Index j = left ? i + 1 : n - 2 - i;
      d[i] = left ? p.rho(j) - p.rho(0) : p.rho(n - 1) - p.rho(j);
      v[i] = p.h(j);
    }
    return odd_slope_fit(d, v);
  };
  if (is_tip(p.h, 0))
    out.alpha0 = kTwoPi * (p.closed_form ? std::abs(p.closed_form->d1(p.rho(0))) : fit(true));
  if (is_tip(p.h, n - 1))
    out.alphaA = kTwoPi * (p.closed_form ? std::abs(p.closed_form->d1(p.rho(n - 1))) : fit(false));
  if (!out.alpha0 && !out.alphaA) throw Error(Errc::NoTip, "profile has no zero endpoint");
  return out;
}

double gauss_bonnet(const RadialProfile& p) {
  const Eigen::ArrayXd K = curvature(p);
  return kTwoPi * trapezoid(p.rho, (K * p.h).eval());
}

double conic_euler(const ConicEuler& c) {
  double s = c.chi;
  for (double b : c.betas) {
    if (!(b > -1.0 && b <= 0.0)) throw Error(Errc::BetaOutOfRange, "cone parameters must lie in (-1, 0]");
    s += b;
  }
  return s;
}

Admissibility troyanov_admissible(const ConicEuler& c) {
  if (conic_euler(c) <= 0) return Admissibility::Admissible;
  const double total = std::accumulate(c.betas.begin(), c.betas.end(), 0.0);
  constexpr double tol = 1e-12;
  bool boundary = false;
  for (double b : c.betas) {
    const double others = total - b;
    if (b < others - tol) return Admissibility::NotAdmissible;
    if (b <= others + tol) boundary = true;
  }
  return boundary ? Admissibility::BoundaryCase : Admissibility::Admissible;
}

ConformalProfile canonical_cone_metric(MetricKind kind, double beta) {
  ConformalProfile c;
  if (kind == MetricKind::Cusp) {
    c.beta = -1.0;
    c.a = [](double r) { return -std::log(std::abs(std::log(r))); };
    c.r_max = 1.0;
    c.name = "cusp";
    return c;
  }
  if (!(beta > -1.0 && beta <= 0.0)) throw Error(Errc::BetaOutOfRange, "beta must lie in (-1, 0]");
  c.beta = beta;
  const double e = 2.0 * (beta + 1.0);
  switch (kind) {
    case MetricKind::Euclidean:
      c.a = [beta](double) { return std::log(beta + 1.0); };
      c.name = "euclidean";
      break;
    case MetricKind::Spherical:
      c.a = [e](double r) { return std::log(e) - std::log1p(std::pow(r, e)); };
      c.name = "spherical";
      break;
    case MetricKind::Hyperbolic:
      c.a = [e](double r) { return std::log(e) - std::log(std::abs(1.0 - std::pow(r, e))); };
      c.r_max = 1.0;
      c.name = "hyperbolic";
      break;
    case MetricKind::Cusp: break;
  }
  return c;
}

RadialProfile conformal_to_polar(const ConformalProfile& c, double r_max, std::size_t n) {
  if (!(c.beta > -1.0)) throw Error(Errc::NonIntegrableFactor, "e^u is not integrable at r = 0");
  if (n < 4) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  if (!(r_max > 0) || r_max >= c.r_max) throw Error(Errc::InvalidArgument, "r_max outside the chart");
  // substitution s = r^(beta+1) turns rho = int e^a r^beta dr into a regular integral
  const double b1 = c.beta + 1.0;
  const Eigen::ArrayXd s = uniform_grid(0.0, std::pow(r_max, b1), n);
  const Eigen::ArrayXd r = s.pow(1.0 / b1);
  const Eigen::ArrayXd ea = r.unaryExpr([&](double x) { return std::exp(c.a(x)); });
  RadialProfile p;
  p.rho = cumulative_trapezoid(s, (ea / b1).eval());
  p.h = ea * s;
  p.angle0 = kTwoPi * b1;
  return p;
}

Embedding embed_profile(const RadialProfile& p) {
  p.validate();
  const Eigen::Index n = p.rho.size();
  constexpr double tol = 1e-9;
  if (p.closed_form) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(p.closed_form->d1(p.rho(i))) > 1.0 + tol)
        throw Error(Errc::NotEmbeddable, "|h'| > 1", static_cast<std::size_t>(i));
  }
  Embedding e;
  e.rho = p.rho;
  e.h = p.h;
  e.z = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double dr = p.rho(i) - p.rho(i - 1);
    const double dh = p.h(i) - p.h(i - 1);
    if (std::abs(dh) > dr * (1.0 + tol)) throw Error(Errc::NotEmbeddable, "|h'| > 1", static_cast<std::size_t>(i - 1));
    e.z(i) = e.z(i - 1) + std::sqrt(std::max(0.0, dr * dr - dh * dh));
  }
  return e;
}

const char* to_string(Admissibility a) {
  switch (a) {
    case Admissibility::Admissible: return "Admissible";
    case Admissibility::NotAdmissible: return "NotAdmissible";
    case Admissibility::BoundaryCase: return "BoundaryCase";
  }
  return "?";
}

const char* to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Spherical: return "spherical";
    case MetricKind::Hyperbolic: return "hyperbolic";
    case MetricKind::Cusp: return "cusp";
  }
  return "?";
}

}  // namespace ricci
