#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ricci/error.hpp"

namespace ricci {

// Analytic profiles h(rho) with exact derivatives.
struct ClosedForm {
  enum class Kind { Sine, FlatCone, Sinh, Tanh, SineSeries };
  Kind kind = Kind::Sine;
  // Sine/Sinh/Tanh: h = c * f(k rho); FlatCone: h = c rho; SineSeries: h = sum c_j sin(j rho)
  std::vector<double> params;

  static ClosedForm sphere(double c = 1.0, double k = 1.0) { return {Kind::Sine, {c, k}}; }
  static ClosedForm flat_cone(double slope) { return {Kind::FlatCone, {slope}}; }
  static ClosedForm hyperbolic(double c = 1.0, double k = 1.0) { return {Kind::Sinh, {c, k}}; }
  // smooth steady soliton h = sqrt(2/a) tanh(sqrt(a/2) rho)
  static ClosedForm cigar(double a = 1.0);
  static ClosedForm sine_series(std::vector<double> coeffs) { return {Kind::SineSeries, std::move(coeffs)}; }

  double value(double rho) const;
  double d1(double rho) const;
  double d2(double rho) const;
};

struct RadialProfile {
  Eigen::ArrayXd rho;
  Eigen::ArrayXd h;
  std::optional<double> angle0;
  std::optional<double> angleA;
  std::optional<ClosedForm> closed_form;

  static RadialProfile sample(const ClosedForm& cf, double rho0, double rho1, std::size_t n);
  std::size_t size() const { return static_cast<std::size_t>(rho.size()); }
  // throws GridTooCoarse / NonPositiveProfile
  void validate() const;
};

struct ConformalProfile {
  double beta = 0.0;
  std::function<double(double)> a;  // bounded smooth part, u = a + beta ln r
  double r_max = std::numeric_limits<double>::infinity();
  std::string name;

  double u(double r) const { return a(r) + beta * std::log(r); }
};

struct ConicEuler {
  int chi = 2;
  std::vector<double> betas;
};

enum class MetricKind { Euclidean, Spherical, Hyperbolic, Cusp };
enum class Admissibility { Admissible, NotAdmissible, BoundaryCase };

// K = -h''/h; tips by even extrapolation from the two nearest interior nodes
Eigen::ArrayXd curvature(const RadialProfile& p);
Eigen::ArrayXd profile_derivative(const RadialProfile& p, int order);

struct ConeAngles {
  std::optional<double> alpha0;
  std::optional<double> alphaA;
};
ConeAngles cone_angles(const RadialProfile& p);

double gauss_bonnet(const RadialProfile& p);
double conic_euler(const ConicEuler& c);
Admissibility troyanov_admissible(const ConicEuler& c);

ConformalProfile canonical_cone_metric(MetricKind kind, double beta);
RadialProfile conformal_to_polar(const ConformalProfile& c, double r_max, std::size_t n);

struct Embedding {
  Eigen::ArrayXd z;
  Eigen::ArrayXd h;
  Eigen::ArrayXd rho;
};
Embedding embed_profile(const RadialProfile& p);

const char* to_string(Admissibility a);
const char* to_string(MetricKind k);

}  // namespace ricci
