#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ricci/geom.hpp"
#include "ricci/ode.hpp"

namespace ricci {

// epsilon = -1 shrinking, 0 steady, +1 expanding
struct SolitonSpec {
  int epsilon = -1;
  double a = 1.0;
  double b = 0.0;
};

// h' = u, u' = (a u + eps/2) h
template <typename S>
Eigen::Matrix<S, 2, 1> soliton_rhs(int epsilon, double a, const Eigen::Matrix<S, 2, 1>& y) {
  Eigen::Matrix<S, 2, 1> d;
  d(0) = y(1);
  d(1) = (S(a) * y(1) + S(0.5 * epsilon)) * y(0);
  return d;
}

enum class EventKind { TipCrossing, IsoclineTouch, BlowUp, AsymptoteReached };

struct SolitonEvent {
  EventKind kind;
  double r;
  double h;
  double u;
};

enum class Termination { ReachedEnd, SecondTip, BlowUp, Asymptote };

struct IntegrateOptions {
  ode::Options ode;
  double blowup = 1e6;
  int stop_at_tip = 0;        // terminate at the n-th zero of h after the start
  bool stop_at_asymptote = false;
  double asymptote_tol = 1e-9;
};

struct Trajectory {
  SolitonSpec spec;
  std::vector<double> r;
  std::vector<Eigen::Vector2d> y;
  std::vector<SolitonEvent> events;
  ode::DenseOutput<2> dense;
  Termination status = Termination::ReachedEnd;

  Eigen::Vector2d at(double rr) const { return dense.empty() ? y.front() : dense(rr); }
  std::size_t size() const { return r.size(); }
  double r_end() const { return r.back(); }
};

Trajectory integrate_soliton(const SolitonSpec& spec, const Eigen::Vector2d& init, double r0, double r1,
                             const IntegrateOptions& opt = {});

enum class Family {
  Cigar,
  ConeCigar,
  AlphaBetaCone,
  BluntCone,
  ExpandGaussianCone,
  CuspedCone,
  Football,
  Teardrop,
  ShrinkGaussianCone,
  UnboundedCurvature,
};

struct Classification {
  Family family;
  std::vector<double> angles;  // radians
  Trajectory trajectory;
};

struct ClassifyOptions {
  IntegrateOptions integrate;
  double r_max = 60.0;
  double slope_tol = 1e-6;
};

Classification classify(int epsilon, double a, double b, const ClassifyOptions& opt = {});
const char* to_string(Family f);
std::string describe(const Classification& c);  // e.g. "AlphaBetaCone alpha=180deg beta=306deg"

// Cumulative potential f = a * int h dr along the samples, f(r0) = 0.
Eigen::ArrayXd potential_along(const Trajectory& t);
Eigen::ArrayXd curvature_along(const Trajectory& t);

// shrinking: v^2 - 2w - ln|2w-1|, expanding: v^2 - 2w + ln|2w+1| with v = ah, w = au;
// steady: a h^2 / 2 - u
double first_integral(int epsilon, double a, double h, double u);

enum class SteadyBranch { Tan, Tanh, Rational };

// Solutions of h' = a h^2 / 2 + C.
template <typename S>
S steady_closed_form(double a, double C, SteadyBranch branch, S r, double D = 0.0) {
  using std::sqrt;
  using std::tan;
  using std::tanh;
  switch (branch) {
    case SteadyBranch::Tan:
      if (!(C > 0)) throw Error(Errc::BranchMismatch, "tan branch needs C > 0");
      return S(sqrt(2.0 * C / a)) * tan(S(sqrt(a * C / 2.0)) * r + S(D));
    case SteadyBranch::Tanh:
      if (!(C < 0)) throw Error(Errc::BranchMismatch, "tanh branch needs C < 0");
      return -S(sqrt(-2.0 * C / a)) * tanh(S(sqrt(-a * C / 2.0)) * r + S(D));
    case SteadyBranch::Rational:
      if (C != 0) throw Error(Errc::BranchMismatch, "rational branch needs C = 0");
      return S(1.0) / (S(D) - S(a / 2.0) * r);
  }
  return S(0);
}

// |h| against arclength from the starting tip, n uniform samples over the whole trajectory
RadialProfile to_radial_profile(const Trajectory& t, std::size_t n);

struct CriticalPoint {
  Eigen::Vector2d point;
  Eigen::Matrix2d jacobian;
  std::vector<std::complex<double>> eigenvalues;
  std::vector<Eigen::Vector2cd> eigenvectors;
  std::string type;  // saddle, center, line
};

struct Isocline {
  std::string name;
  std::string equation;
};

struct PhasePortrait {
  int epsilon;
  double a;
  std::vector<CriticalPoint> critical_points;
  std::vector<Isocline> isoclines;
  std::vector<Trajectory> trajectories;
  std::vector<Trajectory> separatrices;
};

struct PortraitOptions {
  IntegrateOptions integrate;
  double r_span = 8.0;
  double delta = 1e-6;
  unsigned jobs = 1;
};

PhasePortrait phase_portrait(int epsilon, double a, const std::vector<Eigen::Vector2d>& seeds,
                             const PortraitOptions& opt = {});

}  // namespace ricci
