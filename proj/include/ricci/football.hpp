#pragma once

#include <optional>
#include <utility>

#include "ricci/soliton.hpp"

namespace ricci {

// roots 0 < y1 < 1 < y2 of |y| = k e^(y-1), 0 < k < 1
std::pair<double, double> positive_roots(double k);
// (1 - y1) / (y2 - 1)
double psi(double k);
double psi_inverse(double ratio);

struct FootballSolution {
  double alpha1 = 0, alpha2 = 0;  // radians
  std::optional<double> k, p, q;  // empty on the spherical branch
  double a = 0;                   // 0 marks the spherical branch
  double A = 0;                   // distance between the tips
  double closure_residual = 0;
  bool spherical = false;
  Trajectory orbit;
};

struct FootballOptions {
  IntegrateOptions integrate;
  double closure_tol = 1e-6;
  double r_max = 200.0;
};

FootballSolution solve_angles(double alpha1, double alpha2, const FootballOptions& opt = {});

// re-integrates at 10x tighter tolerance and returns the closing-slope residual
double verify_orbit(const FootballSolution& s, const FootballOptions& opt = {});

}  // namespace ricci
