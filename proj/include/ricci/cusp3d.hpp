#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ricci/error.hpp"

namespace ricci {

// dH/dr = HF - 2H^2 + 1/2, dF/dr = 2HF - 2H^2 + 1/2
template <typename S>
Eigen::Matrix<S, 2, 1> cusp_rhs(const Eigen::Matrix<S, 2, 1>& y) {
  const S H = y(0), F = y(1);
  return Eigen::Matrix<S, 2, 1>(H * F - S(2) * H * H + S(0.5), S(2) * H * F - S(2) * H * H + S(0.5));
}

struct Linearization {
  Eigen::Vector2d point;
  Eigen::Matrix2d jacobian;
  Eigen::Vector2d eigenvalues;   // ascending
  Eigen::Matrix2d eigenvectors;  // columns, first component 1
};

Linearization linearize(const Eigen::Vector2d& point);

struct CuspEvent {
  std::string kind;
  double r, H, F;
};

// Separatrix from the saddle (1/2, 0) into H < 1/2, F < 0. Integrated in (H, G) with
// G = H^2 - HF - 1/2 = sec_rx, which keeps the tiny tail curvature resolvable.
struct CuspTrajectory {
  std::vector<double> r, H, F, G;
  std::vector<double> r_mid, H_mid, F_mid;  // step midpoints for Simpson quadrature
  std::vector<CuspEvent> events;
  double delta = 0;
  double r_shift = 0;
};

struct ShootOptions {
  double delta = 1e-6;
  double rtol = 1e-10;
  double atol = 1e-30;
  double H_stop = 1e-4;
  double r_max = 1e8;
  double back_factor = 0.1;  // backward leg stops at distance back_factor * delta from the saddle
};

CuspTrajectory shoot_separatrix(const ShootOptions& opt = {});

struct CuspMetric {
  Eigen::ArrayXd r, H, F, h, f, sec_xy, sec_rx, sec_rx_alt;
};
CuspMetric build_metric(const CuspTrajectory& t);

struct CuspAsymptotics {
  double cusp_ratio;        // h / (r/2) at the backward end
  double wide_f_ratio;      // f / (-r^2/4) at the forward end
  double wide_Hr_max;       // max |H r - 1| over the last decade
  double wide_HF_max;       // max |H F + 1/2|
  double wide_Fp_max;       // max |F' + 1/2|
  double sec_min, sec_max;  // over both sectional curvatures
};
CuspAsymptotics cusp_asymptotics(const CuspMetric& m);

}  // namespace ricci
