#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ricci/geom.hpp"

namespace ricci {

// Conformal factor u on a logarithmic radial grid, metric e^(2u)|dz|^2.
struct SmoothFlowState {
  Eigen::ArrayXd r;
  Eigen::ArrayXd u;
  double t = 0;
  std::optional<double> k_level;
  double beta = 0;
};

// psi(s) = s for s <= -1, 0 for s >= 1, C^2 quartic in between with psi' >= 0, psi'' <= 0
double truncation_psi(double s);
double truncation_psi_d1(double s);
double truncation_psi_d2(double s);

Eigen::ArrayXd log_grid(double r_min, double r_max, std::size_t n);
SmoothFlowState sample_conformal(const ConformalProfile& c, const Eigen::ArrayXd& r);
// u_k = psi(u0 - k) + k
SmoothFlowState truncate_cone(const ConformalProfile& c, double k, const Eigen::ArrayXd& r);

enum class ConformalScheme { BackwardEuler, TrBdf2 };

struct ConformalFlowOptions {
  ConformalScheme scheme = ConformalScheme::TrBdf2;
  double theta = 2e-3;      // dt = theta * t once t exceeds dt_initial / theta
  double dt_initial = 1e-9;
  double dt_max = 1e-2;
  double newton_tol = 1e-13;
  int newton_max = 50;
  std::vector<double> sample_times;
  std::function<double(double)> outer_value;  // Dirichlet data at r_max, default: initial value
};

struct ConformalHistory {
  std::vector<SmoothFlowState> samples;
  std::size_t steps = 0;
};

// u_t = e^(-2u) Lap u, implicit in conservative form (TR-BDF2 or backward Euler); Neumann closure at r_min
ConformalHistory run_conformal_flow(const SmoothFlowState& init, double T, const ConformalFlowOptions& opt = {});

double barrier_lambda(double t, double beta, double C);

// Exact sup-barrier constant of the flat-cone flow: the expanding soliton through (0,-1)
// with a = 1 / (2(beta+1)) is the self-similar limit, sup u = B* + beta/(2(beta+1)) ln t.
double cone_barrier_constant(double beta);
double barrier_rate(double beta);  // beta / (2 (beta + 1))

// Family of truncations u_k of the Euclidean cone with angle 2 pi (beta + 1), all run on the same
// grid and time levels, compared with the exact barrier B* + barrier_rate ln t.
struct FamilyOptions {
  std::size_t nodes = 1200;
  double r_min = 0.0;  // 0: three decades inside the smallest cap
  double r_max = 100.0;
  double t_first = 1e-3;
  std::size_t samples = 20;
  unsigned jobs = 1;
  ConformalFlowOptions flow;
};

struct FamilyResult {
  double beta = 0;
  std::vector<double> k;
  std::vector<double> times;
  std::vector<std::vector<double>> sup_u;  // [k][sample]
  std::vector<ConformalHistory> runs;
  Eigen::ArrayXd r;
  double barrier_constant = 0;
  double rate = 0;
  double fitted_B = 0;            // max_k sup u_k(t_first) - rate ln t_first
  double monotone_violation = 0;  // max over nodes, samples, k of u_k - u_{k+1}
  double barrier_margin = 0;      // min over samples, k of B* + rate ln t - sup u_k
};

FamilyResult run_truncation_family(double beta, std::vector<double> k, double T, const FamilyOptions& opt = {});

// Gaussian curvature -e^(-2u) Lap u on the grid (interior nodes), inner node by the Neumann closure
Eigen::ArrayXd conformal_curvature(const SmoothFlowState& s);

}  // namespace ricci
