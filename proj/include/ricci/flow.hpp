#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ricci/geom.hpp"

namespace ricci {

struct FlowDiagnostics {
  double area = 0;
  double avg_curvature = 0;  // mean scalar curvature R = 2K
  double max_abs_K = 0;
  double tip_slope = 0;
  std::optional<double> tip_slope_right;
  double length = 0;
};

// Polar profile on a uniform grid. Closed profiles (h = 0 at both ends) are evolved on the
// mapped grid rho = L xi; open ones keep a fixed grid with the outer value held.
struct FlowState {
  Eigen::ArrayXd rho;
  Eigen::ArrayXd h;
  double time = 0;
  double alpha = 0;
  std::optional<double> alpha_right;
  bool closed = false;
  FlowDiagnostics diag;

  double length() const { return rho(rho.size() - 1); }
};

FlowState make_flow_state(const RadialProfile& p, std::size_t n = 512);
void validate_flow_state(const FlowState& s);

struct FlowFields {
  Eigen::ArrayXd h_r, h_rr, K, intK;
};
FlowFields flow_fields(const FlowState& s);

// dh/dtau at fixed rho
Eigen::ArrayXd polar_flow_rhs(const FlowState& s);

struct MappedRates {
  Eigen::ArrayXd dh;  // at fixed xi = rho / L
  double dlength = 0;
};
MappedRates mapped_flow_rates(const FlowState& s);

// rhs with the homothetic part removed: zero on solitons
Eigen::ArrayXd soliton_residual(const FlowState& s);

FlowDiagnostics diagnose(const FlowState& s);

struct SolitonDefect {
  Eigen::ArrayXd f;
  Eigen::ArrayXd lambda;
  double max_M2 = 0;
  double time_to_extinction = 0;  // A / (4 pi chi_hat)
  double scaled() const { return time_to_extinction * time_to_extinction * max_M2; }
};
SolitonDefect soliton_defect(const FlowState& s, double chi_hat);

struct FlowOptions {
  double cfl = 0.25;
  std::optional<double> fixed_dt;
  double curvature_ceiling = 1e4;
  double area_floor = 1e-4;  // relative to the initial area
  std::size_t slices = 40;
  std::vector<double> sample_times;
  std::optional<double> defect_chi_hat;
  std::function<void(const FlowState&)> observer;
};

enum class FlowStatus { Completed, SingularityDetected };

struct DiagnosticsRow {
  double tau, area, avg_curvature, max_abs_K, tip_slope, tip_slope_right, length, defect, scaled_defect;
};

struct FlowHistory {
  std::vector<FlowState> slices;
  std::vector<DiagnosticsRow> series;
  FlowStatus status = FlowStatus::Completed;
  std::string reason;
  double final_time = 0;
  std::size_t steps = 0;
};

FlowHistory run_polar_flow(const RadialProfile& init, double T, const FlowOptions& opt = {});
FlowHistory run_polar_flow(FlowState s, double T, const FlowOptions& opt = {});

// max deviation of the tip slopes from alpha / 2 pi over the recorded series
double angle_drift(const FlowHistory& h);

}  // namespace ricci
