#include "ricci/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ricci/cusp3d.hpp"
#include "ricci/flow.hpp"
#include "ricci/football.hpp"
#include "ricci/io.hpp"
#include "ricci/smoothing.hpp"
#include "ricci/soliton.hpp"

namespace ricci::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {
constexpr double kPi = std::numbers::pi;
double deg2rad(double d) { return d * kPi / 180.0; }
double rad2deg(double r) { return r * 180.0 / kPi; }

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void write_json(const fs::path& p, const json& j) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(Errc::Io, "cannot open " + p.string());
  os << j.dump(2) << "\n";
}

void write_trajectory_csv(const fs::path& p, const Trajectory& t) {
  const Eigen::Index n = static_cast<Eigen::Index>(t.size());
  Eigen::ArrayXd r(n), h(n), u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i) = t.r[i];
    h(i) = t.y[i](0);
    u(i) = t.y[i](1);
  }
  io::write_csv(p, {"r", "h", "u", "K", "f"}, {r, h, u, curvature_along(t), potential_along(t)});
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

json num_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace

RadialProfile preset_profile(const std::string& spec, std::size_t n) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::vector<double> args = colon == std::string::npos ? std::vector<double>{} : parse_list(spec.substr(colon + 1));
  auto need = [&](std::size_t k) {
    if (args.size() != k) throw CLI::ValidationError("preset " + name + " takes " + std::to_string(k) + " parameter(s)");
  };
  if (name == "sphere") {
    need(0);
    return RadialProfile::sample(ClosedForm::sphere(), 0.0, kPi, n);
  }
  if (name == "cigar") {
    need(0);
    return RadialProfile::sample(ClosedForm::cigar(1.0), 0.0, 8.0, n);
  }
  if (name == "flatcone") {
    need(1);
    if (!(args[0] > -1.0 && args[0] <= 0.0)) throw Error(Errc::BetaOutOfRange, "beta must lie in (-1, 0]");
    return RadialProfile::sample(ClosedForm::flat_cone(args[0] + 1.0), 0.0, 1.0, n);
  }
  if (name == "football") {
    need(2);
    const FootballSolution s = solve_angles(deg2rad(args[0]), deg2rad(args[1]));
    return to_radial_profile(s.orbit, n);
  }
  if (name == "teardrop") {
    need(2);
    IntegrateOptions io;
    io.stop_at_tip = 1;
    const Trajectory t = integrate_soliton({-1, args[0], args[1]}, Eigen::Vector2d(0.0, args[1]), 0.0, 200.0, io);
    if (t.status != Termination::SecondTip) throw Error(Errc::NotClosed, "teardrop orbit does not close");
    return to_radial_profile(t, n);
  }
  throw CLI::ValidationError("unknown preset '" + spec + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ricci-lab: Ricci flow on surfaces with conical singularities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");
  std::string outdir = ".";
  app.add_option("--out", outdir, "output directory")->capture_default_str();

  // classify
  auto* c_classify = app.add_subcommand("classify", "classify the soliton through (0, b)");
  int c_eps = -1;
  double c_a = 1.0, c_b = 0.3, c_rmax = 60.0;
  c_classify->add_option("--eps", c_eps, "-1 shrinking, 0 steady, 1 expanding")->required()->check(CLI::IsMember({-1, 0, 1}));
  c_classify->add_option("--a", c_a, "potential coefficient a")->required();
  c_classify->add_option("--b", c_b, "initial slope u(0)")->required();
  c_classify->add_option("--r-max", c_rmax, "integration span")->capture_default_str();

  // football
  auto* c_football = app.add_subcommand("football", "shrinking soliton with prescribed cone angles (degrees)");
  double f_a1 = 0, f_a2 = 0;
  c_football->add_option("--a1", f_a1, "first cone angle, degrees")->required()->check(CLI::PositiveNumber);
  c_football->add_option("--a2", f_a2, "second cone angle, degrees")->required()->check(CLI::PositiveNumber);

  // flow
  auto* c_flow = app.add_subcommand("flow", "explicit polar Ricci flow of a preset profile");
  std::string fl_preset = "sphere";
  double fl_T = 0.4, fl_cfl = 0.25, fl_ceiling = 1e4;
  std::size_t fl_n = 512, fl_slices = 10;
  c_flow->add_option("--preset", fl_preset, "sphere | cigar | flatcone:beta | football:a1,a2 | teardrop:a,b")
      ->capture_default_str();
  c_flow->add_option("--T", fl_T, "final flow time")->capture_default_str()->check(CLI::NonNegativeNumber);
  c_flow->add_option("--n", fl_n, "grid nodes")->capture_default_str()->check(CLI::Range(8, 1 << 20));
  c_flow->add_option("--cfl", fl_cfl, "dt / drho^2")->capture_default_str();
  c_flow->add_option("--ceiling", fl_ceiling, "|K| ceiling")->capture_default_str();
  c_flow->add_option("--slices", fl_slices, "number of profile slices")->capture_default_str()->check(CLI::Range(1, 100000));

  // smooth
  auto* c_smooth = app.add_subcommand("smooth", "truncated cone family under the conformal flow");
  double s_beta = -0.5, s_T = 0.1, s_rmax = 100.0, s_rmin = 0.0, s_tfirst = 1e-3;
  std::string s_k = "1,2,3,4,5";
  std::size_t s_nodes = 1200, s_samples = 20;
  unsigned s_jobs = 1;
  c_smooth->add_option("--beta", s_beta, "cone parameter in (-1, 0)")->capture_default_str();
  c_smooth->add_option("--k", s_k, "comma separated truncation levels")->capture_default_str();
  c_smooth->add_option("--T", s_T, "final time")->capture_default_str();
  c_smooth->add_option("--nodes", s_nodes, "log-grid nodes")->capture_default_str()->check(CLI::Range(8, 1 << 20));
  c_smooth->add_option("--r-min", s_rmin, "innermost radius, 0 for automatic")->capture_default_str();
  c_smooth->add_option("--r-max", s_rmax, "outer radius")->capture_default_str();
  c_smooth->add_option("--t-first", s_tfirst, "first sample time")->capture_default_str();
  c_smooth->add_option("--samples", s_samples, "sample times")->capture_default_str();
  c_smooth->add_option("--jobs", s_jobs, "parallel runs")->capture_default_str();

  // cusp3d
  auto* c_cusp = app.add_subcommand("cusp3d", "3D cusped expanding soliton separatrix");
  double cu_delta = 1e-6, cu_hstop = 1e-4, cu_rtol = 1e-10;
  c_cusp->add_option("--delta", cu_delta, "offset from the saddle")->capture_default_str();
  c_cusp->add_option("--H-stop", cu_hstop, "stop when H drops below")->capture_default_str();
  c_cusp->add_option("--rtol", cu_rtol, "relative tolerance")->capture_default_str();

  // embed
  auto* c_embed = app.add_subcommand("embed", "embed a soliton profile in R^3 as OBJ");
  int e_eps = -1;
  double e_a = 1.0, e_b = 0.3, e_A = 0.0;
  std::size_t e_n = 400;
  int e_theta = 64;
  c_embed->add_option("--eps", e_eps, "-1, 0 or 1")->required()->check(CLI::IsMember({-1, 0, 1}));
  c_embed->add_option("--a", e_a, "potential coefficient")->required();
  c_embed->add_option("--b", e_b, "initial slope")->required();
  c_embed->add_option("--A", e_A, "profile length; 0 stops at the second tip")->capture_default_str();
  c_embed->add_option("--n", e_n, "profile nodes")->capture_default_str()->check(CLI::Range(4, 1 << 20));
  c_embed->add_option("--theta-res", e_theta, "meridians")->capture_default_str()->check(CLI::Range(3, 100000));

  // portrait
  auto* c_portrait = app.add_subcommand("portrait", "phase portrait bundle");
  int p_eps = 1;
  double p_a = 1.0, p_span = 6.0, p_bmax = 1.5;
  std::size_t p_grid = 9;
  unsigned p_jobs = 1;
  c_portrait->add_option("--eps", p_eps, "-1, 0 or 1")->required()->check(CLI::IsMember({-1, 0, 1}));
  c_portrait->add_option("--a", p_a, "potential coefficient")->required();
  c_portrait->add_option("--grid", p_grid, "seeds (0, b) with b evenly spaced in [-bmax, bmax]")->capture_default_str();
  c_portrait->add_option("--bmax", p_bmax, "seed range")->capture_default_str();
  c_portrait->add_option("--span", p_span, "integration span in r")->capture_default_str();
  c_portrait->add_option("--jobs", p_jobs, "parallel integrations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  const fs::path dir(outdir);
  try {
    if (c_classify->parsed()) {
      ClassifyOptions co;
      co.r_max = c_rmax;
      const Classification c = classify(c_eps, c_a, c_b, co);
      out << describe(c) << "\n";
      write_trajectory_csv(dir / "classify_trajectory.csv", c.trajectory);
      return 0;
    }
    if (c_football->parsed()) {
      const FootballSolution s = solve_angles(deg2rad(f_a1), deg2rad(f_a2));
      write_trajectory_csv(dir / "football_orbit.csv", s.orbit);
      json j;
      j["alpha1"] = s.alpha1;
      j["alpha2"] = s.alpha2;
      j["k"] = s.k ? json(*s.k) : json(nullptr);
      j["p"] = s.p ? json(*s.p) : json(nullptr);
      j["q"] = s.q ? json(*s.q) : json(nullptr);
      j["a"] = s.a;
      j["A"] = s.A;
      j["closure_residual"] = s.closure_residual;
      j["orbit_csv"] = "football_orbit.csv";
      write_json(dir / "football.json", j);
      if (s.spherical)
        out << "spherical branch: equal angles give constant curvature 1/2, h = c sin(r/sqrt 2), A = "
            << fmt("%.6f", s.A) << "\n";
      else
        out << "a = " << fmt("%.9g", s.a) << "  A = " << fmt("%.9g", s.A) << "  k = " << fmt("%.9g", *s.k) << "\n";
      return 0;
    }
    if (c_flow->parsed()) {
      const RadialProfile p = preset_profile(fl_preset, fl_n);
      FlowOptions fo;
      fo.cfl = fl_cfl;
      fo.curvature_ceiling = fl_ceiling;
      fo.slices = fl_slices;
      const FlowHistory h = run_polar_flow(make_flow_state(p, fl_n), fl_T, fo);
      json j;
      j["preset"] = fl_preset;
      j["T"] = fl_T;
      j["n"] = fl_n;
      j["cfl"] = fl_cfl;
      j["status"] = h.status == FlowStatus::Completed ? "Completed" : "SingularityDetected";
      j["reason"] = h.reason;
      j["final_time"] = h.final_time;
      j["steps"] = h.steps;
      j["alpha"] = h.slices.front().alpha;
      j["alpha_right"] = h.slices.front().alpha_right ? json(*h.slices.front().alpha_right) : json(nullptr);
      j["angle_drift"] = angle_drift(h);
      j["series_csv"] = "flow_series.csv";
      json sl = json::array();
      for (std::size_t i = 0; i < h.slices.size(); ++i) {
        const FlowState& s = h.slices[i];
        const std::string name = "flow_slice_" + fmt("%04.0f", double(i)) + ".csv";
        io::write_csv(dir / name, {"rho", "h", "K"}, {s.rho, s.h, flow_fields(s).K});
        sl.push_back({{"tau", s.time}, {"area", s.diag.area}, {"max_abs_K", s.diag.max_abs_K}, {"file", name}});
      }
      j["slices"] = sl;
      const Eigen::Index m = static_cast<Eigen::Index>(h.series.size());
      std::vector<Eigen::ArrayXd> cols(7, Eigen::ArrayXd(m));
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto& r = h.series[i];
        cols[0](i) = r.tau;
        cols[1](i) = r.area;
        cols[2](i) = r.avg_curvature;
        cols[3](i) = r.max_abs_K;
        cols[4](i) = r.tip_slope;
        cols[5](i) = r.tip_slope_right;
        cols[6](i) = r.length;
      }
      io::write_csv(dir / "flow_series.csv",
                    {"tau", "area", "avg_curvature", "max_abs_K", "tip_slope", "tip_slope_right", "length"}, cols);
      write_json(dir / "flow_manifest.json", j);
      out << j["status"].get<std::string>() << " at tau=" << fmt("%.6g", h.final_time)
          << " angle drift " << fmt("%.3e", angle_drift(h)) << "\n";
      return 0;
    }
    if (c_smooth->parsed()) {
      FamilyOptions fo;
      fo.nodes = s_nodes;
      fo.r_min = s_rmin;
      fo.r_max = s_rmax;
      fo.t_first = s_tfirst;
      fo.samples = s_samples;
      fo.jobs = s_jobs;
      const FamilyResult res = run_truncation_family(s_beta, parse_list(s_k), s_T, fo);
      json j;
      j["beta"] = res.beta;
      j["k_levels"] = res.k;
      j["T"] = s_T;
      j["nodes"] = s_nodes;
      j["r_min"] = res.r(0);
      j["r_max"] = res.r(res.r.size() - 1);
      j["barrier_constant"] = res.barrier_constant;
      j["barrier_rate"] = res.rate;
      j["fitted_B"] = res.fitted_B;
      j["barrier_margin"] = res.barrier_margin;
      j["monotone_violation"] = res.monotone_violation;
      json samples = json::array();
      for (std::size_t i = 0; i < res.times.size(); ++i) {
        json sup = json::array();
        for (const auto& s : res.sup_u) sup.push_back(s[i]);
        samples.push_back({{"t", res.times[i]},
                           {"barrier", res.barrier_constant + res.rate * std::log(res.times[i])},
                           {"sup_u", sup}});
      }
      j["samples"] = samples;
      json files = json::array();
      for (std::size_t q = 0; q < res.k.size(); ++q) {
        const std::string name = "smooth_k" + fmt("%g", res.k[q]) + ".csv";
        io::write_conformal_csv(dir / name, res.r, res.runs[q].samples.back().u);
        files.push_back(name);
      }
      j["files"] = files;
      write_json(dir / "smooth.json", j);
      out << "B* = " << fmt("%.9g", res.barrier_constant) << "  barrier margin " << fmt("%.3e", res.barrier_margin)
          << "  monotone violation " << fmt("%.3e", res.monotone_violation) << "\n";
      return 0;
    }
    if (c_cusp->parsed()) {
      ShootOptions so;
      so.delta = cu_delta;
      so.H_stop = cu_hstop;
      so.rtol = cu_rtol;
      const CuspTrajectory t = shoot_separatrix(so);
      const CuspMetric m = build_metric(t);
      const CuspAsymptotics as = cusp_asymptotics(m);
      const Linearization lin = linearize(Eigen::Vector2d(0.5, 0.0));
      io::write_csv(dir / "cusp3d.csv", {"r", "H", "F", "h", "f", "sec_xy", "sec_rx"},
                    {m.r, m.H, m.F, m.h, m.f, m.sec_xy, m.sec_rx});
      json j;
      j["delta"] = cu_delta;
      j["H_stop"] = cu_hstop;
      j["eigenvalues"] = {lin.eigenvalues(0), lin.eigenvalues(1)};
      j["eigenvectors"] = {{lin.eigenvectors(0, 0), lin.eigenvectors(1, 0)}, {lin.eigenvectors(0, 1), lin.eigenvectors(1, 1)}};
      j["r_shift"] = t.r_shift;
      j["samples"] = m.r.size();
      j["r_min"] = m.r(0);
      j["r_max"] = m.r(m.r.size() - 1);
      j["cusp_ratio"] = as.cusp_ratio;
      j["wide_f_ratio"] = as.wide_f_ratio;
      j["wide_Hr_max"] = as.wide_Hr_max;
      j["wide_HF_max"] = as.wide_HF_max;
      j["wide_Fp_max"] = as.wide_Fp_max;
      j["sec_min"] = as.sec_min;
      j["sec_max"] = as.sec_max;
      json ev = json::array();
      for (const auto& e : t.events) ev.push_back({{"kind", e.kind}, {"r", e.r}, {"H", e.H}, {"F", e.F}});
      j["events"] = ev;
      j["csv"] = "cusp3d.csv";
      write_json(dir / "cusp3d.json", j);
      out << "eigenvalues " << fmt("%.12f", lin.eigenvalues(0)) << " " << fmt("%.12f", lin.eigenvalues(1))
          << "  sec in [" << fmt("%.6g", as.sec_min) << ", " << fmt("%.6g", as.sec_max) << "]\n";
      return 0;
    }
    if (c_embed->parsed()) {
      IntegrateOptions io;
      double span = e_A > 0 ? e_A : 200.0;
      if (e_eps == -1) io.stop_at_tip = 1;
      const Trajectory t = integrate_soliton({e_eps, e_a, e_b}, Eigen::Vector2d(0.0, e_b), 0.0, span, io);
      RadialProfile p = to_radial_profile(t, e_n);
      const Embedding emb = embed_profile(p);
      io::write_obj(dir / "embed.obj", emb, e_theta);
      io::write_profile_csv(dir / "embed_profile.csv", p);
      out << "embedded " << e_n << " nodes, length " << fmt("%.6g", p.rho(p.rho.size() - 1)) << "\n";
      return 0;
    }
    if (c_portrait->parsed()) {
      std::vector<Eigen::Vector2d> seeds;
      for (std::size_t i = 0; i < p_grid; ++i) {
        const double b = p_grid == 1 ? p_bmax : -p_bmax + 2.0 * p_bmax * double(i) / double(p_grid - 1);
        if (std::abs(b) > 1e-12) seeds.emplace_back(0.0, b);
      }
      PortraitOptions po;
      po.r_span = p_span;
      po.jobs = p_jobs;
      po.integrate.blowup = 1e3;
      const PhasePortrait pp = phase_portrait(p_eps, p_a, seeds, po);
      json j;
      j["epsilon"] = p_eps;
      j["a"] = p_a;
      json cps = json::array();
      for (const auto& cp : pp.critical_points) {
        json ev = json::array(), vec = json::array();
        for (const auto& l : cp.eigenvalues) ev.push_back({l.real(), l.imag()});
        for (const auto& v : cp.eigenvectors)
          vec.push_back({{v(0).real(), v(0).imag()}, {v(1).real(), v(1).imag()}});
        cps.push_back({{"h", cp.point(0)}, {"u", cp.point(1)}, {"type", cp.type}, {"eigenvalues", ev}, {"eigenvectors", vec}});
      }
      j["critical_points"] = cps;
      json iso = json::array();
      for (const auto& i : pp.isoclines) iso.push_back({{"name", i.name}, {"equation", i.equation}});
      j["isoclines"] = iso;
      json tr = json::array();
      for (std::size_t i = 0; i < pp.trajectories.size(); ++i) {
        const std::string name = "portrait_traj_" + fmt("%03.0f", double(i)) + ".csv";
        write_trajectory_csv(dir / name, pp.trajectories[i]);
        tr.push_back({{"h0", seeds[i](0)}, {"u0", seeds[i](1)}, {"file", name}});
      }
      j["trajectories"] = tr;
      json sp = json::array();
      for (std::size_t i = 0; i < pp.separatrices.size(); ++i) {
        const std::string name = "portrait_sep_" + fmt("%02.0f", double(i)) + ".csv";
        write_trajectory_csv(dir / name, pp.separatrices[i]);
        sp.push_back(name);
      }
      j["separatrices"] = sp;
      write_json(dir / "portrait.json", j);
      out << pp.trajectories.size() << " trajectories, " << pp.separatrices.size() << " separatrices\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    for (const auto& d : e.diagnostics()) err << "  " << d << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("ricci-lab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ricci::cli
