#pragma once

// Dormand-Prince 5(4) with Hairer's continuous extension and bisection event location.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ricci/error.hpp"

namespace ricci::ode {

template <int N>
using State = Eigen::Matrix<double, N, 1>;

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0: automatic
  double min_step = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
  double event_tol = 1e-12;
};

template <int N>
struct EventSpec {
  int tag = 0;
  std::function<double(double, const State<N>&)> g;
  int direction = 0;         // +1 rising only, -1 falling only, 0 both
  int terminal_after = 0;    // stop integration at this hit count, 0 never
};

template <int N>
struct EventHit {
  int tag;
  double t;
  State<N> y;
};

template <int N>
struct DenseSegment {
  double t0 = 0, h = 0;
  std::array<State<N>, 5> c;

  State<N> eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    return c[0] + s * (c[1] + s1 * (c[2] + s * (c[3] + s1 * c[4])));
  }
};

template <int N>
class DenseOutput {
public:
  void push(const DenseSegment<N>& s) { segs_.push_back(s); }
  bool empty() const { return segs_.empty(); }
  double t_begin() const { return segs_.front().t0; }
  double t_end() const { return segs_.back().t0 + segs_.back().h; }
  void truncate(double t) {
    while (!segs_.empty() && forward() * (segs_.back().t0 - t) >= 0) segs_.pop_back();
    end_override_ = t;
  }
  double end() const { return end_override_ ? *end_override_ : t_end(); }

  State<N> operator()(double t) const {
    const double dir = forward();
    std::size_t lo = 0, hi = segs_.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (dir * (t - segs_[mid].t0) >= 0) lo = mid;
      else hi = mid;
    }
    return segs_[lo].eval(t);
  }

private:
  double forward() const { return segs_.empty() || segs_.front().h >= 0 ? 1.0 : -1.0; }
  std::vector<DenseSegment<N>> segs_;
  std::optional<double> end_override_;
};

enum class Status { Completed, EventTerminated };

template <int N>
struct Solution {
  std::vector<double> t;
  std::vector<State<N>> y;
  std::vector<EventHit<N>> events;
  DenseOutput<N> dense;
  Status status = Status::Completed;
  std::size_t steps = 0;
};

namespace detail {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace detail

template <int N, typename Rhs>
Solution<N> integrate(Rhs&& f, State<N> y0, double t0, double t1, const Options& opt,
                      std::span<const EventSpec<N>> events = {}) {
  using namespace detail;
  Solution<N> sol;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  sol.t.push_back(t0);
  sol.y.push_back(y0);
  if (span == 0.0) return sol;

  auto scale = [&](const State<N>& a, const State<N>& b) {
    return (opt.atol + opt.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  State<N> k1 = f(t0, y0);
  double h = opt.initial_step;
  if (h <= 0) {
    const State<N> sc = scale(y0, y0);
    const double dn = (y0.array() / sc.array()).matrix().norm() / std::sqrt(double(N));
    const double fn = (k1.array() / sc.array()).matrix().norm() / std::sqrt(double(N));
    h = (dn < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * dn / fn;
    h = std::min({h, span, opt.max_step});
  }

  std::vector<double> gprev(events.size());
  std::vector<int> hits(events.size(), 0);
  for (std::size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t0, y0);

  double t = t0;
  State<N> y = y0;
  while (dir * (t1 - t) > 0) {
    if (sol.steps >= opt.max_steps) throw Error(Errc::StepUnderflow, "step budget exhausted");
    bool last = false;
    if (h >= std::abs(t1 - t)) {
      h = std::abs(t1 - t);
      last = true;
    }
    if (h < opt.min_step * std::max(1.0, std::abs(t)))
      throw Error(Errc::StepUnderflow, "step size below minimum near t=" + std::to_string(t));
    const double hs = dir * h;
    const State<N> k2 = f(t + c2 * hs, y + hs * (a21 * k1));
    const State<N> k3 = f(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
    const State<N> k4 = f(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const State<N> k5 = f(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const State<N> k6 =
        f(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const State<N> y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const State<N> k7 = f(t + hs, y1);
    const State<N> err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = (err.array() / scale(y, y1).array()).matrix().norm() / std::sqrt(double(N));
    ++sol.steps;
    if (!std::isfinite(en)) {
      h *= 0.2;
      continue;
    }
    if (en > 1.0) {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      continue;
    }

    DenseSegment<N> seg;
    seg.t0 = t;
    seg.h = hs;
    const State<N> ydiff = y1 - y;
    const State<N> bspl = hs * k1 - ydiff;
    seg.c[0] = y;
    seg.c[1] = ydiff;
    seg.c[2] = bspl;
    seg.c[3] = ydiff - hs * k7 - bspl;
    seg.c[4] = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    sol.dense.push(seg);

    const double tn = last ? t1 : t + hs;
    // events: earliest sign change in this step wins
    double t_stop = tn;
    bool stop = false;
    std::vector<EventHit<N>> step_hits;
    for (std::size_t e = 0; e < events.size(); ++e) {
      const double gn = events[e].g(tn, y1);
      const double gp = gprev[e];
      gprev[e] = gn;
      if (gp == 0.0) continue;
      if (gn != 0.0 && (gp > 0) == (gn > 0)) continue;
      const int sgn = gn > gp ? 1 : -1;
      if (events[e].direction != 0 && events[e].direction != sgn) continue;
      double a = t, b = tn, ga = gp;
      while (std::abs(b - a) > opt.event_tol * std::max(1.0, std::abs(a))) {
        const double m = 0.5 * (a + b);
        if (m == a || m == b) break;
        const double gm = events[e].g(m, seg.eval(m));
        if (gm == 0.0) {
          a = b = m;
          break;
        }
        if ((gm > 0) == (ga > 0)) {
          a = m;
          ga = gm;
        } else {
          b = m;
        }
      }
      const double te = gn == 0.0 ? tn : 0.5 * (a + b);
      step_hits.push_back({events[e].tag, te, seg.eval(te)});
      if (events[e].terminal_after > 0 && ++hits[e] >= events[e].terminal_after) {
        if (!stop || dir * (te - t_stop) < 0) t_stop = te;
        stop = true;
      } else if (events[e].terminal_after == 0) {
        ++hits[e];
      }
    }
    std::sort(step_hits.begin(), step_hits.end(),
              [&](const EventHit<N>& p, const EventHit<N>& q) { return dir * (p.t - q.t) < 0; });
    for (const auto& eh : step_hits)
      if (!stop || dir * (eh.t - t_stop) <= 0) sol.events.push_back(eh);

    if (stop) {
      sol.t.push_back(t_stop);
      sol.y.push_back(seg.eval(t_stop));
      sol.dense.truncate(t_stop);
      sol.status = Status::EventTerminated;
      return sol;
    }

    t = tn;
    y = y1;
    k1 = k7;
    sol.t.push_back(t);
    sol.y.push_back(y);
    h = std::min(opt.max_step, h * std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(en, 1e-16), -0.2))));
  }
  return sol;
}

}  // namespace ricci::ode
