#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include "ricci/error.hpp"

namespace ricci {

// Fornberg finite-difference weights, column m holds the weights of the m-th derivative at x0.
inline Eigen::MatrixXd fd_weights(double x0, const Eigen::Ref<const Eigen::ArrayXd>& x, int m) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, m + 1);
  double c1 = 1.0, c4 = x(0) - x0;
  c(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const int mn = static_cast<int>(std::min<Eigen::Index>(i, m));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x(i) - x0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c;
}

// Derivative of sampled f on an arbitrary increasing grid: 3-point interior, one-sided ends
// (3 points for order 1, 4 points for order 2).
inline Eigen::ArrayXd derivative(const Eigen::ArrayXd& x, const Eigen::ArrayXd& f, int order) {
  const Eigen::Index n = x.size();
  if (n < 4) throw Error(Errc::GridTooCoarse, "need at least 4 nodes");
  Eigen::ArrayXd d(n);
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    Eigen::MatrixXd w = fd_weights(x(i), x.segment(i - 1, 3), order);
    d(i) = w.col(order).dot(f.segment(i - 1, 3).matrix());
  }
  const Eigen::Index m = order == 1 ? 3 : 4;
  Eigen::MatrixXd wl = fd_weights(x(0), x.head(m), order);
  Eigen::MatrixXd wr = fd_weights(x(n - 1), x.tail(m), order);
  d(0) = wl.col(order).dot(f.head(m).matrix());
  d(n - 1) = wr.col(order).dot(f.tail(m).matrix());
  return d;
}

template <typename DX, typename DF>
double trapezoid(const Eigen::ArrayBase<DX>& x, const Eigen::ArrayBase<DF>& f) {
  const Eigen::Index n = x.size();
  if (n < 2) return 0.0;
  return 0.5 * ((x.tail(n - 1) - x.head(n - 1)) * (f.tail(n - 1) + f.head(n - 1))).sum();
}

template <typename DX, typename DF>
Eigen::ArrayXd cumulative_trapezoid(const Eigen::ArrayBase<DX>& x, const Eigen::ArrayBase<DF>& f) {
  const Eigen::Index n = x.size();
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(n);
  for (Eigen::Index i = 1; i < n; ++i) out(i) = out(i - 1) + 0.5 * (x(i) - x(i - 1)) * (f(i) + f(i - 1));
  return out;
}

// Odd fit h = s d + c d^3 + e d^5 through three (distance, value) pairs; returns s.
inline double odd_slope_fit(const double d[3], const double v[3]) {
  Eigen::Matrix3d m;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = d[i];
    m(i, 1) = d[i] * d[i] * d[i];
    m(i, 2) = m(i, 1) * d[i] * d[i];
    rhs(i) = v[i];
  }
  return m.colPivHouseholderQr().solve(rhs)(0);
}

// Even extrapolation q(d) = q0 + q2 d^2 through two samples, value at d = 0.
inline double even_extrapolate(double d1, double q1, double d2, double q2) {
  return (d2 * d2 * q1 - d1 * d1 * q2) / (d2 * d2 - d1 * d1);
}

// Plain bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
                     int max_iter = 400) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw Error(Errc::InvalidArgument, "bisection bracket has no sign change");
  for (int it = 0; it < max_iter && std::abs(hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Eigen::ArrayXd uniform_grid(double a, double b, std::size_t n) {
  return Eigen::ArrayXd::LinSpaced(static_cast<Eigen::Index>(n), a, b);
}

// Cubic Hermite interpolation with finite-difference slopes; x increasing.
inline Eigen::ArrayXd hermite_resample(const Eigen::ArrayXd& x, const Eigen::ArrayXd& f,
                                       const Eigen::ArrayXd& xq) {
  const Eigen::ArrayXd df = derivative(x, f, 1);
  Eigen::ArrayXd out(xq.size());
  const Eigen::Index n = x.size();
  for (Eigen::Index q = 0; q < xq.size(); ++q) {
    const double t = xq(q);
    auto it = std::upper_bound(x.data(), x.data() + n, t);
    Eigen::Index j = std::clamp<Eigen::Index>((it - x.data()) - 1, 0, n - 2);
    const double hx = x(j + 1) - x(j);
    const double s = (t - x(j)) / hx;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    out(q) = h00 * f(j) + h10 * hx * df(j) + h01 * f(j + 1) + h11 * hx * df(j + 1);
  }
  return out;
}

}  // namespace ricci
