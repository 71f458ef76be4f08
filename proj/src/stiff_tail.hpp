#pragma once

// Rosenbrock (odeint rosenbrock4, dense output) for the (H, G) tail system.
// Kept in its own C++17 unit: uBLAS in Boost 1.74 does not build as C++20.

#include <array>
#include <memory>
#include <utility>

namespace ricci::detail {

class HgRosenbrock {
 public:
  HgRosenbrock(double atol, double rtol, double r0, double H0, double G0, double dr0);
  ~HgRosenbrock();
  std::pair<double, double> step();
  std::array<double, 2> current() const;
  std::array<double, 2> at(double r);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ricci::detail
