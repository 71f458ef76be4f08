#include "stiff_tail.hpp"

#include <boost/numeric/odeint.hpp>

namespace ricci::detail {

namespace {
namespace odeint = boost::numeric::odeint;
using uvec = boost::numeric::ublas::vector<double>;
using umat = boost::numeric::ublas::matrix<double>;

// H' = -G - H^2, G' = -G (G + 1/2) / H - H^3
struct HgSystem {
  void operator()(const uvec& x, uvec& dxdt, double) const {
    const double H = x(0), G = x(1);
    dxdt(0) = -G - H * H;
    dxdt(1) = -G * (G + 0.5) / H - H * H * H;
  }
};

struct HgJacobian {
  void operator()(const uvec& x, umat& J, const double&, uvec& dfdt) const {
    const double H = x(0), G = x(1);
    J(0, 0) = -2.0 * H;
    J(0, 1) = -1.0;
    J(1, 0) = G * (G + 0.5) / (H * H) - 3.0 * H * H;
    J(1, 1) = -(2.0 * G + 0.5) / H;
    dfdt(0) = 0.0;
    dfdt(1) = 0.0;
  }
};

using Dense = odeint::rosenbrock4_dense_output<odeint::rosenbrock4_controller<odeint::rosenbrock4<double>>>;
}  // namespace

struct HgRosenbrock::Impl {
  Dense stepper;
  uvec tmp{2};
};

HgRosenbrock::HgRosenbrock(double atol, double rtol, double r0, double H0, double G0, double dr0)
    : impl_(new Impl{odeint::make_dense_output(atol, rtol, odeint::rosenbrock4<double>())}) {
  uvec x(2);
  x(0) = H0;
  x(1) = G0;
  impl_->stepper.initialize(x, r0, dr0);
}

HgRosenbrock::~HgRosenbrock() = default;

std::pair<double, double> HgRosenbrock::step() {
  return impl_->stepper.do_step(std::make_pair(HgSystem(), HgJacobian()));
}

std::array<double, 2> HgRosenbrock::current() const {
  const uvec& x = impl_->stepper.current_state();
  return {x(0), x(1)};
}

std::array<double, 2> HgRosenbrock::at(double r) {
  impl_->stepper.calc_state(r, impl_->tmp);
  return {impl_->tmp(0), impl_->tmp(1)};
}

}  // namespace ricci::detail
