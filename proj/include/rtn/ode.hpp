#pragma once

#include <Eigen/Core>

#include <functional>
#include <stdexcept>

// Embedded adaptive Runge-Kutta of orders 5(4), Dormand-Prince coefficients.
// The fields are smooth by assumption, so a non-stiff high-order pair with
// tight tolerances keeps the ODE error far below the network budgets.

namespace rtn {

using OdeRhs = std::function<void(double t, const Eigen::VectorXd& y,
                                  Eigen::VectorXd& dydt)>;

struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  long max_steps = 2000000;
};

struct StiffnessError : std::runtime_error {
  StiffnessError(const std::string& what, double t, Eigen::VectorXd y)
      : std::runtime_error(what), t_last(t), y_last(std::move(y)) {}
  double t_last;
  Eigen::VectorXd y_last;  // last accepted state
};

// Integrates y' = rhs(t, y) from (t0, y0) to t1, forward or backward.
Eigen::VectorXd ode_integrate(const OdeRhs& rhs, double t0,
                              const Eigen::VectorXd& y0, double t1,
                              const OdeOptions& opts = {});

}  // namespace rtn
