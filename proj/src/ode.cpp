#include "rtn/ode.hpp"

#include <algorithm>
#include <cmath>

namespace rtn {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Eigen::VectorXd ode_integrate(const OdeRhs& rhs, double t0,
                              const Eigen::VectorXd& y0, double t1,
                              const OdeOptions& opts) {
  using Vec = Eigen::VectorXd;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  if (span == 0.0) return y0;

  Vec y = y0, k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()),
      k5(y.size()), k6(y.size()), k7(y.size()), ytmp(y.size()), ynew(y.size());
  double t = t0;
  rhs(t, y, k1);
  double h = dir * std::min(span, std::max(1e-6, 0.01 * span));

  for (long step = 0; step < opts.max_steps; ++step) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;
    ytmp = y + h * a21 * k1;
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);  // FSAL

    double err = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(ei) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      if (dir * (t - t1) >= 0.0 || std::abs(t - t1) < 1e-15 * span) return y;
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw StiffnessError("integrator step underflow", t, y);
  }
  throw StiffnessError("integrator exceeded max step count", t, y);
}

}  // namespace rtn
