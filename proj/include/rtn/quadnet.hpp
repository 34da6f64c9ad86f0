#pragma once

#include <functional>

#include "rtn/calculus.hpp"

// Networks emulating the running left Riemann sum of another network's
// realization in its first (time) argument, assembled from indicator, shift
// and clip sub-networks, plus the numeric left-Riemann oracle.

namespace rtn {

struct RiemannNetCertificate {
  long N = 0;        // subdivision count, nodes t_i = i T / N
  double a_bar = 0;  // sup bound on |R(phi)| used by the clip stage
  double c3 = 0;     // 3 * a_bar, the error constant
  double T = 0;
};

// Realization ramps from 0 at t = t_i to 1 at t = t_{i+1}; 7 weights, 3 layers.
Network indicator_net(long i, long N, double T, Index input_dim);

// Freezes the first (time) input of phi at t_i. Depth grows by exactly 2 and
// the weight count by at most a factor 2 plus 2 d.
Network shift_net(const Network& phi, long i, long N, double T);

// Zero for t <= t_i, equal to R(phi)(t_i, x) for t >= t_{i+1}, bounded by
// 2 a_bar in between; requires a_bar >= sup |R(phi)|.
Network clip_net(const Network& phi, long i, long N, double T, double a_bar);

// The running-sum network: within c3/N of (1/N) sum_{i < ceil(tN/T)}
// R(phi)(iT/N, x) on [0,T] x Omega.
std::pair<Network, RiemannNetCertificate> riemann_net(const Network& phi, long N,
                                                      double T, double a_bar);

using TimeSliceFn = std::function<double(double t, const Vec& x)>;

// Left Riemann quadrature of the integral of f from 0 to t, nodes t_i = iT/N
// weighted by T/N; a node is included only when t_i < t strictly.
double left_riemann(const TimeSliceFn& f, long N, double T, double t, const Vec& x);

// The unit-weight sum (1/N) sum f(t_i, x) 1{t_i < t} that the network
// emulates verbatim; equals the quadrature above only when T = 1.
double left_riemann_paper(const TimeSliceFn& f, long N, double T, double t,
                          const Vec& x);

}  // namespace rtn
